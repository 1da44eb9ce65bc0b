/*
 * Copyright 2026 The treecache Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "treecache/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace treecache {

namespace {

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw InvalidInput(source + ":" + std::to_string(line) + ": " + msg);
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool parse_int(std::string_view tok, std::int64_t& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return in;
}

}  // namespace

TreeTopology parse_tree(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::int64_t n = -1;
  std::vector<std::int64_t> parents;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(strip_comment(line));
    std::string tok;
    while (ls >> tok) {
      std::int64_t value = 0;
      if (!parse_int(tok, value)) fail(source, line_no, "expected an integer, got '" + tok + "'");
      if (n < 0) {
        if (value <= 0) fail(source, line_no, "node count must be positive");
        n = value;
        parents.reserve(static_cast<std::size_t>(n));
        continue;
      }
      if (static_cast<std::int64_t>(parents.size()) == n) {
        fail(source, line_no, "more than " + std::to_string(n) + " parent ids");
      }
      parents.push_back(value);
    }
  }
  if (n < 0) fail(source, line_no, "missing node count");
  if (static_cast<std::int64_t>(parents.size()) != n) {
    fail(source, line_no,
         "expected " + std::to_string(n) + " parent ids, got " + std::to_string(parents.size()));
  }
  try {
    return TreeTopology::from_parents(parents);
  } catch (const InvalidInput& e) {
    throw InvalidInput(source + ": " + e.what());
  }
}

TreeTopology load_tree_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_tree(in, path);
}

std::string format_tree(const TreeTopology& topo) {
  std::ostringstream os;
  os << topo.size() << '\n';
  const auto parents = topo.parent_array();
  for (std::size_t i = 0; i < parents.size(); ++i) os << (i ? " " : "") << parents[i];
  os << '\n';
  return os.str();
}

Trace parse_trace(std::istream& in, const std::string& source, const TreeTopology* topo) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(strip_comment(line));
    std::string head;
    if (!(ls >> head)) continue;
    Request req;
    std::string rest;
    if (head[0] == '+' || head[0] == '-') {
      req.sign = head[0] == '+' ? Sign::kPositive : Sign::kNegative;
      rest = head.substr(1);
    } else {
      fail(source, line_no, "request must start with '+' or '-', got '" + head + "'");
    }
    if (rest.empty() && !(ls >> rest)) fail(source, line_no, "missing node id");
    std::int64_t id = 0;
    if (!parse_int(rest, id) || id < 0 || id >= static_cast<std::int64_t>(kNoNode)) {
      fail(source, line_no, "invalid node id '" + rest + "'");
    }
    std::string extra;
    if (ls >> extra) fail(source, line_no, "unexpected trailing token '" + extra + "'");
    req.node = static_cast<NodeId>(id);
    if (topo && !topo->contains(req.node)) {
      fail(source, line_no,
           "node id " + rest + " out of range (tree has " + std::to_string(topo->size()) + " nodes)");
    }
    trace.push_back(req);
  }
  return trace;
}

Trace load_trace_file(const std::string& path, const TreeTopology* topo) {
  auto in = open_or_throw(path);
  return parse_trace(in, path, topo);
}

std::string format_trace(const Trace& trace) {
  std::string out;
  out.reserve(trace.size() * 6);
  for (const Request& r : trace) {
    out += sign_char(r.sign);
    out += ' ';
    out += std::to_string(r.node);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << contents;
  if (!out) throw InvalidInput("write failed for " + path);
}

}  // namespace treecache
