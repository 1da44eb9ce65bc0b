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

// Text formats.
//
// Tree file: first line is the node count n, followed by n whitespace-separated
// parent ids (-1 marks the root), e.g. "3\n-1 0 1" is the path 0 -> 1 -> 2.
//
// Trace file: one request per line, "+ <node>" or "- <node>". Blank lines and
// anything after '#' are ignored.

#pragma once

#include <iosfwd>
#include <string>

#include "treecache/tree.hpp"

namespace treecache {

TreeTopology parse_tree(std::istream& in, const std::string& source = "<tree>");
TreeTopology load_tree_file(const std::string& path);
std::string format_tree(const TreeTopology& topo);

/// When `topo` is given, node ids are range-checked against it.
Trace parse_trace(std::istream& in, const std::string& source = "<trace>",
                  const TreeTopology* topo = nullptr);
Trace load_trace_file(const std::string& path, const TreeTopology* topo = nullptr);
std::string format_trace(const Trace& trace);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace treecache
