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

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "common.hpp"
#include "treecache/error.hpp"
#include "treecache/io.hpp"

using namespace treecache;
using namespace testing_util;

namespace {

TEST(TreeFormat, ParsesSpecExample) {
  std::istringstream in("3\n-1 0 1\n");
  const auto t = parse_tree(in);
  EXPECT_EQ(t.parent_array(), (std::vector<std::int64_t>{-1, 0, 1}));
}

TEST(TreeFormat, RoundTrip) {
  const auto t = random_tree(30, 4);
  std::istringstream in(format_tree(t));
  EXPECT_EQ(parse_tree(in).parent_array(), t.parent_array());
}

TEST(TreeFormat, Errors) {
  for (const char* bad : {"", "x\n", "3\n-1 0\n", "2\n-1 0 0\n", "2\n0 -1 junk\n", "2\n-1 7\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(parse_tree(in), InvalidInput) << bad;
  }
}

TEST(TraceFormat, ParsesBothSpellingsAndComments) {
  std::istringstream in("# header\n+ 3\n\n-2   # trailing\n+0\n");
  const Trace t = parse_trace(in);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0], pos(3));
  EXPECT_EQ(t[1], neg(2));
  EXPECT_EQ(t[2], pos(0));
}

TEST(TraceFormat, ErrorsCarryLineNumbers) {
  std::istringstream in("+1\n* 2\n");
  try {
    parse_trace(in, "t.trace");
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("t.trace:2"), std::string::npos) << e.what();
  }
}

TEST(TraceFormat, RangeCheckedAgainstTree) {
  const auto t = path3();
  std::istringstream in("+1\n+3\n");
  EXPECT_THROW(parse_trace(in, "<trace>", t.get()), InvalidInput);
}

TEST(TraceFormat, RoundTripThroughFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "treecache_io_test";
  std::filesystem::create_directories(dir);
  const Trace trace{pos(1), neg(0), pos(2)};
  write_text_file((dir / "a.trace").string(), format_trace(trace));
  EXPECT_EQ(load_trace_file((dir / "a.trace").string()), trace);
  write_text_file((dir / "a.tree").string(), format_tree(*path3()));
  EXPECT_EQ(load_tree_file((dir / "a.tree").string()).parent_array(), path3()->parent_array());
  EXPECT_THROW(load_tree_file((dir / "missing.tree").string()), InvalidInput);
  std::filesystem::remove_all(dir);
}

}  // namespace
