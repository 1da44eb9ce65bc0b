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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace treecache {

using NodeId = std::uint32_t;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed files, out-of-range node ids, bad parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition (e.g. a cache that is not a subforest).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed. Carries the changeset that exposed it, if any.
class InvariantViolation : public Error {
 public:
  InvariantViolation(const std::string& what, std::uint64_t round = 0,
                     std::vector<NodeId> changeset = {})
      : Error(what), round_(round), changeset_(std::move(changeset)) {}

  std::uint64_t round() const noexcept { return round_; }
  const std::vector<NodeId>& changeset() const noexcept { return changeset_; }

 private:
  std::uint64_t round_;
  std::vector<NodeId> changeset_;
};

/// An exhaustive routine refused to run because the instance is too large.
class SizeLimit : public Error {
 public:
  SizeLimit(const std::string& what, std::uint64_t estimate = 0)
      : Error(what), estimate_(estimate) {}

  /// Lower bound on the work or state count that triggered the guard.
  std::uint64_t estimate() const noexcept { return estimate_; }

 private:
  std::uint64_t estimate_;
};

}  // namespace treecache
