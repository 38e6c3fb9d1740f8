// Copyright 2026 The phasebell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace phasebell {

/// Rejected input: violated precondition, grid mismatch, bad parameter.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical guard tripped while computing (trace collapse, grid escape,
/// overflow). `guard()` names the guard so callers can report it.
class NumericalGuard : public std::runtime_error {
 public:
  NumericalGuard(std::string guard, const std::string& what)
      : std::runtime_error(guard + ": " + what), guard_(std::move(guard)) {}

  const std::string& guard() const noexcept { return guard_; }

 private:
  std::string guard_;
};

namespace detail {

inline void require(bool ok, const char* message) {
  if (!ok) throw InvalidArgument(message);
}

inline void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

}  // namespace detail
}  // namespace phasebell
