// Copyright 2026 The osnsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace osnsim {

enum class Errc {
  Io,
  Format,
  UnknownAction,
  EmptyLog,
  LengthMismatch,
  SeriesTooShort,
  UnknownSeed,
  BadConfig,
  ClockSkew,
  AllZeroWeights,
  KeyMismatch,
  EmptyWindow,
  NegativeValue,
  TooFewEvents,
  EmptySample,
  SupportMismatch,
  BadPersistence,
  DisjointTimeRanges,
};

std::string_view to_string(Errc code);

/// Library-wide exception. `line` is set for file-format errors (1-based),
/// `path` for config errors (JSON pointer of the offending key).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::size_t line = 0,
        std::string path = {});

  Errc code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& path() const noexcept { return path_; }

 private:
  Errc code_;
  std::size_t line_;
  std::string path_;
};

}  // namespace osnsim
