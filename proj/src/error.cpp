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

#include "osnsim/error.hpp"

namespace osnsim {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::Io: return "IoError";
    case Errc::Format: return "FormatError";
    case Errc::UnknownAction: return "UnknownAction";
    case Errc::EmptyLog: return "EmptyLog";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::SeriesTooShort: return "SeriesTooShort";
    case Errc::UnknownSeed: return "UnknownSeed";
    case Errc::BadConfig: return "BadConfig";
    case Errc::ClockSkew: return "ClockSkew";
    case Errc::AllZeroWeights: return "AllZeroWeights";
    case Errc::KeyMismatch: return "KeyMismatch";
    case Errc::EmptyWindow: return "EmptyWindow";
    case Errc::NegativeValue: return "NegativeValue";
    case Errc::TooFewEvents: return "TooFewEvents";
    case Errc::EmptySample: return "EmptySample";
    case Errc::SupportMismatch: return "SupportMismatch";
    case Errc::BadPersistence: return "BadPersistence";
    case Errc::DisjointTimeRanges: return "DisjointTimeRanges";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message, std::size_t line,
             std::string path)
    : std::runtime_error(message),
      code_(code),
      line_(line),
      path_(std::move(path)) {}

}  // namespace osnsim
