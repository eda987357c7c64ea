// Copyright 2026 The chaintime Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
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

namespace chaintime {

enum class ErrorCode {
    // ledger
    NonMonotonicTimestamp,
    BadNumber,
    OutOfRange,
    NotFound,
    InsufficientBlocks,
    DuplicateTransaction,
    // measures and oracles
    MissingParameter,
    Uninitialized,
    ProviderUnavailable,
    Unresolved,
    InvalidContext,
    // timers
    ParseError,
    UnsupportedFeature,
    // process execution
    InvalidModel,
    ElementNotEnabled,
    GuardRejected,
    CycleExhausted,
    NoEligibleBranch,
    // scenarios
    SchemaError,
    InvalidScenario,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the timer grammar; `position()` is the byte offset of the fault.
class TimerParseError : public Error {
public:
    TimerParseError(ErrorCode code, std::size_t position, const std::string& reason)
        : Error(code, reason + " at position " + std::to_string(position)),
          position_(position), reason_(reason) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t position_;
    std::string reason_;
};

/// Raised while loading or validating a scenario; `path()` names the field,
/// e.g. `oracles[0].cadence_ms`.
class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& reason)
        : Error(ErrorCode::SchemaError, path + ": " + reason), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace chaintime
