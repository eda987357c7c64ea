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

#include "chaintime/error.hpp"

namespace chaintime {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
        case ErrorCode::BadNumber: return "BadNumber";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::InsufficientBlocks: return "InsufficientBlocks";
        case ErrorCode::DuplicateTransaction: return "DuplicateTransaction";
        case ErrorCode::MissingParameter: return "MissingParameter";
        case ErrorCode::Uninitialized: return "Uninitialized";
        case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
        case ErrorCode::Unresolved: return "Unresolved";
        case ErrorCode::InvalidContext: return "InvalidContext";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnsupportedFeature: return "UnsupportedFeature";
        case ErrorCode::InvalidModel: return "InvalidModel";
        case ErrorCode::ElementNotEnabled: return "ElementNotEnabled";
        case ErrorCode::GuardRejected: return "GuardRejected";
        case ErrorCode::CycleExhausted: return "CycleExhausted";
        case ErrorCode::NoEligibleBranch: return "NoEligibleBranch";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::InvalidScenario: return "InvalidScenario";
    }
    return "Unknown";
}

}  // namespace chaintime
