// Copyright 2026-present the nsix authors
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

#include "nsix/error.h"

namespace nsix {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::kZeroVector:
            return "ZeroVector";
        case ErrorCode::kInvalidVector:
            return "InvalidVector";
        case ErrorCode::kDuplicateFile:
            return "DuplicateFile";
        case ErrorCode::kIoError:
            return "IoError";
        case ErrorCode::kFormatError:
            return "FormatError";
        case ErrorCode::kEmptyIndex:
            return "EmptyIndex";
        case ErrorCode::kUnknownDocument:
            return "UnknownDocument";
        case ErrorCode::kEmptyRelevantSet:
            return "EmptyRelevantSet";
        case ErrorCode::kEmptyList:
            return "EmptyList";
        case ErrorCode::kInvalidParams:
            return "InvalidParams";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      detail_(message) {}

}  // namespace nsix
