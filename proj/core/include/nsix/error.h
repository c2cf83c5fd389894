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

#pragma once

#include <stdexcept>
#include <string>

namespace nsix {

enum class ErrorCode {
    kZeroVector,     // no positive weight; cannot be normalized, indexed or queried
    kInvalidVector,  // negative / non-finite weight, duplicate or empty feature id
    kDuplicateFile,
    kIoError,
    kFormatError,
    kEmptyIndex,
    kUnknownDocument,
    kEmptyRelevantSet,
    kEmptyList,
    kInvalidParams,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

    /// Message without the error-code prefix carried by what().
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace nsix
