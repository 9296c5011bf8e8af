// Copyright 2026 The hxai Authors.
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

#ifndef HXAI_ERROR_HPP_
#define HXAI_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace hxai {

// Stable error categories. The string forms are part of the HTTP API and the
// CLI's --json output, so never rename an existing entry.
enum class ErrorCode {
  kSchema,          // malformed schema document
  kIo,              // unreadable/unwritable file
  kParse,           // unparseable value in a data file
  kValidation,      // request or record failed validation
  kInvalidClass,    // class index/name outside {0,1,2}
  kInvalidCount,    // explanation count outside [0,10]
  kNotFound,        // unknown record id
  kSchemaMismatch,  // model/record fingerprint disagreement
  kEmptyDataset,
  kPrecondition,    // e.g. too few records per class for a split
  kModelFormat,     // corrupt or wrong-version model artifact
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hxai

#endif  // HXAI_ERROR_HPP_
