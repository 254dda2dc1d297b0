// Copyright (c) 2026 The ADFA Authors. All Rights Reserved.
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
#include <string_view>

namespace adfa {

enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kUnsupportedFormat,
  kCorruptFile,
  kWriteError,
  kNotAdfaFile,
  kUnsupportedVersion,
};

inline std::string_view name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kUnsupportedFormat: return "unsupported-format";
    case ErrorCode::kCorruptFile: return "corrupt-file";
    case ErrorCode::kWriteError: return "write-error";
    case ErrorCode::kNotAdfaFile: return "not-adfa-file";
    case ErrorCode::kUnsupportedVersion: return "unsupported-version";
  }
  return "unknown";
}

/// Every failure in the library is reported as an adfa::Error carrying a
/// machine-checkable code; what() is "<code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for errors caused by the filesystem or file contents rather
  /// than by caller-supplied parameters.
  bool is_io() const noexcept { return code_ != ErrorCode::kInvalidArgument; }

 private:
  ErrorCode code_;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace detail
}  // namespace adfa
