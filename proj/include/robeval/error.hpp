// Copyright 2026 The robeval Authors
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

namespace robeval {

enum class ErrorKind { kValidation, kIo, kRemote, kInternal };

// Base for every error the library raises. The kind decides the C status
// code and the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorKind::kValidation, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorKind::kIo, message) {}
};

class RemoteError : public Error {
 public:
  explicit RemoteError(const std::string& message)
      : Error(ErrorKind::kRemote, message) {}
};

// Formats "<source>:<line>: <message>" for parse errors.
inline std::string at_line(const std::string& source, size_t line,
                           const std::string& message) {
  return source + ":" + std::to_string(line) + ": " + message;
}

}  // namespace robeval
