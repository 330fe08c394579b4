// Copyright 2026 The cuedist Authors. All Rights Reserved.
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

#ifndef CUEDIST_ERROR_H_
#define CUEDIST_ERROR_H_

#include <stdexcept>
#include <string>

namespace cuedist {

enum class ErrorKind {
  kInvalidArgument,  // precondition violated by the caller
  kData,             // malformed or inconsistent input data
  kIo,               // file system or network failure
  kDegenerate,       // statistic undefined for the given data
};

// The single exception type thrown by the library. The kind lets front ends
// map failures onto exit codes or HTTP status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void Require(bool condition, const std::string& what) {
  if (!condition) Fail(ErrorKind::kInvalidArgument, what);
}

}  // namespace cuedist

#endif  // CUEDIST_ERROR_H_
