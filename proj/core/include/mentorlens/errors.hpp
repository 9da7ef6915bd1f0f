// Copyright 2026 The MentorLens Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MENTORLENS_ERRORS_HPP
#define MENTORLENS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mentorlens {

// Base class for everything thrown on purpose by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad invocation: unknown flags, invalid parameter combinations. Exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data. Exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace mentorlens

#endif  // MENTORLENS_ERRORS_HPP
