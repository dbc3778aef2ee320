// Copyright 2026 The tomoqkd Authors
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

#ifndef TOMOQKD_ERRORS_H_
#define TOMOQKD_ERRORS_H_

#include <stdexcept>
#include <string>

namespace tomoqkd {

/// Raised when user-supplied input (a state, a config, a grid spec) violates
/// its documented preconditions. The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
   public:
    explicit ValidationError(const std::string &what) : std::invalid_argument(what) {
    }
};

/// Raised when an internal consistency check fails (exit code 3).
class InvariantError : public std::logic_error {
   public:
    explicit InvariantError(const std::string &what) : std::logic_error(what) {
    }
};

}  // namespace tomoqkd

#endif  // TOMOQKD_ERRORS_H_
