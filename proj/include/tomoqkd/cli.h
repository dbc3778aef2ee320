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

#ifndef TOMOQKD_CLI_H_
#define TOMOQKD_CLI_H_

#include <ostream>

namespace tomoqkd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInternal = 3;

/// Entry point of the `tomoqkd` command line tool. Subcommands: analyze,
/// simulate, scan, threshold, selftest.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace tomoqkd

#endif  // TOMOQKD_CLI_H_
