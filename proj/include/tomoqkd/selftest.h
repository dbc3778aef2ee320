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

#ifndef TOMOQKD_SELFTEST_H_
#define TOMOQKD_SELFTEST_H_

#include <cstdint>
#include <string>
#include <vector>

#include "tomoqkd/bell_state.h"
#include "tomoqkd/rng.h"

namespace tomoqkd {

/// Uniform on the probability simplex (flat Dirichlet).
BellDiagonalState sample_uniform_state(CounterRng &rng);

/// Uniform on the part of the simplex where p00 is the largest weight, i.e.
/// states labelled so the parties key on their dominant Bell state. p00
/// ranges over (1/4, 1).
BellDiagonalState sample_dominant_state(CounterRng &rng);

struct SelfTestResult {
    std::string name;
    bool passed;
    std::string detail;
};

/// Invariant suites of every module at reduced sample sizes.
std::vector<SelfTestResult> run_selftests(uint64_t seed);

}  // namespace tomoqkd

#endif  // TOMOQKD_SELFTEST_H_
