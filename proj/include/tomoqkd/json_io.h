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

#ifndef TOMOQKD_JSON_IO_H_
#define TOMOQKD_JSON_IO_H_

#include <string>
#include <string_view>

#include "json.hpp"

#include "tomoqkd/bell_state.h"
#include "tomoqkd/protocol_sim.h"
#include "tomoqkd/security.h"

namespace tomoqkd {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Accepts {"p": [p00, p01, p10, p11]} or {"p00": x, "theta": t, "phi": f}.
/// Throws ValidationError on anything else.
BellDiagonalState state_from_json(const nlohmann::json &j);

/// `spec` is inline JSON when it starts with '{', otherwise a file path.
BellDiagonalState parse_state_spec(std::string_view spec);

nlohmann::json state_to_json(const BellDiagonalState &state);

/// Flat object with stable field names: verdicts plus one margin per inequality.
nlohmann::json report_to_json(const SecurityReport &report);

nlohmann::json tomography_to_json(const TomographyEstimate &estimate);

/// Config echo plus every summary statistic of a run (no raw records).
nlohmann::json simulation_to_json(const SimulationRun &run);

/// Serializes with every floating-point number printed to 17 significant
/// digits, so output is byte-stable for identical inputs. indent < 0 gives a
/// single line.
std::string dump_json(const nlohmann::json &j, int indent = 2);

/// Git blob id: SHA-1 over "blob <size>\0" followed by the content.
std::string git_blob_hash(std::string_view content);

}  // namespace tomoqkd

#endif  // TOMOQKD_JSON_IO_H_
