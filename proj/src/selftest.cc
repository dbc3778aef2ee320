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

#include "tomoqkd/selftest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "tomoqkd/protocol_sim.h"
#include "tomoqkd/region_scan.h"
#include "tomoqkd/security.h"

namespace tomoqkd {

BellDiagonalState sample_uniform_state(CounterRng &rng) {
    std::array<double, 4> e{};
    double sum = 0.0;
    for (double &x : e) {
        x = -std::log1p(-rng.uniform());
        sum += x;
    }
    for (double &x : e) {
        x /= sum;
    }
    return BellDiagonalState::from_probabilities(e);
}

BellDiagonalState sample_dominant_state(CounterRng &rng) {
    std::array<double, 4> p = sample_uniform_state(rng).probabilities();
    std::swap(p[0], *std::max_element(p.begin(), p.end()));
    return BellDiagonalState::from_probabilities(p);
}

namespace {

using Check = std::function<std::string(CounterRng &)>;

// Each check returns an empty string on success or a description of the
// first violation.
std::vector<std::pair<std::string, Check>> checks() {
    std::vector<std::pair<std::string, Check>> c;

    c.emplace_back("bell.normalization", [](CounterRng &rng) -> std::string {
        for (int i = 0; i < 2000; i++) {
            BasisMarginals m = basis_marginals(sample_uniform_state(rng));
            if (std::abs(m.p0 + m.p1 - 1) > 1e-12 || std::abs(m.q0 + m.q1 - 1) > 1e-12 ||
                std::abs(m.r0 + m.r1 - 1) > 1e-12) {
                return "marginals do not sum to one";
            }
        }
        return "";
    });

    c.emplace_back("bell.oracle_consistency", [](CounterRng &rng) -> std::string {
        for (int i = 0; i < 200; i++) {
            BellDiagonalState s = sample_uniform_state(rng);
            for (Basis a : kAllBases) {
                for (Basis b : kAllBases) {
                    OutcomeTable t = joint_outcome_probs(s, a, b);
                    if (a == b) {
                        double same = t[0][0] + t[1][1];
                        if (std::abs(same - correlation_probability(s, a).corr) > 1e-12) {
                            return "matched-basis correlation mismatch";
                        }
                    } else {
                        for (auto &row : t) {
                            for (double v : row) {
                                if (std::abs(v - 0.25) > 1e-12) {
                                    return "mismatched-basis cell differs from 1/4";
                                }
                            }
                        }
                    }
                }
            }
        }
        return "";
    });

    c.emplace_back("bell.nppt_equivalence", [](CounterRng &rng) -> std::string {
        for (int i = 0; i < 2000; i++) {
            BellDiagonalState s = sample_uniform_state(rng);
            DistillabilityVerdict v = distillability(s);
            if (std::abs(v.margin) < 1e-6) {
                continue;
            }
            if (v.distillable != (min_partial_transpose_eigenvalue(s) < 0.0)) {
                return "max-probability rule disagrees with partial transpose";
            }
        }
        return "";
    });

    c.emplace_back("bell.angle_round_trip", [](CounterRng &rng) -> std::string {
        for (int i = 0; i < 2000; i++) {
            AngleParameterization in{0.01 + 0.98 * rng.uniform(), (0.01 + 0.98 * rng.uniform()) * std::numbers::pi / 2,
                                     (0.01 + 0.98 * rng.uniform()) * std::numbers::pi / 2};
            AngleParameterization out = to_angles(from_angles(in));
            if (std::abs(out.theta - in.theta) > 1e-10 || std::abs(out.phi - in.phi) > 1e-10 || out.p00 != in.p00) {
                return "angles not recovered";
            }
        }
        return "";
    });

    c.emplace_back("bell.overlap_bounds", [](CounterRng &rng) -> std::string {
        for (int i = 0; i < 2000; i++) {
            OverlapSet o = overlaps(sample_uniform_state(rng));
            for (const auto *arr : {&o.x, &o.y, &o.z}) {
                for (double l : *arr) {
                    if (std::abs(l) > 1.0) {
                        return "overlap outside [-1, 1]";
                    }
                }
            }
        }
        return "";
    });

    c.emplace_back("security.ad_incoherent_equals_distillability", [](CounterRng &rng) -> std::string {
        for (int i = 0; i < 2000; i++) {
            BellDiagonalState s = sample_dominant_state(rng);
            DistillabilityVerdict d = distillability(s);
            if (std::abs(d.margin) < 1e-6) {
                continue;
            }
            if (ad_incoherent_secure(s).secure != d.distillable) {
                return "verdicts differ";
            }
        }
        return "";
    });

    c.emplace_back("security.coherent_implies_incoherent", [](CounterRng &rng) -> std::string {
        for (int i = 0; i < 2000; i++) {
            BellDiagonalState s = sample_dominant_state(rng);
            SecurityReport r = classify_state(s);
            if (r.ad_coherent.secure && !r.ad_incoherent.secure) {
                return "coherent-secure state that is not incoherent-secure";
            }
            if (r.ck.secure && !r.ad_incoherent.secure) {
                return "one-way secure state that is not incoherent-secure";
            }
        }
        return "";
    });

    c.emplace_back("security.resistant_families", [](CounterRng &) -> std::string {
        for (int k = 1; k <= 9; k++) {
            double p00 = 0.5 + 0.05 * k;
            if (p00 >= 1.0) {
                break;
            }
            for (int slot = 1; slot < 4; slot++) {
                std::array<double, 4> p{p00, 0, 0, 0};
                p[slot] = 1.0 - p00;
                SecurityReport r = classify_state(BellDiagonalState::from_probabilities(p));
                if (!r.ck.secure || !r.ad_coherent.secure) {
                    return "two-component state not secure";
                }
            }
        }
        return "";
    });

    c.emplace_back("security.eve_exact_vs_voting", [](CounterRng &rng) -> std::string {
        BellDiagonalState s = BellDiagonalState::werner(0.8);
        SimConfig config;
        config.state = s;
        config.n_pairs = 600000;
        config.block_length = 3;
        config.seed = rng();
        config.paper_faithful = true;
        SimulationRun run = run_simulation(config);
        const EveStatistics &e = run.eve_incoherent;
        double z = std::abs(e.e_be - e.expected_e_be) / e.expected_std_err;
        if (z > 4.0) {
            std::ostringstream ss;
            ss << "z = " << z;
            return ss.str();
        }
        return "";
    });

    c.emplace_back("scan.threshold_bracket", [](CounterRng &) -> std::string {
        ThresholdResult t = find_werner_ck_threshold(1e-6);
        if (t.p00 < 0.760 || t.p00 > 0.770) {
            return "threshold outside [0.760, 0.770]";
        }
        return "";
    });

    c.emplace_back("scan.symmetry_and_nesting", [](CounterRng &) -> std::string {
        GridSpec spec;
        spec.p00 = 0.6;
        spec.n_theta = 33;
        spec.n_phi = 17;
        RegionGrid g = scan_region(spec);
        for (int j = 0; j < spec.n_phi; j++) {
            for (int i = 0; i < spec.n_theta; i++) {
                const Cell &a = g.at(i, j);
                const Cell &b = g.at(spec.n_theta - 1 - i, j);
                for (int k = 0; k < 4; k++) {
                    if (std::abs(a.margins[k] - b.margins[k]) > 1e-12) {
                        return "theta reflection changes a margin";
                    }
                }
                if (a.has(kCellAdCoherent) && !a.has(kCellAdIncoherent)) {
                    return "coherent region not nested in incoherent region";
                }
                if (a.has(kCellCk) && !a.has(kCellAdIncoherent)) {
                    return "one-way region not nested in incoherent region";
                }
            }
        }
        return "";
    });

    c.emplace_back("sim.determinism", [](CounterRng &rng) -> std::string {
        SimConfig config;
        config.state = BellDiagonalState::from_probabilities(0.6, 0.1, 0.1, 0.2);
        config.n_pairs = 200000;
        config.block_length = 4;
        config.seed = rng();
        auto a = sample_session(config, 1);
        auto b = sample_session(config, 4);
        for (size_t i = 0; i < a.size(); i++) {
            if (a[i].basis_a != b[i].basis_a || a[i].basis_b != b[i].basis_b || a[i].bit_a != b[i].bit_a ||
                a[i].bit_b != b[i].bit_b) {
                return "session depends on worker count";
            }
        }
        return "";
    });

    return c;
}

}  // namespace

std::vector<SelfTestResult> run_selftests(uint64_t seed) {
    std::vector<SelfTestResult> results;
    uint64_t stream = 0;
    for (auto &[name, check] : checks()) {
        CounterRng rng(seed, stream++);
        SelfTestResult r{name, false, ""};
        try {
            r.detail = check(rng);
            r.passed = r.detail.empty();
        } catch (const std::exception &e) {
            r.detail = std::string("exception: ") + e.what();
        }
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace tomoqkd
