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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "tomoqkd/bell_state.h"
#include "tomoqkd/protocol_sim.h"
#include "tomoqkd/region_scan.h"
#include "tomoqkd/rng.h"
#include "tomoqkd/security.h"
#include "tomoqkd/selftest.h"

using namespace tomoqkd;

namespace {

constexpr uint64_t kSeed = 20260101;

struct Outcome {
    bool passed;
    std::string detail;
};

std::string fmt(const char *f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

// 1. Werner one-way threshold.
Outcome werner_threshold() {
    ThresholdResult t = find_werner_ck_threshold(1e-4);
    bool ok = t.p00 >= 0.760 && t.p00 <= 0.770 && werner_ck_margin(0.9) > 0 && werner_ck_margin(0.6) < 0;
    return {ok, fmt("p00* = %.6f bracket [%.6f, %.6f]", t.p00, t.lower, t.upper)};
}

// 2. Incoherent AD agrees with distillability. States are drawn uniformly on
// the simplex and relabeled so the largest weight sits on the reference Bell
// state, which is the labeling the protocol assumes.
Outcome incoherent_equals_distillable() {
    CounterRng rng(kSeed, 2);
    int checked = 0;
    int skipped = 0;
    int mismatches = 0;
    int distillable = 0;
    while (checked < 10000) {
        BellDiagonalState s = sample_dominant_state(rng);
        DistillabilityVerdict d = distillability(s);
        if (std::abs(d.margin) < 1e-6) {
            skipped++;
            continue;
        }
        checked++;
        distillable += d.distillable;
        if (ad_incoherent_secure(s).secure != is_distillable(s)) {
            mismatches++;
        }
    }
    std::ostringstream ss;
    ss << checked << " states (" << distillable << " distillable, " << skipped << " in band skipped), "
       << mismatches << " mismatches";
    return {mismatches == 0 && distillable > 0 && distillable < checked, ss.str()};
}

// 3. Coherent attack is strictly stronger near the separable boundary.
Outcome coherent_inequivalence() {
    SecurityReport w52 = classify_state(BellDiagonalState::werner(0.52));
    SecurityReport w90 = classify_state(BellDiagonalState::werner(0.9));
    GridSpec spec;
    spec.n_theta = 256;
    spec.n_phi = 256;
    spec.p00 = 0.51;
    double f51 = scan_region(spec).fraction(kCellAdCoherent);
    spec.p00 = 0.6;
    double f60 = scan_region(spec).fraction(kCellAdCoherent);
    bool ok = !w52.ad_coherent.secure && w52.distillable.distillable && w52.ad_incoherent.secure &&
              w90.ad_coherent.secure && f51 < f60;
    return {ok, fmt("W(0.52) coherent margin %.3e; coherent-secure fraction %.4f at 0.51 vs %.4f at 0.6",
                    w52.ad_coherent.margin, f51, f60)};
}

// 4. Two-Bell-state mixtures resist every attack considered.
Outcome resistant_families() {
    int points = 0;
    int failures = 0;
    for (int k = 1; k <= 9; k++) {
        double p00 = 0.5 + 0.05 * k;
        for (int slot = 1; slot < 4; slot++) {
            std::array<double, 4> p{p00, 0, 0, 0};
            p[slot] = 1.0 - p00;
            SecurityReport r = classify_state(BellDiagonalState::from_probabilities(p));
            points++;
            failures += !(r.ck.secure && r.ad_coherent.secure);
        }
    }
    return {failures == 0, std::to_string(points) + " points, " + std::to_string(failures) + " failures"};
}

// 5. Density-matrix oracle against the analytic formulas.
Outcome oracle_equivalence() {
    CounterRng rng(kSeed, 5);
    double worst = 0;
    for (int i = 0; i < 1000; i++) {
        BellDiagonalState s = sample_uniform_state(rng);
        for (Basis a : kAllBases) {
            for (Basis b : kAllBases) {
                OutcomeTable t = joint_outcome_probs(s, a, b);
                if (a == b) {
                    CorrelationProbability c = correlation_probability(s, a);
                    worst = std::max(worst, std::abs(t[0][0] + t[1][1] - c.corr));
                    worst = std::max(worst, std::abs(t[0][1] + t[1][0] - c.anticorr));
                } else {
                    for (auto &row : t) {
                        for (double v : row) {
                            worst = std::max(worst, std::abs(v - 0.25));
                        }
                    }
                }
            }
        }
    }
    int checked = 0;
    int disagreements = 0;
    while (checked < 10000) {
        BellDiagonalState s = sample_uniform_state(rng);
        DistillabilityVerdict d = distillability(s);
        if (std::abs(d.margin) < 1e-6) {
            continue;
        }
        checked++;
        disagreements += d.distillable != (min_partial_transpose_eigenvalue(s) < 0);
    }
    std::ostringstream ss;
    ss << "max outcome deviation " << worst << "; NPPT disagreements " << disagreements << "/" << checked;
    return {worst <= 1e-12 && disagreements == 0, ss.str()};
}

// 6. Majority-voting Monte Carlo against the exact incoherent error. Each
// configuration aggregates independent sessions until 1e5 blocks are accepted.
Outcome eve_exact_vs_simulated() {
    CounterRng pick(kSeed, 6);
    constexpr uint64_t kSessionPairs = 6'000'000;
    constexpr uint64_t kTargetBlocks = 100'000;
    int failures = 0;
    double worst_z = 0;
    double worst_seconds = 0;
    for (int config = 0; config < 20; config++) {
        auto start = std::chrono::steady_clock::now();
        BellDiagonalState s = sample_dominant_state(pick);
        while (s.p00() < 0.7) {
            s = sample_dominant_state(pick);
        }
        int L = 2 + static_cast<int>(pick.below(11));
        uint64_t blocks = 0;
        uint64_t errors = 0;
        double expected_sum = 0;
        double var_sum = 0;
        for (uint64_t session = 0; blocks < kTargetBlocks; session++) {
            SimConfig c;
            c.state = s;
            c.n_pairs = kSessionPairs;
            c.block_length = L;
            c.seed = kSeed ^ (static_cast<uint64_t>(config) << 32) ^ session;
            SimulationRun run = run_simulation(c);
            const EveStatistics &e = run.eve_incoherent;
            double n = static_cast<double>(e.blocks);
            blocks += e.blocks;
            errors += e.errors;
            expected_sum += e.expected_e_be * n;
            var_sum += e.expected_std_err * e.expected_std_err * n * n;
        }
        double n = static_cast<double>(blocks);
        double z = std::abs(errors / n - expected_sum / n) / (std::sqrt(var_sum) / n);
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        worst_z = std::max(worst_z, z);
        worst_seconds = std::max(worst_seconds, seconds);
        if (!(z <= 3.0) || seconds >= 60.0) {
            failures++;
            std::printf("  config %d: p=(%.4f,%.4f,%.4f,%.4f) L=%d blocks=%llu E_BE=%.6f exact=%.6f z=%.2f\n", config,
                        s.p00(), s.p01(), s.p10(), s.p11(), L, static_cast<unsigned long long>(blocks), errors / n,
                        expected_sum / n, z);
        }
    }
    return {failures == 0, fmt("20 configurations, %.0f failures, worst |z| %.2f, slowest %.2f s", failures, worst_z,
                               worst_seconds)};
}

// 7. Simulate, reconstruct, classify, and compare with the true verdicts on
// states whose margins clear five estimator standard errors.
Outcome protocol_chain() {
    CounterRng pick(kSeed, 7);
    constexpr uint64_t kPairs = 1'000'000;
    int states = 0;
    int mismatches = 0;
    int tries = 0;
    while (states < 10 && tries < 100000) {
        tries++;
        BellDiagonalState s = sample_dominant_state(pick);
        if (!s.protocol_mode()) {
            continue;
        }
        SecurityReport truth = classify_state(s);
        BasisMarginals m = basis_marginals(s);
        std::array<double, 3> f{};
        f[static_cast<int>(Basis::X)] = m.q0;
        f[static_cast<int>(Basis::Y)] = m.r1;
        f[static_cast<int>(Basis::Z)] = m.p0;
        std::array<double, 3> var{};
        for (int b = 0; b < 3; b++) {
            var[b] = f[b] * (1 - f[b]) / (kPairs / 9.0);
        }
        std::array<double, 4> se = margin_standard_errors(s, var);
        std::array<double, 4> margins{truth.ck.margin, truth.ad_incoherent.margin, truth.ad_coherent.margin,
                                      truth.distillable.margin};
        bool clear = true;
        for (int k = 0; k < 4; k++) {
            clear = clear && std::abs(margins[k]) > 5 * se[k];
        }
        if (!clear) {
            continue;
        }
        SimConfig c;
        c.state = s;
        c.n_pairs = kPairs;
        c.block_length = 6;
        c.seed = kSeed + static_cast<uint64_t>(states);
        SimulationRun run = run_simulation(c);
        const SecurityReport &est = run.estimated_report;
        bool same = est.ck.secure == truth.ck.secure && est.ad_incoherent.secure == truth.ad_incoherent.secure &&
                    est.ad_coherent.secure == truth.ad_coherent.secure &&
                    est.distillable.distillable == truth.distillable.distillable;
        if (!same) {
            mismatches++;
            std::printf("  state p=(%.4f,%.4f,%.4f,%.4f): verdicts differ\n", s.p00(), s.p01(), s.p10(), s.p11());
        }
        states++;
    }
    return {states == 10 && mismatches == 0,
            std::to_string(states) + " states, " + std::to_string(mismatches) + " verdict mismatches"};
}

// 8. Exact Alice/Bob block error approaches its large-L form. Past L = 12
// the true gap log1p(a)/|log a| drops below double resolution, so
// monotonicity is checked up to a few ulps of the log ratio.
Outcome eab_asymptotics() {
    BellDiagonalState s = BellDiagonalState::werner(0.8);
    constexpr double kResolution = 8 * std::numeric_limits<double>::epsilon();
    double prev = INFINITY;
    bool monotone = true;
    double last = 0;
    std::ostringstream ss;
    for (int L : {6, 12, 24, 48, 60}) {
        double exact = alice_bob_block_error(BlockCounts::balanced(L), s);
        double asym = alice_bob_block_error_asymptotic(s, L);
        double d = std::abs(std::log(exact) / std::log(asym) - 1.0);
        monotone = monotone && d <= prev + kResolution;
        prev = std::min(prev, d);
        last = d;
        ss << " L=" << L << ":" << d;
    }
    return {monotone && last < 0.05, "log-ratio discrepancy" + ss.str()};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        std::function<Outcome()> run;
        double budget_seconds;
    };
    std::vector<Criterion> criteria = {
        {1, "werner_ck_threshold", werner_threshold, 1.0},
        {2, "incoherent_ad_equals_distillability", incoherent_equals_distillable, 10.0},
        {3, "coherent_inequivalence", coherent_inequivalence, 30.0},
        {4, "resistant_families", resistant_families, 1.0},
        {5, "oracle_equivalence", oracle_equivalence, 1e9},
        {6, "eve_exact_vs_simulated", eve_exact_vs_simulated, 20 * 60.0},
        {7, "protocol_chain_fidelity", protocol_chain, 1e9},
        {8, "eab_asymptotics", eab_asymptotics, 1e9},
    };
    int failed = 0;
    for (const Criterion &c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool pass = o.passed && seconds < c.budget_seconds;
        if (!pass && o.passed) {
            o.detail += "; over time budget";
        }
        failed += !pass;
        std::printf("%s criterion %d %s (%.2f s): %s\n", pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
