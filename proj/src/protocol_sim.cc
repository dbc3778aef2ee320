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

#include "tomoqkd/protocol_sim.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "tomoqkd/errors.h"

namespace tomoqkd {

namespace {

// RNG stream ids past any realistic chunk index.
constexpr uint64_t kStreamBase = uint64_t{1} << 62;
constexpr uint64_t kDistillationStream = kStreamBase + 1;
constexpr uint64_t kEveIncoherentStream = kStreamBase + 2;
constexpr uint64_t kEveCoherentStream = kStreamBase + 3;

constexpr double kZ95 = 1.959963984540054;

unsigned resolve_workers(unsigned requested, uint64_t jobs) {
    unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<uint64_t>(w, std::max<uint64_t>(jobs, 1)));
}

// Runs body(job) for job in [0, jobs) on a small pool; each job must write only
// to its own output slot.
template <typename Body>
void parallel_for(uint64_t jobs, unsigned workers, Body &&body) {
    workers = resolve_workers(workers, jobs);
    if (workers <= 1) {
        for (uint64_t j = 0; j < jobs; j++) {
            body(j);
        }
        return;
    }
    std::atomic<uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; w++) {
        pool.emplace_back([&]() {
            for (uint64_t j = next++; j < jobs; j = next++) {
                body(j);
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
}

// Position in the sifted key that a given basis uses for the key bit.
uint8_t key_bit_for_bob(Basis basis, uint8_t raw_bit) {
    return basis == Basis::Y ? static_cast<uint8_t>(raw_bit ^ 1) : raw_bit;
}

std::array<double, 4> invert_agreements(const std::array<double, 3> &agreement) {
    double p0 = agreement[static_cast<int>(Basis::Z)];
    double q0 = agreement[static_cast<int>(Basis::X)];
    double r1 = agreement[static_cast<int>(Basis::Y)];
    double p00 = (p0 + q0 + r1 - 1.0) / 2.0;
    return {p00, p0 - p00, q0 - p00, r1 - p00};
}

std::array<double, 4> margins_of(const BellDiagonalState &state) {
    SecurityReport r = classify_state(state);
    return {r.ck.margin, r.ad_incoherent.margin, r.ad_coherent.margin, r.distillable.margin};
}

}  // namespace

std::string_view basis_policy_name(BasisPolicy policy) {
    return policy == BasisPolicy::RoundRobin ? "round-robin" : "uniform-random";
}

BasisPolicy parse_basis_policy(std::string_view name) {
    if (name == "uniform-random") {
        return BasisPolicy::UniformRandom;
    }
    if (name == "round-robin") {
        return BasisPolicy::RoundRobin;
    }
    throw ValidationError("unknown basis policy '" + std::string(name) + "'");
}

void SimConfig::validate() const {
    if (block_length < 1) {
        throw ValidationError("block length must be at least 1");
    }
    if (n_pairs < static_cast<uint64_t>(block_length)) {
        std::stringstream ss;
        ss << "n_pairs (" << n_pairs << ") must be at least the block length (" << block_length << ")";
        throw ValidationError(ss.str());
    }
    if (paper_faithful && block_length % 3 != 0) {
        throw ValidationError("paper-faithful mode requires a block length divisible by 3");
    }
    if (n_pairs > (uint64_t{1} << 32)) {
        throw ValidationError("n_pairs is limited to 2^32");
    }
}

std::vector<PairRecord> sample_session(const SimConfig &config, unsigned workers) {
    config.validate();
    // Cumulative outcome tables for the nine basis combinations, taken from
    // the density-matrix measurement model.
    std::array<std::array<std::array<double, 4>, 3>, 3> cumulative{};
    for (Basis a : kAllBases) {
        for (Basis b : kAllBases) {
            OutcomeTable t = joint_outcome_probs(config.state, a, b);
            auto &c = cumulative[static_cast<int>(a)][static_cast<int>(b)];
            c[0] = t[0][0];
            c[1] = c[0] + t[0][1];
            c[2] = c[1] + t[1][0];
            c[3] = 1.0;
        }
    }

    std::vector<PairRecord> records(config.n_pairs);
    uint64_t chunks = (config.n_pairs + kSessionChunk - 1) / kSessionChunk;
    parallel_for(chunks, workers, [&](uint64_t chunk) {
        CounterRng rng(config.seed, chunk);
        uint64_t begin = chunk * kSessionChunk;
        uint64_t end = std::min(config.n_pairs, begin + kSessionChunk);
        for (uint64_t i = begin; i < end; i++) {
            Basis a;
            Basis b;
            if (config.basis_policy == BasisPolicy::RoundRobin) {
                a = static_cast<Basis>(i % 3);
                b = static_cast<Basis>((i / 3) % 3);
            } else {
                a = static_cast<Basis>(rng.below(3));
                b = static_cast<Basis>(rng.below(3));
            }
            const auto &c = cumulative[static_cast<int>(a)][static_cast<int>(b)];
            double u = rng.uniform();
            int outcome = 0;
            while (outcome < 3 && u >= c[outcome]) {
                outcome++;
            }
            PairRecord &r = records[i];
            r.basis_a = a;
            r.basis_b = b;
            r.bit_a = static_cast<uint8_t>(outcome >> 1);
            r.bit_b = static_cast<uint8_t>(outcome & 1);
            r.subspace = r.bit_a ^ r.bit_b;
            r.matched = a == b;
        }
    });
    return records;
}

SiftedKey sift(std::span<const PairRecord> records) {
    SiftedKey key;
    for (const PairRecord &r : records) {
        if (!r.matched) {
            continue;
        }
        key.alice.push_back(r.bit_a);
        key.bob.push_back(key_bit_for_bob(r.basis_b, r.bit_b));
        key.basis.push_back(r.basis_a);
        key.subspace.push_back(r.subspace);
    }
    return key;
}

TomographyCounts tally(std::span<const PairRecord> records) {
    TomographyCounts counts{};
    for (const PairRecord &r : records) {
        counts[static_cast<int>(r.basis_a)][static_cast<int>(r.basis_b)][2 * r.bit_a + r.bit_b]++;
    }
    return counts;
}

std::array<double, 4> project_to_simplex(const std::array<double, 4> &v) {
    std::array<double, 4> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double running = 0.0;
    double tau = 0.0;
    for (int j = 0; j < 4; j++) {
        running += u[j];
        double t = (running - 1.0) / (j + 1);
        if (u[j] - t > 0.0) {
            tau = t;
        }
    }
    std::array<double, 4> out{};
    for (int i = 0; i < 4; i++) {
        out[i] = std::max(v[i] - tau, 0.0);
    }
    return out;
}

BellDiagonalState state_from_agreements(const std::array<double, 3> &agreement) {
    return BellDiagonalState::from_probabilities(invert_agreements(agreement));
}

TomographyEstimate reconstruct_from_counts(const TomographyCounts &counts) {
    TomographyEstimate est;
    est.counts = counts;
    for (Basis m : kAllBases) {
        int i = static_cast<int>(m);
        const auto &cell = counts[i][i];
        uint64_t n = cell[0] + cell[1] + cell[2] + cell[3];
        if (n == 0) {
            throw ValidationError("tomography needs at least one matched pair in basis " + std::string(basis_name(m)));
        }
        uint64_t same = cell[0] + cell[3];
        uint64_t agree = m == Basis::Y ? n - same : same;
        double f = static_cast<double>(agree) / static_cast<double>(n);
        est.matched_pairs[i] = n;
        est.agreement[i] = f;
        est.agreement_variance[i] = f * (1.0 - f) / static_cast<double>(n);
    }

    est.p_linear = invert_agreements(est.agreement);
    est.simplex_projected = std::any_of(est.p_linear.begin(), est.p_linear.end(), [](double x) { return x < 0.0; });
    est.p_hat = est.simplex_projected ? project_to_simplex(est.p_linear) : est.p_linear;

    // Rows map (z, x, y) agreement frequencies onto p00, p01, p10, p11.
    const double M[4][3] = {{0.5, 0.5, 0.5}, {0.5, -0.5, -0.5}, {-0.5, 0.5, -0.5}, {-0.5, -0.5, 0.5}};
    const double v[3] = {est.agreement_variance[static_cast<int>(Basis::Z)],
                         est.agreement_variance[static_cast<int>(Basis::X)],
                         est.agreement_variance[static_cast<int>(Basis::Y)]};
    for (int r = 0; r < 4; r++) {
        for (int c = 0; c < 4; c++) {
            double s = 0.0;
            for (int k = 0; k < 3; k++) {
                s += M[r][k] * v[k] * M[c][k];
            }
            est.covariance[r][c] = s;
        }
        est.std_err[r] = std::sqrt(est.covariance[r][r]);
    }

    for (int a = 0; a < 3; a++) {
        for (int b = 0; b < 3; b++) {
            if (a == b) {
                continue;
            }
            const auto &cell = counts[a][b];
            uint64_t n = cell[0] + cell[1] + cell[2] + cell[3];
            if (n == 0) {
                continue;
            }
            double expected = static_cast<double>(n) / 4.0;
            for (uint64_t o : cell) {
                double d = static_cast<double>(o) - expected;
                est.uniformity_chi2 += d * d / expected;
            }
            est.uniformity_dof += 3;
        }
    }
    if (est.uniformity_dof > 0) {
        est.uniformity_threshold =
            boost::math::quantile(boost::math::chi_squared_distribution<double>(est.uniformity_dof), 0.99);
        est.non_bell_diagonal = est.uniformity_chi2 > est.uniformity_threshold;
    }
    return est;
}

TomographyEstimate reconstruct_tomography(std::span<const PairRecord> records) {
    return reconstruct_from_counts(tally(records));
}

std::array<double, 4> margin_standard_errors(const BellDiagonalState &state,
                                             const std::array<double, 3> &agreement_variance) {
    BasisMarginals m = basis_marginals(state);
    std::array<double, 3> base{};
    base[static_cast<int>(Basis::X)] = m.q0;
    base[static_cast<int>(Basis::Y)] = m.r1;
    base[static_cast<int>(Basis::Z)] = m.p0;
    const double h = 1e-6;
    auto try_margins = [&](int k, double delta) -> std::optional<std::array<double, 4>> {
        std::array<double, 3> shifted = base;
        shifted[k] += delta;
        std::array<double, 4> p = invert_agreements(shifted);
        if (std::any_of(p.begin(), p.end(), [](double x) { return x < 0.0; })) {
            return std::nullopt;
        }
        return margins_of(BellDiagonalState::from_probabilities(p));
    };

    std::array<double, 4> variance{};
    std::array<double, 4> center = margins_of(state);
    for (int k = 0; k < 3; k++) {
        auto plus = try_margins(k, h);
        auto minus = try_margins(k, -h);
        for (int j = 0; j < 4; j++) {
            double grad;
            if (plus && minus) {
                grad = ((*plus)[j] - (*minus)[j]) / (2 * h);
            } else if (plus) {
                grad = ((*plus)[j] - center[j]) / h;
            } else if (minus) {
                grad = (center[j] - (*minus)[j]) / h;
            } else {
                grad = 0.0;
            }
            variance[j] += grad * grad * agreement_variance[k];
        }
    }
    std::array<double, 4> se{};
    for (int j = 0; j < 4; j++) {
        se[j] = std::sqrt(variance[j]);
    }
    return se;
}

ADOutcome run_advantage_distillation(const SiftedKey &key, const ADOptions &options, CounterRng &rng) {
    const int L = options.block_length;
    if (L < 1) {
        throw ValidationError("block length must be at least 1");
    }
    if (key.bob.size() != key.alice.size() || key.basis.size() != key.alice.size()) {
        throw ValidationError("sifted key columns must have equal length");
    }
    if (options.balanced && L % 3 != 0) {
        throw ValidationError("balanced blocks require a block length divisible by 3");
    }

    std::vector<uint32_t> order(key.size());
    std::iota(order.begin(), order.end(), 0u);
    if (options.shuffle) {
        for (size_t i = order.size(); i > 1; i--) {
            std::swap(order[i - 1], order[rng.below(i)]);
        }
    }

    std::vector<std::vector<uint32_t>> groups;
    if (options.balanced) {
        std::array<std::vector<uint32_t>, 3> queues;
        for (uint32_t idx : order) {
            queues[static_cast<int>(key.basis[idx])].push_back(idx);
        }
        size_t per = static_cast<size_t>(L / 3);
        size_t n_blocks = std::min({queues[0].size(), queues[1].size(), queues[2].size()}) / per;
        for (size_t b = 0; b < n_blocks; b++) {
            std::vector<uint32_t> g;
            g.reserve(L);
            for (const auto &q : queues) {
                g.insert(g.end(), q.begin() + b * per, q.begin() + (b + 1) * per);
            }
            groups.push_back(std::move(g));
        }
    } else {
        for (size_t start = 0; start + L <= order.size(); start += L) {
            groups.emplace_back(order.begin() + start, order.begin() + start + L);
        }
    }

    ADOutcome out;
    out.block_length = L;
    out.blocks.reserve(groups.size());
    for (auto &g : groups) {
        DistillationBlock block;
        block.alice_bit = rng.bernoulli(0.5) ? 1 : 0;
        block.broadcast.resize(g.size());
        bool homogeneous = true;
        uint8_t first = 0;
        for (size_t i = 0; i < g.size(); i++) {
            uint32_t idx = g[i];
            block.broadcast[i] = key.alice[idx] ^ block.alice_bit;
            uint8_t d = block.broadcast[i] ^ key.bob[idx];
            if (i == 0) {
                first = d;
            } else if (d != first) {
                homogeneous = false;
            }
            switch (key.basis[idx]) {
                case Basis::X:
                    block.counts.n_x++;
                    break;
                case Basis::Y:
                    block.counts.n_y++;
                    break;
                case Basis::Z:
                    block.counts.n_z++;
                    break;
            }
        }
        block.positions = std::move(g);
        block.accepted = homogeneous;
        block.bob_bit = first;
        out.blocks_total++;
        if (homogeneous) {
            out.blocks_accepted++;
            out.alice_bits.push_back(block.alice_bit);
            out.bob_bits.push_back(block.bob_bit);
            if (block.alice_bit != block.bob_bit) {
                out.errors++;
            }
        }
        out.blocks.push_back(std::move(block));
    }
    out.e_ab = out.blocks_accepted > 0 ? static_cast<double>(out.errors) / out.blocks_accepted : 0.0;
    return out;
}

namespace {

template <typename GuessBlock, typename Expected>
EveStatistics run_eve(const ADOutcome &outcome, GuessBlock &&guess_is_wrong,
                      Expected &&expected_error) {
    EveStatistics stats;
    double expected_sum = 0.0;
    double variance_sum = 0.0;
    for (const DistillationBlock &block : outcome.blocks) {
        if (!block.accepted) {
            continue;
        }
        BlockCase block_case = block.alice_bit == block.bob_bit ? BlockCase::I : BlockCase::II;
        int c = static_cast<int>(block_case);
        bool wrong = guess_is_wrong(block, block_case);
        stats.blocks++;
        stats.blocks_by_case[c]++;
        if (wrong) {
            stats.errors++;
            stats.errors_by_case[c]++;
        }
        double e = expected_error(block, block_case);
        expected_sum += e;
        variance_sum += e * (1.0 - e);
    }
    if (stats.blocks > 0) {
        double n = static_cast<double>(stats.blocks);
        stats.e_be = static_cast<double>(stats.errors) / n;
        stats.expected_e_be = expected_sum / n;
        stats.expected_std_err = std::sqrt(variance_sum) / n;
    }
    return stats;
}

}  // namespace

EveStatistics simulate_eve_incoherent(const SiftedKey &key, const ADOutcome &outcome, const BellDiagonalState &state,
                                      CounterRng &rng) {
    GuessProbabilities eta = guess_probabilities(state);
    auto guess = [&](const DistillationBlock &block, BlockCase) {
        size_t ones = 0;
        for (size_t i = 0; i < block.positions.size(); i++) {
            uint32_t idx = block.positions[i];
            bool correct = rng.bernoulli(eta(key.basis[idx], key.subspace[idx]));
            uint8_t eve_bit = correct ? key.bob[idx] : static_cast<uint8_t>(key.bob[idx] ^ 1);
            ones += block.broadcast[i] ^ eve_bit;
        }
        size_t L = block.positions.size();
        uint8_t vote;
        if (2 * ones > L) {
            vote = 1;
        } else if (2 * ones < L) {
            vote = 0;
        } else {
            vote = rng.bernoulli(0.5) ? 1 : 0;
        }
        return vote != block.bob_bit;
    };
    bool exact_available = outcome.block_length <= kMaxExactBlockLength;
    auto expected = [&](const DistillationBlock &block, BlockCase block_case) {
        if (!exact_available) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        return eve_incoherent_block_error_exact({block.counts, block_case}, state);
    };
    return run_eve(outcome, guess, expected);
}

EveStatistics simulate_eve_coherent(const SiftedKey & /*key*/, const ADOutcome &outcome, const BellDiagonalState &state,
                                    CounterRng &rng) {
    auto error_of = [&](const DistillationBlock &block, BlockCase block_case) {
        return eve_coherent_block_error({block.counts, block_case}, state);
    };
    auto guess = [&](const DistillationBlock &block, BlockCase block_case) {
        return rng.bernoulli(error_of(block, block_case));
    };
    return run_eve(outcome, guess, error_of);
}

Interval wilson_interval(uint64_t successes, uint64_t trials) {
    if (trials == 0) {
        throw ValidationError("Wilson interval needs at least one trial");
    }
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = kZ95 * kZ95;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2 * n)) / denom;
    double half = kZ95 * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

ErrorRateSummary estimate_error_rates(const ADOutcome &outcome, const EveStatistics &eve) {
    if (outcome.blocks_accepted == 0 || eve.blocks == 0) {
        throw ValidationError("no accepted blocks; error rates are undefined");
    }
    ErrorRateSummary s;
    s.e_ab = wilson_interval(outcome.errors, outcome.blocks_accepted);
    s.e_be = wilson_interval(eve.errors, eve.blocks);
    double ab = s.e_ab.estimate;
    double be = s.e_be.estimate;
    const double inf = std::numeric_limits<double>::infinity();
    if (be == 0.0) {
        s.ratio = {ab == 0.0 ? std::numeric_limits<double>::quiet_NaN() : inf, s.e_ab.lower / s.e_be.upper, inf};
    } else if (ab == 0.0) {
        s.ratio = {0.0, 0.0, s.e_ab.upper / be};
    } else {
        double var_log = (1.0 - ab) / (ab * outcome.blocks_accepted) + (1.0 - be) / (be * eve.blocks);
        double sd = std::sqrt(var_log);
        double r = ab / be;
        s.ratio = {r, r * std::exp(-kZ95 * sd), r * std::exp(kZ95 * sd)};
    }
    return s;
}

DistillationOracle distillation_oracle(const ADOutcome &outcome, const BellDiagonalState &state) {
    DistillationOracle o;
    double acc_var = 0.0;
    double err_sum = 0.0;
    double err_var = 0.0;
    for (const DistillationBlock &block : outcome.blocks) {
        CaseWeights w = block_case_weights(block.counts, state);
        o.expected_accepted += w.acceptance;
        acc_var += w.acceptance * (1.0 - w.acceptance);
        if (block.accepted) {
            err_sum += w.case_ii;
            err_var += w.case_ii * (1.0 - w.case_ii);
        }
    }
    o.accepted_std_err = std::sqrt(acc_var);
    if (outcome.blocks_accepted > 0) {
        double n = static_cast<double>(outcome.blocks_accepted);
        o.expected_e_ab = err_sum / n;
        o.e_ab_std_err = std::sqrt(err_var) / n;
    }
    return o;
}

SimulationRun run_simulation(const SimConfig &config, bool keep_records, unsigned workers) {
    config.validate();
    SimulationRun run;
    run.config = config;
    std::vector<PairRecord> records = sample_session(config, workers);

    run.tomography = reconstruct_tomography(records);
    run.estimated_report = classify_state(run.tomography.state());
    run.true_report = classify_state(config.state);

    SiftedKey key = sift(records);
    run.matched_pairs = key.size();
    std::array<uint64_t, 3> agree{};
    for (size_t i = 0; i < key.size(); i++) {
        int b = static_cast<int>(key.basis[i]);
        run.raw_key_bits[b]++;
        agree[b] += key.alice[i] == key.bob[i];
    }
    for (int b = 0; b < 3; b++) {
        run.raw_agreement[b] = run.raw_key_bits[b] ? static_cast<double>(agree[b]) / run.raw_key_bits[b] : 0.0;
    }

    CounterRng ad_rng(config.seed, kDistillationStream);
    ADOptions options{config.block_length, config.paper_faithful, config.shuffle_blocks};
    run.distillation = run_advantage_distillation(key, options, ad_rng);
    run.distillation_expected = distillation_oracle(run.distillation, config.state);

    CounterRng inc_rng(config.seed, kEveIncoherentStream);
    run.eve_incoherent = simulate_eve_incoherent(key, run.distillation, config.state, inc_rng);
    CounterRng coh_rng(config.seed, kEveCoherentStream);
    run.eve_coherent = simulate_eve_coherent(key, run.distillation, config.state, coh_rng);
    if (run.distillation.blocks_accepted > 0) {
        run.incoherent_rates = estimate_error_rates(run.distillation, run.eve_incoherent);
        run.coherent_rates = estimate_error_rates(run.distillation, run.eve_coherent);
    }
    if (keep_records) {
        run.records = std::move(records);
    }
    return run;
}

}  // namespace tomoqkd
