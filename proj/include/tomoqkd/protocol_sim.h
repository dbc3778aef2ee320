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

// Monte Carlo realization of the tomographic key-agreement protocol: pair
// sampling, sifting, tomography, advantage distillation, and the two
// eavesdropping strategies on the distilled blocks.

#ifndef TOMOQKD_PROTOCOL_SIM_H_
#define TOMOQKD_PROTOCOL_SIM_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tomoqkd/bell_state.h"
#include "tomoqkd/rng.h"
#include "tomoqkd/security.h"

namespace tomoqkd {

enum class BasisPolicy : uint8_t {
    /// Each party picks x, y or z independently and uniformly per pair.
    UniformRandom,
    /// Pair i uses (basis i mod 3, basis (i / 3) mod 3), cycling through all nine combinations.
    RoundRobin,
};

std::string_view basis_policy_name(BasisPolicy policy);
BasisPolicy parse_basis_policy(std::string_view name);

struct SimConfig {
    BellDiagonalState state = BellDiagonalState::from_probabilities(1, 0, 0, 0);
    uint64_t n_pairs = 0;
    int block_length = 3;
    uint64_t seed = 0;
    BasisPolicy basis_policy = BasisPolicy::UniformRandom;
    /// Forces every distillation block to hold L/3 positions from each basis.
    bool paper_faithful = false;
    /// Seeded shuffle of the sifted key before blocking. Off by default.
    bool shuffle_blocks = false;

    /// Throws ValidationError.
    void validate() const;
};

struct PairRecord {
    Basis basis_a;
    Basis basis_b;
    uint8_t bit_a;
    uint8_t bit_b;
    /// Amplitude-bit subspace Eve's sorting projection reveals: bit_a XOR bit_b.
    uint8_t subspace;
    bool matched;
};

/// Pairs per independent RNG stream.
inline constexpr uint64_t kSessionChunk = 1 << 16;

/// Deterministic in the seed regardless of how many worker threads run.
std::vector<PairRecord> sample_session(const SimConfig &config, unsigned workers = 0);

/// Matched-basis key material. Bob's y-basis bits are complemented, so both
/// keys agree on a position with probability q0, r1, p0 for x, y, z.
struct SiftedKey {
    std::vector<uint8_t> alice;
    std::vector<uint8_t> bob;
    std::vector<Basis> basis;
    std::vector<uint8_t> subspace;

    size_t size() const {
        return alice.size();
    }
};

SiftedKey sift(std::span<const PairRecord> records);

/// counts[basis_a][basis_b][2 * bit_a + bit_b]
using TomographyCounts = std::array<std::array<std::array<uint64_t, 4>, 3>, 3>;

TomographyCounts tally(std::span<const PairRecord> records);

struct TomographyEstimate {
    /// Estimate after simplex projection.
    std::array<double, 4> p_hat{};
    /// Linear-inversion estimate before projection.
    std::array<double, 4> p_linear{};
    std::array<double, 4> std_err{};
    std::array<std::array<double, 4>, 4> covariance{};
    /// Matched-basis agreement frequencies (x: q0, y: r1, z: p0) and their
    /// binomial variances, indexed by Basis.
    std::array<double, 3> agreement{};
    std::array<double, 3> agreement_variance{};
    std::array<uint64_t, 3> matched_pairs{};
    TomographyCounts counts{};
    /// Pearson statistic of the six mismatched-basis cells against 1/4 each.
    double uniformity_chi2 = 0;
    int uniformity_dof = 0;
    /// 99th percentile of chi-square with `uniformity_dof` degrees of freedom.
    double uniformity_threshold = 0;
    bool simplex_projected = false;
    bool non_bell_diagonal = false;

    BellDiagonalState state() const {
        return BellDiagonalState::from_probabilities(p_hat);
    }
};

/// Throws ValidationError when some basis has no matched pairs.
TomographyEstimate reconstruct_from_counts(const TomographyCounts &counts);
TomographyEstimate reconstruct_tomography(std::span<const PairRecord> records);

/// Euclidean projection onto the probability simplex.
std::array<double, 4> project_to_simplex(const std::array<double, 4> &v);

/// Bell-diagonal state whose matched-basis agreements are (q0, r1, p0)
/// for (x, y, z). Throws ValidationError if they are inconsistent.
BellDiagonalState state_from_agreements(const std::array<double, 3> &agreement);

/// Delta-method standard errors of the four verdict margins (ck,
/// ad_incoherent, ad_coherent, distillable), treating the three agreement
/// frequencies as independent with the given variances.
std::array<double, 4> margin_standard_errors(const BellDiagonalState &state,
                                             const std::array<double, 3> &agreement_variance);

struct DistillationBlock {
    std::vector<uint32_t> positions;
    std::vector<uint8_t> broadcast;
    BlockCounts counts;
    uint8_t alice_bit = 0;
    uint8_t bob_bit = 0;
    bool accepted = false;
};

struct ADOptions {
    int block_length = 3;
    bool balanced = false;
    bool shuffle = false;
};

struct ADOutcome {
    int block_length = 0;
    uint64_t blocks_total = 0;
    uint64_t blocks_accepted = 0;
    uint64_t errors = 0;
    std::vector<uint8_t> alice_bits;
    std::vector<uint8_t> bob_bits;
    double e_ab = 0;
    /// Every formed block, in order; rejected ones included.
    std::vector<DistillationBlock> blocks;
};

/// Blocks the sifted key, broadcasts Alice's masked blocks, and keeps the
/// blocks Bob finds homogeneous after subtraction.
ADOutcome run_advantage_distillation(const SiftedKey &key, const ADOptions &options, CounterRng &rng);

struct EveStatistics {
    uint64_t blocks = 0;
    uint64_t errors = 0;
    std::array<uint64_t, 2> blocks_by_case{};
    std::array<uint64_t, 2> errors_by_case{};
    double e_be = 0;
    /// Mean analytic error over the realized blocks (counts and case) and its
    /// standard error, for comparing the empirical rate. NaN when the analytic
    /// value is unavailable (incoherent attack with L > kMaxExactBlockLength).
    double expected_e_be = 0;
    double expected_std_err = 0;
};

/// Eve measures each ancilla with the square-root measurement (correct with
/// probability eta^m_a), XORs Alice's broadcast, and majority-votes, breaking
/// ties with a fair coin.
EveStatistics simulate_eve_incoherent(const SiftedKey &key, const ADOutcome &outcome, const BellDiagonalState &state,
                                      CounterRng &rng);

/// Eve jointly measures each accepted block's L ancillas; she errs with the
/// square-root-measurement error for the block overlap.
EveStatistics simulate_eve_coherent(const SiftedKey &key, const ADOutcome &outcome, const BellDiagonalState &state,
                                    CounterRng &rng);

struct Interval {
    double estimate = 0;
    double lower = 0;
    double upper = 0;
};

/// Wilson score interval at 95% confidence.
Interval wilson_interval(uint64_t successes, uint64_t trials);

struct ErrorRateSummary {
    Interval e_ab;
    Interval e_be;
    /// E_AB / E_BE with a delta-method interval on the log scale.
    Interval ratio;
};

/// Throws ValidationError when no block was accepted.
ErrorRateSummary estimate_error_rates(const ADOutcome &outcome, const EveStatistics &eve);

/// Analytic expectations for a realized distillation transcript.
struct DistillationOracle {
    double expected_accepted = 0;
    double accepted_std_err = 0;
    double expected_e_ab = 0;
    double e_ab_std_err = 0;
};

DistillationOracle distillation_oracle(const ADOutcome &outcome, const BellDiagonalState &state);

/// Everything one simulation run produces.
struct SimulationRun {
    SimConfig config;
    uint64_t matched_pairs = 0;
    std::array<double, 3> raw_agreement{};
    std::array<uint64_t, 3> raw_key_bits{};
    TomographyEstimate tomography;
    SecurityReport estimated_report;
    SecurityReport true_report;
    ADOutcome distillation;
    DistillationOracle distillation_expected;
    EveStatistics eve_incoherent;
    EveStatistics eve_coherent;
    std::optional<ErrorRateSummary> incoherent_rates;
    std::optional<ErrorRateSummary> coherent_rates;
    /// Retained only when requested.
    std::vector<PairRecord> records;
};

SimulationRun run_simulation(const SimConfig &config, bool keep_records = false, unsigned workers = 0);

}  // namespace tomoqkd

#endif  // TOMOQKD_PROTOCOL_SIM_H_
