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

#ifndef TOMOQKD_SECURITY_H_
#define TOMOQKD_SECURITY_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tomoqkd/bell_state.h"

namespace tomoqkd {

/// H(p) in bits, with 0 log 0 = 0. Throws std::domain_error outside [0, 1].
double binary_entropy(double p);

/// Success probability of the square-root measurement discriminating two
/// equiprobable pure states with inner product `overlap`.
double guess_probability(double overlap);

/// 1 - guess_probability(overlap), evaluated without cancellation.
double guess_error(double overlap);

struct GuessProbabilities {
    std::array<double, 2> x;
    std::array<double, 2> y;
    std::array<double, 2> z;

    double operator()(Basis basis, int a) const;
};

GuessProbabilities guess_probabilities(const BellDiagonalState &state);

/// I_AB = 1 - (H(p0) + H(q0) + H(r0)) / 3.
double mutual_info_ab(const BellDiagonalState &state);

struct EveInformation {
    double total;
    /// Indexed by Basis (x, y, z).
    std::array<double, 3> per_basis;
};

/// Bob-Eve mutual information for Eve's sort-then-square-root-measurement
/// attack, averaged over the three matched bases.
EveInformation mutual_info_be(const BellDiagonalState &state);

/// Result of a strict inequality test `lhs < rhs` with margin `rhs - lhs`.
/// Margins inside the 1e-12 indifference band are reported as `boundary` and
/// never as secure.
struct Verdict {
    bool secure = false;
    double margin = 0.0;
    bool boundary = false;

    static Verdict from_margin(double margin);
};

/// One-way (Csiszar-Korner) regime: I_AB > I_BE.
Verdict ck_secure(const BellDiagonalState &state);

/// Advantage distillation against an ancilla-by-ancilla eavesdropper:
///   p1 q1 r0 < p0 q0 r1 * 8 sqrt(eta^x_0 eta^y_1 eta^z_0 (1-eta^x_0)(1-eta^y_1)(1-eta^z_0)).
Verdict ad_incoherent_secure(const BellDiagonalState &state);

/// Advantage distillation against a block-collective eavesdropper:
///   p1 q1 r0 < p0 q0 r1 * (lambda^x_0 lambda^y_1 lambda^z_0)^2.
Verdict ad_coherent_secure(const BellDiagonalState &state);

/// Case I: Alice's and Bob's distilled bits agree (raw blocks correlated).
/// Case II: they disagree (raw blocks anti-correlated).
enum class BlockCase : uint8_t { I = 0, II = 1 };

/// Per-basis position counts inside one advantage-distillation block.
struct BlockCounts {
    int n_x = 0;
    int n_y = 0;
    int n_z = 0;

    int length() const {
        return n_x + n_y + n_z;
    }
    int operator[](Basis basis) const;

    /// n_x = n_y = n_z = L / 3. Throws ValidationError unless L is a positive multiple of 3.
    static BlockCounts balanced(int block_length);

    bool operator==(const BlockCounts &) const = default;
};

struct BlockErrorInputs {
    BlockCounts counts;
    BlockCase block_case = BlockCase::I;
};

/// Largest block the exact incoherent-attack enumeration accepts.
inline constexpr int kMaxExactBlockLength = 60;

struct CaseWeights {
    /// Conditional probabilities of each case given that the block is accepted.
    double case_i;
    double case_ii;
    /// Unconditional probability that a block with these counts is accepted:
    /// p0^nz q0^nx r1^ny + p1^nz q1^nx r0^ny.
    double acceptance;
};

/// Throws ValidationError if both case likelihoods vanish.
CaseWeights block_case_weights(const BlockCounts &counts, const BellDiagonalState &state);

/// Exact Alice/Bob distilled-bit error for an accepted block: the Case II weight.
double alice_bob_block_error(const BlockCounts &counts, const BellDiagonalState &state);

/// Large-L form ((p1 q1 r0) / (p0 q0 r1))^{L/3}.
double alice_bob_block_error_asymptotic(const BellDiagonalState &state, int block_length);

/// Eve's majority-vote error for one case: a binomial triple sum over the
/// per-basis error counts, with half weight on the tie shell. Requires
/// L <= kMaxExactBlockLength.
double eve_incoherent_block_error_exact(const BlockErrorInputs &inputs, const BellDiagonalState &state);

/// Case-weighted mixture of the two exact case errors.
double eve_incoherent_error_mixture(const BlockCounts &counts, const BellDiagonalState &state);

struct CappedProbability {
    double value;
    bool capped;
};

/// 2^L (eta^x_0 eta^y_1 eta^z_0 (1-eta^x_0)(1-eta^y_1)(1-eta^z_0))^{L/6}, capped at 1/2.
/// Requires L to be a positive multiple of 3.
CappedProbability eve_incoherent_error_asymptotic(const BellDiagonalState &state, int block_length);

/// Overlap between the two L-ancilla states Eve must discriminate in a block.
double block_overlap(const BlockErrorInputs &inputs, const BellDiagonalState &state);

/// (1 - sqrt(1 - Lambda^2)) / 2 with Lambda = block_overlap(inputs, state).
double eve_coherent_block_error(const BlockErrorInputs &inputs, const BellDiagonalState &state);

double eve_coherent_error_mixture(const BlockCounts &counts, const BellDiagonalState &state);

enum BoundaryFlag : uint32_t {
    kBoundaryCk = 1u << 0,
    kBoundaryAdIncoherent = 1u << 1,
    kBoundaryAdCoherent = 1u << 2,
    kBoundaryDistillable = 1u << 3,
};

std::vector<std::string> boundary_flag_names(uint32_t flags);

struct SecurityReport {
    BellDiagonalState state = BellDiagonalState::from_probabilities(1, 0, 0, 0);
    bool protocol_mode = true;
    double i_ab = 0;
    double i_be = 0;
    std::array<double, 3> i_be_per_basis{};
    Verdict ck;
    Verdict ad_incoherent;
    Verdict ad_coherent;
    DistillabilityVerdict distillable{};
    uint32_t boundary_flags = 0;
};

SecurityReport classify_state(const BellDiagonalState &state);

}  // namespace tomoqkd

#endif  // TOMOQKD_SECURITY_H_
