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

#ifndef TOMOQKD_BELL_STATE_H_
#define TOMOQKD_BELL_STATE_H_

#include <array>
#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

namespace tomoqkd {

/// Measurement basis (eigenbasis of the corresponding Pauli operator).
/// X and Z keys are built from correlated outcomes, Y keys from anti-correlated ones.
enum class Basis : uint8_t { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Basis, 3> kAllBases = {Basis::X, Basis::Y, Basis::Z};

std::string_view basis_name(Basis basis);

struct AngleParameterization;

/// A two-qubit state diagonal in the Bell basis |z_ab>, where `a` is the
/// amplitude bit and `b` the phase bit:
///   |z_ab> = (|k, k+a> summed over k with sign (-1)^{kb}) / sqrt(2).
/// So |z_00> = Phi+, |z_01> = Phi-, |z_10> = Psi+, |z_11> = Psi-.
///
/// Instances are always normalized and nonnegative. "Protocol mode" means
/// p00 > 1/2, which is what the key-agreement protocol assumes; analysis-mode
/// states (p00 <= 1/2) are representable but consumers that need protocol
/// mode check `protocol_mode()` themselves.
class BellDiagonalState {
   public:
    /// Validates and normalizes. Entries >= -1e-12 are clamped to zero, and the
    /// sum must lie within 1e-9 of one. Throws ValidationError otherwise.
    static BellDiagonalState from_probabilities(double p00, double p01, double p10, double p11);
    static BellDiagonalState from_probabilities(const std::array<double, 4> &p);

    static BellDiagonalState werner(double p00);

    double p(int a, int b) const {
        return probs_[2 * (a & 1) + (b & 1)];
    }
    double p00() const {
        return probs_[0];
    }
    double p01() const {
        return probs_[1];
    }
    double p10() const {
        return probs_[2];
    }
    double p11() const {
        return probs_[3];
    }
    const std::array<double, 4> &probabilities() const {
        return probs_;
    }

    bool protocol_mode() const {
        return probs_[0] > 0.5;
    }

    bool operator==(const BellDiagonalState &other) const = default;

   private:
    friend BellDiagonalState from_angles(const AngleParameterization &param);
    explicit BellDiagonalState(const std::array<double, 4> &p) : probs_(p) {
    }
    std::array<double, 4> probs_;
};

/// (p00, theta, phi) chart over the simplex:
///   p01 = (1-p00) cos^2(theta) cos^2(phi)
///   p10 = (1-p00) sin^2(theta) cos^2(phi)
///   p11 = (1-p00) sin^2(phi)
struct AngleParameterization {
    double p00 = 1.0;
    double theta = 0.0;
    double phi = 0.0;
};

/// Requires p00 in (0, 1] and both angles in [0, pi/2].
BellDiagonalState from_angles(const AngleParameterization &param);

/// Inverse chart. Angles are 0 where the ratio is undefined (p00 == 1, or
/// p01 == p10 == 0 for theta).
AngleParameterization to_angles(const BellDiagonalState &state);

/// Weights of the correlated (index 0) and anti-correlated (index 1)
/// subspaces for each matched basis: p for z, q for x, r for y.
struct BasisMarginals {
    double p0, p1;
    double q0, q1;
    double r0, r1;
};

BasisMarginals basis_marginals(const BellDiagonalState &state);

struct CorrelationProbability {
    double corr;
    double anticorr;
};

CorrelationProbability correlation_probability(const BellDiagonalState &state, Basis basis);

/// Inner products <f^m_0a | f^m_1a> of Eve's two ancilla states inside the
/// subspace `a` for a matched basis `m`. Zero-weight subspaces get overlap 1.
struct OverlapSet {
    std::array<double, 2> x;
    std::array<double, 2> y;
    std::array<double, 2> z;

    double operator()(Basis basis, int a) const;
};

OverlapSet overlaps(const BellDiagonalState &state);

/// 4x4 density matrix in the computational basis |00>, |01>, |10>, |11>
/// (Alice's qubit first).
using DensityMatrix4 = Eigen::Matrix4cd;

DensityMatrix4 density_matrix(const BellDiagonalState &state);

/// Joint outcome distribution table[bitA][bitB] for projective measurements
/// of Alice in `basis_a` and Bob in `basis_b`, computed by tracing the density
/// matrix against the product eigenprojectors. Outcome k labels eigenvalue (-1)^k.
using OutcomeTable = std::array<std::array<double, 2>, 2>;

OutcomeTable joint_outcome_probs(const BellDiagonalState &state, Basis basis_a, Basis basis_b);

/// Transpose on Bob's qubit.
DensityMatrix4 partial_transpose(const DensityMatrix4 &rho);

/// Smallest eigenvalue of the partial transpose of the state's density matrix.
double min_partial_transpose_eigenvalue(const BellDiagonalState &state);

struct DistillabilityVerdict {
    bool distillable;
    /// max_ab p_ab - 1/2.
    double margin;
    /// |margin| <= 1e-12; such states are reported as not distillable.
    bool boundary;
};

/// Peres-Horodecki for Bell-diagonal states: distillable iff max p_ab > 1/2.
DistillabilityVerdict distillability(const BellDiagonalState &state);

inline bool is_distillable(const BellDiagonalState &state) {
    return distillability(state).distillable;
}

/// Indifference band used by every strict-inequality verdict.
inline constexpr double kBoundaryBand = 1e-12;

}  // namespace tomoqkd

#endif  // TOMOQKD_BELL_STATE_H_
