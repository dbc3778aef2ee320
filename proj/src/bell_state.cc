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

#include "tomoqkd/bell_state.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "tomoqkd/errors.h"

namespace tomoqkd {

namespace {

constexpr double kClampTolerance = 1e-12;
constexpr double kSumTolerance = 1e-9;
constexpr double kAngleSlack = 1e-12;

using cplx = std::complex<double>;

// cos^2 and sin^2 of an angle, exact at the chart's edges so that the
// two-component families land on exact zeros.
std::pair<double, double> cos_sin_sq(double angle) {
    if (angle == 0.0) {
        return {1.0, 0.0};
    }
    if (std::abs(angle - std::numbers::pi / 2) <= 1e-15) {
        return {0.0, 1.0};
    }
    double c = std::cos(angle);
    double s = std::sin(angle);
    return {c * c, s * s};
}

double overlap_ratio(double plus, double minus) {
    double den = plus + minus;
    if (den <= 0.0) {
        return 1.0;
    }
    return (plus - minus) / den;
}

// Eigenvector of the Pauli operator for `basis` with eigenvalue (-1)^k.
Eigen::Vector2cd eigenvector(Basis basis, int k) {
    const double h = 1.0 / std::sqrt(2.0);
    const double sign = k == 0 ? 1.0 : -1.0;
    switch (basis) {
        case Basis::X:
            return Eigen::Vector2cd(h, sign * h);
        case Basis::Y:
            return Eigen::Vector2cd(h, cplx(0.0, sign * h));
        case Basis::Z:
            break;
    }
    return k == 0 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
}

}  // namespace

std::string_view basis_name(Basis basis) {
    switch (basis) {
        case Basis::X:
            return "x";
        case Basis::Y:
            return "y";
        case Basis::Z:
            return "z";
    }
    return "?";
}

BellDiagonalState BellDiagonalState::from_probabilities(double p00, double p01, double p10, double p11) {
    return from_probabilities(std::array<double, 4>{p00, p01, p10, p11});
}

BellDiagonalState BellDiagonalState::from_probabilities(const std::array<double, 4> &p) {
    std::array<double, 4> q{};
    double sum = 0.0;
    for (size_t i = 0; i < 4; i++) {
        if (!std::isfinite(p[i])) {
            throw ValidationError("Bell-diagonal probabilities must be finite.");
        }
        if (p[i] < -kClampTolerance) {
            std::stringstream ss;
            ss << "Bell-diagonal probability p" << (i >> 1) << (i & 1) << " = " << p[i] << " is negative.";
            throw ValidationError(ss.str());
        }
        q[i] = std::max(p[i], 0.0);
        sum += q[i];
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        std::stringstream ss;
        ss.precision(17);
        ss << "Bell-diagonal probabilities sum to " << sum << ", not 1.";
        throw ValidationError(ss.str());
    }
    if (sum != 1.0) {
        for (double &v : q) {
            v /= sum;
        }
    }
    return BellDiagonalState(q);
}

BellDiagonalState BellDiagonalState::werner(double p00) {
    double rest = (1.0 - p00) / 3.0;
    return from_probabilities(p00, rest, rest, rest);
}

BellDiagonalState from_angles(const AngleParameterization &param) {
    if (!(param.p00 > 0.0 && param.p00 <= 1.0)) {
        throw ValidationError("p00 must lie in (0, 1].");
    }
    auto in_range = [](double angle) {
        return angle >= -kAngleSlack && angle <= std::numbers::pi / 2 + kAngleSlack;
    };
    if (!in_range(param.theta) || !in_range(param.phi)) {
        throw ValidationError("theta and phi must lie in [0, pi/2].");
    }
    double rest = 1.0 - param.p00;
    auto [ct, st] = cos_sin_sq(std::clamp(param.theta, 0.0, std::numbers::pi / 2));
    auto [cp, sp] = cos_sin_sq(std::clamp(param.phi, 0.0, std::numbers::pi / 2));
    // The chart sums to one up to rounding; keep the formulas literal rather
    // than renormalizing.
    std::array<double, 4> p{param.p00, rest * ct * cp, rest * st * cp, rest * sp};
    double sum = p[0] + p[1] + p[2] + p[3];
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw InvariantError("angle chart produced an unnormalized state");
    }
    return BellDiagonalState(p);
}

AngleParameterization to_angles(const BellDiagonalState &state) {
    AngleParameterization out;
    out.p00 = state.p00();
    double rest = state.p01() + state.p10() + state.p11();
    if (rest <= 0.0) {
        return out;
    }
    out.phi = std::atan2(std::sqrt(state.p11()), std::sqrt(state.p01() + state.p10()));
    if (state.p01() + state.p10() > 0.0) {
        out.theta = std::atan2(std::sqrt(state.p10()), std::sqrt(state.p01()));
    }
    return out;
}

BasisMarginals basis_marginals(const BellDiagonalState &s) {
    BasisMarginals m{};
    m.p0 = s.p00() + s.p01();
    m.p1 = s.p10() + s.p11();
    m.q0 = s.p00() + s.p10();
    m.q1 = s.p01() + s.p11();
    m.r0 = s.p01() + s.p10();
    m.r1 = s.p00() + s.p11();
    return m;
}

CorrelationProbability correlation_probability(const BellDiagonalState &state, Basis basis) {
    BasisMarginals m = basis_marginals(state);
    switch (basis) {
        case Basis::X:
            return {m.q0, m.q1};
        case Basis::Y:
            return {m.r0, m.r1};
        case Basis::Z:
            break;
    }
    return {m.p0, m.p1};
}

double OverlapSet::operator()(Basis basis, int a) const {
    switch (basis) {
        case Basis::X:
            return x[a & 1];
        case Basis::Y:
            return y[a & 1];
        case Basis::Z:
            break;
    }
    return z[a & 1];
}

OverlapSet overlaps(const BellDiagonalState &s) {
    OverlapSet o{};
    for (int a = 0; a < 2; a++) {
        o.z[a] = overlap_ratio(s.p(a, 0), s.p(a, 1));
        o.x[a] = overlap_ratio(s.p(0, a), s.p(1, a));
        o.y[a] = overlap_ratio(s.p(0, a + 1), s.p(1, a));
    }
    return o;
}

DensityMatrix4 density_matrix(const BellDiagonalState &state) {
    DensityMatrix4 rho = DensityMatrix4::Zero();
    const double h = 1.0 / std::sqrt(2.0);
    for (int a = 0; a < 2; a++) {
        for (int b = 0; b < 2; b++) {
            Eigen::Vector4cd ket = Eigen::Vector4cd::Zero();
            for (int k = 0; k < 2; k++) {
                int l = k ^ a;
                ket(2 * k + l) += ((k * b) & 1 ? -h : h);
            }
            rho += state.p(a, b) * ket * ket.adjoint();
        }
    }
    return rho;
}

OutcomeTable joint_outcome_probs(const BellDiagonalState &state, Basis basis_a, Basis basis_b) {
    DensityMatrix4 rho = density_matrix(state);
    OutcomeTable table{};
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            Eigen::Vector2cd u = eigenvector(basis_a, i);
            Eigen::Vector2cd w = eigenvector(basis_b, j);
            Eigen::Vector4cd v(u(0) * w(0), u(0) * w(1), u(1) * w(0), u(1) * w(1));
            table[i][j] = std::max(0.0, (v.adjoint() * rho * v)(0, 0).real());
        }
    }
    return table;
}

DensityMatrix4 partial_transpose(const DensityMatrix4 &rho) {
    DensityMatrix4 out;
    for (int a1 = 0; a1 < 2; a1++) {
        for (int b1 = 0; b1 < 2; b1++) {
            for (int a2 = 0; a2 < 2; a2++) {
                for (int b2 = 0; b2 < 2; b2++) {
                    out(2 * a1 + b1, 2 * a2 + b2) = rho(2 * a1 + b2, 2 * a2 + b1);
                }
            }
        }
    }
    return out;
}

double min_partial_transpose_eigenvalue(const BellDiagonalState &state) {
    Eigen::SelfAdjointEigenSolver<DensityMatrix4> solver(partial_transpose(density_matrix(state)),
                                                         Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

DistillabilityVerdict distillability(const BellDiagonalState &state) {
    const auto &p = state.probabilities();
    double margin = *std::max_element(p.begin(), p.end()) - 0.5;
    bool boundary = std::abs(margin) <= kBoundaryBand;
    return {margin > kBoundaryBand, margin, boundary};
}

}  // namespace tomoqkd
