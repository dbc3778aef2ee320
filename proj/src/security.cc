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

#include "tomoqkd/security.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tomoqkd/errors.h"

namespace tomoqkd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) {
    return x > 0.0 ? std::log(x) : kNegInf;
}

// n * log(x) with 0 * log(0) = 0.
double weighted_log(int n, double x) {
    return n == 0 ? 0.0 : n * safe_log(x);
}

// Neumaier compensated sum.
class CompensatedSum {
   public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const {
        return sum_ + comp_;
    }

   private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

std::vector<double> binomial_pmf(int n, double err) {
    std::vector<double> pmf(n + 1);
    double choose = 1.0;
    for (int k = 0; k <= n; k++) {
        pmf[k] = choose * std::pow(err, k) * std::pow(1.0 - err, n - k);
        choose = choose * (n - k) / (k + 1);
    }
    return pmf;
}

// Subspace index per basis that a block of the given case occupies:
// Case I is correlated on x and z and anti-correlated on y.
struct CaseSubspaces {
    int x, y, z;
};

CaseSubspaces subspaces_for(BlockCase block_case) {
    return block_case == BlockCase::I ? CaseSubspaces{0, 1, 0} : CaseSubspaces{1, 0, 1};
}

void check_counts(const BlockCounts &c) {
    if (c.n_x < 0 || c.n_y < 0 || c.n_z < 0 || c.length() < 1) {
        throw ValidationError("block counts must be nonnegative with L >= 1");
    }
}

}  // namespace

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        std::stringstream ss;
        ss << "binary_entropy argument " << p << " outside [0, 1]";
        throw std::domain_error(ss.str());
    }
    double h = 0.0;
    if (p > 0.0) {
        h -= p * std::log2(p);
    }
    if (p < 1.0) {
        h -= (1.0 - p) * std::log2(1.0 - p);
    }
    return h;
}

double guess_probability(double overlap) {
    double l2 = std::min(overlap * overlap, 1.0);
    return 0.5 * (1.0 + std::sqrt(1.0 - l2));
}

double guess_error(double overlap) {
    double l2 = std::min(overlap * overlap, 1.0);
    return l2 / (2.0 * (1.0 + std::sqrt(1.0 - l2)));
}

double GuessProbabilities::operator()(Basis basis, int a) const {
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

GuessProbabilities guess_probabilities(const BellDiagonalState &state) {
    OverlapSet o = overlaps(state);
    GuessProbabilities g{};
    for (int a = 0; a < 2; a++) {
        g.x[a] = guess_probability(o.x[a]);
        g.y[a] = guess_probability(o.y[a]);
        g.z[a] = guess_probability(o.z[a]);
    }
    return g;
}

double mutual_info_ab(const BellDiagonalState &state) {
    BasisMarginals m = basis_marginals(state);
    return 1.0 - (binary_entropy(m.p0) + binary_entropy(m.q0) + binary_entropy(m.r0)) / 3.0;
}

EveInformation mutual_info_be(const BellDiagonalState &state) {
    BasisMarginals m = basis_marginals(state);
    GuessProbabilities g = guess_probabilities(state);
    auto per_basis = [](double w0, double w1, const std::array<double, 2> &eta) {
        return w0 * (1.0 - binary_entropy(eta[0])) + w1 * (1.0 - binary_entropy(eta[1]));
    };
    EveInformation info{};
    info.per_basis[static_cast<int>(Basis::X)] = per_basis(m.q0, m.q1, g.x);
    info.per_basis[static_cast<int>(Basis::Y)] = per_basis(m.r0, m.r1, g.y);
    info.per_basis[static_cast<int>(Basis::Z)] = per_basis(m.p0, m.p1, g.z);
    info.total = (info.per_basis[0] + info.per_basis[1] + info.per_basis[2]) / 3.0;
    return info;
}

Verdict Verdict::from_margin(double margin) {
    Verdict v;
    v.margin = margin;
    v.boundary = std::abs(margin) <= kBoundaryBand;
    v.secure = margin > kBoundaryBand;
    return v;
}

Verdict ck_secure(const BellDiagonalState &state) {
    return Verdict::from_margin(mutual_info_ab(state) - mutual_info_be(state).total);
}

Verdict ad_incoherent_secure(const BellDiagonalState &state) {
    BasisMarginals m = basis_marginals(state);
    OverlapSet o = overlaps(state);
    double product = 1.0;
    for (double overlap : {o.x[0], o.y[1], o.z[0]}) {
        product *= guess_probability(overlap) * guess_error(overlap);
    }
    double lhs = m.p1 * m.q1 * m.r0;
    double rhs = m.p0 * m.q0 * m.r1 * 8.0 * std::sqrt(product);
    return Verdict::from_margin(rhs - lhs);
}

Verdict ad_coherent_secure(const BellDiagonalState &state) {
    BasisMarginals m = basis_marginals(state);
    OverlapSet o = overlaps(state);
    double lambda = o.x[0] * o.y[1] * o.z[0];
    double lhs = m.p1 * m.q1 * m.r0;
    double rhs = m.p0 * m.q0 * m.r1 * lambda * lambda;
    return Verdict::from_margin(rhs - lhs);
}

int BlockCounts::operator[](Basis basis) const {
    switch (basis) {
        case Basis::X:
            return n_x;
        case Basis::Y:
            return n_y;
        case Basis::Z:
            break;
    }
    return n_z;
}

BlockCounts BlockCounts::balanced(int block_length) {
    if (block_length < 3 || block_length % 3 != 0) {
        throw ValidationError("balanced blocks need a block length that is a positive multiple of 3");
    }
    int n = block_length / 3;
    return {n, n, n};
}

CaseWeights block_case_weights(const BlockCounts &counts, const BellDiagonalState &state) {
    check_counts(counts);
    BasisMarginals m = basis_marginals(state);
    double log_i = weighted_log(counts.n_z, m.p0) + weighted_log(counts.n_x, m.q0) + weighted_log(counts.n_y, m.r1);
    double log_ii = weighted_log(counts.n_z, m.p1) + weighted_log(counts.n_x, m.q1) + weighted_log(counts.n_y, m.r0);
    if (log_i == kNegInf && log_ii == kNegInf) {
        throw ValidationError("degenerate block: neither correlated nor anti-correlated blocks can occur");
    }
    CaseWeights w{};
    if (log_ii == kNegInf) {
        w.case_i = 1.0;
        w.case_ii = 0.0;
    } else if (log_i == kNegInf) {
        w.case_i = 0.0;
        w.case_ii = 1.0;
    } else {
        w.case_ii = 1.0 / (1.0 + std::exp(log_i - log_ii));
        w.case_i = 1.0 / (1.0 + std::exp(log_ii - log_i));
    }
    w.acceptance = std::exp(log_i) + std::exp(log_ii);
    return w;
}

double alice_bob_block_error(const BlockCounts &counts, const BellDiagonalState &state) {
    return block_case_weights(counts, state).case_ii;
}

double alice_bob_block_error_asymptotic(const BellDiagonalState &state, int block_length) {
    if (block_length < 1) {
        throw ValidationError("block length must be positive");
    }
    BasisMarginals m = basis_marginals(state);
    double num = m.p1 * m.q1 * m.r0;
    double den = m.p0 * m.q0 * m.r1;
    if (num == 0.0) {
        return 0.0;
    }
    if (den == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::pow(num / den, block_length / 3.0);
}

double eve_incoherent_block_error_exact(const BlockErrorInputs &inputs, const BellDiagonalState &state) {
    const BlockCounts &c = inputs.counts;
    check_counts(c);
    if (c.length() > kMaxExactBlockLength) {
        std::stringstream ss;
        ss << "exact enumeration supports L <= " << kMaxExactBlockLength << ", got " << c.length();
        throw ValidationError(ss.str());
    }
    OverlapSet o = overlaps(state);
    CaseSubspaces s = subspaces_for(inputs.block_case);
    std::vector<double> px = binomial_pmf(c.n_x, guess_error(o.x[s.x]));
    std::vector<double> py = binomial_pmf(c.n_y, guess_error(o.y[s.y]));
    std::vector<double> pz = binomial_pmf(c.n_z, guess_error(o.z[s.z]));
    const int L = c.length();

    CompensatedSum total;
    for (int ex = 0; ex <= c.n_x; ex++) {
        for (int ey = 0; ey <= c.n_y; ey++) {
            for (int ez = 0; ez <= c.n_z; ez++) {
                int twice = 2 * (ex + ey + ez);
                if (twice < L) {
                    continue;
                }
                double w = px[ex] * py[ey] * pz[ez];
                total.add(twice == L ? 0.5 * w : w);
            }
        }
    }
    return total.value();
}

double eve_incoherent_error_mixture(const BlockCounts &counts, const BellDiagonalState &state) {
    CaseWeights w = block_case_weights(counts, state);
    double e = 0.0;
    if (w.case_i > 0.0) {
        e += w.case_i * eve_incoherent_block_error_exact({counts, BlockCase::I}, state);
    }
    if (w.case_ii > 0.0) {
        e += w.case_ii * eve_incoherent_block_error_exact({counts, BlockCase::II}, state);
    }
    return e;
}

CappedProbability eve_incoherent_error_asymptotic(const BellDiagonalState &state, int block_length) {
    if (block_length < 3 || block_length % 3 != 0) {
        throw ValidationError("asymptotic Eve error needs L to be a positive multiple of 3");
    }
    OverlapSet o = overlaps(state);
    double log_product = 0.0;
    for (double overlap : {o.x[0], o.y[1], o.z[0]}) {
        double err = guess_error(overlap);
        if (err == 0.0) {
            return {0.0, false};
        }
        log_product += std::log(guess_probability(overlap) * err);
    }
    double log_value = block_length * std::log(2.0) + block_length / 6.0 * log_product;
    double value = std::exp(log_value);
    if (value > 0.5) {
        return {0.5, true};
    }
    return {value, false};
}

double block_overlap(const BlockErrorInputs &inputs, const BellDiagonalState &state) {
    check_counts(inputs.counts);
    OverlapSet o = overlaps(state);
    CaseSubspaces s = subspaces_for(inputs.block_case);
    const BlockCounts &c = inputs.counts;
    return std::pow(o.x[s.x], c.n_x) * std::pow(o.y[s.y], c.n_y) * std::pow(o.z[s.z], c.n_z);
}

double eve_coherent_block_error(const BlockErrorInputs &inputs, const BellDiagonalState &state) {
    return guess_error(block_overlap(inputs, state));
}

double eve_coherent_error_mixture(const BlockCounts &counts, const BellDiagonalState &state) {
    CaseWeights w = block_case_weights(counts, state);
    return w.case_i * eve_coherent_block_error({counts, BlockCase::I}, state) +
           w.case_ii * eve_coherent_block_error({counts, BlockCase::II}, state);
}

std::vector<std::string> boundary_flag_names(uint32_t flags) {
    std::vector<std::string> names;
    if (flags & kBoundaryCk) {
        names.emplace_back("ck");
    }
    if (flags & kBoundaryAdIncoherent) {
        names.emplace_back("ad_incoherent");
    }
    if (flags & kBoundaryAdCoherent) {
        names.emplace_back("ad_coherent");
    }
    if (flags & kBoundaryDistillable) {
        names.emplace_back("distillable");
    }
    return names;
}

SecurityReport classify_state(const BellDiagonalState &state) {
    SecurityReport r;
    r.state = state;
    r.protocol_mode = state.protocol_mode();
    r.i_ab = mutual_info_ab(state);
    EveInformation eve = mutual_info_be(state);
    r.i_be = eve.total;
    r.i_be_per_basis = eve.per_basis;
    r.ck = Verdict::from_margin(r.i_ab - r.i_be);
    r.ad_incoherent = ad_incoherent_secure(state);
    r.ad_coherent = ad_coherent_secure(state);
    r.distillable = distillability(state);
    r.boundary_flags = (r.ck.boundary ? kBoundaryCk : 0u) | (r.ad_incoherent.boundary ? kBoundaryAdIncoherent : 0u) |
                       (r.ad_coherent.boundary ? kBoundaryAdCoherent : 0u) |
                       (r.distillable.boundary ? kBoundaryDistillable : 0u);
    return r;
}

}  // namespace tomoqkd
