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

#include "tomoqkd/region_scan.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <thread>

#include "tomoqkd/errors.h"

namespace tomoqkd {

namespace {

constexpr double kBoundaryTolerance = 1e-6;

double axis_value(double lo, double hi, int n, int i) {
    if (i == n - 1) {
        return hi;
    }
    return lo + (hi - lo) * i / (n - 1);
}

uint32_t verdict_bits(const Verdict &v, uint32_t secure_bit, uint32_t boundary_bit) {
    return (v.secure ? secure_bit : 0u) | (v.boundary ? boundary_bit : 0u);
}

double condition_margin(const BellDiagonalState &state, Condition condition) {
    switch (condition) {
        case Condition::Ck:
            return ck_secure(state).margin;
        case Condition::AdIncoherent:
            return ad_incoherent_secure(state).margin;
        case Condition::AdCoherent:
            break;
    }
    return ad_coherent_secure(state).margin;
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void GridSpec::validate() const {
    if (n_theta < 2 || n_phi < 2) {
        throw ValidationError("grid needs at least 2 points per axis");
    }
    if (analysis_mode) {
        if (!(p00 > 0.0 && p00 <= 1.0)) {
            throw ValidationError("p00 must lie in (0, 1]");
        }
    } else if (!(p00 > 0.5 && p00 <= 1.0)) {
        throw ValidationError("p00 must lie in (1/2, 1] for protocol scans; use analysis mode for other values");
    }
    auto ok = [](double lo, double hi) {
        return lo >= 0.0 && hi <= std::numbers::pi / 2 + 1e-12 && lo < hi;
    };
    if (!ok(theta_min, theta_max) || !ok(phi_min, phi_max)) {
        throw ValidationError("angle ranges must be increasing subranges of [0, pi/2]");
    }
    if (!(werner_radius >= 0.0)) {
        throw ValidationError("werner radius must be nonnegative");
    }
}

double GridSpec::theta(int i) const {
    return axis_value(theta_min, theta_max, n_theta, i);
}

double GridSpec::phi(int j) const {
    return axis_value(phi_min, phi_max, n_phi, j);
}

std::string_view condition_name(Condition condition) {
    switch (condition) {
        case Condition::Ck:
            return "ck";
        case Condition::AdIncoherent:
            return "ad_incoherent";
        case Condition::AdCoherent:
            break;
    }
    return "ad_coherent";
}

Condition parse_condition(std::string_view name) {
    for (Condition c : {Condition::Ck, Condition::AdIncoherent, Condition::AdCoherent}) {
        if (name == condition_name(c)) {
            return c;
        }
    }
    throw ValidationError("unknown condition '" + std::string(name) + "'");
}

double RegionGrid::fraction(uint32_t bit) const {
    if (cells.empty()) {
        return 0.0;
    }
    size_t n = std::count_if(cells.begin(), cells.end(), [bit](const Cell &c) { return c.has(bit); });
    return static_cast<double>(n) / static_cast<double>(cells.size());
}

Cell classify_cell(const GridSpec &spec, double theta, double phi) {
    BellDiagonalState state = from_angles({spec.p00, theta, phi});
    SecurityReport r = classify_state(state);
    Cell cell;
    cell.theta = theta;
    cell.phi = phi;
    double werner = (1.0 - spec.p00) / 3.0;
    double distance = std::max({std::abs(state.p01() - werner), std::abs(state.p10() - werner),
                                std::abs(state.p11() - werner)});
    cell.margins = {r.ck.margin, r.ad_incoherent.margin, r.ad_coherent.margin, r.distillable.margin,
                    spec.werner_radius - distance};
    cell.mask = verdict_bits(r.ck, kCellCk, kCellCkBoundary) |
                verdict_bits(r.ad_incoherent, kCellAdIncoherent, kCellAdIncoherentBoundary) |
                verdict_bits(r.ad_coherent, kCellAdCoherent, kCellAdCoherentBoundary) |
                (r.distillable.distillable ? kCellDistillable : 0u) |
                (r.distillable.boundary ? kCellDistillableBoundary : 0u) |
                (distance <= spec.werner_radius ? kCellWernerProximal : 0u);
    return cell;
}

RegionGrid scan_region(const GridSpec &spec, unsigned workers) {
    spec.validate();
    RegionGrid grid;
    grid.spec = spec;
    grid.cells.resize(static_cast<size_t>(spec.n_theta) * spec.n_phi);
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min<unsigned>(workers, spec.n_phi);
    std::atomic<int> next_row{0};
    auto work = [&]() {
        for (int j = next_row++; j < spec.n_phi; j = next_row++) {
            double phi = spec.phi(j);
            for (int i = 0; i < spec.n_theta; i++) {
                grid.cells[static_cast<size_t>(j) * spec.n_theta + i] = classify_cell(spec, spec.theta(i), phi);
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; w++) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    return grid;
}

double werner_ck_margin(double p00) {
    return ck_secure(BellDiagonalState::werner(p00)).margin;
}

ThresholdResult find_werner_ck_threshold(double tolerance) {
    if (!(tolerance >= 1e-10)) {
        throw ValidationError("threshold tolerance must be at least 1e-10");
    }
    double lo = 0.5;
    double hi = 1.0;
    double f_lo = werner_ck_margin(lo);
    double f_hi = werner_ck_margin(hi);
    if (!(f_lo < 0.0 && f_hi > 0.0)) {
        throw InvariantError("Werner one-way margin does not change sign on [1/2, 1]");
    }
    int iterations = 0;
    while (hi - lo > tolerance) {
        double mid = 0.5 * (lo + hi);
        if (werner_ck_margin(mid) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations++;
    }
    return {0.5 * (lo + hi), lo, hi, iterations};
}

std::vector<BoundaryRow> find_boundary_curve(const GridSpec &spec, Condition condition) {
    spec.validate();
    std::vector<BoundaryRow> rows;
    rows.reserve(spec.n_phi);
    for (int j = 0; j < spec.n_phi; j++) {
        BoundaryRow row;
        row.phi = spec.phi(j);
        auto margin_at = [&](double theta) {
            return condition_margin(from_angles({spec.p00, theta, row.phi}), condition);
        };
        double prev_theta = spec.theta(0);
        double prev = margin_at(prev_theta);
        for (int i = 1; i < spec.n_theta; i++) {
            double theta = spec.theta(i);
            double cur = margin_at(theta);
            bool prev_secure = prev > kBoundaryBand;
            bool cur_secure = cur > kBoundaryBand;
            if (prev_secure != cur_secure) {
                double lo = prev_theta;
                double hi = theta;
                while (hi - lo > kBoundaryTolerance) {
                    double mid = 0.5 * (lo + hi);
                    if ((margin_at(mid) > kBoundaryBand) == prev_secure) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                row.thetas.push_back(0.5 * (lo + hi));
            }
            prev_theta = theta;
            prev = cur;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_grid_csv(const RegionGrid &grid, std::ostream &out, std::string_view provenance) {
    out << "# " << provenance << "\n";
    out << "theta,phi,margin_ck,margin_ad_incoherent,margin_ad_coherent,margin_distillable,margin_werner,mask\n";
    for (const Cell &c : grid.cells) {
        out << fmt17(c.theta) << ',' << fmt17(c.phi);
        for (double m : c.margins) {
            out << ',' << fmt17(m);
        }
        out << ',' << c.mask << '\n';
    }
}

void write_grid_pgm(const RegionGrid &grid, Condition condition, std::ostream &out, std::string_view provenance) {
    static constexpr uint32_t kSecure[] = {kCellCk, kCellAdIncoherent, kCellAdCoherent};
    static constexpr uint32_t kBoundary[] = {kCellCkBoundary, kCellAdIncoherentBoundary, kCellAdCoherentBoundary};
    int k = static_cast<int>(condition);
    const GridSpec &s = grid.spec;
    out << "P5\n# " << provenance << "\n# " << condition_name(condition)
        << ": 0 insecure, 255 secure, 128 boundary; columns theta ascending, row 0 is phi max\n"
        << s.n_theta << ' ' << s.n_phi << "\n255\n";
    std::vector<char> row(s.n_theta);
    for (int r = 0; r < s.n_phi; r++) {
        int j = s.n_phi - 1 - r;
        for (int i = 0; i < s.n_theta; i++) {
            const Cell &c = grid.at(i, j);
            unsigned char v = c.has(kBoundary[k]) ? 128 : (c.has(kSecure[k]) ? 255 : 0);
            row[i] = static_cast<char>(v);
        }
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
}

}  // namespace tomoqkd
