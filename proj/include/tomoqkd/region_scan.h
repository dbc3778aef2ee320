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

#ifndef TOMOQKD_REGION_SCAN_H_
#define TOMOQKD_REGION_SCAN_H_

#include <array>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <string_view>
#include <vector>

#include "tomoqkd/bell_state.h"
#include "tomoqkd/security.h"

namespace tomoqkd {

struct GridSpec {
    double p00 = 0.75;
    int n_theta = 256;
    int n_phi = 256;
    double theta_min = 0.0;
    double theta_max = std::numbers::pi / 2;
    double phi_min = 0.0;
    double phi_max = std::numbers::pi / 2;
    /// Max-norm radius over (p01, p10, p11) around the Werner point.
    double werner_radius = 0.02;
    /// Allows p00 in (0, 1/2].
    bool analysis_mode = false;

    /// Throws ValidationError.
    void validate() const;
    double theta(int i) const;
    double phi(int j) const;
};

enum CellBits : uint32_t {
    kCellCk = 1u << 0,
    kCellAdIncoherent = 1u << 1,
    kCellAdCoherent = 1u << 2,
    kCellDistillable = 1u << 3,
    kCellWernerProximal = 1u << 4,
    // Verdict margins inside the indifference band.
    kCellCkBoundary = 1u << 5,
    kCellAdIncoherentBoundary = 1u << 6,
    kCellAdCoherentBoundary = 1u << 7,
    kCellDistillableBoundary = 1u << 8,
};

enum class Condition : uint8_t { Ck, AdIncoherent, AdCoherent };

std::string_view condition_name(Condition condition);
Condition parse_condition(std::string_view name);

struct Cell {
    double theta = 0;
    double phi = 0;
    /// ck, ad_incoherent, ad_coherent, distillable, werner (radius - distance).
    std::array<double, 5> margins{};
    uint32_t mask = 0;

    bool has(uint32_t bit) const {
        return (mask & bit) != 0;
    }
    double margin(Condition condition) const {
        return margins[static_cast<int>(condition)];
    }
};

/// Cells stored row-major with rows indexed by phi and columns by theta.
struct RegionGrid {
    GridSpec spec;
    std::vector<Cell> cells;

    const Cell &at(int i_theta, int j_phi) const {
        return cells[static_cast<size_t>(j_phi) * spec.n_theta + i_theta];
    }
    double fraction(uint32_t bit) const;
};

Cell classify_cell(const GridSpec &spec, double theta, double phi);

/// Output is identical for any worker count.
RegionGrid scan_region(const GridSpec &spec, unsigned workers = 0);

struct ThresholdResult {
    double p00;
    double lower;
    double upper;
    int iterations;
};

/// I_AB - I_BE for the Werner state with the given p00.
double werner_ck_margin(double p00);

/// Bisection for the Werner p00 where the one-way margin changes sign.
/// Requires tolerance >= 1e-10.
ThresholdResult find_werner_ck_threshold(double tolerance);

struct BoundaryRow {
    double phi;
    std::vector<double> thetas;
};

/// Per phi row, the theta values (to 1e-6) where the selected margin changes
/// sign between adjacent grid columns.
std::vector<BoundaryRow> find_boundary_curve(const GridSpec &spec, Condition condition);

/// theta, phi, five margins, mask. A leading '#' line carries provenance.
void write_grid_csv(const RegionGrid &grid, std::ostream &out, std::string_view provenance);

/// Binary P5, 0 insecure, 255 secure, 128 boundary; image row 0 is phi max.
void write_grid_pgm(const RegionGrid &grid, Condition condition, std::ostream &out, std::string_view provenance);

}  // namespace tomoqkd

#endif  // TOMOQKD_REGION_SCAN_H_
