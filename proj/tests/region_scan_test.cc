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

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "tomoqkd/errors.h"
#include "tomoqkd/rng.h"

using namespace tomoqkd;

namespace {

constexpr double kPi2 = std::numbers::pi / 2;

GridSpec grid(double p00, int n_theta, int n_phi) {
    GridSpec s;
    s.p00 = p00;
    s.n_theta = n_theta;
    s.n_phi = n_phi;
    return s;
}

}  // namespace

TEST(GridSpec, Validation) {
    EXPECT_THROW(grid(0.45, 8, 8).validate(), ValidationError);
    GridSpec analysis = grid(0.45, 8, 8);
    analysis.analysis_mode = true;
    EXPECT_NO_THROW(analysis.validate());
    EXPECT_THROW(grid(0.7, 1, 8).validate(), ValidationError);
    GridSpec bad = grid(0.7, 8, 8);
    bad.theta_max = 2.0;
    EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(GridSpec, InclusiveEndpoints) {
    GridSpec s = grid(0.7, 5, 3);
    EXPECT_EQ(s.theta(0), 0.0);
    EXPECT_EQ(s.theta(4), kPi2);
    EXPECT_EQ(s.phi(2), kPi2);
    EXPECT_NEAR(s.phi(1), kPi2 / 2, 1e-15);
}

TEST(Scan, HighFidelityIsEverywhereSecure) {
    RegionGrid g = scan_region(grid(0.9, 32, 32));
    EXPECT_EQ(g.fraction(kCellCk), 1.0);
    EXPECT_EQ(g.fraction(kCellAdCoherent), 1.0);
}

TEST(Scan, ResistantCornersAndWernerInterior) {
    GridSpec s = grid(0.6, 65, 65);
    for (auto [theta, phi] : {std::pair{0.0, 0.0}, std::pair{kPi2, 0.0}, std::pair{0.7, kPi2}}) {
        Cell c = classify_cell(s, theta, phi);
        EXPECT_TRUE(c.has(kCellCk)) << theta << "," << phi;
        EXPECT_TRUE(c.has(kCellAdCoherent)) << theta << "," << phi;
    }
    Cell werner = classify_cell(s, std::numbers::pi / 4, std::asin(std::sqrt(1.0 / 3)));
    EXPECT_FALSE(werner.has(kCellCk));
    EXPECT_TRUE(werner.has(kCellWernerProximal));
    EXPECT_FALSE(classify_cell(s, 0.0, 0.0).has(kCellWernerProximal));
}

TEST(Scan, CoherentRegionGrowsWithFidelity) {
    double f51 = scan_region(grid(0.51, 64, 64)).fraction(kCellAdCoherent);
    double f60 = scan_region(grid(0.6, 64, 64)).fraction(kCellAdCoherent);
    EXPECT_LT(f51, f60);
}

TEST(Scan, SymmetryAndNesting) {
    GridSpec s = grid(0.58, 41, 23);
    RegionGrid g = scan_region(s);
    for (int j = 0; j < s.n_phi; j++) {
        for (int i = 0; i < s.n_theta; i++) {
            const Cell &a = g.at(i, j);
            const Cell &b = g.at(s.n_theta - 1 - i, j);
            for (int k = 0; k < 4; k++) {
                ASSERT_NEAR(a.margins[k], b.margins[k], 1e-12);
            }
            ASSERT_EQ(a.mask & 0xF, b.mask & 0xF);
            if (a.has(kCellAdCoherent) || a.has(kCellCk)) {
                ASSERT_TRUE(a.has(kCellAdIncoherent));
            }
        }
    }
}

TEST(Scan, CkMarginNondecreasingInFidelity) {
    CounterRng rng(31, 0);
    int violations = 0;
    for (int cell = 0; cell < 1000; cell++) {
        double theta = rng.uniform() * kPi2;
        double phi = rng.uniform() * kPi2;
        double prev = -INFINITY;
        for (double p00 : {0.55, 0.65, 0.75, 0.85, 0.95}) {
            double m = classify_cell(grid(p00, 2, 2), theta, phi).margin(Condition::Ck);
            violations += m < prev - 1e-12;
            prev = m;
        }
    }
    EXPECT_EQ(violations, 0);
}

TEST(Scan, WorkerCountDoesNotChangeOutput) {
    GridSpec s = grid(0.62, 37, 29);
    RegionGrid a = scan_region(s, 1);
    RegionGrid b = scan_region(s, 5);
    std::ostringstream ca, cb;
    write_grid_csv(a, ca, "x");
    write_grid_csv(b, cb, "x");
    EXPECT_EQ(ca.str(), cb.str());
}

TEST(Threshold, Bracket) {
    ThresholdResult t = find_werner_ck_threshold(1e-4);
    EXPECT_GE(t.p00, 0.760);
    EXPECT_LE(t.p00, 0.770);
    EXPECT_LE(t.upper - t.lower, 1e-4);
    EXPECT_GT(werner_ck_margin(0.9), 0);
    EXPECT_LT(werner_ck_margin(0.6), 0);
    EXPECT_THROW(find_werner_ck_threshold(1e-11), ValidationError);
}

TEST(Boundary, Curves) {
    for (const BoundaryRow &row : find_boundary_curve(grid(0.9, 33, 9), Condition::Ck)) {
        EXPECT_TRUE(row.thetas.empty());
    }
    for (const BoundaryRow &row : find_boundary_curve(grid(0.7, 33, 9), Condition::AdIncoherent)) {
        EXPECT_TRUE(row.thetas.empty());
    }
    auto rows = find_boundary_curve(grid(0.6, 65, 5), Condition::Ck);
    ASSERT_EQ(rows[0].phi, 0.0);
    ASSERT_FALSE(rows[0].thetas.empty());
    GridSpec s = grid(0.6, 65, 5);
    for (double t : rows[0].thetas) {
        EXPECT_GT(t, 0.0);
        EXPECT_LT(t, kPi2);
        EXPECT_NEAR(classify_cell(s, t, 0.0).margin(Condition::Ck), 0.0, 1e-5);
    }
}

TEST(Conditions, Names) {
    for (Condition c : {Condition::Ck, Condition::AdIncoherent, Condition::AdCoherent}) {
        EXPECT_EQ(parse_condition(condition_name(c)), c);
    }
    EXPECT_THROW(parse_condition("qed"), ValidationError);
}

TEST(Writers, CsvShape) {
    RegionGrid g = scan_region(grid(0.6, 8, 4));
    std::ostringstream out;
    write_grid_csv(g, out, "tomoqkd test input abc");
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# tomoqkd test input abc");
    std::getline(in, line);
    EXPECT_EQ(line, "theta,phi,margin_ck,margin_ad_incoherent,margin_ad_coherent,margin_distillable,margin_werner,mask");
    int rows = 0;
    while (std::getline(in, line)) {
        rows++;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
    }
    EXPECT_EQ(rows, 32);
}

TEST(Writers, PgmLayout) {
    GridSpec s = grid(0.6, 6, 4);
    RegionGrid g = scan_region(s);
    std::ostringstream out;
    write_grid_pgm(g, Condition::Ck, out, "prov");
    std::string data = out.str();
    ASSERT_EQ(data.rfind("P5\n", 0), 0u);
    std::string header_end = "6 4\n255\n";
    size_t pos = data.find(header_end);
    ASSERT_NE(pos, std::string::npos);
    std::string pixels = data.substr(pos + header_end.size());
    ASSERT_EQ(pixels.size(), 24u);
    // Top row is phi max (the p11 corner, secure); bottom-left is theta=phi=0.
    for (int i = 0; i < 6; i++) {
        unsigned char top = pixels[i];
        EXPECT_EQ(top, g.at(i, 3).has(kCellCk) ? 255 : 0);
    }
    EXPECT_EQ(static_cast<unsigned char>(pixels[18]), 255);
}
