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

#include "tomoqkd/json_io.h"

#include <gtest/gtest.h>

#include "tomoqkd/errors.h"

using namespace tomoqkd;
using nlohmann::json;

TEST(StateJson, ProbabilityForm) {
    BellDiagonalState s = state_from_json(json::parse(R"({"p":[0.7,0.1,0.15,0.05]})"));
    EXPECT_DOUBLE_EQ(s.p10(), 0.15);
    // Rounded input is renormalized.
    BellDiagonalState r = state_from_json(json::parse(R"({"p":[0.8,0.0667,0.0667,0.0667]})"));
    EXPECT_NEAR(r.p00() + r.p01() + r.p10() + r.p11(), 1.0, 1e-15);
    EXPECT_NEAR(r.p00(), 0.8 / 1.0001, 1e-15);
}

TEST(StateJson, AngleForm) {
    BellDiagonalState s = state_from_json(json::parse(R"({"p00":0.8,"theta":0,"phi":0})"));
    EXPECT_NEAR(s.p01(), 0.2, 1e-15);
}

TEST(StateJson, Rejects) {
    for (const char *bad : {R"({"p":[0.5,0.5]})", R"({"p":[0.9,0.3,0,0]})", R"({"p":[1.2,-0.2,0,0]})",
                            R"({"p00":0.8})", R"({"q":1})", R"([1,0,0,0])", R"({"p":["a",0,0,0]})"}) {
        EXPECT_THROW(state_from_json(json::parse(bad)), ValidationError) << bad;
    }
    EXPECT_THROW(parse_state_spec("{not json"), ValidationError);
    EXPECT_THROW(parse_state_spec("/nonexistent/state.json"), ValidationError);
}

TEST(StateJson, RoundTrip) {
    BellDiagonalState s = BellDiagonalState::from_probabilities(0.55, 0.05, 0.3, 0.1);
    EXPECT_EQ(state_from_json(json::parse(dump_json(state_to_json(s)))), s);
}

TEST(Dump, SeventeenDigits) {
    json j = {{"x", 0.1}, {"n", 3}, {"nan", NAN}};
    EXPECT_EQ(dump_json(j, -1), R"({"n":3,"nan":null,"x":0.10000000000000001})");
}

TEST(Report, Fields) {
    json j = report_to_json(classify_state(BellDiagonalState::werner(0.8)));
    for (const char *k : {"p", "protocol_mode", "I_AB", "I_BE", "I_BE_per_basis", "ck_secure", "ck_margin",
                          "ad_incoherent_secure", "ad_incoherent_margin", "ad_coherent_secure", "ad_coherent_margin",
                          "distillable", "distillable_margin", "boundary_flags"}) {
        EXPECT_TRUE(j.contains(k)) << k;
    }
    EXPECT_TRUE(j["ck_secure"].get<bool>());
}

TEST(Hash, GitBlobIds) {
    EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}
