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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "tomoqkd/errors.h"

namespace tomoqkd {

namespace {

using nlohmann::json;

double number_field(const json &j, const char *key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ValidationError(std::string("state field '") + key + "' must be a number");
    }
    return j[key].get<double>();
}

void dump_into(const json &j, std::string &out, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent >= 0) {
            out += '\n';
            out.append(static_cast<size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ',';
                }
                first = false;
                newline(depth + 1);
                out += json(it.key()).dump();
                out += indent >= 0 ? ": " : ":";
                dump_into(it.value(), out, indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto &v : j) {
                if (!first) {
                    out += indent >= 0 ? ", " : ",";
                }
                first = false;
                dump_into(v, out, indent, depth + 1);
            }
            out += ']';
            return;
        }
        case json::value_t::number_float: {
            double x = j.get<double>();
            if (!std::isfinite(x)) {
                out += "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", x);
            out += buf;
            return;
        }
        default:
            out += j.dump();
    }
}

json interval_to_json(const Interval &i) {
    return {{"estimate", i.estimate}, {"lower", i.lower}, {"upper", i.upper}};
}

json rates_to_json(const std::optional<ErrorRateSummary> &s) {
    if (!s) {
        return nullptr;
    }
    return {{"E_AB", interval_to_json(s->e_ab)}, {"E_BE", interval_to_json(s->e_be)}, {"ratio", interval_to_json(s->ratio)}};
}

json eve_to_json(const EveStatistics &e) {
    return {{"blocks", e.blocks},
            {"errors", e.errors},
            {"blocks_case_I", e.blocks_by_case[0]},
            {"blocks_case_II", e.blocks_by_case[1]},
            {"errors_case_I", e.errors_by_case[0]},
            {"errors_case_II", e.errors_by_case[1]},
            {"E_BE", e.e_be},
            {"expected_E_BE", e.expected_e_be},
            {"expected_std_err", e.expected_std_err}};
}

json per_basis(const std::array<double, 3> &v) {
    return {{"x", v[0]}, {"y", v[1]}, {"z", v[2]}};
}

}  // namespace

BellDiagonalState state_from_json(const json &j) {
    if (!j.is_object()) {
        throw ValidationError("state must be a JSON object");
    }
    if (j.contains("p")) {
        const json &p = j["p"];
        if (!p.is_array() || p.size() != 4) {
            throw ValidationError("state field 'p' must be an array of four numbers");
        }
        std::array<double, 4> probs{};
        for (size_t i = 0; i < 4; i++) {
            if (!p[i].is_number()) {
                throw ValidationError("state field 'p' must be an array of four numbers");
            }
            probs[i] = p[i].get<double>();
        }
        // Four-digit inputs such as [0.8, 0.0667, 0.0667, 0.0667] are
        // normalized rather than rejected.
        double sum = probs[0] + probs[1] + probs[2] + probs[3];
        if (sum > 0.0 && std::abs(sum - 1.0) <= 1e-3) {
            for (double &x : probs) {
                x /= sum;
            }
        }
        return BellDiagonalState::from_probabilities(probs);
    }
    if (j.contains("p00") && (j.contains("theta") || j.contains("phi"))) {
        return from_angles({number_field(j, "p00"), number_field(j, "theta"), number_field(j, "phi")});
    }
    throw ValidationError(R"(state must be {"p": [p00, p01, p10, p11]} or {"p00": x, "theta": t, "phi": f})");
}

BellDiagonalState parse_state_spec(std::string_view spec) {
    std::string text;
    size_t first = spec.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && spec[first] == '{') {
        text = std::string(spec);
    } else {
        std::ifstream in{std::string(spec)};
        if (!in) {
            throw ValidationError("cannot open state file '" + std::string(spec) + "'");
        }
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ValidationError(std::string("malformed state JSON: ") + e.what());
    }
    return state_from_json(j);
}

json state_to_json(const BellDiagonalState &state) {
    const auto &p = state.probabilities();
    return {{"p", {p[0], p[1], p[2], p[3]}}};
}

json report_to_json(const SecurityReport &r) {
    const auto &p = r.state.probabilities();
    json j;
    j["p"] = {p[0], p[1], p[2], p[3]};
    j["protocol_mode"] = r.protocol_mode;
    j["I_AB"] = r.i_ab;
    j["I_BE"] = r.i_be;
    j["I_BE_per_basis"] = {r.i_be_per_basis[0], r.i_be_per_basis[1], r.i_be_per_basis[2]};
    j["ck_secure"] = r.ck.secure;
    j["ck_margin"] = r.ck.margin;
    j["ad_incoherent_secure"] = r.ad_incoherent.secure;
    j["ad_incoherent_margin"] = r.ad_incoherent.margin;
    j["ad_coherent_secure"] = r.ad_coherent.secure;
    j["ad_coherent_margin"] = r.ad_coherent.margin;
    j["distillable"] = r.distillable.distillable;
    j["distillable_margin"] = r.distillable.margin;
    j["boundary_flags"] = boundary_flag_names(r.boundary_flags);
    return j;
}

json tomography_to_json(const TomographyEstimate &t) {
    json counts = json::array();
    for (int a = 0; a < 3; a++) {
        for (int b = 0; b < 3; b++) {
            counts.push_back({{"basis_a", basis_name(static_cast<Basis>(a))},
                              {"basis_b", basis_name(static_cast<Basis>(b))},
                              {"counts", t.counts[a][b]}});
        }
    }
    return {{"p_hat", t.p_hat},
            {"p_linear", t.p_linear},
            {"std_err", t.std_err},
            {"agreement", per_basis(t.agreement)},
            {"matched_pairs", {{"x", t.matched_pairs[0]}, {"y", t.matched_pairs[1]}, {"z", t.matched_pairs[2]}}},
            {"uniformity_chi2", t.uniformity_chi2},
            {"uniformity_dof", t.uniformity_dof},
            {"uniformity_threshold", t.uniformity_threshold},
            {"simplex_projected", t.simplex_projected},
            {"non_bell_diagonal", t.non_bell_diagonal},
            {"counts", counts}};
}

json simulation_to_json(const SimulationRun &run) {
    const SimConfig &c = run.config;
    json config = {{"state", state_to_json(c.state)},
                   {"pairs", c.n_pairs},
                   {"block_length", c.block_length},
                   {"seed", c.seed},
                   {"basis_policy", basis_policy_name(c.basis_policy)},
                   {"paper_faithful", c.paper_faithful},
                   {"shuffle_blocks", c.shuffle_blocks}};
    const ADOutcome &ad = run.distillation;
    const DistillationOracle &o = run.distillation_expected;
    json distillation = {{"blocks_total", ad.blocks_total},
                         {"blocks_accepted", ad.blocks_accepted},
                         {"errors", ad.errors},
                         {"E_AB", ad.e_ab},
                         {"expected_accepted", o.expected_accepted},
                         {"accepted_std_err", o.accepted_std_err},
                         {"expected_E_AB", o.expected_e_ab},
                         {"expected_E_AB_std_err", o.e_ab_std_err}};
    json verdicts_agree = {
        {"ck", run.estimated_report.ck.secure == run.true_report.ck.secure},
        {"ad_incoherent", run.estimated_report.ad_incoherent.secure == run.true_report.ad_incoherent.secure},
        {"ad_coherent", run.estimated_report.ad_coherent.secure == run.true_report.ad_coherent.secure},
        {"distillable", run.estimated_report.distillable.distillable == run.true_report.distillable.distillable}};
    return {{"config", config},
            {"matched_pairs", run.matched_pairs},
            {"raw_key_bits", {{"x", run.raw_key_bits[0]}, {"y", run.raw_key_bits[1]}, {"z", run.raw_key_bits[2]}}},
            {"raw_agreement", per_basis(run.raw_agreement)},
            {"tomography", tomography_to_json(run.tomography)},
            {"estimated_report", report_to_json(run.estimated_report)},
            {"true_report", report_to_json(run.true_report)},
            {"verdicts_agree", verdicts_agree},
            {"distillation", distillation},
            {"eve_incoherent", eve_to_json(run.eve_incoherent)},
            {"eve_coherent", eve_to_json(run.eve_coherent)},
            {"rates_incoherent", rates_to_json(run.incoherent_rates)},
            {"rates_coherent", rates_to_json(run.coherent_rates)}};
}

std::string dump_json(const json &j, int indent) {
    std::string out;
    dump_into(j, out, indent, 0);
    return out;
}

std::string git_blob_hash(std::string_view content) {
    std::string header = "blob " + std::to_string(content.size());
    header.push_back('\0');
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX *ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
    EVP_DigestUpdate(ctx, header.data(), header.size());
    EVP_DigestUpdate(ctx, content.data(), content.size());
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; i++) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

}  // namespace tomoqkd
