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

#include "tomoqkd/cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tomoqkd/errors.h"
#include "tomoqkd/json_io.h"
#include "tomoqkd/protocol_sim.h"
#include "tomoqkd/region_scan.h"
#include "tomoqkd/selftest.h"

namespace tomoqkd {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct StateOptions {
    std::string state;
    std::optional<double> p00;
    std::optional<double> theta;
    std::optional<double> phi;
    bool analysis_mode = false;

    void attach(CLI::App *app) {
        app->add_option("--state", state, "State as inline JSON or a path to a JSON file");
        app->add_option("--p00", p00, "Weight of the ideal Bell state");
        app->add_option("--theta", theta, "Angle theta in radians");
        app->add_option("--phi", phi, "Angle phi in radians");
        app->add_flag("--analysis-mode", analysis_mode, "Allow states with p00 <= 1/2");
    }

    bool given() const {
        return !state.empty() || p00.has_value();
    }

    BellDiagonalState resolve() const {
        if (!state.empty() && (p00 || theta || phi)) {
            throw ValidationError("give either --state or --p00/--theta/--phi, not both");
        }
        std::optional<BellDiagonalState> s;
        if (!state.empty()) {
            s = parse_state_spec(state);
        } else if (p00) {
            s = from_angles({*p00, theta.value_or(0.0), phi.value_or(0.0)});
        } else {
            throw ValidationError("a state is required (--state or --p00/--theta/--phi)");
        }
        require_mode(*s);
        return *s;
    }

    void require_mode(const BellDiagonalState &s) const {
        if (!analysis_mode && !s.protocol_mode()) {
            throw ValidationError("state has p00 <= 1/2, outside the protocol domain; pass --analysis-mode to allow it");
        }
    }
};

std::pair<int, int> parse_grid(const std::string &text) {
    int n = 0;
    int m = 0;
    char x = 0;
    std::istringstream in(text);
    if (!(in >> n >> x >> m) || (x != 'x' && x != 'X') || !in.eof() || n < 2 || m < 2) {
        throw ValidationError("--grid must look like NxM with N, M >= 2");
    }
    return {n, m};
}

void write_file(const fs::path &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ValidationError("cannot write '" + path.string() + "'");
    }
    f << content;
}

std::string provenance_line(const json &inputs) {
    return "tomoqkd " + std::string(kToolVersion) + " input " + git_blob_hash(dump_json(inputs, -1));
}

int cmd_analyze(const StateOptions &opts, std::ostream &out) {
    BellDiagonalState state = opts.resolve();
    out << dump_json(report_to_json(classify_state(state))) << "\n";
    return kExitOk;
}

struct SimulateOptions {
    StateOptions state;
    std::string config_path;
    std::optional<uint64_t> pairs;
    std::optional<int> block_length;
    std::optional<uint64_t> seed;
    std::string basis_policy;
    bool paper_faithful = false;
    bool shuffle = false;
    bool raw_log = false;
    std::string out_dir;
    unsigned workers = 0;
};

SimConfig build_sim_config(const SimulateOptions &o, bool &raw_log) {
    SimConfig c;
    raw_log = o.raw_log;
    json file;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) {
            throw ValidationError("cannot open config '" + o.config_path + "'");
        }
        try {
            file = json::parse(in);
        } catch (const json::parse_error &e) {
            throw ValidationError(std::string("malformed config JSON: ") + e.what());
        }
        if (!file.is_object()) {
            throw ValidationError("config must be a JSON object");
        }
    }
    auto get = [&](const char *key) -> const json * { return file.contains(key) ? &file[key] : nullptr; };

    if (o.state.given()) {
        c.state = o.state.resolve();
    } else if (const json *s = get("state")) {
        c.state = state_from_json(*s);
        o.state.require_mode(c.state);
    } else {
        throw ValidationError("simulate needs a state (--state, --p00 or a config 'state' entry)");
    }

    try {
        if (o.pairs) {
            c.n_pairs = *o.pairs;
        } else if (const json *v = get("pairs")) {
            c.n_pairs = v->get<uint64_t>();
        } else {
            throw ValidationError("simulate needs --pairs");
        }
        if (o.block_length) {
            c.block_length = *o.block_length;
        } else if (const json *v = get("block_length")) {
            c.block_length = v->get<int>();
        } else {
            throw ValidationError("simulate needs --block-length");
        }
        if (o.seed) {
            c.seed = *o.seed;
        } else if (const json *v = get("seed")) {
            c.seed = v->get<uint64_t>();
        } else {
            throw ValidationError("simulate needs an explicit --seed");
        }
        if (!o.basis_policy.empty()) {
            c.basis_policy = parse_basis_policy(o.basis_policy);
        } else if (const json *v = get("basis_policy")) {
            c.basis_policy = parse_basis_policy(v->get<std::string>());
        }
        c.paper_faithful = o.paper_faithful || (get("paper_faithful") && get("paper_faithful")->get<bool>());
        c.shuffle_blocks = o.shuffle || (get("shuffle_blocks") && get("shuffle_blocks")->get<bool>());
        raw_log = raw_log || (get("raw_log") && get("raw_log")->get<bool>());
    } catch (const json::exception &e) {
        throw ValidationError(std::string("bad config value: ") + e.what());
    }
    c.validate();
    return c;
}

int cmd_simulate(const SimulateOptions &o, std::ostream &out) {
    bool raw_log = false;
    SimConfig config = build_sim_config(o, raw_log);
    SimulationRun run = run_simulation(config, raw_log, o.workers);
    json manifest = simulation_to_json(run);
    manifest["tool"] = "tomoqkd " + std::string(kToolVersion);
    manifest["input_hash"] = git_blob_hash(dump_json(manifest["config"], -1));
    std::string text = dump_json(manifest) + "\n";
    if (o.out_dir.empty()) {
        out << text;
        return kExitOk;
    }
    fs::create_directories(o.out_dir);
    write_file(fs::path(o.out_dir) / "manifest.json", text);
    if (raw_log) {
        std::ofstream f(fs::path(o.out_dir) / "pairs.csv");
        f << "# " << manifest["tool"].get<std::string>() << " input " << manifest["input_hash"].get<std::string>()
          << "\n";
        f << "pair,basis_a,basis_b,bit_a,bit_b,matched\n";
        for (size_t i = 0; i < run.records.size(); i++) {
            const PairRecord &r = run.records[i];
            f << i << ',' << basis_name(r.basis_a) << ',' << basis_name(r.basis_b) << ',' << int(r.bit_a) << ','
              << int(r.bit_b) << ',' << int(r.matched) << '\n';
        }
    }
    out << (fs::path(o.out_dir) / "manifest.json").string() << "\n";
    return kExitOk;
}

struct ScanOptions {
    double p00 = 0;
    std::string grid = "256x256";
    std::string out_dir;
    std::vector<std::string> formats;
    bool analysis_mode = false;
    double werner_radius = 0.02;
    bool boundary = false;
    unsigned workers = 0;
};

int cmd_scan(const ScanOptions &o, std::ostream &out) {
    GridSpec spec;
    spec.p00 = o.p00;
    std::tie(spec.n_theta, spec.n_phi) = parse_grid(o.grid);
    spec.analysis_mode = o.analysis_mode;
    spec.werner_radius = o.werner_radius;
    spec.validate();

    std::set<std::string> formats(o.formats.begin(), o.formats.end());
    if (formats.empty()) {
        formats = {"csv", "pgm"};
    }
    json inputs = {{"p00", spec.p00},
                   {"n_theta", spec.n_theta},
                   {"n_phi", spec.n_phi},
                   {"werner_radius", spec.werner_radius},
                   {"analysis_mode", spec.analysis_mode}};
    std::string provenance = provenance_line(inputs);

    RegionGrid grid = scan_region(spec, o.workers);
    fs::path dir(o.out_dir);
    fs::create_directories(dir);
    std::vector<std::string> written;
    if (formats.count("csv")) {
        std::ofstream f(dir / "grid.csv");
        write_grid_csv(grid, f, provenance);
        written.push_back((dir / "grid.csv").string());
    }
    if (formats.count("pgm")) {
        for (Condition c : {Condition::Ck, Condition::AdIncoherent, Condition::AdCoherent}) {
            fs::path p = dir / (std::string(condition_name(c)) + ".pgm");
            std::ofstream f(p, std::ios::binary);
            write_grid_pgm(grid, c, f, provenance);
            written.push_back(p.string());
        }
    }
    if (formats.count("json")) {
        json cells = json::array();
        for (const Cell &c : grid.cells) {
            cells.push_back({c.theta, c.phi, c.margins[0], c.margins[1], c.margins[2], c.margins[3], c.margins[4],
                             c.mask});
        }
        json doc = {{"tool", "tomoqkd " + std::string(kToolVersion)},
                    {"input_hash", git_blob_hash(dump_json(inputs, -1))},
                    {"inputs", inputs},
                    {"columns",
                     {"theta", "phi", "margin_ck", "margin_ad_incoherent", "margin_ad_coherent", "margin_distillable",
                      "margin_werner", "mask"}},
                    {"cells", cells}};
        write_file(dir / "grid.json", dump_json(doc, -1) + "\n");
        written.push_back((dir / "grid.json").string());
    }
    if (o.boundary) {
        json curves;
        for (Condition c : {Condition::Ck, Condition::AdIncoherent, Condition::AdCoherent}) {
            json rows = json::array();
            for (const BoundaryRow &row : find_boundary_curve(spec, c)) {
                rows.push_back({{"phi", row.phi}, {"thetas", row.thetas}});
            }
            curves[std::string(condition_name(c))] = rows;
        }
        curves["tool"] = "tomoqkd " + std::string(kToolVersion);
        curves["input_hash"] = git_blob_hash(dump_json(inputs, -1));
        write_file(dir / "boundary.json", dump_json(curves) + "\n");
        written.push_back((dir / "boundary.json").string());
    }
    json summary = {{"cells", grid.cells.size()},
                    {"fraction_ck", grid.fraction(kCellCk)},
                    {"fraction_ad_incoherent", grid.fraction(kCellAdIncoherent)},
                    {"fraction_ad_coherent", grid.fraction(kCellAdCoherent)},
                    {"fraction_distillable", grid.fraction(kCellDistillable)},
                    {"files", written}};
    out << dump_json(summary) << "\n";
    return kExitOk;
}

int cmd_threshold(double tolerance, const std::string &format, std::ostream &out) {
    ThresholdResult r = find_werner_ck_threshold(tolerance);
    if (format == "json") {
        json j = {{"p00", r.p00}, {"lower", r.lower}, {"upper", r.upper}, {"iterations", r.iterations}};
        out << dump_json(j) << "\n";
    } else {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "werner_ck_threshold %.10f bracket [%.10f, %.10f]\n", r.p00, r.lower,
                      r.upper);
        out << buf;
    }
    return kExitOk;
}

int cmd_selftest(uint64_t seed, std::ostream &out) {
    bool ok = true;
    for (const SelfTestResult &r : run_selftests(seed)) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (!r.detail.empty()) {
            out << " (" << r.detail << ")";
        }
        out << "\n";
        ok = ok && r.passed;
    }
    return ok ? kExitOk : kExitInternal;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Tomographic QKD with Bell-diagonal states: security analysis, simulation and region scans",
                 "tomoqkd"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    StateOptions analyze_opts;
    CLI::App *analyze = app.add_subcommand("analyze", "Print the security report of one state as JSON");
    analyze_opts.attach(analyze);
    std::string analyze_format = "json";
    analyze->add_option("--format", analyze_format, "Output format")->check(CLI::IsMember({"json"}));

    SimulateOptions sim_opts;
    CLI::App *simulate = app.add_subcommand("simulate", "Monte Carlo run of the full protocol");
    sim_opts.state.attach(simulate);
    simulate->add_option("--config", sim_opts.config_path, "JSON run configuration");
    simulate->add_option("--pairs", sim_opts.pairs, "Number of distributed pairs");
    simulate->add_option("--block-length", sim_opts.block_length, "Advantage-distillation block length L");
    simulate->add_option("--seed", sim_opts.seed, "RNG seed (required)");
    simulate->add_option("--basis-policy", sim_opts.basis_policy, "uniform-random or round-robin");
    simulate->add_flag("--paper-faithful", sim_opts.paper_faithful, "Balanced L/3 per-basis blocks");
    simulate->add_flag("--shuffle", sim_opts.shuffle, "Seeded shuffle of the sifted key before blocking");
    simulate->add_flag("--raw-log", sim_opts.raw_log, "Write the per-pair CSV log");
    simulate->add_option("--out", sim_opts.out_dir, "Output directory");
    simulate->add_option("--workers", sim_opts.workers, "Worker threads (0 = all cores)");
    std::string sim_format = "json";
    simulate->add_option("--format", sim_format, "Manifest format")->check(CLI::IsMember({"json"}));

    ScanOptions scan_opts;
    CLI::App *scan = app.add_subcommand("scan", "Classify a (theta, phi) grid at fixed p00");
    scan->add_option("--p00", scan_opts.p00, "Weight of the ideal Bell state")->required();
    scan->add_option("--grid", scan_opts.grid, "Grid size NxM (theta x phi)");
    scan->add_option("--out", scan_opts.out_dir, "Output directory")->required();
    scan->add_option("--format", scan_opts.formats, "csv, json or pgm (repeatable)")
        ->check(CLI::IsMember({"csv", "json", "pgm"}));
    scan->add_flag("--analysis-mode", scan_opts.analysis_mode, "Allow p00 <= 1/2");
    scan->add_option("--werner-radius", scan_opts.werner_radius, "Max-norm radius of the Werner band");
    scan->add_flag("--boundary", scan_opts.boundary, "Also locate the secure/insecure frontier per phi row");
    scan->add_option("--workers", scan_opts.workers, "Worker threads (0 = all cores)");

    double tolerance = 1e-4;
    std::string threshold_format = "text";
    CLI::App *threshold = app.add_subcommand("threshold", "Werner p00 where the one-way regime ends");
    threshold->add_option("--tolerance", tolerance, "Bisection tolerance (>= 1e-10)");
    threshold->add_option("--format", threshold_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    uint64_t selftest_seed = 20240601;
    CLI::App *selftest = app.add_subcommand("selftest", "Run the invariant suites of every module");
    selftest->add_option("--seed", selftest_seed, "Seed for the randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*analyze) {
            return cmd_analyze(analyze_opts, out);
        }
        if (*simulate) {
            return cmd_simulate(sim_opts, out);
        }
        if (*scan) {
            return cmd_scan(scan_opts, out);
        }
        if (*threshold) {
            return cmd_threshold(tolerance, threshold_format, out);
        }
        if (*selftest) {
            return cmd_selftest(selftest_seed, out);
        }
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const InvariantError &e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitValidation;
}

}  // namespace tomoqkd
