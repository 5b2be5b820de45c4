// Copyright 2026 The qwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include "qwalk/io.hpp"
#include "qwalk/selftest.hpp"
#include "qwalk/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace qwalk::cli {

namespace {

using nlohmann::json;

/// Bad user input; maps to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunFlags {
    std::string config_file;
    std::string mode;
    int N = 0;
    int j = 1;
    double p = 0.0;
    int T = 0;
    int R = 1;
    std::uint64_t seed = 0;
    int record_every = 1;
    double initial_channel = 0.5;
    bool allow_wrap = false;
    unsigned threads = 0;
    std::string out;
    std::string format;
    std::string grid;

    std::vector<std::pair<std::string, CLI::Option *>> given;

    [[nodiscard]] bool has(const std::string &name) const {
        for (const auto &[n, opt] : given) {
            if (n == name) {
                return opt->count() > 0;
            }
        }
        return false;
    }
};

void add_run_options(CLI::App &app, RunFlags &f, bool with_grid) {
    app.add_option("--config", f.config_file, "JSON config file; flags override its values")
        ->check(CLI::ExistingFile);
    auto add = [&](const std::string &name, auto &target, const std::string &help) {
        f.given.emplace_back(name, app.add_option("--" + name, target, help));
    };
    add("mode", f.mode, "static or dynamic");
    add("N", f.N, "number of channels (even; 0 picks a size covering the light cone)");
    add("j", f.j, "jump length");
    add("p", f.p, "jump probability per transposition");
    add("T", f.T, "number of steps");
    add("R", f.R, "number of disorder realisations");
    add("seed", f.seed, "master seed");
    add("record-every", f.record_every, "record the distribution every n steps");
    add("initial-channel", f.initial_channel, "half-integer injection channel");
    add("threads", f.threads, "worker threads (default: QWALK_THREADS or all cores)");
    add("out", f.out, "output prefix");
    add("format", f.format, "csv or json");
    f.given.emplace_back("allow-wrap",
                         app.add_flag("--allow-wrap", f.allow_wrap,
                                      "permit N smaller than the light cone"));
    if (with_grid) {
        add("grid", f.grid, "JSON grid file {\"p\": [...], \"j\": [...]}");
    }
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
    }
}

template <typename T> T json_get(const json &j, const char *key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &) {
        throw ValidationError(std::string("config key '") + key + "' has the wrong type");
    }
}

void apply_config_file(const std::string &path, JobSpec &spec) {
    const json cfg = read_json_file(path);
    if (!cfg.is_object()) {
        throw ValidationError("config file must hold a JSON object");
    }
    RunConfig &c = spec.config;
    for (const auto &[key, value] : cfg.items()) {
        if (key == "mode") {
            c.disorder.mode = parse_disorder_mode(json_get<std::string>(cfg, "mode"));
        } else if (key == "N") {
            c.disorder.N = json_get<int>(cfg, "N");
        } else if (key == "j") {
            c.disorder.j = json_get<int>(cfg, "j");
        } else if (key == "p") {
            c.disorder.p = json_get<double>(cfg, "p");
        } else if (key == "T") {
            c.T = json_get<int>(cfg, "T");
        } else if (key == "R") {
            c.R = json_get<int>(cfg, "R");
        } else if (key == "seed") {
            c.seed = json_get<std::uint64_t>(cfg, "seed");
        } else if (key == "record_every") {
            c.record_every = json_get<int>(cfg, "record_every");
        } else if (key == "initial_channel") {
            c.initial_channel = json_get<double>(cfg, "initial_channel");
        } else if (key == "allow_wrap") {
            c.allow_wrap = json_get<bool>(cfg, "allow_wrap");
        } else if (key == "threads") {
            c.threads = json_get<unsigned>(cfg, "threads");
        } else if (key == "out") {
            spec.out = json_get<std::string>(cfg, "out");
        } else if (key == "format") {
            spec.format = json_get<std::string>(cfg, "format");
        } else if (key == "grid") {
            spec.grid = json_get<std::string>(cfg, "grid");
        } else {
            throw ValidationError("unknown config key '" + key + "'");
        }
    }
}

unsigned env_threads() {
    const char *v = std::getenv("QWALK_THREADS");
    if (v == nullptr || *v == '\0') {
        return 0;
    }
    try {
        const long n = std::stol(v);
        if (n < 0) {
            throw std::invalid_argument("negative");
        }
        return static_cast<unsigned>(n);
    } catch (const std::exception &) {
        throw ValidationError(std::string("QWALK_THREADS must be a non-negative integer, got '") +
                              v + "'");
    }
}

JobSpec build_spec(const std::string &command, const RunFlags &f) {
    JobSpec spec;
    spec.command = command;
    spec.config.threads = env_threads();
    if (!f.config_file.empty()) {
        apply_config_file(f.config_file, spec);
    }
    RunConfig &c = spec.config;
    if (f.has("mode")) {
        try {
            c.disorder.mode = parse_disorder_mode(f.mode);
        } catch (const std::exception &e) {
            throw ValidationError(e.what());
        }
    }
    if (f.has("N")) c.disorder.N = f.N;
    if (f.has("j")) c.disorder.j = f.j;
    if (f.has("p")) c.disorder.p = f.p;
    if (f.has("T")) c.T = f.T;
    if (f.has("R")) c.R = f.R;
    if (f.has("seed")) c.seed = f.seed;
    if (f.has("record-every")) c.record_every = f.record_every;
    if (f.has("initial-channel")) c.initial_channel = f.initial_channel;
    if (f.has("allow-wrap")) c.allow_wrap = f.allow_wrap;
    if (f.has("threads")) c.threads = f.threads;
    if (f.has("out")) spec.out = f.out;
    if (f.has("format")) spec.format = f.format;
    if (f.has("grid")) spec.grid = f.grid;
    if (spec.format != "csv" && spec.format != "json") {
        throw ValidationError("format must be csv or json, got '" + spec.format + "'");
    }
    return spec;
}

void validate_or_throw(const RunConfig &config) {
    try {
        config.validate();
    } catch (const std::invalid_argument &e) {
        throw ValidationError(e.what());
    }
}

/// Writes via a string buffer so a partially written file never masks an error.
void write_file(const std::string &path, const std::string &content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    os << content;
    os.flush();
    if (!os) {
        throw std::runtime_error("error writing '" + path + "'");
    }
}

std::string require_out(const JobSpec &spec) {
    if (spec.out.empty()) {
        throw ValidationError("--out is required");
    }
    return spec.out;
}

int cmd_simulate(const JobSpec &spec, std::ostream &out) {
    const RunConfig config = with_default_size(spec.config);
    validate_or_throw(config);
    const std::string prefix = require_out(spec);

    const DistributionSeries series = run(config);
    const auto summary = io::summarize_series(series);

    if (spec.format == "json") {
        write_file(prefix + ".json", io::simulate_json(series, summary).dump(2) + "\n");
        out << "wrote " << prefix << ".json\n";
        return kExitOk;
    }
    std::ostringstream matrix;
    io::write_matrix_csv(matrix, series);
    std::ostringstream table;
    io::write_summary_csv(table, summary);
    write_file(prefix + ".matrix.csv", matrix.str());
    write_file(prefix + ".summary.csv", table.str());
    write_file(prefix + ".meta.json", io::metadata_json(config, "simulate").dump(2) + "\n");
    out << "wrote " << prefix << ".matrix.csv, " << prefix << ".summary.csv, " << prefix
        << ".meta.json\n";
    return kExitOk;
}

SweepGrid read_grid(const std::string &path) {
    if (path.empty()) {
        throw ValidationError("--grid is required");
    }
    const json g = read_json_file(path);
    SweepGrid grid;
    try {
        grid.p = g.at("p").get<std::vector<double>>();
        grid.j = g.at("j").get<std::vector<int>>();
    } catch (const json::exception &) {
        throw ValidationError("grid file needs numeric arrays 'p' and 'j'");
    }
    if (grid.p.empty() || grid.j.empty()) {
        throw ValidationError("grid file lists no p or no j values");
    }
    return grid;
}

int cmd_sweep(const JobSpec &spec, std::ostream &out) {
    const SweepGrid grid = read_grid(spec.grid);
    const std::string prefix = require_out(spec);
    if (spec.config.T < 0 || spec.config.R < 1) {
        throw ValidationError("T must be >= 0 and R >= 1");
    }

    const SweepOptions options;
    const auto rows = sweep(grid, spec.config, options);
    const long failed = std::count_if(rows.begin(), rows.end(), [](const auto &r) { return !r.ok; });

    if (spec.format == "json") {
        write_file(prefix + ".json", io::sweep_json(spec.config, grid, options, rows).dump(2) + "\n");
        out << "wrote " << prefix << ".json";
    } else {
        std::ostringstream table;
        io::write_sweep_csv(table, rows);
        write_file(prefix + ".sweep.csv", table.str());
        write_file(prefix + ".meta.json",
                   io::sweep_json(spec.config, grid, options, {})["metadata"].dump(2) + "\n");
        out << "wrote " << prefix << ".sweep.csv, " << prefix << ".meta.json";
    }
    out << " (" << rows.size() << " rows, " << failed << " failed)\n";
    return kExitOk;
}

int cmd_stats(const std::string &input, double initial_channel, const JobSpec &spec,
              std::ostream &out) {
    std::ifstream in(input);
    if (!in) {
        throw ValidationError("cannot open '" + input + "'");
    }
    io::Matrix m;
    try {
        m = io::read_matrix_csv(in);
    } catch (const std::exception &e) {
        throw ValidationError(input + ": " + e.what());
    }
    std::vector<io::SummaryRow> rows;
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        const auto &d = m.rows[i];
        try {
            rows.push_back({m.times[i], stats::position_variance(d),
                            stats::second_moment_about(d, initial_channel),
                            stats::shannon_entropy(d), stats::tsallis_entropy(d, 2.0)});
        } catch (const std::invalid_argument &e) {
            throw ValidationError(input + ", t=" + std::to_string(m.times[i]) + ": " + e.what());
        }
    }

    std::string text;
    if (spec.format == "json") {
        json arr = json::array();
        for (const auto &r : rows) {
            arr.push_back({{"t", r.t},
                           {"variance", r.variance},
                           {"second_moment_injection", r.second_moment_injection},
                           {"shannon", r.shannon},
                           {"tsallis2", r.tsallis2}});
        }
        text = json{{"input", input}, {"summary", arr}}.dump(2) + "\n";
    } else {
        std::ostringstream os;
        io::write_summary_csv(os, rows);
        text = os.str();
    }
    if (spec.out.empty()) {
        out << text;
    } else {
        const std::string path = spec.out + (spec.format == "json" ? ".stats.json" : ".stats.csv");
        write_file(path, text);
        out << "wrote " << path << "\n";
    }
    return kExitOk;
}

int cmd_selftest(std::uint64_t seed, double coin_defect, std::ostream &out) {
    SelftestOptions options;
    options.seed = seed;
    options.coin.m[0] += coin_defect;
    const SelftestReport report = run_selftest(options);
    for (const auto &c : report.checks) {
        out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
    }
    const bool ok = report.all_passed();
    out << (ok ? "selftest passed" : "selftest FAILED") << "\n";
    return ok ? kExitOk : kExitFailure;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Disordered quantum walk simulator", "qwalk"};
    app.set_version_flag("--version", io::library_version());
    app.require_subcommand(1, 1);

    RunFlags sim_flags;
    auto *simulate = app.add_subcommand("simulate", "Run one configuration, write matrix and summary");
    add_run_options(*simulate, sim_flags, false);

    RunFlags sweep_flags;
    auto *sweep_cmd = app.add_subcommand("sweep", "Summarise the final distribution over a (p, j) grid");
    add_run_options(*sweep_cmd, sweep_flags, true);

    std::string stats_input;
    std::string stats_out;
    std::string stats_format = "csv";
    double stats_channel = 0.5;
    auto *stats_cmd = app.add_subcommand("stats", "Per-time observables of a matrix CSV");
    stats_cmd->add_option("--input", stats_input, "matrix CSV written by simulate")->required();
    stats_cmd->add_option("--initial-channel", stats_channel, "injection channel");
    stats_cmd->add_option("--out", stats_out, "output prefix (default: stdout)");
    stats_cmd->add_option("--format", stats_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    std::uint64_t selftest_seed = SelftestOptions{}.seed;
    double coin_defect = 0.0;
    auto *selftest = app.add_subcommand("selftest", "Fast invariant checks");
    selftest->add_option("--seed", selftest_seed, "seed for the randomised checks");
    // Fault-injection hook: perturbs the coin's top-left entry.
    selftest->add_option("--coin-defect", coin_defect)->group("");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(build_spec("simulate", sim_flags), out);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(build_spec("sweep", sweep_flags), out);
        }
        if (stats_cmd->parsed()) {
            JobSpec spec;
            spec.command = "stats";
            spec.out = stats_out;
            spec.format = stats_format;
            return cmd_stats(stats_input, stats_channel, spec, out);
        }
        return cmd_selftest(selftest_seed, coin_defect, out);
    } catch (const ValidationError &e) {
        err << "qwalk: invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument &e) {
        err << "qwalk: invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception &e) {
        err << "qwalk: error: " << e.what() << "\n";
        return kExitFailure;
    }
}

int run_cli(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

} // namespace qwalk::cli
