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

#include "qwalk/io.hpp"

#include "qwalk/stats.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qwalk::io {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

} // namespace

std::string library_version() { return QWALK_VERSION; }

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

double parse_double(std::string_view text) {
    if (text == "nan") {
        return std::nan("");
    }
    if (text == "inf") {
        return HUGE_VAL;
    }
    if (text == "-inf") {
        return -HUGE_VAL;
    }
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<SummaryRow> summarize_series(const DistributionSeries &series) {
    std::vector<SummaryRow> rows;
    rows.reserve(series.times.size());
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const auto &d = series.probabilities[i];
        rows.push_back({series.times[i], stats::position_variance(d),
                        stats::second_moment_about(d, series.config.initial_channel),
                        stats::shannon_entropy(d), stats::tsallis_entropy(d, 2.0)});
    }
    return rows;
}

void write_matrix_csv(std::ostream &os, const DistributionSeries &series) {
    const int N = series.config.disorder.N;
    os << "t";
    for (int k = 0; k < N; ++k) {
        os << ',' << format_double(channel_coordinate(N, k));
    }
    os << '\n';
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        os << std::to_string(series.times[i]);
        for (double v : series.probabilities[i]) {
            os << ',' << format_double(v);
        }
        os << '\n';
    }
}

void write_summary_csv(std::ostream &os, const std::vector<SummaryRow> &rows) {
    os << "t,variance,second_moment_injection,shannon,tsallis2\n";
    for (const auto &r : rows) {
        os << std::to_string(r.t) << ',' << format_double(r.variance) << ','
           << format_double(r.second_moment_injection) << ',' << format_double(r.shannon) << ','
           << format_double(r.tsallis2) << '\n';
    }
}

void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows) {
    os << "p,j,N,ok,variance,second_moment_injection,shannon,tsallis2,inv_a_whole,inv_a_peak,x,y,"
          "error\n";
    for (const auto &r : rows) {
        os << format_double(r.p) << ',' << std::to_string(r.j) << ',' << std::to_string(r.N) << ',' << (r.ok ? 1 : 0) << ','
           << format_double(r.variance) << ',' << format_double(r.second_moment_injection) << ','
           << format_double(r.shannon) << ',' << format_double(r.tsallis2) << ','
           << format_double(r.inv_a_whole) << ',' << format_double(r.inv_a_peak) << ','
           << format_double(r.x) << ',' << format_double(r.y) << ',' << csv_escape(r.error)
           << '\n';
    }
}

Matrix read_matrix_csv(std::istream &is) {
    Matrix m;
    std::string line;
    if (!std::getline(is, line)) {
        throw std::runtime_error("matrix CSV is empty");
    }
    auto header = split(line);
    if (header.empty() || header.front() != "t") {
        throw std::runtime_error("matrix CSV header must start with 't'");
    }
    for (std::size_t i = 1; i < header.size(); ++i) {
        m.channels.push_back(parse_double(header[i]));
    }
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        auto cells = split(line);
        if (cells.size() != header.size()) {
            throw std::runtime_error("matrix CSV row has " + std::to_string(cells.size()) +
                                     " cells, expected " + std::to_string(header.size()));
        }
        m.times.push_back(static_cast<int>(parse_double(cells[0])));
        std::vector<double> row;
        row.reserve(cells.size() - 1);
        for (std::size_t i = 1; i < cells.size(); ++i) {
            row.push_back(parse_double(cells[i]));
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

json config_json(const RunConfig &c) {
    return json{{"mode", std::string(to_string(c.disorder.mode))},
                {"N", c.disorder.N},
                {"j", c.disorder.j},
                {"p", c.disorder.p},
                {"T", c.T},
                {"R", c.R},
                {"seed", c.seed},
                {"record_every", c.record_every},
                {"initial_channel", c.initial_channel},
                {"allow_wrap", c.allow_wrap}};
}

json metadata_json(const RunConfig &config, std::string_view command) {
    const int N = config.disorder.N;
    return json{{"command", std::string(command)},
                {"library", "qwalk"},
                {"version", library_version()},
                {"config", config_json(config)},
                {"resolved_seed", config.seed},
                {"channels",
                 {{"first_channel", channel_coordinate(N, 0)},
                  {"last_channel", channel_coordinate(N, N - 1)},
                  {"slot_of_minus_half", slot_of_channel(N, -0.5)},
                  {"slot_of_plus_half", slot_of_channel(N, 0.5)},
                  {"initial_slot", slot_of_channel(N, config.initial_channel)}}},
                {"laplace_floor", stats::probability_floor(config.R, N)}};
}

json simulate_json(const DistributionSeries &series, const std::vector<SummaryRow> &summary) {
    const int N = series.config.disorder.N;
    json channels = json::array();
    for (int k = 0; k < N; ++k) {
        channels.push_back(channel_coordinate(N, k));
    }
    json summary_rows = json::array();
    for (const auto &r : summary) {
        summary_rows.push_back({{"t", r.t},
                                {"variance", number_or_null(r.variance)},
                                {"second_moment_injection", number_or_null(r.second_moment_injection)},
                                {"shannon", number_or_null(r.shannon)},
                                {"tsallis2", number_or_null(r.tsallis2)}});
    }
    return json{{"metadata", metadata_json(series.config, "simulate")},
                {"channels", channels},
                {"times", series.times},
                {"matrix", series.probabilities},
                {"summary", summary_rows}};
}

json sweep_json(const RunConfig &base, const SweepGrid &grid, const SweepOptions &options,
                const std::vector<SweepRow> &rows) {
    json meta{{"command", "sweep"},
              {"library", "qwalk"},
              {"version", library_version()},
              {"config", config_json(base)},
              {"resolved_seed", base.seed},
              {"grid", {{"p", grid.p}, {"j", grid.j}}},
              {"alpha", options.alpha},
              {"beta", options.beta}};
    json out_rows = json::array();
    for (const auto &r : rows) {
        out_rows.push_back({{"p", r.p},
                            {"j", r.j},
                            {"N", r.N},
                            {"ok", r.ok},
                            {"variance", number_or_null(r.variance)},
                            {"second_moment_injection", number_or_null(r.second_moment_injection)},
                            {"shannon", number_or_null(r.shannon)},
                            {"tsallis2", number_or_null(r.tsallis2)},
                            {"inv_a_whole", number_or_null(r.inv_a_whole)},
                            {"inv_a_peak", number_or_null(r.inv_a_peak)},
                            {"x", number_or_null(r.x)},
                            {"y", number_or_null(r.y)},
                            {"error", r.error}});
    }
    return json{{"metadata", meta}, {"rows", out_rows}};
}

} // namespace qwalk::io
