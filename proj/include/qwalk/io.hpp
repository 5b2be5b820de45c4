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

/**
 * @file
 * CSV and JSON serialisation of simulation output.
 *
 * CSV is locale independent: '.' decimal point, '\n' line endings, 17
 * significant digits, NaN written as "nan".
 */

#pragma once

#include "qwalk/engine.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qwalk::io {

[[nodiscard]] std::string library_version();

/// 17 significant digits via std::to_chars.
[[nodiscard]] std::string format_double(double v);
/// Inverse of format_double; accepts "nan". Throws std::invalid_argument.
[[nodiscard]] double parse_double(std::string_view text);

struct SummaryRow {
    int t = 0;
    double variance = 0.0;
    double second_moment_injection = 0.0;
    double shannon = 0.0;
    double tsallis2 = 0.0;
};

[[nodiscard]] std::vector<SummaryRow> summarize_series(const DistributionSeries &series);

/// Header "t,<channel coordinates>", one row per recorded time.
void write_matrix_csv(std::ostream &os, const DistributionSeries &series);
void write_summary_csv(std::ostream &os, const std::vector<SummaryRow> &rows);
void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows);

struct Matrix {
    std::vector<double> channels; ///< half-integer coordinates
    std::vector<int> times;
    std::vector<std::vector<double>> rows;
};

/// Reads the write_matrix_csv layout. Throws std::runtime_error on malformed input.
[[nodiscard]] Matrix read_matrix_csv(std::istream &is);

[[nodiscard]] nlohmann::json config_json(const RunConfig &config);
/// Run configuration echo plus channel/slot layout and library version.
[[nodiscard]] nlohmann::json metadata_json(const RunConfig &config, std::string_view command);

[[nodiscard]] nlohmann::json simulate_json(const DistributionSeries &series,
                                           const std::vector<SummaryRow> &summary);
[[nodiscard]] nlohmann::json sweep_json(const RunConfig &base, const SweepGrid &grid,
                                        const SweepOptions &options,
                                        const std::vector<SweepRow> &rows);

} // namespace qwalk::io
