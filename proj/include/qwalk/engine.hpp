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
 * Monte Carlo disorder averages of the jump-perturbed walk.
 *
 * One step from t to t+1 is the Hadamard brick-wall step followed by the
 * jump permutation for that step. Static disorder draws one jump set per
 * run and reuses it every step; dynamic disorder draws a fresh one per step.
 * The averaged |psi|^2 is the position diagonal of the disorder-averaged
 * density matrix.
 */

#pragma once

#include "qwalk/disorder.hpp"
#include "qwalk/walk_core.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qwalk {

struct RunConfig {
    DisorderParams disorder;
    int T = 0;
    int R = 1;
    double initial_channel = 0.5;
    std::uint64_t seed = 0;
    int record_every = 1;
    bool allow_wrap = false;
    unsigned threads = 0; ///< 0: all hardware threads. Never affects results.

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
    /// 0, record_every, 2 record_every, ... plus T itself.
    [[nodiscard]] std::vector<int> recorded_times() const;
};

/// 2T + 16 for static disorder (or p = 0). Dynamic disorder adds a margin
/// of 8 j sqrt(p T) on each side for the diffusive spread the jumps cause.
[[nodiscard]] int default_cycle_size(int T, const DisorderParams &disorder);

/// Resolve N = 0 to default_cycle_size(T, disorder).
[[nodiscard]] RunConfig with_default_size(RunConfig config);

struct DistributionSeries {
    std::vector<int> times;
    std::vector<std::vector<double>> probabilities; ///< one per entry of `times`
    RunConfig config;

    [[nodiscard]] const std::vector<double> &final_distribution() const {
        return probabilities.back();
    }
};

/// Jump set to apply after the walk step t -> t+1.
using JumpSchedule = std::function<const JumpSet &(int step)>;

/// Evolve one pure state under `schedule` and return |psi|^2 at each
/// recorded time.
[[nodiscard]] std::vector<std::vector<double>>
run_single(const RunConfig &config, const JumpSchedule &schedule,
           const CoinMatrix &coin = CoinMatrix::hadamard());

/// Random stream feeding the jump set used by `run` at `step`. Static runs
/// use a single stream per run.
[[nodiscard]] Rng jump_stream(const RunConfig &config, int run, int step);

[[nodiscard]] DistributionSeries run_static(const RunConfig &config);
[[nodiscard]] DistributionSeries run_dynamic(const RunConfig &config);
/// Dispatch on config.disorder.mode.
[[nodiscard]] DistributionSeries run(const RunConfig &config);

struct SweepGrid {
    std::vector<double> p;
    std::vector<int> j;
};

struct SweepRow {
    double p = 0.0;
    int j = 0;
    int N = 0;
    bool ok = true;
    std::string error;
    double variance = 0.0;
    double second_moment_injection = 0.0;
    double shannon = 0.0;
    double tsallis2 = 0.0;
    double inv_a_whole = 0.0;
    double inv_a_peak = 0.0;
    double x = 0.0;
    double y = 0.0;
};

struct SweepOptions {
    double alpha = 1.04;
    double beta = 1.67;
};

/// Runs every (j, p) grid point (j outer, p inner) and summarises the final
/// distribution. Invalid points yield rows with ok = false; the sweep carries on.
[[nodiscard]] std::vector<SweepRow> sweep(const SweepGrid &grid, const RunConfig &base,
                                          const SweepOptions &options = {});

/// Row summary of one final distribution.
[[nodiscard]] SweepRow summarize(const RunConfig &config, const std::vector<double> &final_dist,
                                 const SweepOptions &options = {});

} // namespace qwalk
