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

#include "qwalk/engine.hpp"

#include "qwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace qwalk {

namespace {

/// Runs per work unit. A power of two, so every full chunk is a complete
/// subtree of the pairwise summation over run indices.
constexpr int kChunkRuns = 64;

/// Pairwise summation over a stream of equally sized vectors. The tree
/// shape depends only on how many vectors were pushed.
class PairwiseSum {
  public:
    struct Node {
        std::size_t count = 0;
        std::vector<double> data;
    };

    void push(Node node) {
        stack_.push_back(std::move(node));
        while (stack_.size() >= 2 && stack_[stack_.size() - 1].count == stack_[stack_.size() - 2].count) {
            Node right = std::move(stack_.back());
            stack_.pop_back();
            Node &left = stack_.back();
            for (std::size_t i = 0; i < left.data.size(); ++i) {
                left.data[i] += right.data[i];
            }
            left.count += right.count;
        }
    }

    [[nodiscard]] std::vector<Node> take() { return std::move(stack_); }

    /// Folds the remaining partial sums from the smallest upward.
    [[nodiscard]] std::vector<double> total() {
        if (stack_.empty()) {
            return {};
        }
        std::vector<double> acc = std::move(stack_.back().data);
        for (std::size_t i = stack_.size() - 1; i-- > 0;) {
            const auto &d = stack_[i].data;
            for (std::size_t k = 0; k < acc.size(); ++k) {
                acc[k] = d[k] + acc[k];
            }
        }
        stack_.clear();
        return acc;
    }

  private:
    std::vector<Node> stack_;
};

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) {
        return requested;
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

/// Flattened snapshots of one run: times.size() blocks of N values.
void evolve(const RunConfig &config, const std::vector<int> &times, const JumpSchedule &schedule,
            const CoinMatrix &coin, std::vector<double> &out) {
    const int N = config.disorder.N;
    const auto n = static_cast<std::size_t>(N);
    ChannelState state = ChannelState::localized(N, config.initial_channel);
    out.assign(times.size() * n, 0.0);
    std::size_t next = 0;
    auto record = [&](int t) {
        if (next < times.size() && times[next] == t) {
            double *dst = out.data() + next * n;
            for (std::size_t k = 0; k < n; ++k) {
                dst[k] = std::norm(state.amplitudes[k]);
            }
            ++next;
        }
    };
    record(0);
    for (int t = 0; t < config.T; ++t) {
        step_channel_inplace(state.amplitudes, t, coin);
        apply_jumps_inplace(state.amplitudes, schedule(t), config.disorder.j);
        record(t + 1);
    }
}

DistributionSeries average_runs(const RunConfig &config_in) {
    const RunConfig config = with_default_size(config_in);
    config.validate();
    const std::vector<int> times = config.recorded_times();
    const JumpSampler sampler(config.disorder);
    const bool dynamic = config.disorder.mode == DisorderMode::Dynamic;

    auto process_chunk = [&](int chunk) {
        PairwiseSum acc;
        JumpSet jumps;
        std::vector<double> buffer;
        const int first = chunk * kChunkRuns;
        const int last = std::min(config.R, first + kChunkRuns);
        for (int r = first; r < last; ++r) {
            if (!dynamic) {
                Rng rng = jump_stream(config, r, 0);
                sampler.sample_into(rng, jumps);
            }
            const JumpSchedule schedule = [&](int step) -> const JumpSet & {
                if (dynamic) {
                    Rng rng = jump_stream(config, r, step);
                    sampler.sample_into(rng, jumps);
                }
                return jumps;
            };
            evolve(config, times, schedule, CoinMatrix::hadamard(), buffer);
            acc.push({1, std::move(buffer)});
            buffer = {};
        }
        return acc.take();
    };

    const int chunks = (config.R + kChunkRuns - 1) / kChunkRuns;
    const unsigned threads = std::min<unsigned>(resolve_threads(config.threads),
                                                static_cast<unsigned>(chunks));
    PairwiseSum total;
    std::vector<std::vector<PairwiseSum::Node>> wave(threads);
    for (int begin = 0; begin < chunks; begin += static_cast<int>(threads)) {
        const int count = std::min(static_cast<int>(threads), chunks - begin);
        if (count == 1) {
            wave[0] = process_chunk(begin);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(count));
            for (int w = 0; w < count; ++w) {
                pool.emplace_back([&, w] { wave[static_cast<std::size_t>(w)] = process_chunk(begin + w); });
            }
            for (auto &th : pool) {
                th.join();
            }
        }
        for (int w = 0; w < count; ++w) {
            for (auto &node : wave[static_cast<std::size_t>(w)]) {
                total.push(std::move(node));
            }
            wave[static_cast<std::size_t>(w)].clear();
        }
    }

    std::vector<double> sum = total.total();
    const double inv_r = 1.0 / static_cast<double>(config.R);
    DistributionSeries series;
    series.config = config;
    series.times = times;
    const auto n = static_cast<std::size_t>(config.disorder.N);
    series.probabilities.resize(times.size());
    for (std::size_t s = 0; s < times.size(); ++s) {
        auto &dst = series.probabilities[s];
        dst.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            dst[k] = sum[s * n + k] * inv_r;
        }
    }
    return series;
}

} // namespace

void RunConfig::validate() const {
    disorder.validate();
    validate_cycle_size(disorder.N);
    if (T < 0) {
        throw std::invalid_argument("T must be non-negative (got " + std::to_string(T) + ")");
    }
    if (R < 1) {
        throw std::invalid_argument("R must be at least 1 (got " + std::to_string(R) + ")");
    }
    if (record_every < 1) {
        throw std::invalid_argument("record_every must be at least 1 (got " +
                                    std::to_string(record_every) + ")");
    }
    (void)slot_of_channel(disorder.N, initial_channel);
    if (!allow_wrap && disorder.N < 2 * T + 2) {
        throw std::invalid_argument("N must be at least 2T+2 to avoid wrap-around (N=" +
                                    std::to_string(disorder.N) + ", T=" + std::to_string(T) +
                                    "); allow wrap-around explicitly to override");
    }
}

std::vector<int> RunConfig::recorded_times() const {
    std::vector<int> times;
    for (int t = 0; t <= T; t += std::max(1, record_every)) {
        times.push_back(t);
    }
    if (times.back() != T) {
        times.push_back(T);
    }
    return times;
}

int default_cycle_size(int T, const DisorderParams &disorder) {
    int n = default_cycle_size(T);
    if (disorder.mode == DisorderMode::Dynamic && disorder.p > 0.0 && T > 0) {
        // fresh jumps every step spread the walker diffusively by ~j sqrt(p T)
        const double spread = disorder.j * std::sqrt(disorder.p * T);
        n += 2 * static_cast<int>(std::ceil(8.0 * spread));
    }
    return n + (n & 1);
}

RunConfig with_default_size(RunConfig config) {
    if (config.disorder.N == 0) {
        config.disorder.N = default_cycle_size(config.T, config.disorder);
    }
    return config;
}

std::vector<std::vector<double>> run_single(const RunConfig &config_in,
                                            const JumpSchedule &schedule,
                                            const CoinMatrix &coin) {
    const RunConfig config = with_default_size(config_in);
    config.validate();
    const auto times = config.recorded_times();
    std::vector<double> flat;
    evolve(config, times, schedule, coin, flat);
    const auto n = static_cast<std::size_t>(config.disorder.N);
    std::vector<std::vector<double>> out(times.size());
    for (std::size_t s = 0; s < times.size(); ++s) {
        out[s].assign(flat.begin() + static_cast<std::ptrdiff_t>(s * n),
                      flat.begin() + static_cast<std::ptrdiff_t>((s + 1) * n));
    }
    return out;
}

Rng jump_stream(const RunConfig &config, int run, int step) {
    const std::uint64_t tag =
        config.disorder.mode == DisorderMode::Static ? 0 : static_cast<std::uint64_t>(step) + 1;
    return make_rng(config.seed, static_cast<std::uint64_t>(run), tag);
}

DistributionSeries run_static(const RunConfig &config) {
    if (config.disorder.mode != DisorderMode::Static) {
        throw std::invalid_argument("run_static called with dynamic disorder");
    }
    return average_runs(config);
}

DistributionSeries run_dynamic(const RunConfig &config) {
    if (config.disorder.mode != DisorderMode::Dynamic) {
        throw std::invalid_argument("run_dynamic called with static disorder");
    }
    return average_runs(config);
}

DistributionSeries run(const RunConfig &config) { return average_runs(config); }

SweepRow summarize(const RunConfig &config, const std::vector<double> &final_dist,
                   const SweepOptions &options) {
    SweepRow row;
    row.p = config.disorder.p;
    row.j = config.disorder.j;
    row.N = config.disorder.N;
    const double mu = config.initial_channel;
    row.variance = stats::position_variance(final_dist);
    row.second_moment_injection = stats::second_moment_about(final_dist, mu);
    row.shannon = stats::shannon_entropy(final_dist);
    row.tsallis2 = stats::tsallis_entropy(final_dist, 2.0);
    const double floor = stats::probability_floor(config.R, config.disorder.N);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        row.inv_a_whole = stats::laplace_fit(final_dist, stats::FitWindow::around(mu, config.T),
                                             stats::CenterMode::FixedAtOrigin, mu, floor)
                              .inv_a;
    } catch (const std::exception &e) {
        row.inv_a_whole = nan;
        row.error += std::string("whole fit: ") + e.what() + "; ";
    }
    try {
        row.inv_a_peak =
            stats::laplace_fit(final_dist, stats::FitWindow::central_peak(mu, config.disorder.j),
                               stats::CenterMode::Free, mu, floor)
                .inv_a;
    } catch (const std::exception &e) {
        row.inv_a_peak = nan;
        row.error += std::string("peak fit: ") + e.what() + "; ";
    }
    const double jj = static_cast<double>(row.j);
    row.x = row.p * std::pow(jj, options.alpha);
    row.y = std::pow(jj, -options.beta) * row.variance;
    return row;
}

std::vector<SweepRow> sweep(const SweepGrid &grid, const RunConfig &base,
                            const SweepOptions &options) {
    std::vector<SweepRow> rows;
    for (int j : grid.j) {
        for (double p : grid.p) {
            RunConfig config = base;
            config.disorder.j = j;
            config.disorder.p = p;
            config.record_every = std::max(1, config.T);
            config = with_default_size(config);
            try {
                const auto series = run(config);
                rows.push_back(summarize(config, series.final_distribution(), options));
            } catch (const std::exception &e) {
                SweepRow row;
                row.p = p;
                row.j = j;
                row.N = config.disorder.N;
                row.ok = false;
                row.error = e.what();
                const double nan = std::numeric_limits<double>::quiet_NaN();
                row.variance = row.second_moment_injection = row.shannon = row.tsallis2 = nan;
                row.inv_a_whole = row.inv_a_peak = row.x = row.y = nan;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

} // namespace qwalk
