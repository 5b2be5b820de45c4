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

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace qwalk;

namespace {

constexpr double kSnapshotSumTol = 1e-9;

RunConfig make_config(DisorderMode mode, int N, int j, double p, int T, int R,
                      std::uint64_t seed = 42) {
    RunConfig c;
    c.disorder = {N, j, p, mode};
    c.T = T;
    c.R = R;
    c.seed = seed;
    return c;
}

std::vector<double> unperturbed(int N, int T, double channel = 0.5) {
    ChannelState s = ChannelState::localized(N, channel);
    for (int t = 0; t < T; ++t) {
        s = step_channel(s);
    }
    return probabilities(s.amplitudes);
}

void check_snapshots(const DistributionSeries &s) {
    for (const auto &d : s.probabilities) {
        const double sum = std::accumulate(d.begin(), d.end(), 0.0);
        CHECK(std::abs(sum - 1.0) < kSnapshotSumTol);
        CHECK(*std::min_element(d.begin(), d.end()) >= 0.0);
    }
}

const JumpSet kEmpty{};

} // namespace

TEST_CASE("config validation") {
    RunConfig c = make_config(DisorderMode::Static, 20, 3, 0.1, 10, 1);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument); // N < 2T + 2
    c.allow_wrap = true;
    CHECK_NOTHROW(c.validate());
    c.R = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.R = 1;
    c.initial_channel = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.initial_channel = -0.5;
    c.disorder.N = 21;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    c = make_config(DisorderMode::Static, 0, 3, 0.1, 10, 1);
    CHECK(with_default_size(c).disorder.N == 36);
    c.record_every = 4;
    CHECK(c.recorded_times() == std::vector<int>{0, 4, 8, 10});
}

TEST_CASE("default size grows for dynamic disorder") {
    const DisorderParams st{0, 40, 0.2, DisorderMode::Static};
    const DisorderParams dy{0, 40, 0.2, DisorderMode::Dynamic};
    CHECK(default_cycle_size(100, st) == 216);
    CHECK(default_cycle_size(100, dy) > 2000);
    CHECK(default_cycle_size(100, dy) % 2 == 0);
    CHECK(default_cycle_size(100, DisorderParams{0, 40, 0.0, DisorderMode::Dynamic}) == 216);
}

TEST_CASE("run_single") {
    SUBCASE("T = 0 gives a single delta snapshot") {
        const auto snaps = run_single(make_config(DisorderMode::Static, 16, 3, 0.2, 0, 1),
                                      [](int) -> const JumpSet & { return kEmpty; });
        REQUIRE(snaps.size() == 1);
        CHECK(snaps[0][static_cast<std::size_t>(slot_of_channel(16, 0.5))] == 1.0);
        CHECK(std::accumulate(snaps[0].begin(), snaps[0].end(), 0.0) == 1.0);
    }
    SUBCASE("empty schedule reproduces the bare walk") {
        const auto snaps = run_single(make_config(DisorderMode::Static, 64, 3, 0.2, 30, 1),
                                      [](int) -> const JumpSet & { return kEmpty; });
        CHECK(snaps.back() == unperturbed(64, 30));
    }
    SUBCASE("a swap outside the light cone changes nothing") {
        const JumpSet far{{0}}; // slots 0 and 5, channels -31.5 and -26.5
        const auto snaps = run_single(make_config(DisorderMode::Static, 64, 5, 0.2, 10, 1),
                                      [&](int) -> const JumpSet & { return far; });
        CHECK(snaps.back() == unperturbed(64, 10));
    }
    SUBCASE("support grows by at most j + 1 channels per step") {
        constexpr int N = 400;
        constexpr int j = 7;
        const RunConfig c = make_config(DisorderMode::Dynamic, N, j, 0.5, 20, 1);
        const JumpSampler sampler(c.disorder);
        Rng rng(8);
        JumpSet s;
        const auto snaps = run_single(c, [&](int) -> const JumpSet & {
            sampler.sample_into(rng, s);
            return s;
        });
        for (std::size_t t = 0; t < snaps.size(); ++t) {
            for (int k = 0; k < N; ++k) {
                if (std::abs(channel_coordinate(N, k) - 0.5) > static_cast<double>(t) * (j + 1)) {
                    REQUIRE(snaps[t][static_cast<std::size_t>(k)] == 0.0);
                }
            }
        }
    }
}

TEST_CASE("p = 0 reproduces the bare walk in both modes") {
    for (auto mode : {DisorderMode::Static, DisorderMode::Dynamic}) {
        const auto s = run(make_config(mode, 0, 5, 0.0, 40, 7));
        const auto bare = unperturbed(s.config.disorder.N, 40);
        for (std::size_t k = 0; k < bare.size(); ++k) {
            CHECK(s.final_distribution()[k] == doctest::Approx(bare[k]).epsilon(1e-13));
        }
        check_snapshots(s);
    }
}

TEST_CASE("R = 1 static run equals run_single with the drawn jump set") {
    const RunConfig c = make_config(DisorderMode::Static, 80, 5, 0.3, 30, 1, 77);
    Rng rng = jump_stream(c, 0, 0);
    const JumpSet s = sample_jump_set(c.disorder, rng);
    CHECK(!s.empty());
    const auto single = run_single(c, [&](int) -> const JumpSet & { return s; });
    const auto series = run_static(c);
    CHECK(series.probabilities == single);
}

TEST_CASE("mode mismatch is rejected") {
    CHECK_THROWS_AS((void)run_static(make_config(DisorderMode::Dynamic, 0, 3, 0.1, 5, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)run_dynamic(make_config(DisorderMode::Static, 0, 3, 0.1, 5, 1)),
                    std::invalid_argument);
}

TEST_CASE("snapshots are normalised and non-negative") {
    check_snapshots(run(make_config(DisorderMode::Static, 0, 7, 0.3, 60, 100)));
    check_snapshots(run(make_config(DisorderMode::Dynamic, 0, 7, 0.3, 60, 100)));
}

TEST_CASE("results do not depend on the thread count") {
    for (auto mode : {DisorderMode::Static, DisorderMode::Dynamic}) {
        RunConfig c = make_config(mode, 0, 5, 0.25, 40, 300, 5);
        c.threads = 1;
        const auto ref = run(c);
        for (unsigned threads : {2U, 3U, 8U}) {
            c.threads = threads;
            CHECK(run(c).probabilities == ref.probabilities);
        }
        c.threads = 1;
        CHECK(run(c).probabilities == ref.probabilities);
        c.seed = 6;
        CHECK(run(c).probabilities != ref.probabilities);
    }
}

TEST_CASE("static Monte Carlo matches exact enumeration") {
    // N=10, T=4, j=3, p=0.3: average run_single over every jump set with its
    // exact weight, then compare the R=50000 Monte Carlo estimate per channel.
    const RunConfig c = make_config(DisorderMode::Static, 10, 3, 0.3, 4, 50000, 2024);
    const auto n = static_cast<std::size_t>(c.disorder.N);
    std::vector<double> mean(n, 0.0);
    std::vector<double> second(n, 0.0);
    double total_weight = 0.0;
    for_each_jump_set(c.disorder.N, c.disorder.j, [&](const JumpSet &s) {
        const double w = jump_set_probability(s, c.disorder);
        const auto d = run_single(c, [&](int) -> const JumpSet & { return s; }).back();
        for (std::size_t k = 0; k < n; ++k) {
            mean[k] += w * d[k];
            second[k] += w * d[k] * d[k];
        }
        total_weight += w;
    });
    CHECK(total_weight == doctest::Approx(1.0).epsilon(1e-13));

    const auto mc = run_static(c).final_distribution();
    for (std::size_t k = 0; k < n; ++k) {
        const double var = std::max(0.0, second[k] - mean[k] * mean[k]);
        const double se = std::sqrt(var / c.R);
        if (se == 0.0) {
            CHECK(std::abs(mc[k] - mean[k]) < 1e-12);
        } else {
            CHECK(std::abs(mc[k] - mean[k]) <= 3.0 * se);
        }
    }
}

TEST_CASE("sweep") {
    RunConfig base = make_config(DisorderMode::Static, 0, 1, 0.0, 30, 20);

    CHECK(sweep({{}, {}}, base).empty());
    CHECK(sweep({{0.1}, {}}, base).empty());

    const auto rows = sweep({{0.0}, {5}}, base);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].ok);
    CHECK(rows[0].variance ==
          doctest::Approx(stats::position_variance(unperturbed(rows[0].N, 30))).epsilon(1e-12));

    base.disorder.N = 64;
    const auto mixed = sweep({{0.2, 0.3}, {3, 32}}, base);
    REQUIRE(mixed.size() == 4);
    CHECK(mixed[0].j == 3);
    CHECK(mixed[1].p == 0.3);
    CHECK(mixed[0].ok);
    CHECK(!mixed[2].ok);
    CHECK(mixed[2].error.find("N/gcd(N,j) must exceed 2") != std::string::npos);
    CHECK(std::isnan(mixed[2].variance));
    CHECK(mixed[0].x == doctest::Approx(0.2 * std::pow(3.0, 1.04)));
    CHECK(mixed[0].y == doctest::Approx(std::pow(3.0, -1.67) * mixed[0].variance));
}
