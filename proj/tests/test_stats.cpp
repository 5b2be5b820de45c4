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
#include "qwalk/rng.hpp"
#include "qwalk/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace qwalk;
using namespace qwalk::stats;

namespace {

std::vector<double> delta(int N, int slot) {
    std::vector<double> d(static_cast<std::size_t>(N), 0.0);
    d[static_cast<std::size_t>(slot)] = 1.0;
    return d;
}

std::vector<double> uniform(int N) { return std::vector<double>(static_cast<std::size_t>(N), 1.0 / N); }

std::vector<double> random_distribution(int N, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> d(static_cast<std::size_t>(N));
    for (auto &v : d) {
        v = uniform01(rng);
    }
    const double s = std::accumulate(d.begin(), d.end(), 0.0);
    for (auto &v : d) {
        v /= s;
    }
    return d;
}

std::vector<double> laplace(int N, double mu, double a) {
    std::vector<double> d(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
        d[static_cast<std::size_t>(k)] = std::exp(-std::abs(channel_coordinate(N, k) - mu) / a);
    }
    const double s = std::accumulate(d.begin(), d.end(), 0.0);
    for (auto &v : d) {
        v /= s;
    }
    return d;
}

std::vector<std::vector<double>> bare_walk(int N, int T) {
    std::vector<std::vector<double>> out;
    ChannelState s = ChannelState::localized(N, 0.5);
    out.push_back(probabilities(s.amplitudes));
    for (int t = 0; t < T; ++t) {
        s = step_channel(s);
        out.push_back(probabilities(s.amplitudes));
    }
    return out;
}

} // namespace

TEST_CASE("variance") {
    CHECK(position_variance(delta(16, 3)) == 0.0);
    for (int d : {1, 3, 6}) {
        std::vector<double> pair(16, 0.0);
        pair[static_cast<std::size_t>(8 - d)] = 0.5;
        pair[static_cast<std::size_t>(8 + d)] = 0.5;
        CHECK(position_variance(pair) == doctest::Approx(double(d) * d).epsilon(1e-14));
        CHECK(position_mean(pair) == doctest::Approx(0.5));
    }
    std::vector<double> bad(8, 0.2);
    CHECK_THROWS_AS((void)position_variance(bad), std::invalid_argument);
    CHECK(second_moment_about(delta(16, 10), 0.5) == doctest::Approx(4.0));
}

TEST_CASE("variance is translation covariant") {
    const auto d = random_distribution(40, 3);
    std::vector<double> shifted(60, 0.0);
    std::copy(d.begin(), d.end(), shifted.begin() + 13);
    // Padding to N=60 shifts coordinates by -10 and the copy offset by +13.
    CHECK(position_mean(shifted) == doctest::Approx(position_mean(d) + 3.0));
    CHECK(position_variance(shifted) == doctest::Approx(position_variance(d)).epsilon(1e-12));
}

TEST_CASE("entropies") {
    CHECK(shannon_entropy(delta(10, 4)) == 0.0);
    for (int K : {2, 7, 64}) {
        CHECK(shannon_entropy(uniform(K)) == doctest::Approx(std::log(double(K))));
        CHECK(tsallis_entropy(uniform(K), 2.0) == doctest::Approx(1.0 - 1.0 / K));
    }
    for (double q : {0.5, 1.0, 2.0, 3.0}) {
        CHECK(tsallis_entropy(delta(10, 4), q) == 0.0);
    }
    CHECK_THROWS_AS((void)tsallis_entropy(uniform(4), 0.0), std::domain_error);
    CHECK_THROWS_AS((void)tsallis_entropy(uniform(4), -1.0), std::domain_error);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto d = random_distribution(30, seed);
        const double h = shannon_entropy(d);
        CHECK(std::abs(tsallis_entropy(d, 1.0 + 1e-6) - h) < 1e-4);
        CHECK(std::abs(tsallis_entropy(d, 1.0 - 1e-6) - h) < 1e-4);

        auto perm = d;
        std::shuffle(perm.begin(), perm.end(), std::mt19937_64(seed));
        CHECK(shannon_entropy(perm) == doctest::Approx(h).epsilon(1e-13));
        CHECK(tsallis_entropy(perm, 2.0) == doctest::Approx(tsallis_entropy(d, 2.0)).epsilon(1e-13));
    }
}

TEST_CASE("entropies are maximal on the uniform distribution") {
    for (int K : {3, 16, 64}) {
        const double h = shannon_entropy(uniform(K));
        const double s2 = tsallis_entropy(uniform(K), 2.0);
        Rng rng(static_cast<std::uint64_t>(K));
        for (int trial = 0; trial < 50; ++trial) {
            auto d = uniform(K);
            const auto i = static_cast<std::size_t>(rng() % static_cast<unsigned>(K));
            auto j = static_cast<std::size_t>(rng() % static_cast<unsigned>(K));
            if (j == i) {
                j = (j + 1) % static_cast<std::size_t>(K);
            }
            const double eps = 0.5 * uniform01(rng) / K;
            d[i] += eps;
            d[j] -= eps;
            CHECK(shannon_entropy(d) < h);
            CHECK(tsallis_entropy(d, 2.0) < s2);
        }
    }
}

TEST_CASE("bare walk: ballistic variance and logarithmic entropy") {
    constexpr int T = 200;
    const auto snaps = bare_walk(2 * T + 16, T);
    std::vector<double> lt;
    std::vector<double> lv;
    for (int t = 50; t <= T; ++t) {
        lt.push_back(std::log(double(t)));
        lv.push_back(std::log(position_variance(snaps[static_cast<std::size_t>(t)])));
    }
    const LinearFit v = linear_fit(lt, lv);
    CHECK(std::abs(v.slope - 2.0) <= 0.05);

    lt.clear();
    std::vector<double> hs;
    for (int t = 20; t <= T; ++t) {
        lt.push_back(std::log(double(t)));
        hs.push_back(shannon_entropy(snaps[static_cast<std::size_t>(t)]));
    }
    CHECK(linear_fit(lt, hs).slope > 0.5);
}

TEST_CASE("laplace fit") {
    constexpr int N = 200;
    SUBCASE("exact synthetic input") {
        const auto d = laplace(N, 0.5, 5.0);
        const auto fit = laplace_fit(d, FitWindow::around(0.5, 50.0), CenterMode::FixedAtOrigin, 0.5);
        CHECK(std::abs(fit.inv_a - 0.2) <= 1e-6);
        CHECK(fit.r_squared == doctest::Approx(1.0));
        CHECK(fit.points == 101);
    }
    SUBCASE("uniform input") {
        const auto fit =
            laplace_fit(uniform(N), FitWindow::around(0.5, 50.0), CenterMode::FixedAtOrigin, 0.5);
        CHECK(std::abs(fit.inv_a) <= 1e-9);
    }
    SUBCASE("recovers a to three significant digits for a in [2, 50]") {
        for (double a : {2.0, 3.7, 10.0, 25.0, 50.0}) {
            const auto d = laplace(2000, 0.5, a);
            const auto fit =
                laplace_fit(d, FitWindow::around(0.5, 400.0), CenterMode::FixedAtOrigin, 0.5);
            CHECK(1.0 / fit.inv_a == doctest::Approx(a).epsilon(5e-4));
        }
    }
    SUBCASE("free centre finds the peak") {
        const auto d = laplace(N, 7.5, 4.0);
        const auto fit = laplace_fit(d, FitWindow::around(0.5, 40.0), CenterMode::Free, 0.5);
        CHECK(fit.mu == 7.5);
        CHECK(fit.inv_a == doctest::Approx(0.25).epsilon(1e-9));
    }
    SUBCASE("discrete Laplace variance is close to 2 a^2") {
        const double a = 20.0;
        CHECK(position_variance(laplace(2000, 0.5, a)) == doctest::Approx(2.0 * a * a).epsilon(0.01));
    }
    SUBCASE("floor and too few points") {
        const auto d = laplace(N, 0.5, 1.0);
        CHECK_THROWS_AS((void)laplace_fit(d, FitWindow::around(0.5, 0.5), CenterMode::FixedAtOrigin, 0.5),
                        std::invalid_argument);
        const auto fit = laplace_fit(d, FitWindow::around(0.5, 50.0), CenterMode::FixedAtOrigin, 0.5, 1e-6);
        CHECK(fit.points < 101);
        CHECK(fit.inv_a == doctest::Approx(1.0));
    }
    SUBCASE("central peak window is half open with width j") {
        const FitWindow w = FitWindow::central_peak(0.5, 21);
        CHECK(w.contains(-10.0));
        CHECK(!w.contains(11.0));
        int inside = 0;
        for (int k = 0; k < N; ++k) {
            inside += w.contains(channel_coordinate(N, k)) ? 1 : 0;
        }
        CHECK(inside == 21);
    }
    CHECK(probability_floor(2000, 416) == doctest::Approx(10.0 / (2000.0 * 416.0)));
}

TEST_CASE("linear fit") {
    const std::vector<double> xs{0, 1, 2, 3, 4};
    const std::vector<double> ys{1, 4, 7, 10, 13};
    const auto f = linear_fit(xs, ys);
    CHECK(f.slope == doctest::Approx(3.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));

    const std::vector<double> x2{1, 5};
    const std::vector<double> y2{2, -6};
    const auto g = linear_fit(x2, y2);
    CHECK(g.slope == doctest::Approx(-2.0));
    CHECK(g.r_squared == doctest::Approx(1.0));

    const std::vector<double> flat{2, 2, 2};
    CHECK_THROWS_AS((void)linear_fit(flat, flat), std::invalid_argument);
    CHECK_THROWS_AS((void)linear_fit(std::vector<double>{1}, std::vector<double>{1}),
                    std::invalid_argument);
}

TEST_CASE("collapse points") {
    const std::vector<CollapseInput> rows{{0.1, 7, 30.0}, {0.3, 11, 12.0}};
    const auto id = collapse_points(rows, 0.0, 0.0);
    CHECK(id[0].x == 0.1);
    CHECK(id[0].y == 30.0);
    CHECK(id[1].x == 0.3);
    CHECK(id[1].y == 12.0);

    const double x = 1.3;
    const std::vector<CollapseInput> same{{x / std::pow(7.0, 1.04), 7, 1.0},
                                          {x / std::pow(15.0, 1.04), 15, 1.0}};
    const auto pts = collapse_points(same);
    CHECK(pts[0].x == doctest::Approx(pts[1].x).epsilon(1e-14));
    CHECK(pts[0].alpha == kCollapseAlpha);
    CHECK(pts[0].beta == kCollapseBeta);
}

TEST_CASE("collapse and relative spread") {
    Curve a;
    Curve b;
    for (int i = 0; i <= 10; ++i) {
        const double x = 0.2 * i;
        a.emplace_back(x, x * x);
        b.emplace_back(x + 0.05, (x + 0.05) * (x + 0.05));
    }
    CHECK(collapse_spread({a, b}) < 1e-3); // same curve, different sampling
    Curve c = a;
    for (auto &pt : c) {
        pt.second += 0.4;
    }
    // Constant offset 0.4 over a y-range of 4.4: pairwise std 0.2.
    CHECK(collapse_spread({a, c}) == doctest::Approx(0.2 / 4.4).epsilon(1e-9));
    CHECK_THROWS_AS((void)collapse_spread({a}), std::invalid_argument);

    CHECK(relative_spread({{1, 2, 3}, {1, 2, 3}}) == 0.0);
    CHECK(relative_spread({{1, 1}, {3, 3}}) == doctest::Approx(0.5));
}

TEST_CASE("collapse exponent search finds planted exponents") {
    // Var = j^1.5 * f(p j^0.9) with a linear f, which interpolation reproduces exactly.
    std::vector<CollapseInput> rows;
    for (int j : {7, 11, 15, 21}) {
        for (int i = 1; i <= 12; ++i) {
            const double p = 0.02 * i;
            const double x = p * std::pow(j, 0.9);
            rows.push_back({p, j, std::pow(j, 1.5) * (1.0 + 2.0 * x)});
        }
    }
    std::vector<double> alphas;
    std::vector<double> betas;
    for (int i = 0; i <= 20; ++i) {
        alphas.push_back(0.7 + 0.02 * i);
        betas.push_back(1.3 + 0.02 * i);
    }
    const auto best = fit_collapse_exponents(rows, alphas, betas);
    CHECK(best.alpha == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(best.beta == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(best.spread < 1e-6);
}

TEST_CASE("u-shape minimum") {
    std::vector<std::pair<double, double>> parabola;
    for (double x = 0.5; x <= 4.0001; x += 0.5) {
        parabola.emplace_back(x, (x - 2.0) * (x - 2.0));
    }
    CHECK(std::abs(ushape_minimum(parabola) - 2.0) <= 0.01);

    std::vector<std::pair<double, double>> shifted;
    for (double x = 0.0; x <= 5.0001; x += 0.5) {
        shifted.emplace_back(x, 3.0 * (x - 2.3) * (x - 2.3) + 1.0);
    }
    CHECK(ushape_minimum(shifted) == doctest::Approx(2.3).epsilon(1e-9));

    std::vector<std::pair<double, double>> monotone;
    for (int i = 0; i < 8; ++i) {
        monotone.emplace_back(i, i * 0.5);
    }
    CHECK_THROWS_AS((void)ushape_minimum(monotone), std::invalid_argument);
    CHECK_THROWS_AS((void)ushape_minimum({{0, 1}, {1, 0}, {2, 1}}), std::invalid_argument);
}

TEST_CASE("chi-square") {
    CHECK(chi_square_statistic(std::vector<double>{10, 20}, std::vector<double>{15, 15}) ==
          doctest::Approx(50.0 / 15.0));
    CHECK(chi_square_sf(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(chi_square_sf(0.0, 4.0) == 1.0);
}

TEST_CASE("shape helpers") {
    const std::vector<double> d{0, 1, 0, 0, 2, 2, 0, 0};
    CHECK(local_maxima(d) == std::vector<int>{1, 4});
    const auto m = moving_average(std::vector<double>{0, 0, 3, 0, 0}, 3);
    CHECK(m == std::vector<double>{0, 1, 1, 1, 0});
    std::vector<double> periodic(40);
    for (int k = 0; k < 40; ++k) {
        periodic[static_cast<std::size_t>(k)] = 1.0 + std::cos(2.0 * M_PI * k / 8.0);
    }
    CHECK(autocorrelation(periodic, 0) == doctest::Approx(1.0));
    CHECK(autocorrelation(periodic, 8) == doctest::Approx(1.0));
    CHECK(autocorrelation(periodic, 4) == doctest::Approx(-1.0));
}

TEST_CASE("Shannon entropy decreases with static disorder strength") {
    // Batch-estimated standard errors; one inversion within 2 SE is tolerated.
    constexpr int kBatches = 5;
    const std::vector<double> ps{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};
    std::vector<double> mean;
    std::vector<double> se;
    for (double p : ps) {
        std::vector<double> h;
        for (int b = 0; b < kBatches; ++b) {
            RunConfig c;
            c.disorder = {0, 11, p, DisorderMode::Static};
            c.T = 100;
            c.R = 100;
            c.seed = 1000 + static_cast<std::uint64_t>(b);
            h.push_back(shannon_entropy(run(c).final_distribution()));
        }
        const double m = std::accumulate(h.begin(), h.end(), 0.0) / kBatches;
        double v = 0.0;
        for (double x : h) {
            v += (x - m) * (x - m);
        }
        mean.push_back(m);
        se.push_back(std::sqrt(v / (kBatches - 1) / kBatches));
    }
    int inversions = 0;
    for (std::size_t i = 1; i < mean.size(); ++i) {
        if (mean[i] > mean[i - 1]) {
            ++inversions;
            const double joint = std::hypot(se[i], se[i - 1]);
            CHECK(mean[i] - mean[i - 1] <= 2.0 * joint);
        }
    }
    CHECK(inversions <= 1);
}
