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
 * Observables of channel probability distributions.
 *
 * A distribution is a vector over the N channel slots; slot k sits at the
 * half-integer coordinate k - N/2 + 1/2 (see walk_core.hpp).
 */

#pragma once

#include <span>
#include <utility>
#include <vector>

namespace qwalk::stats {

/// Allowed deviation of sum(dist) from 1 for the moment functions.
inline constexpr double kNormalizationTolerance = 1e-6;

[[nodiscard]] double position_mean(std::span<const double> dist);
/// Variance about the mean, in channel^2. Throws std::invalid_argument if
/// dist is not normalised.
[[nodiscard]] double position_variance(std::span<const double> dist);
/// Second moment about an arbitrary channel coordinate (e.g. the injection point).
[[nodiscard]] double second_moment_about(std::span<const double> dist, double center);
[[nodiscard]] double excess_kurtosis(std::span<const double> dist);

/// -sum p ln p in nats, with 0 ln 0 = 0.
[[nodiscard]] double shannon_entropy(std::span<const double> dist);
/// (1 - sum p^q) / (q - 1); q == 1 gives the Shannon entropy. Throws
/// std::domain_error for q <= 0.
[[nodiscard]] double tsallis_entropy(std::span<const double> dist, double q);

enum class CenterMode { FixedAtOrigin, Free };

/// Channel-coordinate window [lo, hi] or [lo, hi).
struct FitWindow {
    double lo = 0.0;
    double hi = 0.0;
    bool include_hi = true;

    [[nodiscard]] bool contains(double x) const { return x >= lo && (include_hi ? x <= hi : x < hi); }

    /// |x - mu| <= half_width.
    [[nodiscard]] static FitWindow around(double mu, double half_width);
    /// Half-open window of width `j` centred at mu: [mu - j/2, mu + j/2).
    [[nodiscard]] static FitWindow central_peak(double mu, int j);
};

/// Monte Carlo resolution cut-off 10 / (R N) for log-linear fits.
[[nodiscard]] double probability_floor(int runs, int channels);

struct LaplaceFit {
    double inv_a = 0.0; ///< 1/a, clamped at 0
    double slope = 0.0; ///< raw d ln P / d|x - mu|
    double C = 0.0;
    double mu = 0.0;
    double r_squared = 0.0;
    FitWindow window;
    int points = 0;
};

/**
 * Fit P(x) = C exp(-|x - mu| / a) by least squares of ln P against |x - mu|
 * over window entries with P > floor.
 *
 * FixedAtOrigin takes mu = `origin`; Free takes mu at the most probable
 * channel inside the window. Throws std::invalid_argument when fewer than
 * three entries pass the floor, or any entry in the window is negative.
 */
[[nodiscard]] LaplaceFit laplace_fit(std::span<const double> dist, const FitWindow &window,
                                     CenterMode center_mode, double origin, double floor = 0.0);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares. Throws std::invalid_argument for fewer than two
/// points, mismatched lengths, or constant xs.
[[nodiscard]] LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

struct CollapseInput {
    double p = 0.0;
    int j = 0;
    double variance = 0.0;
};

struct CollapsePoint {
    double x = 0.0; ///< p * j^alpha
    double y = 0.0; ///< j^-beta * Var
    double alpha = 0.0;
    double beta = 0.0;
    int j = 0;
};

inline constexpr double kCollapseAlpha = 1.04;
inline constexpr double kCollapseBeta = 1.67;

[[nodiscard]] std::vector<CollapsePoint> collapse_points(std::span<const CollapseInput> rows,
                                                         double alpha = kCollapseAlpha,
                                                         double beta = kCollapseBeta);

using Curve = std::vector<std::pair<double, double>>;

/**
 * RMS over a common x grid of the standard deviation across curves, divided
 * by the y-range of all points. Curves are linearly interpolated on
 * `grid_points` equally spaced x values inside their common x overlap.
 * Throws std::invalid_argument with fewer than two curves or no overlap.
 */
[[nodiscard]] double collapse_spread(const std::vector<Curve> &curves, int grid_points = 25);

/// Curves sampled on a shared abscissa: RMS over abscissae of the
/// coefficient of variation across curves.
[[nodiscard]] double relative_spread(const std::vector<std::vector<double>> &curves);

struct ExponentSearch {
    double alpha = 0.0;
    double beta = 0.0;
    double spread = 0.0;
};

/// Grid search of (alpha, beta) minimising collapse_spread of the j curves.
[[nodiscard]] ExponentSearch fit_collapse_exponents(std::span<const CollapseInput> rows,
                                                    std::span<const double> alphas,
                                                    std::span<const double> betas);

/// x of the smallest y after a least-squares quadratic through the five
/// points nearest (in x order) to the raw minimum. Throws
/// std::invalid_argument for fewer than five points or when the raw minimum
/// sits at either end.
[[nodiscard]] double ushape_minimum(std::vector<std::pair<double, double>> points);

/// Pearson statistic sum (O - E)^2 / E over cells with E > 0.
[[nodiscard]] double chi_square_statistic(std::span<const double> observed,
                                          std::span<const double> expected);
/// Upper-tail probability of a chi-square variate with `dof` degrees of freedom.
[[nodiscard]] double chi_square_sf(double statistic, double dof);

// Shape helpers.

/// Centred moving average with window `width` (odd widths are symmetric),
/// cyclic at the ends.
[[nodiscard]] std::vector<double> moving_average(std::span<const double> dist, int width);
/// Indices k with dist[k] strictly above both cyclic neighbours (plateaus
/// count once, at their first index).
[[nodiscard]] std::vector<int> local_maxima(std::span<const double> dist);
/// Cyclic autocorrelation of the mean-subtracted distribution, normalised to 1 at lag 0.
[[nodiscard]] double autocorrelation(std::span<const double> dist, int lag);

} // namespace qwalk::stats
