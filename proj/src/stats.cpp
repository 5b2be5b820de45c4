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

#include "qwalk/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qwalk::stats {

namespace {

double coordinate(std::size_t N, std::size_t k) {
    return static_cast<double>(k) - static_cast<double>(N / 2) + 0.5;
}

void require_normalized(std::span<const double> dist) {
    const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
        throw std::invalid_argument("distribution is not normalised (sum = " +
                                    std::to_string(total) + ")");
    }
}

double central_moment(std::span<const double> dist, int order) {
    const double mu = position_mean(dist);
    double m = 0.0;
    for (std::size_t k = 0; k < dist.size(); ++k) {
        m += dist[k] * std::pow(coordinate(dist.size(), k) - mu, order);
    }
    return m;
}

double interpolate(const Curve &c, double x) {
    auto it = std::lower_bound(c.begin(), c.end(), x,
                               [](const auto &pt, double v) { return pt.first < v; });
    if (it == c.begin()) {
        return it->second;
    }
    if (it == c.end()) {
        return std::prev(it)->second;
    }
    const auto &[x1, y1] = *it;
    const auto &[x0, y0] = *std::prev(it);
    if (x1 == x0) {
        return y1;
    }
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

/// Solve the 3x3 system a * s = b by Gaussian elimination with partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (a[col][col] == 0.0) {
            throw std::invalid_argument("singular quadratic fit");
        }
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 3; ++c) {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    std::array<double, 3> s{};
    for (int r = 2; r >= 0; --r) {
        double v = b[r];
        for (int c = r + 1; c < 3; ++c) {
            v -= a[r][c] * s[c];
        }
        s[r] = v / a[r][r];
    }
    return s;
}

} // namespace

double position_mean(std::span<const double> dist) {
    require_normalized(dist);
    double m = 0.0;
    for (std::size_t k = 0; k < dist.size(); ++k) {
        m += dist[k] * coordinate(dist.size(), k);
    }
    return m;
}

double position_variance(std::span<const double> dist) {
    // two-pass form; the one-pass E[x^2] - E[x]^2 loses digits on narrow peaks
    return central_moment(dist, 2);
}

double second_moment_about(std::span<const double> dist, double center) {
    require_normalized(dist);
    double m = 0.0;
    for (std::size_t k = 0; k < dist.size(); ++k) {
        const double d = coordinate(dist.size(), k) - center;
        m += dist[k] * d * d;
    }
    return m;
}

double excess_kurtosis(std::span<const double> dist) {
    const double var = central_moment(dist, 2);
    if (var <= 0.0) {
        throw std::invalid_argument("kurtosis of a zero-variance distribution");
    }
    return central_moment(dist, 4) / (var * var) - 3.0;
}

double shannon_entropy(std::span<const double> dist) {
    double s = 0.0;
    for (double p : dist) {
        if (p > 0.0) {
            s -= p * std::log(p);
        }
    }
    return s;
}

double tsallis_entropy(std::span<const double> dist, double q) {
    if (!(q > 0.0)) {
        throw std::domain_error("Tsallis index q must be positive (got " + std::to_string(q) + ")");
    }
    if (q == 1.0) {
        return shannon_entropy(dist);
    }
    double s = 0.0;
    for (double p : dist) {
        if (p > 0.0) {
            s += std::pow(p, q);
        }
    }
    return (1.0 - s) / (q - 1.0);
}

FitWindow FitWindow::around(double mu, double half_width) {
    return {mu - half_width, mu + half_width, true};
}

FitWindow FitWindow::central_peak(double mu, int j) {
    return {mu - 0.5 * j, mu + 0.5 * j, false};
}

double probability_floor(int runs, int channels) {
    return 10.0 / (static_cast<double>(runs) * static_cast<double>(channels));
}

LaplaceFit laplace_fit(std::span<const double> dist, const FitWindow &window,
                       CenterMode center_mode, double origin, double floor) {
    const std::size_t N = dist.size();
    double mu = origin;
    if (center_mode == CenterMode::Free) {
        double best = -1.0;
        for (std::size_t k = 0; k < N; ++k) {
            const double x = coordinate(N, k);
            if (window.contains(x) && dist[k] > best) {
                best = dist[k];
                mu = x;
            }
        }
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = 0; k < N; ++k) {
        const double x = coordinate(N, k);
        if (!window.contains(x)) {
            continue;
        }
        if (dist[k] < 0.0) {
            throw std::invalid_argument("negative probability inside the fit window");
        }
        if (dist[k] > floor && dist[k] > 0.0) {
            xs.push_back(std::abs(x - mu));
            ys.push_back(std::log(dist[k]));
        }
    }
    if (xs.size() < 3) {
        throw std::invalid_argument("Laplace fit needs at least 3 entries above the floor (got " +
                                    std::to_string(xs.size()) + ")");
    }
    LinearFit lf;
    if (std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs.front(); })) {
        throw std::invalid_argument("Laplace fit window has no spread in |x - mu|");
    }
    lf = linear_fit(xs, ys);
    LaplaceFit fit;
    fit.slope = lf.slope;
    fit.inv_a = std::max(0.0, -lf.slope);
    fit.C = std::exp(lf.intercept);
    fit.mu = mu;
    fit.r_squared = lf.r_squared;
    fit.window = window;
    fit.points = static_cast<int>(xs.size());
    return fit;
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw std::invalid_argument("linear_fit: xs and ys differ in length");
    }
    if (xs.size() < 2) {
        throw std::invalid_argument("linear_fit needs at least two points");
    }
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("linear_fit: xs are all equal");
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (f.slope * xs[i] + f.intercept);
        ss_res += r * r;
    }
    f.r_squared = syy == 0.0 ? 1.0 : std::max(0.0, 1.0 - ss_res / syy);
    return f;
}

std::vector<CollapsePoint> collapse_points(std::span<const CollapseInput> rows, double alpha,
                                           double beta) {
    std::vector<CollapsePoint> out;
    out.reserve(rows.size());
    for (const auto &r : rows) {
        const double jj = static_cast<double>(r.j);
        out.push_back({r.p * std::pow(jj, alpha), std::pow(jj, -beta) * r.variance, alpha, beta,
                       r.j});
    }
    return out;
}

double collapse_spread(const std::vector<Curve> &curves_in, int grid_points) {
    if (curves_in.size() < 2) {
        throw std::invalid_argument("collapse_spread needs at least two curves");
    }
    std::vector<Curve> curves = curves_in;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();
    for (auto &c : curves) {
        if (c.empty()) {
            throw std::invalid_argument("collapse_spread: empty curve");
        }
        std::sort(c.begin(), c.end());
        lo = std::max(lo, c.front().first);
        hi = std::min(hi, c.back().first);
        for (const auto &pt : c) {
            ymin = std::min(ymin, pt.second);
            ymax = std::max(ymax, pt.second);
        }
    }
    if (!(hi > lo) || grid_points < 2) {
        throw std::invalid_argument("collapse_spread: curves share no x range");
    }
    const double range = ymax - ymin;
    if (range <= 0.0) {
        return 0.0;
    }
    double acc = 0.0;
    for (int g = 0; g < grid_points; ++g) {
        const double x = lo + (hi - lo) * g / (grid_points - 1);
        double s = 0.0;
        double s2 = 0.0;
        for (const auto &c : curves) {
            const double y = interpolate(c, x);
            s += y;
            s2 += y * y;
        }
        const double n = static_cast<double>(curves.size());
        const double var = std::max(0.0, s2 / n - (s / n) * (s / n));
        acc += var;
    }
    return std::sqrt(acc / grid_points) / range;
}

double relative_spread(const std::vector<std::vector<double>> &curves) {
    if (curves.size() < 2) {
        throw std::invalid_argument("relative_spread needs at least two curves");
    }
    const std::size_t len = curves.front().size();
    if (len == 0) {
        throw std::invalid_argument("relative_spread: empty curves");
    }
    for (const auto &c : curves) {
        if (c.size() != len) {
            throw std::invalid_argument("relative_spread: curves differ in length");
        }
    }
    const double n = static_cast<double>(curves.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        double s = 0.0;
        double s2 = 0.0;
        for (const auto &c : curves) {
            s += c[i];
            s2 += c[i] * c[i];
        }
        const double mean = s / n;
        const double var = std::max(0.0, s2 / n - mean * mean);
        const double cv = mean != 0.0 ? std::sqrt(var) / std::abs(mean) : 0.0;
        acc += cv * cv;
    }
    return std::sqrt(acc / static_cast<double>(len));
}

ExponentSearch fit_collapse_exponents(std::span<const CollapseInput> rows,
                                      std::span<const double> alphas,
                                      std::span<const double> betas) {
    ExponentSearch best{0.0, 0.0, std::numeric_limits<double>::infinity()};
    for (double a : alphas) {
        for (double b : betas) {
            std::map<int, Curve> by_j;
            for (const auto &pt : collapse_points(rows, a, b)) {
                by_j[pt.j].emplace_back(pt.x, pt.y);
            }
            std::vector<Curve> curves;
            for (auto &[j, c] : by_j) {
                curves.push_back(std::move(c));
            }
            const double s = collapse_spread(curves);
            if (s < best.spread) {
                best = {a, b, s};
            }
        }
    }
    return best;
}

double ushape_minimum(std::vector<std::pair<double, double>> points) {
    if (points.size() < 5) {
        throw std::invalid_argument("ushape_minimum needs at least five points");
    }
    std::sort(points.begin(), points.end());
    const auto it = std::min_element(points.begin(), points.end(),
                                     [](const auto &a, const auto &b) { return a.second < b.second; });
    const auto idx = static_cast<std::size_t>(it - points.begin());
    if (idx == 0 || idx + 1 == points.size()) {
        throw std::invalid_argument("ushape_minimum: data are monotone, no interior minimum");
    }
    const std::size_t start = std::min(idx > 2 ? idx - 2 : 0, points.size() - 5);
    const double x0 = points[idx].first;
    std::array<std::array<double, 3>, 3> a{};
    std::array<double, 3> b{};
    for (std::size_t i = start; i < start + 5; ++i) {
        const double u = points[i].first - x0;
        const std::array<double, 3> basis{u * u, u, 1.0};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                a[r][c] += basis[r] * basis[c];
            }
            b[r] += basis[r] * points[i].second;
        }
    }
    const auto coef = solve3(a, b);
    if (coef[0] <= 0.0) {
        return x0;
    }
    const double xv = x0 - coef[1] / (2.0 * coef[0]);
    return std::clamp(xv, points[start].first, points[start + 4].first);
}

double chi_square_statistic(std::span<const double> observed, std::span<const double> expected) {
    if (observed.size() != expected.size()) {
        throw std::invalid_argument("chi_square_statistic: length mismatch");
    }
    double chi2 = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] > 0.0) {
            const double d = observed[i] - expected[i];
            chi2 += d * d / expected[i];
        } else if (observed[i] > 0.0) {
            return std::numeric_limits<double>::infinity();
        }
    }
    return chi2;
}

double chi_square_sf(double statistic, double dof) {
    if (!(dof > 0.0)) {
        throw std::invalid_argument("chi_square_sf needs positive degrees of freedom");
    }
    if (statistic <= 0.0) {
        return 1.0;
    }
    if (std::isinf(statistic)) {
        return 0.0;
    }
    return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

std::vector<double> moving_average(std::span<const double> dist, int width) {
    const auto N = static_cast<long>(dist.size());
    std::vector<double> out(dist.size(), 0.0);
    if (N == 0 || width <= 1) {
        out.assign(dist.begin(), dist.end());
        return out;
    }
    const long left = (width - 1) / 2;
    for (long k = 0; k < N; ++k) {
        double s = 0.0;
        for (long d = -left; d < width - left; ++d) {
            s += dist[static_cast<std::size_t>(((k + d) % N + N) % N)];
        }
        out[static_cast<std::size_t>(k)] = s / width;
    }
    return out;
}

std::vector<int> local_maxima(std::span<const double> dist) {
    const auto N = static_cast<long>(dist.size());
    std::vector<int> out;
    if (N < 3) {
        return out;
    }
    auto at = [&](long k) { return dist[static_cast<std::size_t>(((k % N) + N) % N)]; };
    for (long k = 0; k < N; ++k) {
        if (!(at(k) > at(k - 1))) {
            continue;
        }
        long e = k;
        while (e - k < N && at(e + 1) == at(k)) {
            ++e;
        }
        if (at(e + 1) < at(k)) {
            out.push_back(static_cast<int>(k));
        }
    }
    return out;
}

double autocorrelation(std::span<const double> dist, int lag) {
    const std::size_t N = dist.size();
    if (N == 0) {
        throw std::invalid_argument("autocorrelation of an empty distribution");
    }
    const double mean = std::accumulate(dist.begin(), dist.end(), 0.0) / static_cast<double>(N);
    double c0 = 0.0;
    double cl = 0.0;
    const auto shift = static_cast<std::size_t>(((lag % static_cast<long>(N)) + static_cast<long>(N)) %
                                                static_cast<long>(N));
    for (std::size_t k = 0; k < N; ++k) {
        const double a = dist[k] - mean;
        c0 += a * a;
        cl += a * (dist[(k + shift) % N] - mean);
    }
    return c0 == 0.0 ? 0.0 : cl / c0;
}

} // namespace qwalk::stats
