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

#include "qwalk/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qwalk {

namespace {

__extension__ using u128 = unsigned __int128;

std::uint64_t binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    u128 r = 1;
    for (long i = 0; i < k; ++i) {
        r = r * static_cast<u128>(n - i) / static_cast<u128>(i + 1);
        if (r > std::numeric_limits<std::uint64_t>::max()) {
            throw std::overflow_error("binomial coefficient exceeds 64 bits");
        }
    }
    return static_cast<std::uint64_t>(r);
}

void check_cycle_structure(int N, int j) {
    if (N < 2) {
        throw std::invalid_argument("N must be at least 2 (got " + std::to_string(N) + ")");
    }
    if (j <= 0 || j >= N) {
        throw std::invalid_argument("jump size j must satisfy 0 < j < N (got j=" +
                                    std::to_string(j) + ", N=" + std::to_string(N) + ")");
    }
}

void check_probability(double p, bool allow_one) {
    const bool ok = allow_one ? (p >= 0.0 && p <= 1.0) : (p >= 0.0 && p < 1.0);
    if (!ok) {
        throw std::invalid_argument(std::string("p must lie in [0, 1") + (allow_one ? "]" : ")") +
                                    " (got " + std::to_string(p) + ")");
    }
}

// Looser than DisorderParams::validate: p = 1 is a well-defined measure
// (perfect matchings only) whenever every orbit has even length.
void validate_measure(const DisorderParams &params) {
    if (params.N <= 2) {
        throw std::invalid_argument("N must exceed 2 (got " + std::to_string(params.N) + ")");
    }
    check_cycle_structure(params.N, params.j);
    const int M = params.cycle_length();
    if (M <= 2) {
        throw std::invalid_argument("N/gcd(N,j) must exceed 2 (N=" + std::to_string(params.N) +
                                    ", j=" + std::to_string(params.j) + ")");
    }
    check_probability(params.p, true);
    if (params.p == 1.0 && M % 2 != 0) {
        throw std::invalid_argument("p = 1 with odd N/gcd(N,j) has Z = 0");
    }
}

double weight(int N, std::size_t k, double p) {
    return std::pow(p, static_cast<double>(k)) *
           std::pow(1.0 - p, static_cast<double>(N) - 2.0 * static_cast<double>(k));
}

} // namespace

std::string_view to_string(DisorderMode mode) {
    return mode == DisorderMode::Static ? "static" : "dynamic";
}

DisorderMode parse_disorder_mode(std::string_view text) {
    if (text == "static") {
        return DisorderMode::Static;
    }
    if (text == "dynamic") {
        return DisorderMode::Dynamic;
    }
    throw std::invalid_argument("mode must be 'static' or 'dynamic' (got '" + std::string(text) +
                                "')");
}

void DisorderParams::validate() const {
    if (N <= 2) {
        throw std::invalid_argument("N must exceed 2 (got " + std::to_string(N) + ")");
    }
    check_cycle_structure(N, j);
    if (N / gcd() <= 2) {
        throw std::invalid_argument("N/gcd(N,j) must exceed 2 (N=" + std::to_string(N) +
                                    ", j=" + std::to_string(j) + ")");
    }
    check_probability(p, false);
}

int DisorderParams::gcd() const { return std::gcd(N, j); }

bool is_non_incident(const JumpSet &s, int N, int j) {
    if (2 * s.starts.size() > static_cast<std::size_t>(N)) {
        return false;
    }
    std::vector<char> used(static_cast<std::size_t>(N), 0);
    for (int i : s.starts) {
        if (i < 0 || i >= N) {
            return false;
        }
        const auto a = static_cast<std::size_t>(i);
        const auto b = static_cast<std::size_t>((i + j) % N);
        if (used[a] || used[b]) {
            return false;
        }
        used[a] = used[b] = 1;
    }
    return true;
}

CycleDecomposition CycleDecomposition::of(int N, int j) {
    check_cycle_structure(N, j);
    const int g = std::gcd(N, j);
    const int M = N / g;
    CycleDecomposition d;
    d.cycles.resize(static_cast<std::size_t>(g));
    for (int r = 0; r < g; ++r) {
        auto &cycle = d.cycles[static_cast<std::size_t>(r)];
        cycle.reserve(static_cast<std::size_t>(M));
        int v = r;
        for (int m = 0; m < M; ++m) {
            cycle.push_back(v);
            v = (v + j) % N;
        }
    }
    return d;
}

std::uint64_t matching_count(int M, int k) {
    if (M <= 2) {
        throw std::domain_error("matching_count requires a cycle longer than 2 (got M=" +
                                std::to_string(M) + ")");
    }
    if (k < 0 || k > M / 2) {
        throw std::domain_error("transposition count k=" + std::to_string(k) +
                                " outside [0, M/2] for M=" + std::to_string(M));
    }
    return binomial(M - k, k) + binomial(M - k - 1, k - 1);
}

double partition_function(const DisorderParams &params) {
    check_cycle_structure(params.N, params.j);
    check_probability(params.p, true);
    const int g = params.gcd();
    const int M = params.N / g;
    if (M <= 2) {
        throw std::domain_error("closed-form partition function needs N/gcd(N,j) > 2; a 2-cycle "
                                "has Z = p + (1-p)^2 per orbit instead");
    }
    return std::pow(1.0 + std::pow(-params.p, M), g);
}

void for_each_jump_set(int N, int j, const std::function<void(const JumpSet &)> &visit) {
    check_cycle_structure(N, j);
    if (N > kMaxEnumerationSize) {
        throw std::invalid_argument("enumeration refused for N=" + std::to_string(N) +
                                    " (limit " + std::to_string(kMaxEnumerationSize) + ")");
    }
    // On a 2-cycle (i, i+j) and (i+j, i) are the same transposition; keep one.
    const bool two_cycle = N / std::gcd(N, j) == 2;
    std::vector<char> used(static_cast<std::size_t>(N), 0);
    JumpSet current;
    const std::function<void(int)> recurse = [&](int i) {
        if (i == N) {
            visit(current);
            return;
        }
        recurse(i + 1);
        const int partner = (i + j) % N;
        if (two_cycle && partner < i) {
            return;
        }
        auto &ui = used[static_cast<std::size_t>(i)];
        auto &up = used[static_cast<std::size_t>(partner)];
        if (!ui && !up) {
            ui = up = 1;
            current.starts.push_back(i);
            recurse(i + 1);
            current.starts.pop_back();
            ui = up = 0;
        }
    };
    recurse(0);
}

double partition_function_bruteforce(int N, int j, double p) {
    check_probability(p, true);
    double z = 0.0;
    for_each_jump_set(N, j, [&](const JumpSet &s) { z += weight(N, s.transpositions(), p); });
    return z;
}

double partition_function_bruteforce(const DisorderParams &params) {
    return partition_function_bruteforce(params.N, params.j, params.p);
}

double jump_set_probability(const JumpSet &s, const DisorderParams &params) {
    validate_measure(params);
    if (!is_non_incident(s, params.N, params.j)) {
        throw std::domain_error("jump set has incident or out-of-range transpositions");
    }
    return weight(params.N, s.transpositions(), params.p) / partition_function(params);
}

JumpSampler::JumpSampler(const DisorderParams &params)
    : params_(params), decomposition_(CycleDecomposition::of(params.N, params.j)) {
    validate_measure(params_);
    const int M = params_.cycle_length();
    const double p = params_.p;
    const double q = 1.0 - p;

    // W(m) = (1 - (-p)^(m+1)) / (1 + p) lies in [1-p, 1] for p < 1, so the
    // direct recurrence cannot underflow.
    std::vector<double> w(static_cast<std::size_t>(M) + 1);
    w[0] = 1.0;
    w[1] = q;
    for (int m = 2; m <= M; ++m) {
        w[static_cast<std::size_t>(m)] =
            q * w[static_cast<std::size_t>(m - 1)] + p * w[static_cast<std::size_t>(m - 2)];
    }
    stop_prob_.assign(static_cast<std::size_t>(M) + 1, 1.0);
    for (int r = 2; r <= M; ++r) {
        // W(r) = 0 only at p = 1 for odd r, which the sampler never reaches.
        const double wr = w[static_cast<std::size_t>(r)];
        if (wr > 0.0) {
            stop_prob_[static_cast<std::size_t>(r)] = q * w[static_cast<std::size_t>(r - 1)] / wr;
        }
    }
    const double unmatched = q * w[static_cast<std::size_t>(M - 1)];
    const double matched = p * w[static_cast<std::size_t>(M - 2)];
    const double total = unmatched + 2.0 * matched;
    closure_unmatched_ = unmatched / total;
    closure_forward_ = matched / total;
}

void JumpSampler::sample_into(Rng &rng, JumpSet &out) const {
    out.starts.clear();
    if (params_.p == 0.0) {
        return;
    }
    for (const auto &cycle : decomposition_.cycles) {
        const int M = static_cast<int>(cycle.size());
        int lo = 1;
        int hi = M - 1;
        const double u = uniform01(rng);
        if (u >= closure_unmatched_) {
            if (u < closure_unmatched_ + closure_forward_) {
                out.starts.push_back(cycle[0]);
                lo = 2;
            } else {
                out.starts.push_back(cycle[static_cast<std::size_t>(M - 1)]);
                hi = M - 2;
            }
        }
        int i = lo;
        while (i <= hi) {
            const int remaining = hi - i + 1;
            if (remaining >= 2 &&
                uniform01(rng) >= stop_prob_[static_cast<std::size_t>(remaining)]) {
                out.starts.push_back(cycle[static_cast<std::size_t>(i)]);
                i += 2;
            } else {
                i += 1;
            }
        }
    }
    std::sort(out.starts.begin(), out.starts.end());
}

JumpSet JumpSampler::sample(Rng &rng) const {
    JumpSet s;
    sample_into(rng, s);
    return s;
}

JumpSet sample_jump_set(const DisorderParams &params, Rng &rng) {
    return JumpSampler(params).sample(rng);
}

void apply_jumps_inplace(std::span<complex_t> amplitudes, const JumpSet &s, int j) {
    const std::size_t N = amplitudes.size();
    for (int i : s.starts) {
        const auto a = static_cast<std::size_t>(i);
        const auto b = (a + static_cast<std::size_t>(j)) % N;
        std::swap(amplitudes[a], amplitudes[b]);
    }
}

ChannelState apply_jumps(const ChannelState &state, const JumpSet &s, int j) {
    ChannelState out = state;
    apply_jumps_inplace(out.amplitudes, s, j);
    return out;
}

} // namespace qwalk
