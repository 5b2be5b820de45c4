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

#include "qwalk/walk_core.hpp"

#include <cmath>
#include <algorithm>
#include <stdexcept>
#include <string>

namespace qwalk {

namespace {

long wrap(long n, long N) {
    const long r = n % N;
    return r < 0 ? r + N : r;
}

/// Reduce a position into [-N/2, N/2).
int reduce_position(long n, int N) {
    return static_cast<int>(wrap(n + N / 2, N)) - N / 2;
}

bool is_odd(long n) { return (n & 1L) != 0; }

double sum_norm(std::span<const complex_t> a) {
    double s = 0.0;
    for (const auto &z : a) {
        s += std::norm(z);
    }
    return s;
}

} // namespace

CoinMatrix CoinMatrix::hadamard() {
    const double h = 1.0 / std::sqrt(2.0);
    return CoinMatrix{{complex_t{h}, complex_t{h}, complex_t{h}, complex_t{-h}}};
}

double CoinMatrix::unitarity_defect() const {
    double worst = 0.0;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            complex_t s{};
            for (int k = 0; k < 2; ++k) {
                s += (*this)(r, k) * std::conj((*this)(c, k));
            }
            const complex_t expected = r == c ? complex_t{1.0} : complex_t{0.0};
            worst = std::max(worst, std::abs(s - expected));
        }
    }
    return worst;
}

double ChannelState::norm_squared() const { return sum_norm(amplitudes); }

ChannelState ChannelState::localized(int N, double channel, int time) {
    validate_cycle_size(N);
    ChannelState s;
    s.amplitudes.assign(static_cast<std::size_t>(N), complex_t{});
    s.amplitudes[static_cast<std::size_t>(slot_of_channel(N, channel))] = 1.0;
    s.time = time;
    return s;
}

double VertexState::norm_squared() const { return sum_norm(amplitudes); }

complex_t &VertexState::at(int position, Chirality c) {
    const long N = positions();
    return amplitudes[static_cast<std::size_t>(2 * wrap(position, N) + static_cast<int>(c))];
}

complex_t VertexState::at(int position, Chirality c) const {
    const long N = positions();
    return amplitudes[static_cast<std::size_t>(2 * wrap(position, N) + static_cast<int>(c))];
}

VertexState VertexState::localized(int N, int position, Chirality c, int time) {
    validate_cycle_size(N);
    VertexState s;
    s.amplitudes.assign(static_cast<std::size_t>(2 * N), complex_t{});
    s.at(position, c) = 1.0;
    s.time = time;
    return s;
}

void validate_cycle_size(int N) {
    if (N <= 2 || is_odd(N)) {
        throw std::invalid_argument("cycle size N must be even and greater than 2 (got " +
                                    std::to_string(N) + ")");
    }
}

double channel_coordinate(int N, int slot) { return slot - N / 2 + 0.5; }

int slot_of_channel(int N, double channel) {
    const double floor_part = std::floor(channel);
    if (channel - floor_part != 0.5) {
        throw std::invalid_argument("channel label must be a half-integer (got " +
                                    std::to_string(channel) + ")");
    }
    return slot_of_floor(N, static_cast<long>(floor_part));
}

int slot_of_floor(int N, long n) { return static_cast<int>(wrap(n + N / 2, N)); }

int default_cycle_size(int T) {
    const int n = 2 * T + 16;
    return n + (n & 1);
}

VertexLabel channel_to_vertex(int N, int slot, int t) {
    if (slot < 0 || slot >= N) {
        throw std::out_of_range("channel slot " + std::to_string(slot) + " outside [0, " +
                                std::to_string(N) + ")");
    }
    const long n = slot - N / 2;
    // Even n: L at n for even t, R at n+1 for odd t; odd n is the mirror case.
    const bool left = is_odd(n) == is_odd(t);
    if (left) {
        return {reduce_position(n, N), Chirality::L};
    }
    return {reduce_position(n + 1, N), Chirality::R};
}

int vertex_to_channel(int N, VertexLabel v, int t) {
    if (is_odd(v.position) != is_odd(t)) {
        throw std::domain_error("vertex position " + std::to_string(v.position) +
                                " has the wrong parity for time " + std::to_string(t));
    }
    const long n = v.chirality == Chirality::L ? v.position : v.position - 1L;
    return slot_of_floor(N, n);
}

VertexState to_vertex_state(const ChannelState &s) {
    const int N = static_cast<int>(s.size());
    validate_cycle_size(N);
    VertexState v;
    v.amplitudes.assign(2 * s.size(), complex_t{});
    v.time = s.time;
    for (int k = 0; k < N; ++k) {
        const auto label = channel_to_vertex(N, k, s.time);
        v.at(label.position, label.chirality) = s.amplitudes[static_cast<std::size_t>(k)];
    }
    return v;
}

ChannelState to_channel_state(const VertexState &v, double tolerance) {
    const int N = v.positions();
    validate_cycle_size(N);
    ChannelState s;
    s.amplitudes.assign(static_cast<std::size_t>(N), complex_t{});
    s.time = v.time;
    for (int n = -N / 2; n < N / 2; ++n) {
        for (auto c : {Chirality::R, Chirality::L}) {
            const complex_t a = v.at(n, c);
            if (is_odd(n) != is_odd(v.time)) {
                if (std::abs(a) > tolerance) {
                    throw std::domain_error("vertex state has weight outside the parity-allowed "
                                            "subspace at time " +
                                            std::to_string(v.time));
                }
                continue;
            }
            s.amplitudes[static_cast<std::size_t>(vertex_to_channel(N, {n, c}, v.time))] = a;
        }
    }
    return s;
}

VertexState step_vertex(const VertexState &s, const CoinMatrix &coin) {
    const int N = s.positions();
    VertexState out;
    out.amplitudes.assign(s.amplitudes.size(), complex_t{});
    out.time = s.time + 1;
    for (int n = 0; n < N; ++n) {
        const complex_t r = s.at(n, Chirality::R);
        const complex_t l = s.at(n, Chirality::L);
        const complex_t r_out = coin(0, 0) * r + coin(0, 1) * l;
        const complex_t l_out = coin(1, 0) * r + coin(1, 1) * l;
        out.at(n + 1, Chirality::R) += l_out;
        out.at(n - 1, Chirality::L) += r_out;
    }
    return out;
}

void step_channel_inplace(std::span<complex_t> amplitudes, int t, const CoinMatrix &coin) {
    const std::size_t N = amplitudes.size();
    const complex_t m00 = coin(0, 0);
    const complex_t m01 = coin(0, 1);
    const complex_t m10 = coin(1, 0);
    const complex_t m11 = coin(1, 1);
    // Vertex m (m = t mod 2) reads R from slot a = m-1+N/2 and L from a+1,
    // and writes R' back to a (it becomes L at m-1) and L' to a+1.
    const std::size_t first = static_cast<std::size_t>(t + 1 + static_cast<int>(N / 2)) & 1U;
    for (std::size_t a = first; a < N; a += 2) {
        const std::size_t b = a + 1 == N ? 0 : a + 1;
        const complex_t x = amplitudes[a];
        const complex_t y = amplitudes[b];
        amplitudes[a] = m00 * x + m01 * y;
        amplitudes[b] = m10 * x + m11 * y;
    }
}

ChannelState step_channel(const ChannelState &s, const CoinMatrix &coin) {
    ChannelState out = s;
    step_channel_inplace(out.amplitudes, s.time, coin);
    out.time = s.time + 1;
    return out;
}

std::vector<double> probabilities(std::span<const complex_t> amplitudes) {
    std::vector<double> p(amplitudes.size());
    for (std::size_t k = 0; k < amplitudes.size(); ++k) {
        p[k] = std::norm(amplitudes[k]);
    }
    return p;
}

} // namespace qwalk
