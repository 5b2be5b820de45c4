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
 * Walker states on a cycle of N channels and the unperturbed Hadamard step.
 *
 * Two equivalent pictures are kept side by side. In the vertex picture a
 * basis state is |n, c> with n a beam-splitter position and c in {R, L}.
 * In the channel picture a basis state is an edge between neighbouring
 * positions, labelled by the half-integer n + 1/2. The map between them
 * depends on the parity of the time step:
 *
 *   n even:  |n+1/2; t> = |n, L>    (t even),   |n+1, R>  (t odd)
 *   n odd:   |n+1/2; t> = |n+1, R>  (t even),   |n, L>    (t odd)
 *
 * Channels are stored in a slot array; slot k holds channel
 * k - N/2 + 1/2, so the origin channels -1/2 and +1/2 sit at slots N/2-1
 * and N/2.
 */

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qwalk {

using complex_t = std::complex<double>;

enum class Chirality : int { R = 0, L = 1 };

/// 2x2 coin acting on the (R, L) components at one vertex. Row/column 0 is R.
struct CoinMatrix {
    std::array<complex_t, 4> m; // row-major: m00 m01 m10 m11

    [[nodiscard]] static CoinMatrix hadamard();

    [[nodiscard]] complex_t operator()(int row, int col) const {
        return m[static_cast<std::size_t>(2 * row + col)];
    }
    /// Largest elementwise deviation of M M^dagger from the identity.
    [[nodiscard]] double unitarity_defect() const;
};

struct VertexLabel {
    int position; ///< reduced into [-N/2, N/2)
    Chirality chirality;

    friend bool operator==(const VertexLabel &, const VertexLabel &) = default;
};

/// Channel-basis pure state. amplitudes[k] is the amplitude on channel
/// k - N/2 + 1/2 at timestep `time`.
struct ChannelState {
    std::vector<complex_t> amplitudes;
    int time = 0;

    [[nodiscard]] std::size_t size() const { return amplitudes.size(); }
    [[nodiscard]] double norm_squared() const;

    /// Basis state on the channel whose half-integer label is `channel`.
    [[nodiscard]] static ChannelState localized(int N, double channel, int time = 0);
};

/// Vertex-basis pure state on a cycle of N positions; index 2*(n mod N) + c.
struct VertexState {
    std::vector<complex_t> amplitudes;
    int time = 0;

    [[nodiscard]] int positions() const { return static_cast<int>(amplitudes.size() / 2); }
    [[nodiscard]] double norm_squared() const;

    [[nodiscard]] complex_t &at(int position, Chirality c);
    [[nodiscard]] complex_t at(int position, Chirality c) const;

    [[nodiscard]] static VertexState localized(int N, int position, Chirality c, int time = 0);
};

// Channel labels.

/// Throws std::invalid_argument unless N is even and N > 2.
void validate_cycle_size(int N);

/// Half-integer coordinate of slot k.
[[nodiscard]] double channel_coordinate(int N, int slot);
/// Slot of the half-integer channel `channel` (must be k + 1/2 for integer k).
[[nodiscard]] int slot_of_channel(int N, double channel);
/// Slot of channel n + 1/2, wrapping n modulo N.
[[nodiscard]] int slot_of_floor(int N, long n);

/// Smallest even N that keeps an unperturbed T-step walk off the seam.
[[nodiscard]] int default_cycle_size(int T);

// Basis mapping.

/// Vertex label that channel slot `slot` represents at time t.
/// Throws std::out_of_range for slot outside [0, N).
[[nodiscard]] VertexLabel channel_to_vertex(int N, int slot, int t);

/// Inverse of channel_to_vertex. Throws std::domain_error when the vertex
/// label has the wrong parity for time t.
[[nodiscard]] int vertex_to_channel(int N, VertexLabel v, int t);

[[nodiscard]] VertexState to_vertex_state(const ChannelState &s);
/// Throws std::domain_error if `v` carries weight off the parity-allowed subspace.
[[nodiscard]] ChannelState to_channel_state(const VertexState &v, double tolerance = 0.0);

// Evolution.

/// Coin then shift: C = I (x) M, S|n,L> = |n+1,R>, S|n,R> = |n-1,L>.
[[nodiscard]] VertexState step_vertex(const VertexState &s,
                                      const CoinMatrix &coin = CoinMatrix::hadamard());

/// Brick-wall mixing of channel pairs (n-1/2, n+1/2) for every n with
/// n = t (mod 2), in place. `t` is the time before the step.
void step_channel_inplace(std::span<complex_t> amplitudes, int t,
                          const CoinMatrix &coin = CoinMatrix::hadamard());

[[nodiscard]] ChannelState step_channel(const ChannelState &s,
                                        const CoinMatrix &coin = CoinMatrix::hadamard());

/// |amplitude|^2 per channel slot.
[[nodiscard]] std::vector<double> probabilities(std::span<const complex_t> amplitudes);

} // namespace qwalk
