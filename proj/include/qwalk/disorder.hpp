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
 * Random jump permutations on a cycle of N channels.
 *
 * A jump set is a product of non-incident transpositions (i, i+j mod N).
 * A set with k transpositions has weight p^k (1-p)^(N-2k); the
 * normalisation is Z = (1 + (-p)^(N/g))^g with g = gcd(N, j).
 */

#pragma once

#include "qwalk/rng.hpp"
#include "qwalk/walk_core.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace qwalk {

enum class DisorderMode { Static, Dynamic };

[[nodiscard]] std::string_view to_string(DisorderMode mode);
/// Throws std::invalid_argument for anything but "static" / "dynamic".
[[nodiscard]] DisorderMode parse_disorder_mode(std::string_view text);

struct DisorderParams {
    int N = 0;
    int j = 1;
    double p = 0.0;
    DisorderMode mode = DisorderMode::Static;

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
    [[nodiscard]] int gcd() const;
    [[nodiscard]] int cycle_length() const { return N / gcd(); }
};

/// Sorted transposition start slots; start i swaps slots i and (i+j) mod N.
struct JumpSet {
    std::vector<int> starts;

    [[nodiscard]] std::size_t transpositions() const { return starts.size(); }
    [[nodiscard]] bool empty() const { return starts.empty(); }
    friend bool operator==(const JumpSet &, const JumpSet &) = default;
    friend auto operator<=>(const JumpSet &, const JumpSet &) = default;
};

/// True when every slot is touched by at most one transposition.
[[nodiscard]] bool is_non_incident(const JumpSet &s, int N, int j);

/// The g = gcd(N, j) orbits of i -> i+j mod N, each starting at its
/// representative 0..g-1.
struct CycleDecomposition {
    std::vector<std::vector<int>> cycles;

    [[nodiscard]] static CycleDecomposition of(int N, int j);
};

/// Number of k-edge matchings on the cycle graph C_M.
/// Throws std::domain_error for M <= 2 or k outside [0, M/2].
[[nodiscard]] std::uint64_t matching_count(int M, int k);

/// Closed form (1 + (-p)^(N/g))^g. Throws std::domain_error when N/g <= 2.
[[nodiscard]] double partition_function(const DisorderParams &params);

/// Largest N accepted by the enumerating routines.
inline constexpr int kMaxEnumerationSize = 20;

/// Calls `visit` once for each valid jump set of (N, j). Throws
/// std::invalid_argument when N exceeds kMaxEnumerationSize.
void for_each_jump_set(int N, int j, const std::function<void(const JumpSet &)> &visit);

/// Sum of p^k (1-p)^(N-2k) over every enumerated jump set. Accepts p in
/// [0, 1]; refuses N > kMaxEnumerationSize.
[[nodiscard]] double partition_function_bruteforce(int N, int j, double p);
[[nodiscard]] double partition_function_bruteforce(const DisorderParams &params);

/// p^|s| (1-p)^(N-2|s|) / Z. Throws std::domain_error for incident sets.
/// Unlike DisorderParams::validate, accepts p = 1 when N/gcd(N,j) is even.
[[nodiscard]] double jump_set_probability(const JumpSet &s, const DisorderParams &params);

/**
 * Exact sampler for the jump-set measure.
 *
 * The measure factorises over the g orbits of i -> i+j, each of which is a
 * cycle of length M = N/g. A matching on C_M is drawn by first classifying
 * orbit vertex 0 as unmatched, matched forward or matched backward, then
 * walking the remaining path left to right with the path weights
 * W(0) = 1, W(1) = 1-p, W(m) = (1-p) W(m-1) + p W(m-2).
 *
 * p = 1 is accepted when N/gcd(N,j) is even (uniform perfect matchings).
 */
class JumpSampler {
  public:
    explicit JumpSampler(const DisorderParams &params);

    [[nodiscard]] JumpSet sample(Rng &rng) const;
    /// Same as sample() but reuses `out`'s storage.
    void sample_into(Rng &rng, JumpSet &out) const;

    [[nodiscard]] const DisorderParams &params() const { return params_; }

  private:
    DisorderParams params_;
    CycleDecomposition decomposition_;
    std::vector<double> stop_prob_; ///< P(path vertex unmatched | r vertices remain)
    double closure_unmatched_ = 1.0;
    double closure_forward_ = 0.0;
};

[[nodiscard]] JumpSet sample_jump_set(const DisorderParams &params, Rng &rng);

/// Swap amplitudes of slots i and (i+j) mod N for each start i, in place.
void apply_jumps_inplace(std::span<complex_t> amplitudes, const JumpSet &s, int j);
[[nodiscard]] ChannelState apply_jumps(const ChannelState &state, const JumpSet &s, int j);

} // namespace qwalk
