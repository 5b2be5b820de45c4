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

#pragma once

#include <cstdint>
#include <random>

namespace qwalk {

using Rng = std::mt19937_64;

/// Stream key for (master seed, run, step). Stateless, so any run or step
/// can be regenerated independently of evaluation order.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run,
                                                  std::uint64_t step) noexcept {
    // splitmix64 finaliser applied to each word in turn
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(master);
    h = mix(h ^ run);
    h = mix(h ^ (step * 0xd1b54a32d192ed03ULL));
    return h;
}

[[nodiscard]] inline Rng make_rng(std::uint64_t master, std::uint64_t run, std::uint64_t step) {
    return Rng{derive_seed(master, run, step)};
}

/// Uniform double in [0, 1) from the top 53 bits.
[[nodiscard]] inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace qwalk
