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

#include "qwalk/walk_core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qwalk {

struct SelftestOptions {
    CoinMatrix coin = CoinMatrix::hadamard(); ///< swapped out by fault-injection tests
    std::uint64_t seed = 20260101;
    int chi_square_samples = 20000;
};

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelftestReport {
    std::vector<SelftestCheck> checks;

    [[nodiscard]] bool all_passed() const;
};

/// Fast invariant suite: partition function and matching counts against
/// enumeration, sampler chi-square, basis oracle equivalence, coin
/// unitarity, entropy/variance identities, jump involution.
[[nodiscard]] SelftestReport run_selftest(const SelftestOptions &options = {});

/// Unit-norm state with independent Gaussian real and imaginary parts.
[[nodiscard]] std::vector<complex_t> random_unit_state(int N, std::uint64_t seed);

} // namespace qwalk
