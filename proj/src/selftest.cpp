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

#include "qwalk/selftest.hpp"

#include "qwalk/disorder.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace qwalk {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

SelftestCheck check_unitarity(const SelftestOptions &opt) {
    const double defect = opt.coin.unitarity_defect();
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
        ChannelState st{random_unit_state(64, opt.seed + static_cast<std::uint64_t>(s)), 0};
        for (int t = 0; t < 50; ++t) {
            st = step_channel(st, opt.coin);
            worst = std::max(worst, std::abs(st.norm_squared() - 1.0));
        }
    }
    const bool ok = defect < 1e-14 && worst < 1e-12;
    return {"coin unitarity", ok, "|MM^+ - I| = " + fmt(defect) + ", max norm drift " + fmt(worst)};
}

SelftestCheck check_partition_function() {
    double worst = 0.0;
    int cases = 0;
    for (int N = 4; N <= 12; ++N) {
        for (int j = 1; j < N; ++j) {
            if (N / std::gcd(N, j) <= 2) {
                continue;
            }
            for (double p : {0.1, 0.3, 0.7}) {
                const DisorderParams params{N, j, p, DisorderMode::Static};
                const double z = partition_function(params);
                const double zb = partition_function_bruteforce(params);
                worst = std::max(worst, std::abs(z - zb) / std::abs(zb));
                ++cases;
            }
        }
    }
    return {"partition function vs enumeration", worst <= 1e-12,
            std::to_string(cases) + " cases, max rel err " + fmt(worst)};
}

SelftestCheck check_matching_counts() {
    bool ok = true;
    std::string detail = "M = 3..12";
    for (int M = 3; M <= 12 && ok; ++M) {
        std::map<std::size_t, std::uint64_t> counts;
        for_each_jump_set(M, 1, [&](const JumpSet &s) { ++counts[s.transpositions()]; });
        for (int k = 0; k <= M / 2; ++k) {
            if (counts[static_cast<std::size_t>(k)] != matching_count(M, k)) {
                ok = false;
                detail = "mismatch at M=" + std::to_string(M) + ", k=" + std::to_string(k);
                break;
            }
        }
    }
    return {"matching counts vs enumeration", ok, detail};
}

SelftestCheck check_sampler(const SelftestOptions &opt) {
    const DisorderParams params{8, 1, 0.3, DisorderMode::Static};
    std::map<JumpSet, std::size_t> index;
    std::vector<double> expected;
    for_each_jump_set(params.N, params.j, [&](const JumpSet &s) {
        index.emplace(s, expected.size());
        expected.push_back(jump_set_probability(s, params));
    });
    std::vector<double> observed(expected.size(), 0.0);
    const JumpSampler sampler(params);
    Rng rng(derive_seed(opt.seed, 1, 0));
    JumpSet s;
    bool unknown = false;
    for (int i = 0; i < opt.chi_square_samples; ++i) {
        sampler.sample_into(rng, s);
        auto it = index.find(s);
        if (it == index.end()) {
            unknown = true;
            break;
        }
        observed[it->second] += 1.0;
    }
    for (auto &e : expected) {
        e *= opt.chi_square_samples;
    }
    const double chi2 = stats::chi_square_statistic(observed, expected);
    const double pvalue = stats::chi_square_sf(chi2, static_cast<double>(expected.size() - 1));
    return {"sampler chi-square (N=8, j=1, p=0.3)", !unknown && pvalue > 1e-3,
            "chi2 = " + fmt(chi2) + ", p-value " + fmt(pvalue)};
}

SelftestCheck check_oracle(const SelftestOptions &opt) {
    constexpr int N = 64;
    double worst = 0.0;
    for (int s = 0; s < 5; ++s) {
        ChannelState ch{random_unit_state(N, opt.seed + 100 + static_cast<std::uint64_t>(s)), 0};
        VertexState v = to_vertex_state(ch);
        for (int t = 0; t < 50; ++t) {
            ch = step_channel(ch, opt.coin);
            v = step_vertex(v, opt.coin);
            const ChannelState mapped = to_channel_state(v, 1e-12);
            for (int k = 0; k < N; ++k) {
                worst = std::max(worst, std::abs(mapped.amplitudes[static_cast<std::size_t>(k)] -
                                                 ch.amplitudes[static_cast<std::size_t>(k)]));
            }
        }
    }
    return {"channel/vertex oracle equivalence", worst <= 1e-12, "max |diff| " + fmt(worst)};
}

SelftestCheck check_identities() {
    std::vector<double> delta(16, 0.0);
    delta[3] = 1.0;
    std::vector<double> uniform(16, 1.0 / 16);
    std::vector<double> pair(16, 0.0);
    pair[8 - 3] = 0.5; // coordinates -2.5 and +3.5 around a mean of 0.5
    pair[8 + 3] = 0.5;
    const bool ok = stats::position_variance(delta) == 0.0 && stats::shannon_entropy(delta) == 0.0 &&
                    std::abs(stats::shannon_entropy(uniform) - std::log(16.0)) < 1e-12 &&
                    std::abs(stats::tsallis_entropy(uniform, 2.0) - (1.0 - 1.0 / 16)) < 1e-12 &&
                    std::abs(stats::position_variance(pair) - 9.0) < 1e-12;
    return {"entropy and variance identities", ok, ok ? "ok" : "identity violated"};
}

SelftestCheck check_jump_involution(const SelftestOptions &opt) {
    const DisorderParams params{32, 5, 0.4, DisorderMode::Static};
    Rng rng(derive_seed(opt.seed, 2, 0));
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const JumpSet s = sample_jump_set(params, rng);
        const ChannelState st{random_unit_state(32, opt.seed + 200 + static_cast<std::uint64_t>(i)), 0};
        const ChannelState twice = apply_jumps(apply_jumps(st, s, params.j), s, params.j);
        for (std::size_t k = 0; k < st.size(); ++k) {
            worst = std::max(worst, std::abs(twice.amplitudes[k] - st.amplitudes[k]));
        }
    }
    return {"jump involution", worst == 0.0, "max |diff| " + fmt(worst)};
}

} // namespace

bool SelftestReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.passed; });
}

std::vector<complex_t> random_unit_state(int N, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<complex_t> a(static_cast<std::size_t>(N));
    double norm = 0.0;
    for (auto &z : a) {
        z = {gauss(rng), gauss(rng)};
        norm += std::norm(z);
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto &z : a) {
        z *= scale;
    }
    return a;
}

SelftestReport run_selftest(const SelftestOptions &options) {
    SelftestReport report;
    report.checks.push_back(check_unitarity(options));
    report.checks.push_back(check_partition_function());
    report.checks.push_back(check_matching_counts());
    report.checks.push_back(check_sampler(options));
    report.checks.push_back(check_oracle(options));
    report.checks.push_back(check_identities());
    report.checks.push_back(check_jump_involution(options));
    return report;
}

} // namespace qwalk
