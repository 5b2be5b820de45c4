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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qwalk/disorder.hpp"
#include "qwalk/engine.hpp"
#include "qwalk/io.hpp"
#include "qwalk/selftest.hpp"
#include "qwalk/stats.hpp"
#include "qwalk/walk_core.hpp"

namespace py = pybind11;
using namespace qwalk;

namespace {

py::array_t<double> to_array(const std::vector<double> &v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> to_matrix(const std::vector<std::vector<double>> &rows) {
    const auto n = static_cast<py::ssize_t>(rows.size());
    const auto m = static_cast<py::ssize_t>(rows.empty() ? 0 : rows.front().size());
    py::array_t<double> out({n, m});
    auto buf = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < n; ++i) {
        for (py::ssize_t k = 0; k < m; ++k) {
            buf(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        }
    }
    return out;
}

std::vector<double> as_vector(const py::array_t<double, py::array::c_style | py::array::forcecast> &a) {
    if (a.ndim() != 1) {
        throw py::value_error("expected a one-dimensional array");
    }
    return {a.data(), a.data() + a.size()};
}

py::dict series_dict(const DistributionSeries &s) {
    py::dict d;
    d["times"] = s.times;
    d["channels"] = [&] {
        std::vector<double> c;
        for (int k = 0; k < s.config.disorder.N; ++k) {
            c.push_back(channel_coordinate(s.config.disorder.N, k));
        }
        return to_array(c);
    }();
    d["probabilities"] = to_matrix(s.probabilities);
    d["config"] = s.config;
    return d;
}

py::dict row_dict(const SweepRow &r) {
    py::dict d;
    d["p"] = r.p;
    d["j"] = r.j;
    d["N"] = r.N;
    d["ok"] = r.ok;
    d["error"] = r.error;
    d["variance"] = r.variance;
    d["second_moment_injection"] = r.second_moment_injection;
    d["shannon"] = r.shannon;
    d["tsallis2"] = r.tsallis2;
    d["inv_a_whole"] = r.inv_a_whole;
    d["inv_a_peak"] = r.inv_a_peak;
    d["x"] = r.x;
    d["y"] = r.y;
    return d;
}

} // namespace

PYBIND11_MODULE(_qwalk, m) {
    m.doc() = "Disordered discrete-time quantum walk on a cycle of channels";
    m.attr("__version__") = io::library_version();

    // walk core
    py::enum_<Chirality>(m, "Chirality").value("R", Chirality::R).value("L", Chirality::L);

    py::class_<CoinMatrix>(m, "CoinMatrix")
        .def(py::init<>())
        .def_static("hadamard", &CoinMatrix::hadamard)
        .def("__getitem__",
             [](const CoinMatrix &c, std::pair<int, int> rc) {
                 if (rc.first < 0 || rc.first > 1 || rc.second < 0 || rc.second > 1) {
                     throw py::index_error("coin index out of range");
                 }
                 return c(rc.first, rc.second);
             })
        .def("unitarity_defect", &CoinMatrix::unitarity_defect);

    py::class_<VertexLabel>(m, "VertexLabel")
        .def(py::init<>())
        .def(py::init([](int position, Chirality c) { return VertexLabel{position, c}; }))
        .def_readwrite("position", &VertexLabel::position)
        .def_readwrite("chirality", &VertexLabel::chirality)
        .def("__eq__", [](const VertexLabel &a, const VertexLabel &b) { return a == b; })
        .def("__repr__", [](const VertexLabel &v) {
            return "VertexLabel(" + std::to_string(v.position) + ", " +
                   (v.chirality == Chirality::R ? "R" : "L") + ")";
        });

    m.def("channel_coordinate", &channel_coordinate, py::arg("N"), py::arg("slot"));
    m.def("slot_of_channel", &slot_of_channel, py::arg("N"), py::arg("channel"));
    m.def("channel_to_vertex", &channel_to_vertex, py::arg("N"), py::arg("slot"), py::arg("t"));
    m.def("vertex_to_channel", &vertex_to_channel, py::arg("N"), py::arg("vertex"), py::arg("t"));

    m.def(
        "evolve_channel",
        [](std::vector<complex_t> amplitudes, int t0, int steps, const CoinMatrix &coin) {
            for (int t = t0; t < t0 + steps; ++t) {
                step_channel_inplace(amplitudes, t, coin);
            }
            return amplitudes;
        },
        py::arg("amplitudes"), py::arg("t0") = 0, py::arg("steps") = 1,
        py::arg("coin") = CoinMatrix::hadamard(),
        "Apply `steps` brick-wall steps starting at time t0.");

    // disorder
    py::enum_<DisorderMode>(m, "DisorderMode")
        .value("STATIC", DisorderMode::Static)
        .value("DYNAMIC", DisorderMode::Dynamic);

    py::class_<DisorderParams>(m, "DisorderParams")
        .def(py::init([](int N, int j, double p, DisorderMode mode) {
                 return DisorderParams{N, j, p, mode};
             }),
             py::arg("N"), py::arg("j"), py::arg("p"), py::arg("mode") = DisorderMode::Static)
        .def_readwrite("N", &DisorderParams::N)
        .def_readwrite("j", &DisorderParams::j)
        .def_readwrite("p", &DisorderParams::p)
        .def_readwrite("mode", &DisorderParams::mode)
        .def("validate", &DisorderParams::validate)
        .def("cycle_length", &DisorderParams::cycle_length);

    m.def("matching_count", &matching_count, py::arg("M"), py::arg("k"));
    m.def("partition_function", &partition_function, py::arg("params"));
    m.def("partition_function_bruteforce",
          py::overload_cast<int, int, double>(&partition_function_bruteforce), py::arg("N"),
          py::arg("j"), py::arg("p"));
    m.def(
        "jump_set_probability",
        [](const std::vector<int> &starts, const DisorderParams &params) {
            return jump_set_probability(JumpSet{starts}, params);
        },
        py::arg("starts"), py::arg("params"));
    m.def(
        "enumerate_jump_sets",
        [](int N, int j) {
            std::vector<std::vector<int>> out;
            for_each_jump_set(N, j, [&](const JumpSet &s) { out.push_back(s.starts); });
            return out;
        },
        py::arg("N"), py::arg("j"));
    m.def(
        "sample_jump_sets",
        [](const DisorderParams &params, int count, std::uint64_t seed) {
            const JumpSampler sampler(params);
            Rng rng(seed);
            std::vector<std::vector<int>> out;
            out.reserve(static_cast<std::size_t>(count));
            for (int i = 0; i < count; ++i) {
                out.push_back(sampler.sample(rng).starts);
            }
            return out;
        },
        py::arg("params"), py::arg("count"), py::arg("seed") = 0,
        "Draw `count` jump sets; each is the sorted list of transposition starts.");

    // engine
    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init([](const DisorderParams &disorder, int T, int R, double initial_channel,
                         std::uint64_t seed, int record_every, bool allow_wrap, unsigned threads) {
                 RunConfig c;
                 c.disorder = disorder;
                 c.T = T;
                 c.R = R;
                 c.initial_channel = initial_channel;
                 c.seed = seed;
                 c.record_every = record_every;
                 c.allow_wrap = allow_wrap;
                 c.threads = threads;
                 return c;
             }),
             py::arg("disorder"), py::arg("T"), py::arg("R") = 1, py::arg("initial_channel") = 0.5,
             py::arg("seed") = 0, py::arg("record_every") = 1, py::arg("allow_wrap") = false,
             py::arg("threads") = 0)
        .def_readwrite("disorder", &RunConfig::disorder)
        .def_readwrite("T", &RunConfig::T)
        .def_readwrite("R", &RunConfig::R)
        .def_readwrite("initial_channel", &RunConfig::initial_channel)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("record_every", &RunConfig::record_every)
        .def_readwrite("allow_wrap", &RunConfig::allow_wrap)
        .def_readwrite("threads", &RunConfig::threads)
        .def("validate", &RunConfig::validate)
        .def("recorded_times", &RunConfig::recorded_times);

    m.def("with_default_size", &with_default_size, py::arg("config"));
    m.def(
        "run",
        [](const RunConfig &config) {
            DistributionSeries s;
            {
                py::gil_scoped_release release;
                s = run(with_default_size(config));
            }
            return series_dict(s);
        },
        py::arg("config"),
        "Disorder-averaged channel distribution; N = 0 picks a default size.");
    m.def(
        "sweep",
        [](const std::vector<double> &p, const std::vector<int> &j, const RunConfig &base,
           double alpha, double beta) {
            std::vector<SweepRow> rows;
            {
                py::gil_scoped_release release;
                rows = sweep(SweepGrid{p, j}, base, SweepOptions{alpha, beta});
            }
            py::list out;
            for (const auto &r : rows) {
                out.append(row_dict(r));
            }
            return out;
        },
        py::arg("p"), py::arg("j"), py::arg("base"), py::arg("alpha") = stats::kCollapseAlpha,
        py::arg("beta") = stats::kCollapseBeta);

    // stats
    m.def("position_variance", [](py::array_t<double, py::array::c_style | py::array::forcecast> d) {
        return stats::position_variance(as_vector(d));
    });
    m.def("shannon_entropy", [](py::array_t<double, py::array::c_style | py::array::forcecast> d) {
        return stats::shannon_entropy(as_vector(d));
    });
    m.def(
        "tsallis_entropy",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> d, double q) {
            return stats::tsallis_entropy(as_vector(d), q);
        },
        py::arg("dist"), py::arg("q"));
    m.def(
        "laplace_fit",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> d, double lo, double hi,
           bool free_center, double origin, double floor) {
            const auto fit = stats::laplace_fit(
                as_vector(d), stats::FitWindow{lo, hi, true},
                free_center ? stats::CenterMode::Free : stats::CenterMode::FixedAtOrigin, origin,
                floor);
            py::dict r;
            r["inv_a"] = fit.inv_a;
            r["slope"] = fit.slope;
            r["C"] = fit.C;
            r["mu"] = fit.mu;
            r["r_squared"] = fit.r_squared;
            r["points"] = fit.points;
            return r;
        },
        py::arg("dist"), py::arg("lo"), py::arg("hi"), py::arg("free_center") = false,
        py::arg("origin") = 0.5, py::arg("floor") = 0.0);
    m.def("ushape_minimum", &stats::ushape_minimum, py::arg("points"));

    m.def(
        "selftest",
        [](std::uint64_t seed) {
            SelftestOptions options;
            options.seed = seed;
            py::list out;
            for (const auto &c : run_selftest(options).checks) {
                out.append(py::make_tuple(c.name, c.passed, c.detail));
            }
            return out;
        },
        py::arg("seed") = SelftestOptions{}.seed);
}
