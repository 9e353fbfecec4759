// Copyright 2026 The hawkesq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "hawkesq/config.hpp"
#include "hawkesq/constants.hpp"
#include "hawkesq/error.hpp"
#include "hawkesq/experiments.hpp"
#include "hawkesq/goliq.hpp"
#include "hawkesq/hawkes.hpp"
#include "hawkesq/lambert_w.hpp"
#include "hawkesq/queue.hpp"

namespace py = pybind11;
using namespace hawkesq;

namespace {

StreamInit init_for(bool warm, double warm_tol) {
  return warm ? StreamInit::warm(warm_tol) : StreamInit::empty();
}

py::dict arrivals_to_dict(const std::vector<Arrival>& arrivals) {
  const auto n = static_cast<py::ssize_t>(arrivals.size());
  py::array_t<double> t(n), size(n);
  py::array_t<std::int64_t> cluster(n);
  auto tt = t.mutable_unchecked<1>();
  auto ss = size.mutable_unchecked<1>();
  auto cc = cluster.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < n; ++i) {
    tt(i) = arrivals[i].t;
    ss(i) = arrivals[i].size;
    cc(i) = arrivals[i].cluster_id;
  }
  py::dict d;
  d["t"] = t;
  d["size"] = size;
  d["cluster_id"] = cluster;
  return d;
}

py::dict cycle_to_dict(const GoliqCycle& c) {
  py::dict d;
  d["k"] = c.k;
  d["mu"] = c.mu;
  d["length"] = c.length;
  d["eta"] = c.eta;
  d["gradient"] = c.gradient;
  d["int_w"] = c.int_w;
  d["cost"] = c.cost;
  d["cum_cost"] = c.cum_cost;
  d["elapsed"] = c.elapsed;
  return d;
}

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_hawkesq, m) {
  m.doc() = "Hawkes-driven fluid queues and online staffing";

  auto config_error = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<Unstable>(m, "Unstable", config_error.ptr());
  py::register_exception<InvalidHorizon>(m, "InvalidHorizon", config_error.ptr());
  py::register_exception<InsufficientData>(m, "InsufficientData", config_error.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<OutOfDomain>(m, "OutOfDomain", numerical.ptr());
  py::register_exception<NoRoot>(m, "NoRoot", numerical.ptr());

  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("index"));

  py::class_<ExcitationKernel>(m, "ExcitationKernel")
      .def_static("exponential", &ExcitationKernel::exponential, py::arg("alpha"), py::arg("beta"))
      .def_static("gamma_shape2", &ExcitationKernel::gamma_shape2, py::arg("alpha"),
                  py::arg("beta"))
      .def_property_readonly("alpha", &ExcitationKernel::alpha)
      .def_property_readonly("beta", &ExcitationKernel::beta)
      .def_property_readonly("branching_ratio", &ExcitationKernel::branching_ratio)
      .def("excitation", &ExcitationKernel::excitation);

  py::class_<ServiceDistribution>(m, "ServiceDistribution")
      .def_static("exponential", &ServiceDistribution::exponential)
      .def_static("erlang", &ServiceDistribution::erlang, py::arg("phases"))
      .def_static("deterministic", &ServiceDistribution::deterministic)
      .def_static("lognormal", &ServiceDistribution::lognormal, py::arg("sigma"))
      .def("mgf", &ServiceDistribution::mgf)
      .def_property_readonly("second_moment", &ServiceDistribution::second_moment)
      .def_property_readonly("name", &ServiceDistribution::name);

  py::class_<HawkesParams>(m, "HawkesParams")
      .def(py::init([](double lambda0, const ExcitationKernel& kernel,
                       const ServiceDistribution& service) {
             return HawkesParams{lambda0, kernel, service};
           }),
           py::arg("lambda0"), py::arg("kernel"), py::arg("service"))
      .def_readwrite("lambda0", &HawkesParams::lambda0)
      .def_readwrite("kernel", &HawkesParams::kernel)
      .def_readwrite("service", &HawkesParams::service)
      .def_property_readonly("arrival_rate", &HawkesParams::arrival_rate);

  m.def(
      "simulate_arrivals",
      [](const HawkesParams& p, double horizon, std::uint64_t seed, bool warm, double warm_tol) {
        if (!(horizon > 0.0)) throw InvalidHorizon("horizon must be positive");
        HawkesStream s(p, init_for(warm, warm_tol), seed);
        return arrivals_to_dict(s.next_until(horizon));
      },
      py::arg("params"), py::arg("horizon"), py::arg("seed"), py::arg("warm") = true,
      py::arg("warm_tol") = 1e-3, "Arrival times, job sizes and cluster ids on (0, horizon].");

  m.def(
      "simulate_queue",
      [](const HawkesParams& p, double mu, double horizon, std::uint64_t seed, double w0,
         double x0, bool warm) {
        HawkesStream s(p, init_for(warm, 1e-3), seed);
        const auto r = evolve(QueueState::at(0.0, w0, x0), s, mu, horizon);
        py::dict d;
        d["int_w"] = r.path.int_w;
        d["int_x"] = r.path.int_x;
        d["mean_w"] = r.path.int_w / horizon;
        d["idle_l"] = r.path.idle_l;
        d["arrivals"] = r.path.arrivals;
        d["final_w"] = r.stats.end_state.workload;
        d["final_x"] = r.stats.end_state.busy_time();
        return d;
      },
      py::arg("params"), py::arg("mu"), py::arg("horizon"), py::arg("seed"), py::arg("w0") = 0.0,
      py::arg("x0") = 0.0, py::arg("warm") = true);

  m.def("lambert_w0", &lambert_w0, py::arg("x"));
  m.def("borel_pmf", &borel_pmf, py::arg("m"), py::arg("k"));
  m.def("borel_mgf", &borel_mgf, py::arg("m"), py::arg("s"));
  m.def("borel_log_domain", &borel_log_domain, py::arg("m"));
  m.def("psi_cluster_job", &psi_cluster_job, py::arg("m"), py::arg("service"), py::arg("theta"));

  m.def(
      "solve_constants",
      [](double lambda0, const ExcitationKernel& kernel, const ServiceDistribution& service,
         double mu_lo, double eps, double mu_hi) {
        return json_to_py(to_json(solve_constants({lambda0, kernel, service, mu_lo, eps, mu_hi})));
      },
      py::arg("lambda0"), py::arg("kernel"), py::arg("service"), py::arg("mu_lo") = 2.5,
      py::arg("eps") = 0.1, py::arg("mu_hi") = 10.0);

  py::class_<StaffingCost>(m, "StaffingCost")
      .def_static("quadratic", &StaffingCost::quadratic, py::arg("h0"), py::arg("c0"))
      .def_static("linear", &StaffingCost::linear, py::arg("h0"), py::arg("c0"))
      .def("staffing", &StaffingCost::staffing)
      .def("objective", &StaffingCost::objective);

  py::class_<GoliqConfig>(m, "GoliqConfig")
      .def(py::init<>())
      .def_readwrite("cycles", &GoliqConfig::cycles)
      .def_readwrite("a_t", &GoliqConfig::a_t)
      .def_readwrite("c_t", &GoliqConfig::c_t)
      .def_readwrite("c_eta", &GoliqConfig::c_eta)
      .def_readwrite("xi", &GoliqConfig::xi)
      .def_readwrite("mu_lo", &GoliqConfig::mu_lo)
      .def_readwrite("mu_hi", &GoliqConfig::mu_hi)
      .def_readwrite("mu_init", &GoliqConfig::mu_init)
      .def_readwrite("eps", &GoliqConfig::eps)
      .def_readwrite("cost", &GoliqConfig::cost)
      .def("cycle_length", &GoliqConfig::cycle_length)
      .def("step_size", &GoliqConfig::step_size);

  m.def(
      "run_goliq",
      [](const GoliqConfig& c, const HawkesParams& p, std::uint64_t seed) {
        const GoliqTrace tr = run_goliq(c, p, seed);
        py::list cycles;
        for (const auto& cy : tr.cycles) cycles.append(cycle_to_dict(cy));
        py::dict d;
        d["cycles"] = cycles;
        d["final_mu"] = tr.final_mu();
        d["next_mu"] = tr.next_mu;
        return d;
      },
      py::arg("config"), py::arg("params"), py::arg("seed"));

  m.def(
      "run_ngs",
      [](const std::vector<double>& grid, const HawkesParams& p, const StaffingCost& cost,
         double horizon, int replications, std::uint64_t seed, int threads) {
        NgsOptions o;
        o.horizon = horizon;
        o.replications = replications;
        o.threads = threads;
        py::gil_scoped_release release;
        return run_ngs(grid, p, cost, o, seed);
      },
      py::arg("grid"), py::arg("params"), py::arg("cost"), py::arg("horizon") = 2e4,
      py::arg("replications") = 20, py::arg("seed") = 1, py::arg("threads") = 1);

  py::class_<BenchmarkPoint>(m, "BenchmarkPoint")
      .def_readonly("mu", &BenchmarkPoint::mu)
      .def_readonly("f_hat", &BenchmarkPoint::f_hat)
      .def_readonly("stderr", &BenchmarkPoint::stderr_)
      .def_readonly("mean_workload", &BenchmarkPoint::mean_workload);
  py::class_<BenchmarkResult>(m, "BenchmarkResult")
      .def_readonly("mu_star", &BenchmarkResult::mu_star)
      .def_readonly("f_star", &BenchmarkResult::f_star)
      .def_readonly("f_star_stderr", &BenchmarkResult::f_star_stderr)
      .def_readonly("grid", &BenchmarkResult::grid);

  m.def(
      "gradient_check",
      [](double mu, double delta, const HawkesParams& p, double horizon, int replications,
         std::uint64_t seed) {
        NgsOptions o;
        o.horizon = horizon;
        o.replications = replications;
        const GradientCheck g = gradient_check(mu, delta, p, o, seed);
        py::dict d;
        d["fd_slope"] = g.fd_slope;
        d["fd_stderr"] = g.fd_stderr;
        d["x_infty"] = g.x_infty;
        d["x_stderr"] = g.x_stderr;
        return d;
      },
      py::arg("mu"), py::arg("delta"), py::arg("params"), py::arg("horizon") = 2e4,
      py::arg("replications") = 20, py::arg("seed") = 1);

  m.def(
      "acf_lag1", [](const std::vector<double>& gaps) { return acf_lag1(gaps); }, py::arg("gaps"));

  m.def(
      "resolve_config",
      [](const std::string& text) {
        const RunConfig c = parse_config(nlohmann::json::parse(text, nullptr, true, true));
        c.validate();
        return json_to_py(c.to_json());
      },
      py::arg("json_text"), "Validated configuration with every default filled in.");
}
