// Python bindings: a thin string/JSON-oriented facade over the exact engine.
// Rationals cross the boundary as "p/q" strings, structured data as JSON
// text or plain dicts, so the Python side needs no exact-arithmetic types.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "supersle/catalog.hpp"
#include "supersle/report.hpp"
#include "supersle/sim.hpp"

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace supersle;

namespace {

py::dict report_to_dict(const Report& r) {
  py::dict d;
  d["name"] = r.name;
  d["pass"] = r.pass;
  d["detail"] = r.detail;
  d["provenance"] = r.provenance;
  return d;
}

WalkSpec walk_of(const std::string& walk_json) {
  return walk_from_json(walk_json, default_ctx());
}

Sector sector_of(const std::string& name) {
  if (name == "ns") return Sector::NS;
  if (name == "ramond") return Sector::Ramond;
  if (name == "virasoro" || name == "classical") return Sector::Virasoro;
  throw std::invalid_argument("sector must be ns, ramond or virasoro");
}

SuperMap named_solution(const std::string& name, const GenCtx& ctx) {
  if (name == "ns") return solution_ns_conv(ctx);
  if (name == "r") return solution_r_conv(ctx);
  if (name == "r-alt") return solution_r_alt(ctx);
  if (name == "ns-alt") return solution_ns_alt(ctx);
  throw std::invalid_argument("unknown flow: " + name);
}

SdeSpec named_frozen(const std::string& name, const GenCtx& ctx) {
  if (name == "ns") return frozen_sde_ns_conv(ctx);
  if (name == "r") return frozen_sde_r_conv(ctx);
  if (name == "r-alt") return frozen_sde_r_alt(ctx);
  if (name == "ns-alt") return frozen_sde_ns_alt(ctx);
  throw std::invalid_argument("unknown flow: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Exact graded computer algebra for chordal stochastic flows and their "
      "superconformal extensions: mode algebras, singular vectors, walk-to-SDE "
      "transcription, martingale decisions, and a Monte Carlo cross-check.";

  // --- check registry -------------------------------------------------------
  m.def("suite_check_names", &suite_check_names,
        "Names of every suite check, in execution order.");
  m.def(
      "run_check",
      [](const std::string& name) { return report_to_dict(run_check(name)); },
      py::arg("name"),
      "Run one named check; returns {name, pass, detail, provenance}.");
  m.def(
      "run_suite",
      [](const std::vector<std::string>& filters) {
        py::list out;
        for (const Report& r : run_suite(filters)) out.append(report_to_dict(r));
        return out;
      },
      py::arg("filters") = std::vector<std::string>{},
      "Run every check whose name contains one of the filter substrings "
      "(all checks when empty); returns a list of report dicts.");

  // --- walks and SDEs -------------------------------------------------------
  m.def("walk_names", &walk_names, "Names of the built-in walks.");
  m.def(
      "named_walk_json",
      [](const std::string& name, const std::string& kappa) {
        return walk_to_json(named_walk(name, default_ctx(), parse_rational(kappa)));
      },
      py::arg("name"), py::arg("kappa"),
      "JSON description of a built-in walk with (c, delta) on the singular "
      "locus at the given rational kappa (\"p/q\").");
  m.def(
      "build_sde_json",
      [](const std::string& walk_json) {
        return sde_to_json(build_sde(walk_of(walk_json)));
      },
      py::arg("walk_json"),
      "Transcribe a walk (JSON) into its superspace SDE (JSON).");
  m.def(
      "verify_link",
      [](const std::string& walk_json) {
        return verify_link(walk_of(walk_json)).is_zero();
      },
      py::arg("walk_json"),
      "Whether the jet link identity between the walk and its transcribed SDE "
      "vanishes identically (symbolic weight, symbolic k).");
  m.def(
      "drift_state_json",
      [](const std::string& walk_json) {
        return verma_state_to_json(drift_state(walk_of(walk_json)));
      },
      py::arg("walk_json"),
      "The walk's Ito drift generator applied to the primary state (JSON).");
  m.def(
      "martingale",
      [](const std::string& walk_json) {
        MartingaleReport rep = martingale_check(walk_of(walk_json));
        py::dict d;
        d["in_submodule"] = rep.in_submodule;
        d["drift_zero"] = rep.drift_zero;
        d["drift_two_level"] = rep.drift_two_level;
        d["singular_levels"] = rep.singular_levels;
        d["detail"] = rep.detail;
        return d;
      },
      py::arg("walk_json"),
      "Exact martingale decision: does the drift state lie in the singular "
      "submodule?");
  m.def(
      "verify_solution_ok",
      [](const std::string& name) {
        GenCtx ctx = default_ctx();
        return verify_solution(named_frozen(name, ctx), named_solution(name, ctx))
            .ok();
      },
      py::arg("name"),
      "Whether the stated closed-form flow (ns, r, r-alt, ns-alt) solves its "
      "stated SDE exactly.");

  // --- singular structure ---------------------------------------------------
  m.def(
      "singular",
      [](const std::string& sector, int two_level, const std::string& c,
         const std::string& delta) {
        ModCtx ctx{AlgCtx{sector_of(sector), parse_rational(c), default_ctx()},
                   parse_rational(delta)};
        SingularSpace ss = find_singular(ctx, two_level);
        py::list basis;
        for (const StateKey& k : ss.basis) {
          std::string label = monomial_str(k.first);
          if (k.second) label += " G[0]";
          basis.append(label);
        }
        py::list vectors;
        for (const Vec& v : ss.vectors) {
          py::list coords;
          for (const Rational& x : v) coords.append(to_string(x));
          vectors.append(coords);
        }
        py::dict d;
        d["dimension"] = ss.vectors.size();
        d["basis"] = basis;
        d["vectors"] = vectors;
        return d;
      },
      py::arg("sector"), py::arg("two_level"), py::arg("c"), py::arg("delta"),
      "States at the given doubled level annihilated by every positive mode; "
      "rationals are \"p/q\" strings.");
  m.def(
      "locus",
      [](const std::string& kappa) {
        Rational k = parse_rational(kappa);
        py::dict d;
        d["c"] = to_string(c_of_kappa(k));
        d["delta_ns"] = to_string(delta_ns_of_kappa(k));
        d["delta_r"] = to_string(delta_r_of_kappa(k));
        d["c_classical"] = to_string(c_classical_of_kappa(k));
        d["delta_classical"] = to_string(delta_classical_of_kappa(k));
        return d;
      },
      py::arg("kappa"),
      "Central charges and weights on the singular locus at rational kappa.");

  // --- numerics --------------------------------------------------------------
  m.def(
      "simulate_csv",
      [](const std::string& kappa, long paths, long steps, double t_max,
         std::uint64_t seed, const std::vector<std::pair<double, double>>& grid) {
        SimConfig cfg;
        cfg.kappa = parse_rational(kappa);
        cfg.paths = paths;
        cfg.steps = steps;
        cfg.t_max = t_max;
        cfg.seed = seed;
        cfg.grid.clear();
        for (const auto& [re, im] : grid) cfg.grid.emplace_back(re, im);
        return simulate_sle(cfg).to_csv();
      },
      py::arg("kappa"), py::arg("paths") = 1000, py::arg("steps") = 1000,
      py::arg("t_max") = 1.0, py::arg("seed") = 20260816,
      py::arg("grid") = std::vector<std::pair<double, double>>{{0.0, 1.0},
                                                               {0.0, 2.0}},
      "Monte Carlo statistics of the chordal flow as CSV "
      "(t,observable,mean,stderr,n_paths).");
  m.def(
      "estimate_martingale",
      [](const std::string& kappa, long paths, long steps, double t_max,
         std::uint64_t seed, int two_level_max, const std::string& c,
         const std::string& delta) {
        SimConfig cfg;
        cfg.kappa = parse_rational(kappa);
        cfg.paths = paths;
        cfg.steps = steps;
        cfg.t_max = t_max;
        cfg.seed = seed;
        MartingaleEstimate est = estimate_martingale(
            cfg, two_level_max, parse_rational(c), parse_rational(delta));
        py::dict d;
        d["pass"] = est.pass;
        d["max_abs_z"] = est.max_abs_z;
        d["component"] = est.component;
        d["mean"] = est.mean;
        d["se"] = est.se;
        d["exact"] = est.exact;
        d["detail"] = est.detail;
        return d;
      },
      py::arg("kappa"), py::arg("paths"), py::arg("steps"), py::arg("t_max"),
      py::arg("seed"), py::arg("two_level_max"), py::arg("c"), py::arg("delta"),
      "Monte Carlo martingale estimate for the classical walk: "
      "quotient-projected sample mean versus the exact expectation.");
  m.def(
      "kappa0_error",
      [](long steps, double t_max, double re, double im) {
        SimConfig cfg;
        cfg.kappa = Rational(0);
        cfg.paths = 1;
        cfg.steps = steps;
        cfg.t_max = t_max;
        cfg.grid = {{re, im}};
        return kappa0_max_error(cfg);
      },
      py::arg("steps") = 1000, py::arg("t_max") = 0.5, py::arg("re") = 0.0,
      py::arg("im") = 2.0,
      "Maximum integrator error against the kappa = 0 closed form.");
}
