// Numeric layer: deterministic RNG streams, the Euler integrator for the
// chordal flow, the closed-form kappa = 0 oracle, the Monte Carlo martingale
// estimate, and the named check registry backing the command line.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "supersle/catalog.hpp"
#include "supersle/report.hpp"
#include "supersle/sim.hpp"

#include "json.hpp"

#include <cmath>
#include <complex>

using namespace supersle;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.kappa = Rational(8, 3);
  cfg.paths = 8;
  cfg.steps = 50;
  cfg.t_max = 0.5;
  cfg.output_times = 6;
  return cfg;
}

}  // namespace

TEST_CASE("splitmix64 reference vector and uniform range") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFull);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ull);
  SplitMix64 u(12345);
  for (int i = 0; i < 1000; ++i) {
    double x = u.uniform01();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("gaussian streams are reproducible, distinct, and roughly normal") {
  GaussianStream a(42, 7), b(42, 7), c(42, 8);
  bool same = true, differ = false;
  double sum = 0.0, sumsq = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    double x = a.next();
    same = same && (x == b.next());
    differ = differ || (x != c.next());
    sum += x;
    sumsq += x * x;
  }
  CHECK(same);
  CHECK(differ);
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.1);
  CHECK(var > 0.8);
  CHECK(var < 1.2);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(validate_config(SimConfig{}));
  SimConfig cfg;
  cfg.steps = 0;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg = SimConfig{};
  cfg.paths = 0;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg = SimConfig{};
  cfg.t_max = 0.0;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg = SimConfig{};
  cfg.kappa = Rational(-1);
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg = SimConfig{};
  cfg.grid = {{1.0, 1e-9}};  // below the imaginary floor
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg = SimConfig{};
  cfg.output_times = 1;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
}

TEST_CASE("path traces start at the grid and satisfy f = g - sqrt(kappa) B") {
  SimConfig cfg = small_config();
  PathTrace tr = simulate_one_path(cfg, 5);
  REQUIRE(tr.t.size() == static_cast<std::size_t>(cfg.steps + 1));
  REQUIRE(tr.B.size() == tr.t.size());
  REQUIRE(tr.g.size() == cfg.grid.size());
  CHECK(tr.t[0] == 0.0);
  CHECK(tr.B[0] == 0.0);
  double sqrt_kappa = std::sqrt(to_double(cfg.kappa));
  for (std::size_t i = 0; i < tr.g.size(); ++i) {
    REQUIRE(tr.g[i].size() == tr.t.size());
    CHECK(tr.g[i][0] == cfg.grid[i]);
    CHECK(tr.swallowed[i][0] == 0);
    for (std::size_t j = 0; j < tr.t.size(); ++j) {
      std::complex<double> expect = tr.g[i][j] - sqrt_kappa * tr.B[j];
      CHECK(std::abs(tr.f[i][j] - expect) <= 1e-12);
    }
  }

  // Replays are bitwise identical; other path indices differ.
  PathTrace again = simulate_one_path(cfg, 5);
  CHECK(again.B == tr.B);
  CHECK(again.g == tr.g);
  PathTrace other = simulate_one_path(cfg, 6);
  CHECK(other.B != tr.B);
}

TEST_CASE("aggregated table is deterministic in the seed") {
  SimConfig cfg = small_config();
  std::string csv1 = simulate_sle(cfg).to_csv();
  std::string csv2 = simulate_sle(cfg).to_csv();
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("t,observable,mean,stderr,n_paths\n", 0) == 0);

  SimConfig reseeded = cfg;
  reseeded.seed += 1;
  CHECK(simulate_sle(reseeded).to_csv() != csv1);

  SimTable table = simulate_sle(cfg);
  // One row per sampled time per grid point per observable (re/im of g, f).
  CHECK(table.rows.size() ==
        static_cast<std::size_t>(cfg.output_times) * cfg.grid.size() * 4);
  auto parsed = nlohmann::json::parse(table.to_json());
  REQUIRE(parsed.is_array());
  CHECK(parsed.size() == table.rows.size());
  for (const auto& row : table.rows) CHECK(row.n_paths <= cfg.paths);
}

TEST_CASE("kappa = 0 flow matches the closed form") {
  std::complex<double> z(0.0, 2.0);
  CHECK(std::abs(kappa0_closed_form(z, 0.0) - z) < 1e-15);
  std::complex<double> g = kappa0_closed_form(z, 0.3);
  CHECK(std::abs(g * g - (z * z + 4.0 * 0.3)) < 1e-12);

  SimConfig cfg;
  cfg.kappa = Rational(0);
  cfg.paths = 1;
  cfg.steps = 1000;
  cfg.t_max = 0.5;
  cfg.grid = {{0.0, 2.0}};
  CHECK(kappa0_max_error(cfg) < 1e-3);

  // First-order integrator: halving the step halves the error.
  SimConfig coarse = cfg, fine = cfg;
  coarse.steps = 250;
  fine.steps = 500;
  double ratio = kappa0_max_error(coarse) / kappa0_max_error(fine);
  CHECK(ratio > 1.5);
  CHECK(ratio < 2.5);
}

TEST_CASE("points close to the driving singularity freeze permanently") {
  SimConfig cfg;
  cfg.kappa = Rational(0);
  cfg.paths = 1;
  cfg.steps = 2000;
  cfg.t_max = 0.5;
  cfg.swallow_threshold = 0.05;
  // z = i/2 is annihilated by the kappa = 0 flow at t = 1/16 < t_max.
  cfg.grid = {{0.0, 0.5}};
  PathTrace tr = simulate_one_path(cfg, 0);
  std::size_t first = 0;
  while (first < tr.swallowed[0].size() && !tr.swallowed[0][first]) ++first;
  REQUIRE(first < tr.swallowed[0].size());
  CHECK(tr.t[first] < 0.1);  // near the exact swallowing time 1/16
  for (std::size_t j = first; j < tr.swallowed[0].size(); ++j) {
    CHECK(tr.swallowed[0][j] == 1);
    CHECK(tr.g[0][j] == tr.g[0][first]);  // frozen bitwise
  }
}

TEST_CASE("Monte Carlo martingale estimate agrees with the exact quotient") {
  SimConfig cfg;
  cfg.kappa = Rational(8, 3);
  cfg.paths = 400;
  cfg.steps = 500;
  cfg.t_max = 1.0;
  Rational c = c_classical_of_kappa(cfg.kappa);       // 0
  Rational delta = delta_classical_of_kappa(cfg.kappa);  // 5/8
  CHECK(c == Rational(0));
  CHECK(delta == Rational(5, 8));

  MartingaleEstimate est = estimate_martingale(cfg, 4, c, delta);
  CHECK(est.pass);
  CHECK(est.max_abs_z <= 3.0);
  REQUIRE(est.component.size() == 4);  // levels 0, 1, 2 of the Virasoro basis
  // On the locus the projected exact expectation is frozen at the primary
  // (the empty word prints as "1").
  for (std::size_t i = 0; i < est.exact.size(); ++i) {
    double expect = est.component[i] == "1" ? 1.0 : 0.0;
    CHECK(std::abs(est.exact[i] - expect) < 1e-12);
  }

  // Off the locus the projector is trivial and the exact expectation moves
  // away from the primary coordinates.
  MartingaleEstimate off = estimate_martingale(cfg, 4, c, delta + 1);
  bool moved = false;
  for (std::size_t i = 0; i < off.exact.size(); ++i)
    if (off.component[i] != "1" && std::abs(off.exact[i]) > 1e-6) moved = true;
  CHECK(moved);

  CHECK_THROWS_AS(estimate_martingale(cfg, 10, c, delta), std::invalid_argument);
}

TEST_CASE("named check registry") {
  CHECK(suite_check_names().size() == 19);
  CHECK_THROWS_AS(run_check("no-such-check"), std::invalid_argument);
  CHECK_THROWS_AS(run_suite({"zzz-matches-nothing"}), std::invalid_argument);

  Report alg = run_check("algebra-ns");
  CHECK(alg.pass);
  CHECK(alg.name == "algebra-ns");
  CHECK(!alg.provenance.empty());

  std::vector<Report> reports = run_suite({"link-ns"});
  REQUIRE(reports.size() == 2);  // link-ns and link-ns-alt
  for (const Report& r : reports) CHECK(r.pass);

  auto parsed = nlohmann::json::parse(reports_to_json(reports));
  REQUIRE(parsed.is_array());
  CHECK(parsed.size() == 2);
  CHECK(parsed[0].contains("name"));
  CHECK(parsed[0].at("status").get<std::string>() == "pass");
}
