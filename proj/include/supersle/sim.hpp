#pragma once

#include "supersle/links.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace supersle {

/// Deterministic splittable RNG (splitmix64); streams derived from
/// (seed, stream index) are stable under changes of the path count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next();
  /// Uniform in the open interval (0, 1).
  double uniform01();

 private:
  std::uint64_t state_;
};

/// Standard normal variates via Box-Muller on a dedicated stream.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream);
  double next();

 private:
  SplitMix64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// ---------------------------------------------------------------------------

struct SimConfig {
  Rational kappa = Rational(8, 3);
  long paths = 1000;
  long steps = 1000;
  double t_max = 1.0;
  std::uint64_t seed = 20260816;
  std::vector<std::complex<double>> grid = {{0.0, 1.0}, {0.0, 2.0}};
  double swallow_threshold = 1e-3;
  /// Minimum distance of initial points from the real axis.
  double min_imag = 1e-6;
  /// Number of sampled output times (evenly spaced, t = 0 included).
  int output_times = 11;
};

/// Throws std::invalid_argument on violated invariants (steps/paths >= 1,
/// t_max > 0, kappa >= 0, grid points above the imaginary floor).
void validate_config(const SimConfig& cfg);

/// Aggregated statistics table; rows are (time, observable) pairs with the
/// across-path mean and standard error of the observable and the number of
/// not-yet-swallowed paths it aggregates.
struct SimTable {
  struct Row {
    double t = 0.0;
    std::string observable;
    double mean = 0.0;
    double stderr_ = 0.0;
    long n_paths = 0;
  };
  std::vector<Row> rows;

  std::string to_csv() const;   // header: t,observable,mean,stderr,n_paths
  std::string to_json() const;
};

/// One driving path and the Loewner flow of every grid point along it:
/// d g = 2 / (g - sqrt(kappa) B) dt, g_0 = z, Euler steps; a point whose
/// denominator drops below the swallow threshold freezes permanently.
struct PathTrace {
  std::vector<double> t;                                // steps + 1 entries
  std::vector<double> B;                                // driving Brownian path
  std::vector<std::vector<std::complex<double>>> g;     // [grid][time]
  std::vector<std::vector<std::complex<double>>> f;     // g - sqrt(kappa) B
  std::vector<std::vector<char>> swallowed;             // [grid][time]
};

PathTrace simulate_one_path(const SimConfig& cfg, std::uint64_t path_index);

/// Monte Carlo over cfg.paths driving paths; reports re/im of g and of the
/// shifted observable f = g - sqrt(kappa) B per grid point at sampled times.
SimTable simulate_sle(const SimConfig& cfg);

/// kappa = 0 closed form g_t = sqrt(z^2 + 4t) (principal branch, valid while
/// the point stays unswallowed).
std::complex<double> kappa0_closed_form(std::complex<double> z, double t);

/// Maximum integrator error against the kappa = 0 closed form over all grid
/// points and steps (single deterministic path).
double kappa0_max_error(const SimConfig& cfg);

// ---------------------------------------------------------------------------

/// Statistical conclusion of the numeric martingale test: quotient-projected
/// sample mean of the coefficient vector of G_t|Delta> at t_max versus the
/// exact expectation, componentwise within 3 standard errors.
struct MartingaleEstimate {
  bool pass = false;
  std::vector<std::string> component;  // basis-state labels
  std::vector<double> mean;            // projected sample mean
  std::vector<double> se;              // standard error (0 for frozen comps)
  std::vector<double> exact;           // projected exact expectation
  std::vector<double> zscore;          // (mean - exact)/se where se > 0
  double max_abs_z = 0.0;
  std::string detail;
};

/// Classical (Virasoro) walk only; two_level_max <= 8.  Integrates
/// dv = T_alpha v dt + sqrt(kappa) T_lower v dB per path with exact matrices
/// converted to double, projects onto the quotient by the singular
/// submodule, and compares against expected_state at t = t_max.
MartingaleEstimate estimate_martingale(const SimConfig& cfg, int two_level_max,
                                       const Rational& c, const Rational& delta);

}  // namespace supersle
