#pragma once

#include "supersle/superspace.hpp"

#include <vector>

namespace supersle {

/// Processes polynomial in t and the Brownian symbols B1..Bb with
/// SuperFunction coefficients are represented directly as SuperFunctions:
/// the scalar polynomial layer already carries t, k and the Brownian symbols.
/// The Brownian dimension b is passed explicitly where it matters.
using ItoPoly = SuperFunction;

/// d p = drift dt + sum_i diffusion[i] dB_i.
struct ItoDifferential {
  SuperFunction drift;
  std::vector<SuperFunction> diffusion;

  bool is_zero() const;
  ItoDifferential operator-(const ItoDifferential& o) const;
};

/// Second-order Ito-Taylor differential under (dt)^2 = dt dB = 0,
/// dB_i dB_j = delta_ij dt:
///   drift = d/dt p + (1/2) sum_i d^2/dB_i^2 p,   diffusion_i = d/dB_i p.
ItoDifferential ito_d(const SuperFunction& p, int n_brownian);

/// Expectation at time t: independently per Brownian symbol,
/// B^{2m} -> (2m-1)!! t^m and odd powers -> 0.
Poly expectation(const Poly& p, int n_brownian);
Grassmann expectation(const Grassmann& g, int n_brownian);
SuperFunction expectation(const SuperFunction& p, int n_brownian);

/// Autonomous SDE for (z', theta'): right-hand sides are SuperFunctions of
/// the current point, evaluated along a candidate by substitution.
struct SdeSpec {
  SuperFunction z_drift;
  SuperFunction theta_drift;
  std::vector<SuperFunction> z_diff;
  std::vector<SuperFunction> theta_diff;

  int n_brownian() const { return static_cast<int>(z_diff.size()); }
  bool operator==(const SdeSpec& o) const;
  bool has_half_integer_exponent() const;
  std::string str() const;
};

/// Residuals of a candidate solution against an SDE.  The differential
/// residuals compare ito_d(candidate) with the right-hand sides substituted
/// at the candidate; the initial residuals compare the t = 0, B = 0 value
/// with the identity map.
struct SolutionResidual {
  ItoDifferential z;
  ItoDifferential theta;
  SuperFunction z_initial;
  SuperFunction theta_initial;

  bool ok() const;
};

SolutionResidual verify_solution(const SdeSpec& sde, const SuperMap& candidate);

/// Driving-function rewrite check for the classical Loewner equation.
/// With g the process of dg = 2/(g - kB) dt and u an opaque unit symbol for
/// (g - kB)^{-1} (defining relation u*g = 1 + k u B), the shifted process
/// f = g + sign*k*B satisfies df = 2 u dt - k dB, and that equals 2/f dt -
/// k dB iff u*f = 1.  Returns the rewritten u*f - 1; zero iff sign = -1.
Poly classical_rewrite_check(int sign = -1);

/// Symbol indices for the opaque classical-rewrite symbols (exposed for
/// tests that inspect the residual).
inline constexpr std::size_t SYM_CLASSICAL_G = 90;
inline constexpr std::size_t SYM_CLASSICAL_U = 91;

}  // namespace supersle
