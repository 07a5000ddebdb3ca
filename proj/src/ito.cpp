#include "supersle/ito.hpp"

#include <sstream>
#include <stdexcept>

namespace supersle {

bool ItoDifferential::is_zero() const {
  if (!drift.is_zero()) return false;
  for (const auto& d : diffusion)
    if (!d.is_zero()) return false;
  return true;
}

ItoDifferential ItoDifferential::operator-(const ItoDifferential& o) const {
  if (diffusion.size() != o.diffusion.size())
    throw std::invalid_argument("ItoDifferential: mismatched Brownian dimensions");
  ItoDifferential r;
  r.drift = drift - o.drift;
  r.diffusion.reserve(diffusion.size());
  for (std::size_t i = 0; i < diffusion.size(); ++i)
    r.diffusion.push_back(diffusion[i] - o.diffusion[i]);
  return r;
}

ItoDifferential ito_d(const SuperFunction& p, int n_brownian) {
  ItoDifferential d;
  d.drift = p.dsym(SYM_T);
  for (int i = 1; i <= n_brownian; ++i) {
    SuperFunction first = p.dsym(sym_brownian(i));
    d.drift += first.dsym(sym_brownian(i)).scale(Rational(1, 2));
    d.diffusion.push_back(std::move(first));
  }
  return d;
}

Poly expectation(const Poly& p, int n_brownian) {
  Poly out;
  p.for_each([&](const Mono& m, const Rational& c) {
    Mono nm = m;
    Rational nc = c;
    std::uint32_t extra_t = 0;
    for (int i = 1; i <= n_brownian; ++i) {
      std::size_t idx = sym_brownian(i);
      std::uint32_t e = nm.exp(idx);
      if (e == 0) continue;
      if (e % 2 == 1) return;  // odd moment vanishes
      // E[B^{2m}] = (2m-1)!! t^m
      for (std::uint32_t j = 1; j < e; j += 2) nc *= Rational(j);
      nm.e[idx] = 0;
      extra_t += e / 2;
    }
    if (extra_t > 0) {
      if (nm.e.size() <= SYM_T) nm.e.resize(SYM_T + 1, 0);
      nm.e[SYM_T] += extra_t;
    }
    nm.trim();
    out.add_term(nm, nc);
  });
  return out;
}

Grassmann expectation(const Grassmann& g, int n_brownian) {
  return g.map_coeffs([&](const Poly& p) { return expectation(p, n_brownian); });
}

SuperFunction expectation(const SuperFunction& p, int n_brownian) {
  SuperFunction out(p.ctx());
  p.for_each([&](int two_e, const Grassmann& g) {
    Grassmann eg = expectation(g, n_brownian);
    if (!eg.is_zero()) out.set_coeff(two_e, eg);
  });
  return out;
}

bool SdeSpec::operator==(const SdeSpec& o) const {
  return z_drift == o.z_drift && theta_drift == o.theta_drift &&
         z_diff == o.z_diff && theta_diff == o.theta_diff;
}

bool SdeSpec::has_half_integer_exponent() const {
  if (z_drift.has_half_integer_exponent()) return true;
  if (theta_drift.has_half_integer_exponent()) return true;
  for (const auto& f : z_diff)
    if (f.has_half_integer_exponent()) return true;
  for (const auto& f : theta_diff)
    if (f.has_half_integer_exponent()) return true;
  return false;
}

std::string SdeSpec::str() const {
  std::ostringstream os;
  os << "dz' = (" << z_drift.str() << ") dt";
  for (std::size_t i = 0; i < z_diff.size(); ++i)
    os << " + (" << z_diff[i].str() << ") dB" << (i + 1);
  os << "\ndtheta' = (" << theta_drift.str() << ") dt";
  for (std::size_t i = 0; i < theta_diff.size(); ++i)
    os << " + (" << theta_diff[i].str() << ") dB" << (i + 1);
  return os.str();
}

bool SolutionResidual::ok() const {
  return z.is_zero() && theta.is_zero() && z_initial.is_zero() &&
         theta_initial.is_zero();
}

namespace {

SuperFunction at_initial_time(const SuperFunction& f, int n_brownian) {
  SuperFunction out = f.at_zero_sym(SYM_T);
  for (int i = 1; i <= n_brownian; ++i) out = out.at_zero_sym(sym_brownian(i));
  return out;
}

}  // namespace

SolutionResidual verify_solution(const SdeSpec& sde, const SuperMap& candidate) {
  const int b = sde.n_brownian();
  SolutionResidual r;
  ItoDifferential dz = ito_d(candidate.z, b);
  ItoDifferential dtheta = ito_d(candidate.theta, b);
  r.z.drift = dz.drift - substitute(sde.z_drift, candidate);
  r.theta.drift = dtheta.drift - substitute(sde.theta_drift, candidate);
  for (int i = 0; i < b; ++i) {
    r.z.diffusion.push_back(dz.diffusion[i] - substitute(sde.z_diff[i], candidate));
    r.theta.diffusion.push_back(dtheta.diffusion[i] -
                                substitute(sde.theta_diff[i], candidate));
  }
  const GenCtx& ctx = candidate.z.ctx();
  r.z_initial = at_initial_time(candidate.z, b) - SuperFunction::z_power(ctx, 2);
  r.theta_initial = at_initial_time(candidate.theta, b) - SuperFunction::theta(ctx);
  return r;
}

namespace {

/// Rewrites every monomial containing both u and g via u*g -> 1 + k u B,
/// repeatedly, until no monomial contains both.  Terminates because each
/// application lowers the g-degree by one.
Poly rewrite_opaque_unit(Poly p) {
  const std::size_t B1 = sym_brownian(1);
  for (;;) {
    bool changed = false;
    Poly next;
    p.for_each([&](const Mono& m, const Rational& c) {
      if (m.exp(SYM_CLASSICAL_U) >= 1 && m.exp(SYM_CLASSICAL_G) >= 1) {
        changed = true;
        Mono base = m;
        base.e[SYM_CLASSICAL_U] -= 1;
        base.e[SYM_CLASSICAL_G] -= 1;
        base.trim();
        Poly rest;
        rest.add_term(base, c);
        next += rest * (Poly(Rational(1)) +
                        Poly::symbol(SYM_K) * Poly::symbol(SYM_CLASSICAL_U) *
                            Poly::symbol(B1));
      } else {
        next.add_term(m, c);
      }
    });
    p = std::move(next);
    if (!changed) return p;
  }
}

}  // namespace

Poly classical_rewrite_check(int sign) {
  Poly g = Poly::symbol(SYM_CLASSICAL_G);
  Poly u = Poly::symbol(SYM_CLASSICAL_U);
  Poly kB = Poly::symbol(SYM_K) * Poly::symbol(sym_brownian(1));
  Poly f = g + kB * Rational(sign);
  return rewrite_opaque_unit(u * f) - Poly(Rational(1));
}

}  // namespace supersle
