#pragma once

#include "supersle/links.hpp"

#include <optional>
#include <string>
#include <vector>

namespace supersle {

// ---------------------------------------------------------------------------
// Walk factories.  Grassmann parameters come from the default generator
// context: y (even nilpotent) and eta drive the NS walk, eps and eta the
// Ramond walk; the classical walk needs no parameters.  k stays symbolic
// (kappa = k^2) unless a factory taking k_value is used.

/// alpha0 = -y eta G_{-3/2}, beta = k (y L_{-1} + eta G_{-1/2}).
WalkSpec walk_ns(const GenCtx& ctx, Structure s, const Rational& c,
                 const Rational& delta, const Rational& kappa);
/// alpha0 = -(1/2) eps eta L_{-1}, beta = k (eps G_{-1} + eta G_0).
WalkSpec walk_r(const GenCtx& ctx, Structure s, const Rational& c,
                const Rational& delta, const Rational& kappa);
/// alpha0 = -2 L_{-2}, beta = k L_{-1} (Virasoro sector).
WalkSpec walk_classical(const GenCtx& ctx, const Rational& c,
                        const Rational& delta, const Rational& kappa);

// ---------------------------------------------------------------------------
// Parameter loci tying kappa to central charge and weight.

/// Central charge shared by the NS and Ramond loci: 15/2 - 3(kappa + 1/kappa).
Rational c_of_kappa(const Rational& kappa);
/// NS weight on the kappa locus: (2 - kappa) / (2 kappa).
Rational delta_ns_of_kappa(const Rational& kappa);
/// Ramond weight on the kappa locus: (6 kappa - 3) / 16.
Rational delta_r_of_kappa(const Rational& kappa);
/// Classical central charge: 1 - 3 (4 - kappa)^2 / (2 kappa).
Rational c_classical_of_kappa(const Rational& kappa);
/// Classical weight: (6 - kappa) / (2 kappa).
Rational delta_classical_of_kappa(const Rational& kappa);

// Singular-existence constraints; zero exactly on the locus.
/// (2 delta + 1) c - 3 delta (3 - 2 delta)  [NS level 3/2]
Rational ns_singular_constraint(const Rational& c, const Rational& delta);
/// (16 delta + 3) c - 8 delta (9 - 16 delta)  [Ramond level 1]
Rational r_singular_constraint(const Rational& c, const Rational& delta);
/// (2 delta + 1) c - 2 delta (5 - 8 delta)  [classical level 2]
Rational classical_singular_constraint(const Rational& c, const Rational& delta);

// Explicit singular-vector candidates (tests verify annihilation).
/// ((delta + 1/2) G_{-3/2} - L_{-1} G_{-1/2}) |delta>
VermaState chi_ns(const ModCtx& ctx);
/// ((8 delta + c) L_{-1} - 6 G_{-1} G_0) |delta>
VermaState chi_r(const ModCtx& ctx);
/// (-2 L_{-2} + (kappa/2) L_{-1}^2) |delta>
VermaState chi_classical(const ModCtx& ctx, const Rational& kappa);

// ---------------------------------------------------------------------------
// Frozen superspace SDEs as stated in closed form (k symbolic; kappa enters
// as k^2), for termwise comparison against build_sde.

SdeSpec frozen_sde_ns_conv(const GenCtx& ctx);
SdeSpec frozen_sde_r_conv(const GenCtx& ctx);
SdeSpec frozen_sde_r_alt(const GenCtx& ctx);
SdeSpec frozen_sde_ns_alt(const GenCtx& ctx);

// Closed-form flows (z', theta') as functions of the initial point (z, theta)
// and the symbols t, B1 and k.
SuperMap solution_ns_conv(const GenCtx& ctx);
SuperMap solution_r_conv(const GenCtx& ctx);
SuperMap solution_r_alt(const GenCtx& ctx);
SuperMap solution_ns_alt(const GenCtx& ctx);

// ---------------------------------------------------------------------------
// Intermediate substitutions used to solve the SDEs.  `value` is a function
// of the current point; composing it with the closed-form flow must satisfy
// `claimed` (an exact Ito differential) and, when present, equal
// `closed_form` as a function of the initial point.

struct IntermediateCheck {
  std::string name;
  SuperFunction value;
  std::optional<SuperFunction> closed_form;
  ItoDifferential claimed;
};

std::vector<IntermediateCheck> intermediates_r_conv(const GenCtx& ctx);
std::vector<IntermediateCheck> intermediates_r_alt(const GenCtx& ctx);
std::vector<IntermediateCheck> intermediates_ns_alt(const GenCtx& ctx);

// ---------------------------------------------------------------------------
// Named walks for the command line: "ns", "ns-alt", "r", "r-alt",
// "classical", with (c, delta) taken from the singular locus at kappa.

std::vector<std::string> walk_names();
WalkSpec named_walk(const std::string& name, const GenCtx& ctx,
                    const Rational& kappa);

}  // namespace supersle
