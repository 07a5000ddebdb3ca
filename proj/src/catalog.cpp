#include "supersle/catalog.hpp"

#include <stdexcept>

namespace supersle {

namespace {

Grassmann gen(const GenCtx& ctx, const std::string& name) {
  return Grassmann::generator(ctx, name);
}

Poly k_sym() { return Poly::symbol(SYM_K); }
Poly k2_sym() { return Poly::symbol(SYM_K, 2); }
Poly t_sym() { return Poly::symbol(SYM_T); }
Poly B_sym(std::uint32_t power = 1) { return Poly::symbol(sym_brownian(1), power); }

SuperFunction sf_const(const GenCtx& ctx, const Grassmann& g) {
  return SuperFunction::constant(ctx, g);
}

}  // namespace

WalkSpec walk_ns(const GenCtx& ctx, Structure s, const Rational& c,
                 const Rational& delta, const Rational& kappa) {
  WalkSpec w;
  w.alg = AlgCtx{Sector::NS, c, ctx};
  w.structure = s;
  w.delta = delta;
  w.kappa = kappa;
  Grassmann y = gen(ctx, "y"), eta = gen(ctx, "eta");
  Grassmann k = Grassmann::constant(ctx, k_sym());
  w.alpha0 = AlgebraElement::G2(w.alg, -3).scale((y * eta).scale(Rational(-1)));
  w.beta.push_back(AlgebraElement::L(w.alg, -1).scale(k * y) +
                   AlgebraElement::G2(w.alg, -1).scale(k * eta));
  validate_walk(w);
  return w;
}

WalkSpec walk_r(const GenCtx& ctx, Structure s, const Rational& c,
                const Rational& delta, const Rational& kappa) {
  WalkSpec w;
  w.alg = AlgCtx{Sector::Ramond, c, ctx};
  w.structure = s;
  w.delta = delta;
  w.kappa = kappa;
  Grassmann eps = gen(ctx, "eps"), eta = gen(ctx, "eta");
  Grassmann k = Grassmann::constant(ctx, k_sym());
  w.alpha0 = AlgebraElement::L(w.alg, -1).scale((eps * eta).scale(Rational(-1, 2)));
  w.beta.push_back(AlgebraElement::G2(w.alg, -2).scale(k * eps) +
                   AlgebraElement::G2(w.alg, 0).scale(k * eta));
  validate_walk(w);
  return w;
}

WalkSpec walk_classical(const GenCtx& ctx, const Rational& c,
                        const Rational& delta, const Rational& kappa) {
  WalkSpec w;
  w.alg = AlgCtx{Sector::Virasoro, c, ctx};
  w.structure = Structure::Conv;
  w.delta = delta;
  w.kappa = kappa;
  Grassmann k = Grassmann::constant(ctx, k_sym());
  w.alpha0 = AlgebraElement::L(w.alg, -2).scale(Rational(-2));
  w.beta.push_back(AlgebraElement::L(w.alg, -1).scale(k));
  validate_walk(w);
  return w;
}

Rational c_of_kappa(const Rational& kappa) {
  return Rational(15, 2) - 3 * (kappa + 1 / kappa);
}

Rational delta_ns_of_kappa(const Rational& kappa) {
  return (2 - kappa) / (2 * kappa);
}

Rational delta_r_of_kappa(const Rational& kappa) {
  return (6 * kappa - 3) / 16;
}

Rational c_classical_of_kappa(const Rational& kappa) {
  Rational d = 4 - kappa;
  return 1 - 3 * d * d / (2 * kappa);
}

Rational delta_classical_of_kappa(const Rational& kappa) {
  return (6 - kappa) / (2 * kappa);
}

Rational ns_singular_constraint(const Rational& c, const Rational& delta) {
  return (2 * delta + 1) * c - 3 * delta * (3 - 2 * delta);
}

Rational r_singular_constraint(const Rational& c, const Rational& delta) {
  return (16 * delta + 3) * c - 8 * delta * (9 - 16 * delta);
}

Rational classical_singular_constraint(const Rational& c, const Rational& delta) {
  return (2 * delta + 1) * c - 2 * delta * (5 - 8 * delta);
}

VermaState chi_ns(const ModCtx& ctx) {
  AlgebraElement op =
      AlgebraElement::G2(ctx.alg, -3).scale(ctx.delta + Rational(1, 2)) -
      AlgebraElement::L(ctx.alg, -1) * AlgebraElement::G2(ctx.alg, -1);
  return apply(op, VermaState::vacuum(ctx));
}

VermaState chi_r(const ModCtx& ctx) {
  AlgebraElement op =
      AlgebraElement::L(ctx.alg, -1).scale(8 * ctx.delta + ctx.alg.c) -
      (AlgebraElement::G2(ctx.alg, -2) * AlgebraElement::G2(ctx.alg, 0))
          .scale(Rational(6));
  return apply(op, VermaState::vacuum(ctx));
}

VermaState chi_classical(const ModCtx& ctx, const Rational& kappa) {
  AlgebraElement lm1 = AlgebraElement::L(ctx.alg, -1);
  AlgebraElement op = AlgebraElement::L(ctx.alg, -2).scale(Rational(-2)) +
                      (lm1 * lm1).scale(kappa / 2);
  return apply(op, VermaState::vacuum(ctx));
}

// ---------------------------------------------------------------------------
// Frozen SDEs.

SdeSpec frozen_sde_ns_conv(const GenCtx& ctx) {
  Grassmann y = gen(ctx, "y"), eta = gen(ctx, "eta"), th = gen(ctx, "theta");
  SdeSpec s;
  // dz' = y theta' eta / z' dt - (y + theta' eta) k dB
  s.z_drift = SuperFunction::z_power(ctx, -2).left_mul(y * th * eta);
  s.z_diff.push_back(
      sf_const(ctx, y + th * eta).scale(k_sym()).scale(Rational(-1)));
  // dtheta' = y eta / z' dt - eta k dB
  s.theta_drift = SuperFunction::z_power(ctx, -2).left_mul(y * eta);
  s.theta_diff.push_back(sf_const(ctx, eta).scale(k_sym()).scale(Rational(-1)));
  return s;
}

SdeSpec frozen_sde_r_conv(const GenCtx& ctx) {
  Grassmann eps = gen(ctx, "eps"), eta = gen(ctx, "eta"), th = gen(ctx, "theta");
  SuperFunction half_sum = SuperFunction::z_power(ctx, -1).left_mul(eps) +
                           SuperFunction::z_power(ctx, 1).left_mul(eta);
  SdeSpec s;
  // dz' = 1/2 eps eta dt + k (eps z'^{-1/2} + eta z'^{1/2}) theta' dB
  s.z_drift = sf_const(ctx, (eps * eta).scale(Rational(1, 2)));
  s.z_diff.push_back((half_sum * SuperFunction::theta(ctx)).scale(k_sym()));
  // dtheta' = k^2 eps eta theta' / (2 z') dt - k (eps z'^{-1/2} + eta z'^{1/2}) dB
  s.theta_drift = SuperFunction::z_power(ctx, -2)
                      .left_mul(eps * eta * th)
                      .scale(k2_sym() * Rational(1, 2));
  s.theta_diff.push_back(half_sum.scale(k_sym()).scale(Rational(-1)));
  return s;
}

SdeSpec frozen_sde_r_alt(const GenCtx& ctx) {
  Grassmann eps = gen(ctx, "eps"), eta = gen(ctx, "eta"), th = gen(ctx, "theta");
  SuperFunction lin = SuperFunction::z_power(ctx, 2).left_mul(eta) +
                      sf_const(ctx, eps);
  SdeSpec s;
  // dz' = 1/2 eps eta dt + k (eta z' + eps) theta' dB
  s.z_drift = sf_const(ctx, (eps * eta).scale(Rational(1, 2)));
  s.z_diff.push_back((lin * SuperFunction::theta(ctx)).scale(k_sym()));
  // dtheta' = (k^2 - 1/2) eps eta theta' / (2 z') dt - k (eta + eps / z') dB
  s.theta_drift = SuperFunction::z_power(ctx, -2)
                      .left_mul(eps * eta * th)
                      .scale((k2_sym() - Poly(Rational(1, 2))) * Rational(1, 2));
  s.theta_diff.push_back((sf_const(ctx, eta) +
                          SuperFunction::z_power(ctx, -2).left_mul(eps))
                             .scale(k_sym())
                             .scale(Rational(-1)));
  return s;
}

SdeSpec frozen_sde_ns_alt(const GenCtx& ctx) {
  Grassmann y = gen(ctx, "y"), eta = gen(ctx, "eta"), th = gen(ctx, "theta");
  SdeSpec s;
  // dz' = -y eta theta' z'^{-1/2} dt + k (eta theta' z'^{1/2} - y) dB
  s.z_drift = SuperFunction::z_power(ctx, -1)
                  .left_mul(y * eta * th)
                  .scale(Rational(-1));
  s.z_diff.push_back((SuperFunction::z_power(ctx, 1).left_mul(eta * th) -
                      sf_const(ctx, y))
                         .scale(k_sym()));
  // dtheta' = (1 - k^2/2) y eta z'^{-3/2} dt
  //           + k (1/2 y theta' z'^{-1} - eta z'^{-1/2}) dB
  s.theta_drift = SuperFunction::z_power(ctx, -3)
                      .left_mul(y * eta)
                      .scale(Poly(Rational(1)) - k2_sym() * Rational(1, 2));
  s.theta_diff.push_back(
      (SuperFunction::z_power(ctx, -2).left_mul(y * th).scale(Rational(1, 2)) -
       SuperFunction::z_power(ctx, -1).left_mul(eta))
          .scale(k_sym()));
  return s;
}

// ---------------------------------------------------------------------------
// Closed-form flows.

SuperMap solution_ns_conv(const GenCtx& ctx) {
  Grassmann y = gen(ctx, "y"), eta = gen(ctx, "eta"), th = gen(ctx, "theta");
  Poly kB = k_sym() * B_sym();
  SuperMap m;
  // z' = z + theta y eta t / z - (y + theta eta) k B
  m.z = SuperFunction::z_power(ctx, 2) +
        SuperFunction::z_power(ctx, -2).left_mul(th * y * eta).scale(t_sym()) -
        sf_const(ctx, y + th * eta).scale(kB);
  // theta' = theta + y eta t / z - eta k B
  m.theta = SuperFunction::theta(ctx) +
            SuperFunction::z_power(ctx, -2).left_mul(y * eta).scale(t_sym()) -
            sf_const(ctx, eta).scale(kB);
  return m;
}

SuperMap solution_r_conv(const GenCtx& ctx) {
  Grassmann eps = gen(ctx, "eps"), eta = gen(ctx, "eta"), th = gen(ctx, "theta");
  Poly kB = k_sym() * B_sym();
  SuperFunction half_sum = SuperFunction::z_power(ctx, -1).left_mul(eps) +
                           SuperFunction::z_power(ctx, 1).left_mul(eta);
  SuperMap m;
  // z' = z + 1/2 eps eta t + k (eps z^{-1/2} + eta z^{1/2}) theta B
  m.z = SuperFunction::z_power(ctx, 2) +
        sf_const(ctx, eps * eta).scale(t_sym() * Rational(1, 2)) +
        (half_sum * SuperFunction::theta(ctx)).scale(kB);
  // theta' = theta - k (eps z^{-1/2} + eta z^{1/2}) B + k^2 eps eta theta B^2 / (2 z)
  m.theta = SuperFunction::theta(ctx) - half_sum.scale(kB) +
            SuperFunction::z_power(ctx, -2)
                .left_mul(eps * eta * th)
                .scale(k2_sym() * B_sym(2) * Rational(1, 2));
  return m;
}

SuperMap solution_r_alt(const GenCtx& ctx) {
  Grassmann eps = gen(ctx, "eps"), eta = gen(ctx, "eta"), th = gen(ctx, "theta");
  Poly kB = k_sym() * B_sym();
  SuperFunction lin = SuperFunction::z_power(ctx, 2).left_mul(eta) +
                      sf_const(ctx, eps);
  SuperMap m;
  // z' = z + 1/2 eps eta t + k (eta z + eps) theta B
  m.z = SuperFunction::z_power(ctx, 2) +
        sf_const(ctx, eps * eta).scale(t_sym() * Rational(1, 2)) +
        (lin * SuperFunction::theta(ctx)).scale(kB);
  // theta' = theta - eps eta theta t / (4 z) - k (eta + eps / z) B
  //          + k^2 eps eta theta B^2 / (2 z)
  m.theta = SuperFunction::theta(ctx) -
            SuperFunction::z_power(ctx, -2)
                .left_mul(eps * eta * th)
                .scale(t_sym() * Rational(1, 4)) -
            (sf_const(ctx, eta) + SuperFunction::z_power(ctx, -2).left_mul(eps))
                .scale(kB) +
            SuperFunction::z_power(ctx, -2)
                .left_mul(eps * eta * th)
                .scale(k2_sym() * B_sym(2) * Rational(1, 2));
  return m;
}

SuperMap solution_ns_alt(const GenCtx& ctx) {
  Grassmann y = gen(ctx, "y"), eta = gen(ctx, "eta"), th = gen(ctx, "theta");
  Poly kB = k_sym() * B_sym();
  SuperMap m;
  // z' = z - y eta theta z^{-1/2} t + k (eta theta z^{1/2} - y) B
  m.z = SuperFunction::z_power(ctx, 2) -
        SuperFunction::z_power(ctx, -1).left_mul(y * eta * th).scale(t_sym()) +
        (SuperFunction::z_power(ctx, 1).left_mul(eta * th) - sf_const(ctx, y))
            .scale(kB);
  // theta' = theta + y eta z^{-3/2} t + k (1/2 y theta z^{-1} - eta z^{-1/2}) B
  //          - 1/2 k^2 y eta z^{-3/2} B^2
  m.theta = SuperFunction::theta(ctx) +
            SuperFunction::z_power(ctx, -3).left_mul(y * eta).scale(t_sym()) +
            (SuperFunction::z_power(ctx, -2).left_mul(y * th).scale(Rational(1, 2)) -
             SuperFunction::z_power(ctx, -1).left_mul(eta))
                .scale(kB) -
            SuperFunction::z_power(ctx, -3)
                .left_mul(y * eta)
                .scale(k2_sym() * B_sym(2) * Rational(1, 2));
  return m;
}

// ---------------------------------------------------------------------------
// Intermediates.

std::vector<IntermediateCheck> intermediates_r_conv(const GenCtx& ctx) {
  Grassmann eps = gen(ctx, "eps"), eta = gen(ctx, "eta");
  SuperMap sol = solution_r_conv(ctx);
  SuperFunction half_sum = SuperFunction::z_power(ctx, -1).left_mul(eps) +
                           SuperFunction::z_power(ctx, 1).left_mul(eta);
  // theta'/z' along the flow, as the claims are phrased.
  SuperFunction th_over_z = substitute(
      SuperFunction::theta(ctx) * SuperFunction::z_power(ctx, -2), sol);

  std::vector<IntermediateCheck> out;
  {
    IntermediateCheck w;
    w.name = "shifted-even-coordinate";
    // w' = z' - k (eps z'^{-1/2} + eta z'^{1/2}) theta' B
    w.value = SuperFunction::z_power(ctx, 2) -
              (half_sum * SuperFunction::theta(ctx)).scale(k_sym() * B_sym());
    // dw' = 1/2 eps eta dt;  w' = z + 1/2 eps eta t
    w.closed_form = SuperFunction::z_power(ctx, 2) +
                    sf_const(ctx, eps * eta).scale(t_sym() * Rational(1, 2));
    w.claimed.drift = sf_const(ctx, (eps * eta).scale(Rational(1, 2)));
    w.claimed.diffusion = {SuperFunction(ctx)};
    out.push_back(std::move(w));
  }
  {
    IntermediateCheck x;
    x.name = "shifted-odd-coordinate";
    // chi' = theta' + k (eps z'^{-1/2} + eta z'^{1/2}) B
    x.value = SuperFunction::theta(ctx) + half_sum.scale(k_sym() * B_sym());
    // d chi' = -k^2 eps eta theta'/(2 z') dt - k^2 eps eta theta' B / z' dB
    // chi' = theta - k^2 eps eta theta' B^2 / (2 z')
    x.closed_form =
        SuperFunction::theta(ctx) -
        th_over_z.left_mul(eps * eta).scale(k2_sym() * B_sym(2) * Rational(1, 2));
    x.claimed.drift = th_over_z.left_mul(eps * eta)
                          .scale(k2_sym() * Rational(1, 2))
                          .scale(Rational(-1));
    x.claimed.diffusion = {
        th_over_z.left_mul(eps * eta).scale(k2_sym() * B_sym()).scale(Rational(-1))};
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<IntermediateCheck> intermediates_r_alt(const GenCtx& ctx) {
  Grassmann eps = gen(ctx, "eps"), eta = gen(ctx, "eta");
  SuperMap sol = solution_r_alt(ctx);
  SuperFunction lin = SuperFunction::z_power(ctx, 2).left_mul(eta) +
                      sf_const(ctx, eps);
  SuperFunction th_over_z = substitute(
      SuperFunction::theta(ctx) * SuperFunction::z_power(ctx, -2), sol);

  std::vector<IntermediateCheck> out;
  {
    IntermediateCheck w;
    w.name = "shifted-even-coordinate";
    // w' = z' - k (eta z' + eps) theta' B
    w.value = SuperFunction::z_power(ctx, 2) -
              (lin * SuperFunction::theta(ctx)).scale(k_sym() * B_sym());
    w.closed_form = SuperFunction::z_power(ctx, 2) +
                    sf_const(ctx, eps * eta).scale(t_sym() * Rational(1, 2));
    w.claimed.drift = sf_const(ctx, (eps * eta).scale(Rational(1, 2)));
    w.claimed.diffusion = {SuperFunction(ctx)};
    out.push_back(std::move(w));
  }
  {
    IntermediateCheck x;
    x.name = "shifted-odd-coordinate";
    // chi' = theta' + k (eta + eps/z') B + k^2 eps eta theta' B^2 / (2 z')
    x.value = SuperFunction::theta(ctx) +
              (sf_const(ctx, eta) + SuperFunction::z_power(ctx, -2).left_mul(eps))
                  .scale(k_sym() * B_sym()) +
              (SuperFunction::theta(ctx) * SuperFunction::z_power(ctx, -2))
                  .left_mul(eps * eta)
                  .scale(k2_sym() * B_sym(2) * Rational(1, 2));
    // d chi' = -eps eta theta'/(4 z') dt;  chi' = theta - eps eta theta' t/(4 z')
    x.closed_form = SuperFunction::theta(ctx) -
                    th_over_z.left_mul(eps * eta).scale(t_sym() * Rational(1, 4));
    x.claimed.drift =
        th_over_z.left_mul(eps * eta).scale(Rational(-1, 4));
    x.claimed.diffusion = {SuperFunction(ctx)};
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<IntermediateCheck> intermediates_ns_alt(const GenCtx& ctx) {
  Grassmann y = gen(ctx, "y"), eta = gen(ctx, "eta");
  SuperMap sol = solution_ns_alt(ctx);
  // theta' z'^{-1/2} and z'^{-3/2} along the flow.
  SuperFunction th_zm12 = substitute(
      SuperFunction::theta(ctx) * SuperFunction::z_power(ctx, -1), sol);
  SuperFunction zm32 = substitute(SuperFunction::z_power(ctx, -3), sol);

  std::vector<IntermediateCheck> out;
  {
    IntermediateCheck w;
    w.name = "shifted-even-coordinate";
    // w' = z' + k (y - eta theta' z'^{1/2}) B
    w.value = SuperFunction::z_power(ctx, 2) +
              (sf_const(ctx, y) -
               (SuperFunction::theta(ctx) * SuperFunction::z_power(ctx, 1))
                   .left_mul(eta))
                  .scale(k_sym() * B_sym());
    // dw' = -y eta theta' z'^{-1/2} dt;  w' = z - y eta theta' z'^{-1/2} t
    w.closed_form = SuperFunction::z_power(ctx, 2) -
                    th_zm12.left_mul(y * eta).scale(t_sym());
    w.claimed.drift = th_zm12.left_mul(y * eta).scale(Rational(-1));
    w.claimed.diffusion = {SuperFunction(ctx)};
    out.push_back(std::move(w));
  }
  {
    IntermediateCheck x;
    x.name = "shifted-odd-coordinate";
    // chi' = theta' + k (eta z'^{-1/2} - 1/2 y theta' z'^{-1}) B
    x.value = SuperFunction::theta(ctx) +
              (SuperFunction::z_power(ctx, -1).left_mul(eta) -
               (SuperFunction::theta(ctx) * SuperFunction::z_power(ctx, -2))
                   .left_mul(y)
                   .scale(Rational(1, 2)))
                  .scale(k_sym() * B_sym());
    // d chi' = (1 + k^2/2) y eta z'^{-3/2} dt + k^2 y eta z'^{-3/2} B dB
    // chi' = theta + y eta z'^{-3/2} t + 1/2 k^2 y eta z'^{-3/2} B^2
    x.closed_form = SuperFunction::theta(ctx) +
                    zm32.left_mul(y * eta).scale(t_sym()) +
                    zm32.left_mul(y * eta).scale(k2_sym() * B_sym(2) *
                                                 Rational(1, 2));
    x.claimed.drift =
        zm32.left_mul(y * eta).scale(Poly(Rational(1)) + k2_sym() * Rational(1, 2));
    x.claimed.diffusion = {zm32.left_mul(y * eta).scale(k2_sym() * B_sym())};
    out.push_back(std::move(x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Named walks.

std::vector<std::string> walk_names() {
  return {"ns", "ns-alt", "r", "r-alt", "classical"};
}

WalkSpec named_walk(const std::string& name, const GenCtx& ctx,
                    const Rational& kappa) {
  if (name == "ns")
    return walk_ns(ctx, Structure::Conv, c_of_kappa(kappa),
                   delta_ns_of_kappa(kappa), kappa);
  if (name == "ns-alt")
    return walk_ns(ctx, Structure::Alt, c_of_kappa(kappa),
                   delta_ns_of_kappa(kappa), kappa);
  if (name == "r")
    return walk_r(ctx, Structure::Conv, c_of_kappa(kappa),
                  delta_r_of_kappa(kappa), kappa);
  if (name == "r-alt")
    return walk_r(ctx, Structure::Alt, c_of_kappa(kappa),
                  delta_r_of_kappa(kappa), kappa);
  if (name == "classical")
    return walk_classical(ctx, c_classical_of_kappa(kappa),
                          delta_classical_of_kappa(kappa), kappa);
  throw std::invalid_argument("unknown walk name: " + name +
                              " (expected ns, ns-alt, r, r-alt or classical)");
}

}  // namespace supersle
