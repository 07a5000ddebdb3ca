// Symbolic Ito calculus over superfunction-valued polynomials in t and the
// Brownian symbols: differentials, expectations, SDE solution residuals, and
// the driving-function rewrite of the classical Loewner equation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "supersle/catalog.hpp"
#include "supersle/ito.hpp"

#include <random>

using namespace supersle;

namespace {

GenCtx ctx = default_ctx();

SuperFunction z_pow(int two_e) { return SuperFunction::z_power(ctx, two_e); }
SuperFunction theta() { return SuperFunction::theta(ctx); }
SuperFunction sf(const Poly& p) { return SuperFunction::constant(ctx, p); }
Poly t_sym() { return Poly::symbol(SYM_T); }
Poly B(int i = 1, std::uint32_t pw = 1) {
  return Poly::symbol(sym_brownian(static_cast<std::size_t>(i)), pw);
}

int b_degree(const SuperFunction& f, int i = 1) {
  int deg = 0;
  f.for_each([&](int, const Grassmann& g) {
    g.for_each([&](std::uint64_t, const Poly& p) {
      deg = std::max(deg, static_cast<int>(
                              p.degree(sym_brownian(static_cast<std::size_t>(i)))));
    });
  });
  return deg;
}

SuperFunction random_process(std::mt19937& rng) {
  std::uniform_int_distribution<int> e_dist(-4, 4);
  std::uniform_int_distribution<int> c_dist(-2, 2);
  std::uniform_int_distribution<int> pw(0, 2);
  std::uniform_int_distribution<int> mask_dist(0, 31);
  SuperFunction f(ctx);
  for (int i = 0; i < 3; ++i) {
    Poly coef(Rational(c_dist(rng)));
    coef = coef * Poly::symbol(SYM_T, static_cast<std::uint32_t>(pw(rng)));
    coef = coef * Poly::symbol(sym_brownian(1), static_cast<std::uint32_t>(pw(rng)));
    coef = coef * Poly::symbol(sym_brownian(2), static_cast<std::uint32_t>(pw(rng)));
    Grassmann g = Grassmann::monomial(
        ctx, static_cast<std::uint64_t>(mask_dist(rng)), coef);
    f += SuperFunction::constant(ctx, g) * z_pow(e_dist(rng));
  }
  return f;
}

}  // namespace

TEST_CASE("basic Ito differentials: d(B^2) and d(tB)") {
  ItoDifferential dB2 = ito_d(sf(B(1, 2)), 1);
  CHECK(dB2.drift == sf(Poly(Rational(1))));
  REQUIRE(dB2.diffusion.size() == 1);
  CHECK(dB2.diffusion[0] == sf(B() * Rational(2)));

  ItoDifferential dtB = ito_d(sf(t_sym() * B()), 1);
  CHECK(dtB.drift == sf(B()));
  CHECK(dtB.diffusion[0] == sf(t_sym()));

  // d of a deterministic function of t alone has no diffusion part.
  ItoDifferential dt2 = ito_d(sf(t_sym() * t_sym()), 1);
  CHECK(dt2.drift == sf(t_sym() * Rational(2)));
  CHECK(dt2.diffusion[0].is_zero());
}

TEST_CASE("Ito product rule d(pq) = (dp)q + p(dq) + dp dq") {
  std::mt19937 rng(60221023);
  for (int trial = 0; trial < 25; ++trial) {
    SuperFunction p = random_process(rng);
    SuperFunction q = random_process(rng);
    ItoDifferential dp = ito_d(p, 2);
    ItoDifferential dq = ito_d(q, 2);
    ItoDifferential dpq = ito_d(p * q, 2);
    // Cross-variation: sum_i dp_i dq_i enters the drift.
    SuperFunction drift = dp.drift * q + p * dq.drift;
    for (int i = 0; i < 2; ++i)
      drift += dp.diffusion[static_cast<std::size_t>(i)] *
               dq.diffusion[static_cast<std::size_t>(i)];
    CHECK(dpq.drift == drift);
    for (int i = 0; i < 2; ++i) {
      auto ui = static_cast<std::size_t>(i);
      CHECK(dpq.diffusion[ui] == dp.diffusion[ui] * q + p * dq.diffusion[ui]);
    }
  }
}

TEST_CASE("Gaussian moments: E[B^2] = t, E[B^3] = 0, E[B^4] = 3t^2") {
  CHECK(expectation(B(1, 2), 1) == t_sym());
  CHECK(expectation(B(1, 3), 1).is_zero());
  CHECK(expectation(B(1, 4), 1) == t_sym() * t_sym() * Rational(3));
  // Independent components factor.
  CHECK(expectation(B(1, 2) * B(2, 2), 2) == t_sym() * t_sym());
  CHECK(expectation(B(1, 1) * B(2, 2), 2).is_zero());
}

TEST_CASE("Dynkin identity: d/dt E[p] = E[drift of dp]") {
  std::mt19937 rng(1729);
  for (int trial = 0; trial < 25; ++trial) {
    SuperFunction p = random_process(rng);
    SuperFunction lhs = expectation(p, 2).dsym(SYM_T);
    SuperFunction rhs = expectation(ito_d(p, 2).drift, 2);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("stated flows solve their stated SDEs exactly") {
  CHECK(verify_solution(frozen_sde_ns_conv(ctx), solution_ns_conv(ctx)).ok());
  CHECK(verify_solution(frozen_sde_r_conv(ctx), solution_r_conv(ctx)).ok());
  CHECK(verify_solution(frozen_sde_r_alt(ctx), solution_r_alt(ctx)).ok());
  CHECK(verify_solution(frozen_sde_ns_alt(ctx), solution_ns_alt(ctx)).ok());
}

TEST_CASE("solution residuals detect wrong candidates and initial values") {
  SdeSpec sde = frozen_sde_ns_conv(ctx);
  SuperMap wrong = solution_ns_conv(ctx);
  // Extra even nilpotent drift term (keeps the body of z' substitutable).
  Grassmann ee = Grassmann::generator(ctx, "eps") * Grassmann::generator(ctx, "eta");
  wrong.z += sf(t_sym()).left_mul(ee);
  SolutionResidual res = verify_solution(sde, wrong);
  CHECK(!res.ok());
  CHECK(!res.z.drift.is_zero());

  SuperMap shifted = solution_ns_conv(ctx);
  shifted.theta += SuperFunction::constant(ctx, Grassmann::generator(ctx, "eta"));
  SolutionResidual res2 = verify_solution(sde, shifted);
  CHECK(!res2.ok());
  CHECK(!res2.theta_initial.is_zero());  // t = 0 value no longer theta
}

TEST_CASE("Ramond conventional flow: differential of theta' termwise") {
  SdeSpec sde = frozen_sde_r_conv(ctx);
  SuperMap sol = solution_r_conv(ctx);
  ItoDifferential d_theta = ito_d(sol.theta, 1);
  // drift k^2 eps eta theta' / (2 z') and diffusion -k(eps z'^{-1/2} +
  // eta z'^{1/2}), both evaluated along the flow.
  CHECK(d_theta.drift == substitute(sde.theta_drift, sol));
  CHECK(d_theta.diffusion[0] == substitute(sde.theta_diff[0], sol));

  // The drift evaluates to k^2 eps eta theta / (2 z) as a function of the
  // initial point: the eps eta prefactor freezes the substitution.
  Grassmann ee = Grassmann::generator(ctx, "eps") * Grassmann::generator(ctx, "eta");
  SuperFunction expected_drift =
      (theta() * z_pow(-2))
          .left_mul(ee.scale(Poly::symbol(SYM_K, 2) * Rational(1, 2)));
  CHECK(d_theta.drift == expected_drift);
}

TEST_CASE("intermediate substitutions close the Ramond and NS-alt solutions") {
  struct Family {
    std::vector<IntermediateCheck> checks;
    SuperMap sol;
  };
  for (Family fam : {Family{intermediates_r_conv(ctx), solution_r_conv(ctx)},
                     Family{intermediates_r_alt(ctx), solution_r_alt(ctx)},
                     Family{intermediates_ns_alt(ctx), solution_ns_alt(ctx)}}) {
    for (const IntermediateCheck& ic : fam.checks) {
      CAPTURE(ic.name);
      SuperFunction composed = substitute(ic.value, fam.sol);
      if (ic.closed_form) CHECK(composed == *ic.closed_form);
      ItoDifferential got = ito_d(composed, 1);
      CHECK((got - ic.claimed).is_zero());
    }
  }

  // The first Ramond-conv intermediate is the shifted even coordinate with
  // dW = (1/2) eps eta dt exactly.
  std::vector<IntermediateCheck> rc = intermediates_r_conv(ctx);
  REQUIRE(!rc.empty());
  SuperFunction w = substitute(rc[0].value, solution_r_conv(ctx));
  ItoDifferential dw = ito_d(w, 1);
  Grassmann ee = Grassmann::generator(ctx, "eps") * Grassmann::generator(ctx, "eta");
  CHECK(dw.drift == SuperFunction::constant(ctx, ee.scale(Rational(1, 2))));
  CHECK(dw.diffusion[0].is_zero());
}

TEST_CASE("square-root usage is structural: present in r-conv, absent in r-alt") {
  CHECK(frozen_sde_r_conv(ctx).has_half_integer_exponent());
  CHECK(solution_r_conv(ctx).z.has_half_integer_exponent());

  CHECK(!frozen_sde_r_alt(ctx).has_half_integer_exponent());
  CHECK(!solution_r_alt(ctx).z.has_half_integer_exponent());
  CHECK(!solution_r_alt(ctx).theta.has_half_integer_exponent());
  for (const IntermediateCheck& ic : intermediates_r_alt(ctx)) {
    CHECK(!ic.value.has_half_integer_exponent());
    if (ic.closed_form) CHECK(!ic.closed_form->has_half_integer_exponent());
    CHECK(!ic.claimed.drift.has_half_integer_exponent());
    SuperFunction composed = substitute(ic.value, solution_r_alt(ctx));
    CHECK(!composed.has_half_integer_exponent());
  }
}

TEST_CASE("soul-only evolution and Brownian degree of the Ramond flow") {
  SuperMap sol = solution_r_conv(ctx);
  // body(z' - z) = 0: the even coordinate moves only in the soul directions.
  SuperFunction disp = sol.z - z_pow(2);
  disp.for_each([&](int, const Grassmann& g) { CHECK(g.body().is_zero()); });
  CHECK(!disp.is_zero());

  // theta' carries B^2 in the Ramond-conv flow but only B in the NS flow.
  CHECK(b_degree(sol.theta) == 2);
  CHECK(b_degree(solution_ns_conv(ctx).theta) == 1);
}

TEST_CASE("expectation of the Ramond flow: E[theta'] = theta + k^2 eps eta theta t / (2z)") {
  SuperMap sol = solution_r_conv(ctx);
  Grassmann ee = Grassmann::generator(ctx, "eps") * Grassmann::generator(ctx, "eta");
  SuperFunction expected =
      theta() + (theta() * z_pow(-2))
                    .left_mul(ee.scale(Poly::symbol(SYM_K, 2) * t_sym() *
                                       Rational(1, 2)));
  CHECK(expectation(sol.theta, 1) == expected);
  // The B-linear part of z' averages out; only the t-drift survives.
  CHECK(expectation(sol.z, 1) ==
        z_pow(2) + sf(t_sym()).left_mul(ee.scale(Rational(1, 2))));
}

TEST_CASE("classical driving-function rewrite") {
  // f = g - k B turns dg = 2/(g - kB) dt into df = 2/f dt - k dB.
  CHECK(classical_rewrite_check(-1).is_zero());
  // The opposite sign leaves a residual proportional to k.
  Poly wrong = classical_rewrite_check(+1);
  CHECK(!wrong.is_zero());
  // kappa = 0 degenerate: with k = 0 both signs coincide with dg = 2/g dt.
  CHECK(wrong.eval_symbol(SYM_K, Rational(0)).is_zero());
}

TEST_CASE("differential container arithmetic") {
  ItoDifferential a{sf(t_sym()), {sf(B())}};
  ItoDifferential b{sf(t_sym()), {sf(B())}};
  CHECK((a - b).is_zero());
  ItoDifferential c{sf(Poly(Rational(0))), {sf(B()), sf(t_sym())}};
  CHECK(!c.is_zero());
  CHECK_THROWS_AS(a - c, std::invalid_argument);  // mismatched dimensions
}
