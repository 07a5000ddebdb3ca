// Walk <-> SDE transcription, jet-level link identities, exact martingale
// decisions, and the JSON interface for walk specifications.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "supersle/catalog.hpp"
#include "supersle/links.hpp"

#include "json.hpp"

#include <random>

using namespace supersle;

namespace {

GenCtx ctx = default_ctx();

Grassmann gen(const char* name) { return Grassmann::generator(ctx, name); }

VermaState eval_t0(const VermaState& v) {
  VermaState out(v.mctx());
  v.for_each([&](const StateKey& key, const Grassmann& g) {
    Grassmann e = g.map_coeffs(
        [](const Poly& p) { return p.eval_symbol(SYM_T, Rational(0)); });
    if (!e.is_zero()) out.add(key, e);
  });
  return out;
}

VermaState d_dt_at_t0(const VermaState& v) {
  VermaState out(v.mctx());
  v.for_each([&](const StateKey& key, const Grassmann& g) {
    Grassmann e = g.map_coeffs([](const Poly& p) {
      return p.derivative(SYM_T).eval_symbol(SYM_T, Rational(0));
    });
    if (!e.is_zero()) out.add(key, e);
  });
  return out;
}

}  // namespace

TEST_CASE("walk validation accepts the stated walks and rejects bad ones") {
  for (const std::string& name : walk_names())
    CHECK_NOTHROW(validate_walk(named_walk(name, ctx, Rational(3))));

  WalkSpec w = named_walk("classical", ctx, Rational(3));
  // Odd coefficient on an even mode.
  WalkSpec bad_parity = w;
  bad_parity.beta = {AlgebraElement::L(w.alg, -1).scale(gen("eta"))};
  CHECK_THROWS_AS(validate_walk(bad_parity), std::invalid_argument);
  // Quadratic word where a mode-linear element is required.
  WalkSpec bad_word = w;
  bad_word.alpha0 = AlgebraElement::word(
      w.alg, {mode_L(-1), mode_L(-1)}, Grassmann::one(ctx));
  CHECK_THROWS_AS(validate_walk(bad_word), std::invalid_argument);
  // The word factory rejects modes invalid in the context's sector outright.
  CHECK_THROWS_AS(
      AlgebraElement::word(w.alg, {mode_G2(-2)}, gen("eta")),
      std::invalid_argument);
  // A fermionic element smuggled in from another sector's context.
  AlgCtx ramond_alg{Sector::Ramond, w.alg.c, ctx};
  WalkSpec bad_sector = w;
  bad_sector.alpha0 = AlgebraElement::word(ramond_alg, {mode_G2(-2)}, gen("eta"));
  CHECK_THROWS_AS(validate_walk(bad_sector), std::invalid_argument);
  // Pinned k whose square is not kappa.
  WalkSpec bad_k = w;
  bad_k.k_value = Rational(2);  // kappa is 3
  CHECK_THROWS_AS(validate_walk(bad_k), std::invalid_argument);
}

TEST_CASE("transcribed SDEs match their stated closed forms termwise") {
  CHECK(build_sde(named_walk("ns", ctx, Rational(3))) == frozen_sde_ns_conv(ctx));
  CHECK(build_sde(named_walk("r", ctx, Rational(3))) == frozen_sde_r_conv(ctx));
  CHECK(build_sde(named_walk("r-alt", ctx, Rational(3))) == frozen_sde_r_alt(ctx));
  CHECK(build_sde(named_walk("ns-alt", ctx, Rational(3))) == frozen_sde_ns_alt(ctx));
}

TEST_CASE("classical walk transcribes to the Loewner equation") {
  SdeSpec sde = build_sde(named_walk("classical", ctx, Rational(3)));
  SuperFunction two_over_z =
      SuperFunction::z_power(ctx, -2) * SuperFunction::constant(ctx, Rational(2));
  CHECK(sde.z_drift == two_over_z);
  REQUIRE(sde.z_diff.size() == 1);
  SuperFunction minus_k = SuperFunction::constant(
      ctx, Poly::symbol(SYM_K) * Rational(-1));
  CHECK(sde.z_diff[0] == minus_k);
  // The canonical lift theta' = theta (dg/dz)^{1/2} drifts by -theta/z^2 and
  // carries no noise (the driving term is z-independent).
  SuperFunction minus_theta_zz = SuperFunction::theta(ctx) *
                                 SuperFunction::z_power(ctx, -4) *
                                 SuperFunction::constant(ctx, Rational(-1));
  CHECK(sde.theta_drift == minus_theta_zz);
  CHECK(sde.theta_diff[0].is_zero());
}

TEST_CASE("link identity holds for every named super walk") {
  for (const std::string name : {"ns", "ns-alt", "r", "r-alt"}) {
    CAPTURE(name);
    LinkResidual res = verify_link(named_walk(name, ctx, Rational(3)));
    CHECK(res.is_zero());
  }
}

TEST_CASE("link residual detects a perturbed SDE") {
  WalkSpec w = named_walk("r", ctx, Rational(3));
  SdeSpec sde = build_sde(w);

  SdeSpec scaled = sde;
  scaled.theta_drift =
      scaled.theta_drift * SuperFunction::constant(ctx, Rational(2));
  CHECK(!verify_link_with(w, scaled).drift.is_zero());

  SdeSpec flipped = sde;
  flipped.z_diff[0] = flipped.z_diff[0] * SuperFunction::constant(ctx, Rational(-1));
  CHECK(!verify_link_with(w, flipped).is_zero());

  SdeSpec dropped = sde;
  dropped.z_drift = SuperFunction(ctx);
  CHECK(!verify_link_with(w, dropped).drift.is_zero());
}

TEST_CASE("jet derivative shifts slots and refuses to exceed second order") {
  JetFunction j(ctx);
  j.slot[0] = SuperFunction::z_power(ctx, 2);  // z' phi
  JetFunction dj = jet_dw(j);
  CHECK(dj.slot[0] == SuperFunction::constant(ctx, Rational(1)));  // (d z') phi
  CHECK(dj.slot[1] == SuperFunction::z_power(ctx, 2));             // z' phi'
  for (int s = 2; s < JetFunction::kSlots; ++s) CHECK(dj.slot[s].is_zero());

  JetFunction odd(ctx);
  odd.slot[3] = SuperFunction::constant(ctx, Rational(1));  // psi
  CHECK(jet_dw(odd).slot[4] == SuperFunction::constant(ctx, Rational(1)));

  JetFunction top(ctx);
  top.slot[2] = SuperFunction::constant(ctx, Rational(1));  // phi''
  CHECK_THROWS_AS(jet_dw(top), std::runtime_error);
  JetFunction top_odd(ctx);
  top_odd.slot[5] = SuperFunction::constant(ctx, Rational(1));  // psi''
  CHECK_THROWS_AS(jet_dw(top_odd), std::runtime_error);
}

TEST_CASE("drift states of the stated walks") {
  Rational kappa(8, 3);
  Grassmann ee = gen("eps") * gen("eta");
  Grassmann ye = gen("y") * gen("eta");

  // Ramond: eps eta ((kappa - 1/2) L_{-1} - kappa G_{-1} G_0) |delta>.
  WalkSpec wr = named_walk("r", ctx, kappa);
  VermaState dr = drift_state(wr);
  VermaState expect_r(wr.mod());
  expect_r.add({{mode_L(-1)}, 0}, ee.scale(kappa - Rational(1, 2)));
  expect_r.add({{mode_G2(-2)}, 1}, ee.scale(-kappa));
  CHECK(dr == expect_r);

  // NS: y eta (kappa L_{-1} G_{-1/2} - G_{-3/2}) |delta>.
  WalkSpec wn = named_walk("ns", ctx, kappa);
  VermaState dn = drift_state(wn);
  VermaState expect_n(wn.mod());
  expect_n.add({{mode_L(-1), mode_G2(-1)}, 0}, ye.scale(kappa));
  expect_n.add({{mode_G2(-3)}, 0}, ye.scale(Rational(-1)));
  CHECK(dn == expect_n);

  // Classical: the drift state IS the stated singular combination.
  WalkSpec wc = named_walk("classical", ctx, kappa);
  CHECK(drift_state(wc) == chi_classical(wc.mod(), kappa));
}

TEST_CASE("drift state is invariant under splitting the noise") {
  for (const std::string name : {"ns", "r", "classical"}) {
    CAPTURE(name);
    WalkSpec w = named_walk(name, ctx, Rational(8, 3));
    WalkSpec split = w;
    REQUIRE(w.beta.size() == 1);
    // (3/5)^2 + (4/5)^2 = 1 keeps sum beta_i^2 fixed.
    split.beta = {w.beta[0].scale(Rational(3, 5)), w.beta[0].scale(Rational(4, 5))};
    CHECK_NOTHROW(validate_walk(split));
    CHECK(drift_state(split) == drift_state(w));
    CHECK(build_sde(split).n_brownian() == 2);
    CHECK(martingale_check(split).in_submodule == martingale_check(w).in_submodule);
  }
}

TEST_CASE("inverse-process drift cancels through the normal-ordering engine") {
  for (const std::string& name : walk_names()) {
    CAPTURE(name);
    WalkSpec w = named_walk(name, ctx, Rational(3));
    // d(G^{-1}) = G^{-1} has generator pair a = -alpha0 + sum beta_i^2,
    // b_i = -beta_i; then d(G^{-1} G) has drift a + alpha0 + sum b_i beta_i.
    AlgebraElement a = -w.alpha0;
    for (const AlgebraElement& b : w.beta) a += b * b;
    AlgebraElement drift = a + w.alpha0;
    for (const AlgebraElement& b : w.beta) drift += (-b) * b;
    CHECK(drift.is_zero());
  }
}

TEST_CASE("martingale decision: pass on the locus, fail off it") {
  std::mt19937 rng(424243);
  std::uniform_int_distribution<int> num(-12, 12);
  for (const std::string name : {"ns", "r", "classical"}) {
    CAPTURE(name);
    for (const Rational& kappa : {Rational(8, 3), Rational(4), Rational(16, 5)}) {
      WalkSpec w = named_walk(name, ctx, kappa);
      MartingaleReport on = martingale_check(w);
      CHECK(on.in_submodule);
      CHECK(!on.drift_zero);  // the drift state itself is nonzero
      CHECK(!on.singular_levels.empty());

      // Random off-locus perturbations of (c, delta) must fail.
      for (int trial = 0; trial < 10; ++trial) {
        WalkSpec off = w;
        Rational dc(num(rng), 7), dd(num(rng), 5);
        if (dc == 0 && dd == 0) dd = Rational(1, 5);
        off.alg.c = w.alg.c + dc;
        off.delta = w.delta + dd;
        // Stay clear of the other locus branch at the same c.
        bool on_constraint =
            (name == "ns" &&
             ns_singular_constraint(off.alg.c, off.delta) == 0) ||
            (name == "r" && r_singular_constraint(off.alg.c, off.delta) == 0) ||
            (name == "classical" &&
             classical_singular_constraint(off.alg.c, off.delta) == 0);
        if (on_constraint) continue;
        CAPTURE(trial);
        CHECK(!martingale_check(off).in_submodule);
      }
    }
  }
}

TEST_CASE("locus formulas satisfy the singular constraints") {
  for (const Rational& kappa : {Rational(2), Rational(8, 3), Rational(3),
                                Rational(4), Rational(16, 5), Rational(6)}) {
    CAPTURE(to_string(kappa));
    Rational c = c_of_kappa(kappa);
    CHECK(ns_singular_constraint(c, delta_ns_of_kappa(kappa)) == 0);
    CHECK(r_singular_constraint(c, delta_r_of_kappa(kappa)) == 0);
    CHECK(classical_singular_constraint(c_classical_of_kappa(kappa),
                                        delta_classical_of_kappa(kappa)) == 0);
  }
  // Spot values.
  CHECK(c_of_kappa(Rational(3)) == Rational(-5, 2));
  CHECK(delta_ns_of_kappa(Rational(3)) == Rational(-1, 6));
  CHECK(delta_r_of_kappa(Rational(3)) == Rational(15, 16));
  CHECK(c_classical_of_kappa(Rational(4)) == Rational(1));
  CHECK(delta_classical_of_kappa(Rational(4)) == Rational(1, 4));
  CHECK(c_of_kappa(Rational(2)) == Rational(0));
}

TEST_CASE("expected state starts at the primary and drifts as the drift state") {
  for (const std::string name : {"ns", "r", "classical"}) {
    CAPTURE(name);
    WalkSpec w = named_walk(name, ctx, Rational(8, 3));
    int max_two_level = name == "classical" ? 8 : 4;
    VermaState expect = expected_state(w, max_two_level);
    CHECK(eval_t0(expect) == VermaState::vacuum(w.mod()));
    // First-order coefficient = drift applied to the primary.
    CHECK(d_dt_at_t0(expect) == drift_state(w).truncate(max_two_level));
  }
}

TEST_CASE("quotient conservation of the expected state on the locus") {
  for (const std::string name : {"ns", "r"}) {
    CAPTURE(name);
    WalkSpec w = named_walk(name, ctx, Rational(8, 3));
    // The NS drift state sits at two_level 3, the Ramond one at two_level 2;
    // truncation must not cut below the drift level.
    for (int max_two_level : {name == "ns" ? 3 : 2, 4}) {
      VermaState expect = expected_state(w, max_two_level);
      VermaState reduced = quotient_reduce(w.mod(), expect, max_two_level);
      CHECK(reduced == VermaState::vacuum(w.mod()));
    }
  }
  WalkSpec wc = named_walk("classical", ctx, Rational(8, 3));
  VermaState expect = expected_state(wc, 8);
  CHECK(quotient_reduce(wc.mod(), expect, 8) == VermaState::vacuum(wc.mod()));

  // Off the locus the order-t term already survives the quotient.
  WalkSpec off = wc;
  off.delta = wc.delta + 1;
  VermaState off_expect = expected_state(off, 8);
  VermaState off_reduced = quotient_reduce(off.mod(), off_expect, 8);
  CHECK(!(off_reduced == VermaState::vacuum(off.mod())));
  CHECK(!d_dt_at_t0(off_reduced).is_zero());
}

TEST_CASE("expected state guards") {
  WalkSpec w = named_walk("classical", ctx, Rational(8, 3));
  // Truncation below the drift-state level.
  CHECK_THROWS_AS(expected_state(w, 2), std::invalid_argument);
  // Raising mode in the walk.
  WalkSpec raising = w;
  raising.alpha0 = AlgebraElement::L(w.alg, 1);
  CHECK_THROWS_AS(expected_state(raising, 8), std::invalid_argument);
}

TEST_CASE("stated singular vectors vanish in the quotient") {
  Rational kappa(8, 3);
  WalkSpec wn = named_walk("ns", ctx, kappa);
  CHECK(quotient_reduce(wn.mod(), chi_ns(wn.mod()), 3).is_zero());
  WalkSpec wr = named_walk("r", ctx, kappa);
  CHECK(quotient_reduce(wr.mod(), chi_r(wr.mod()), 2).is_zero());
  WalkSpec wc = named_walk("classical", ctx, kappa);
  CHECK(quotient_reduce(wc.mod(), chi_classical(wc.mod(), kappa), 4).is_zero());
}

TEST_CASE("singular descendants span null states") {
  WalkSpec wn = named_walk("ns", ctx, Rational(3));
  SubmoduleLevel sub = singular_descendants(wn.mod(), 3);
  CHECK(sub.two_level == 3);
  CHECK(!sub.span.empty());
  REQUIRE(!sub.singular_levels.empty());
  CHECK(sub.singular_levels.front() == 3);  // NS level 3/2 stored doubled
  // Every descendant is a null state: orthogonal to the whole level.
  Matrix gram = gram_matrix(wn.mod(), 3);
  for (const Vec& v : sub.span) {
    for (std::size_t row = 0; row < gram.size(); ++row) {
      Rational dot(0);
      for (std::size_t col = 0; col < v.size(); ++col)
        dot += gram[row][col] * v[col];
      CHECK(dot == 0);
    }
  }

  // Higher target level: descendants of the level-1 Ramond pair.
  WalkSpec wr = named_walk("r", ctx, Rational(3));
  SubmoduleLevel sub4 = singular_descendants(wr.mod(), 4);
  CHECK(sub4.two_level == 4);
  CHECK(sub4.span.size() >= 2);
  Matrix gram4 = gram_matrix(wr.mod(), 4);
  for (const Vec& v : sub4.span) {
    for (std::size_t row = 0; row < gram4.size(); ++row) {
      Rational dot(0);
      for (std::size_t col = 0; col < v.size(); ++col)
        dot += gram4[row][col] * v[col];
      CHECK(dot == 0);
    }
  }
}

TEST_CASE("walk JSON round trip") {
  for (const std::string& name : walk_names()) {
    CAPTURE(name);
    WalkSpec w = named_walk(name, ctx, Rational(8, 3));
    WalkSpec back = walk_from_json(walk_to_json(w), ctx);
    CHECK(back.alg.sector == w.alg.sector);
    CHECK(back.alg.c == w.alg.c);
    CHECK(back.structure == w.structure);
    CHECK(back.delta == w.delta);
    CHECK(back.kappa == w.kappa);
    CHECK(back.k_value == w.k_value);
    CHECK(back.alpha0 == w.alpha0);
    REQUIRE(back.beta.size() == w.beta.size());
    for (std::size_t i = 0; i < w.beta.size(); ++i)
      CHECK(back.beta[i] == w.beta[i]);
  }

  // Pinned rational k survives the round trip.
  WalkSpec pinned = named_walk("classical", ctx, Rational(4));
  pinned.k_value = Rational(2);
  validate_walk(pinned);
  WalkSpec back = walk_from_json(walk_to_json(pinned), ctx);
  REQUIRE(back.k_value.has_value());
  CHECK(*back.k_value == Rational(2));
  CHECK(build_sde(back) == build_sde(pinned));
}

TEST_CASE("JSON serializations parse and JSON errors throw") {
  WalkSpec w = named_walk("r", ctx, Rational(3));
  auto parsed = nlohmann::json::parse(walk_to_json(w));
  CHECK(parsed.contains("sector"));
  CHECK(parsed.contains("alpha0"));

  Grassmann g = gen("eps") * gen("eta") + Grassmann::constant(ctx, Rational(1, 2));
  auto gj = nlohmann::json::parse(grassmann_to_json(g));
  CHECK(gj.is_array());

  auto vj = nlohmann::json::parse(verma_state_to_json(drift_state(w)));
  CHECK(!vj.empty());

  auto sj = nlohmann::json::parse(sde_to_json(build_sde(w)));
  CHECK(sj.contains("z_drift"));

  CHECK_THROWS(walk_from_json("not json", ctx));
  CHECK_THROWS(walk_from_json("{}", ctx));
  // Mode outside the stated sector.
  CHECK_THROWS(walk_from_json(
      R"({"sector":"virasoro","structure":"conv","c":"0","delta":"5/8",
          "kappa":"8/3",
          "alpha0":[{"mode":"G","index":"-1","coeff":[[["eta"],"1"]]}],
          "beta":[]})",
      ctx));
}
