// Exact rational scalars, sparse polynomials, and the finitely generated
// Grassmann algebra: arithmetic, parity, inversion and fractional powers.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "supersle/grassmann.hpp"
#include "supersle/superspace.hpp"

#include <random>
#include <vector>

using namespace supersle;

namespace {

// Independent product oracle: a term is its sorted generator-index list; the
// concatenation is resorted by adjacent transpositions, each swap of two odd
// generators flipping the sign, and a repeated generator kills the term.
Grassmann naive_mul(const Grassmann& a, const Grassmann& b) {
  const GenCtx& ctx = a.ctx();
  Grassmann out(ctx);
  a.for_each([&](std::uint64_t ma, const Poly& ca) {
    b.for_each([&](std::uint64_t mb, const Poly& cb) {
      std::vector<std::size_t> seq;
      for (std::size_t i = 0; i < ctx->size(); ++i)
        if ((ma >> i) & 1u) seq.push_back(i);
      for (std::size_t i = 0; i < ctx->size(); ++i)
        if ((mb >> i) & 1u) seq.push_back(i);
      int sign = 1;
      bool dead = false;
      for (std::size_t i = 0; i + 1 < seq.size() && !dead; ++i)
        for (std::size_t j = 0; j + 1 < seq.size() - i && !dead; ++j) {
          if (seq[j] == seq[j + 1]) dead = true;
          if (seq[j] > seq[j + 1]) {
            if (ctx->is_odd(seq[j]) && ctx->is_odd(seq[j + 1])) sign = -sign;
            std::swap(seq[j], seq[j + 1]);
          }
        }
      for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (seq[i] == seq[i + 1]) dead = true;
      if (dead) return;
      std::uint64_t mask = 0;
      for (std::size_t g : seq) mask |= std::uint64_t(1) << g;
      out += Grassmann::monomial(ctx, mask, ca * cb * Rational(sign));
    });
  });
  return out;
}

Grassmann random_element(const GenCtx& ctx, std::mt19937& rng, int max_terms,
                         bool with_symbols = false) {
  std::uniform_int_distribution<int> mask_dist(
      0, (1 << static_cast<int>(ctx->size())) - 1);
  std::uniform_int_distribution<int> coef_dist(-3, 3);
  Grassmann g(ctx);
  for (int i = 0; i < max_terms; ++i) {
    Poly c(Rational(coef_dist(rng)));
    if (with_symbols && coef_dist(rng) > 1) c = c * Poly::symbol(SYM_T);
    g += Grassmann::monomial(ctx, static_cast<std::uint64_t>(mask_dist(rng)), c);
  }
  return g;
}

// Splits an element into its parity-homogeneous halves and returns the parts
// that are nonzero.
std::vector<Grassmann> homogeneous_parts(const Grassmann& g) {
  std::vector<Grassmann> parts;
  if (!g.even_part().is_zero()) parts.push_back(g.even_part());
  if (!g.odd_part().is_zero()) parts.push_back(g.odd_part());
  return parts;
}

}  // namespace

TEST_CASE("rational utilities are exact") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(to_string(Rational(22, 8)) == "11/4");
  CHECK(pow_int(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(pow_int(Rational(5), 0) == Rational(1));
  CHECK(exact_sqrt(Rational(9, 16)) == Rational(3, 4));
  CHECK(!exact_sqrt(Rational(2)).has_value());  // sqrt(2) is not rational
  CHECK(binomial(Rational(1, 2), 2) == Rational(-1, 8));
  CHECK(binomial(Rational(-1), 3) == Rational(-1));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("exact_from_double reproduces binary doubles without rounding") {
  for (double v : {0.5, 1.0, -0.375, 0.1, 1e-3, 3.14159, -1234.5e-8}) {
    Rational r = exact_from_double(v);
    CHECK(to_double(r) == v);
  }
  CHECK(exact_from_double(0.25) == Rational(1, 4));
  CHECK(exact_from_double(-3.0) == Rational(-3));
}

TEST_CASE("polynomial arithmetic, derivative, and substitution") {
  Poly t = Poly::symbol(SYM_T);
  Poly k = Poly::symbol(SYM_K);
  Poly p = t * t * Rational(3) + k * t - Poly(Rational(5));
  CHECK(p.degree(SYM_T) == 2);
  CHECK(p.derivative(SYM_T) == t * Rational(6) + k);
  CHECK(p.derivative(SYM_K) == t);
  CHECK(p.eval_symbol(SYM_T, Rational(2)) == k * Rational(2) + Poly(Rational(7)));
  CHECK(p.at_zero(SYM_T) == Poly(Rational(-5)));
  CHECK((p - p).is_zero());
  CHECK(p * Poly() == Poly());

  // k^2 -> kappa reduction keeps odd powers of k intact.
  Poly q = k * k * k + k * k * Rational(2) + k;
  Poly reduced = q.reduce_square(SYM_K, Rational(3));
  CHECK(reduced == k * Rational(3) + Poly(Rational(6)) + k);
}

TEST_CASE("generator products: nilpotency and anticommutation") {
  GenCtx ctx = default_ctx();
  Grassmann eta = Grassmann::generator(ctx, "eta");
  Grassmann eps = Grassmann::generator(ctx, "eps");
  Grassmann y = Grassmann::generator(ctx, "y");
  Grassmann theta = Grassmann::generator(ctx, "theta");

  CHECK((eta * eta).is_zero());
  CHECK((y * y).is_zero());  // even but nilpotent
  CHECK(eps * eta == -(eta * eps));
  CHECK(y * eta == eta * y);  // even generators commute with everything
  CHECK((theta * eta) * eps == theta * (eta * eps));
}

TEST_CASE("body, soul, parity") {
  GenCtx ctx = default_ctx();
  Grassmann eta = Grassmann::generator(ctx, "eta");
  Grassmann eps = Grassmann::generator(ctx, "eps");
  Grassmann theta = Grassmann::generator(ctx, "theta");
  Grassmann y = Grassmann::generator(ctx, "y");

  Grassmann a = Grassmann::constant(ctx, Rational(3)) + (eps * eta).scale(Rational(2));
  CHECK(a.body() == Poly(Rational(3)));
  CHECK(a.soul() == (eps * eta).scale(Rational(2)));
  CHECK(a.parity() == 0);

  CHECK((theta + eps).parity() == 1);
  CHECK(!(theta + eps * eta).parity().has_value());  // mixed

  CHECK(y.body().is_zero());  // y is a soul-only even element
  CHECK(y.soul() == y);
  CHECK(y.is_nilpotent());
  CHECK(Grassmann(ctx).parity() == 0);  // zero counts as even
}

TEST_CASE("subset-convolution example: (1 + eps eta)(1 - eps eta) = 1") {
  GenCtx ctx = default_ctx();
  Grassmann one = Grassmann::one(ctx);
  Grassmann ee = Grassmann::generator(ctx, "eps") * Grassmann::generator(ctx, "eta");
  CHECK((one + ee) * (one - ee) == one);
  CHECK(naive_mul(one + ee, one - ee) == one);
}

TEST_CASE("product agrees with the independent sign oracle") {
  GenCtx ctx = default_ctx();
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 60; ++trial) {
    Grassmann a = random_element(ctx, rng, 4, true);
    Grassmann b = random_element(ctx, rng, 4, true);
    CHECK(a * b == naive_mul(a, b));
  }
}

TEST_CASE("graded commutativity on homogeneous elements") {
  GenCtx ctx = default_ctx();
  std::mt19937 rng(777);
  for (int trial = 0; trial < 40; ++trial) {
    Grassmann a = random_element(ctx, rng, 3);
    Grassmann b = random_element(ctx, rng, 3);
    for (const Grassmann& ha : homogeneous_parts(a))
      for (const Grassmann& hb : homogeneous_parts(b)) {
        int sign = (*ha.parity() && *hb.parity()) ? -1 : 1;
        CHECK(ha * hb == (hb * ha).scale(Rational(sign)));
      }
  }
}

TEST_CASE("associativity on random triples") {
  GenCtx ctx = default_ctx();
  std::mt19937 rng(999);
  for (int trial = 0; trial < 40; ++trial) {
    Grassmann a = random_element(ctx, rng, 3);
    Grassmann b = random_element(ctx, rng, 3);
    Grassmann c = random_element(ctx, rng, 3);
    CHECK((a * b) * c == a * (b * c));
  }
}

TEST_CASE("soul nilpotency index is at most the generator count + 1") {
  GenCtx ctx = default_ctx();
  std::mt19937 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    Grassmann s = random_element(ctx, rng, 5).soul();
    Grassmann p = Grassmann::one(ctx);
    for (std::size_t i = 0; i <= ctx->size(); ++i) p = p * s;
    CHECK(p.is_zero());
  }
}

TEST_CASE("inverse: examples and multiply-back") {
  GenCtx ctx = default_ctx();
  Grassmann one = Grassmann::one(ctx);
  Grassmann ee = Grassmann::generator(ctx, "eps") * Grassmann::generator(ctx, "eta");

  CHECK((one + ee).inverse() == one - ee);
  CHECK(one.inverse() == one);

  std::mt19937 rng(555);
  for (int trial = 0; trial < 25; ++trial) {
    Grassmann a = random_element(ctx, rng, 4).even_part() +
                  Grassmann::constant(ctx, Rational(trial % 5 + 1));
    CHECK(a * a.inverse() == one);
    CHECK(a.inverse() * a == one);
  }

  CHECK_THROWS_AS(Grassmann::generator(ctx, "eta").inverse(), std::domain_error);
  CHECK_THROWS_AS(ee.inverse(), std::domain_error);  // zero body
}

TEST_CASE("fractional powers: examples, square-back, exponent addition") {
  GenCtx ctx = default_ctx();
  Grassmann one = Grassmann::one(ctx);
  Grassmann ee = Grassmann::generator(ctx, "eps") * Grassmann::generator(ctx, "eta");

  Grassmann root = (one + ee).pow(Rational(1, 2));
  CHECK(root == one + ee.scale(Rational(1, 2)));
  CHECK(root * root == one + ee);

  std::mt19937 rng(4242);
  for (int trial = 0; trial < 25; ++trial) {
    Grassmann a = one + random_element(ctx, rng, 4, true).even_part().soul();
    Grassmann half = a.pow(Rational(1, 2));
    CHECK(half * half == a);
    CHECK(a.pow(Rational(1, 3)) * a.pow(Rational(2, 3)) == a);
    CHECK(a.pow(Rational(-1)) == a.inverse());
    // gpow(a, p) raised to 1/p recovers a for p in {1/2, 2}.
    CHECK(a.pow(Rational(1, 2)).pow(Rational(2)) == a);
    CHECK(a.pow(Rational(2)).pow(Rational(1, 2)) == a);
  }

  CHECK_THROWS_AS((one.scale(Rational(2)) + ee).pow(Rational(1, 2)),
                  std::domain_error);  // body must be 1
}

TEST_CASE("graded left derivative and generator factoring") {
  GenCtx ctx = default_ctx();
  std::size_t eta_i = *ctx->index_of("eta");
  std::size_t eps_i = *ctx->index_of("eps");
  Grassmann eta = Grassmann::generator(ctx, eta_i);
  Grassmann eps = Grassmann::generator(ctx, eps_i);

  CHECK(eta.derivative(eta_i) == Grassmann::one(ctx));
  CHECK((eta * eps).derivative(eta_i) == eps);
  CHECK((eta * eps).derivative(eps_i) == -eta);  // sign from moving past eta

  Grassmann a = Grassmann::constant(ctx, Rational(2)) + eta * eps + eps;
  auto [a0, a1] = a.factor_generator(eta_i);
  CHECK(a == a0 + eta * a1);
  CHECK(!a0.depends_on_generator(eta_i));
  CHECK(!a1.depends_on_generator(eta_i));

  CHECK_THROWS_AS(eta.derivative(*ctx->index_of("y")), std::domain_error);
}

TEST_CASE("coefficient maps and k-reduction distribute over terms") {
  GenCtx ctx = default_ctx();
  Poly k = Poly::symbol(SYM_K);
  Grassmann g = Grassmann::generator(ctx, "eta").scale(k * k) +
                Grassmann::constant(ctx, k);
  Grassmann reduced = g.reduce_k(Rational(5));
  CHECK(reduced == Grassmann::generator(ctx, "eta").scale(Rational(5)) +
                       Grassmann::constant(ctx, k));
  Grassmann doubled = g.map_coeffs([](const Poly& p) { return p * Rational(2); });
  CHECK(doubled == g + g);
}

TEST_CASE("generator set limits and lookup errors") {
  CHECK_THROWS_AS(Grassmann::generator(default_ctx(), "nope"),
                  std::invalid_argument);
  CHECK_THROWS_AS(Grassmann::generator(default_ctx(), std::size_t{99}),
                  std::out_of_range);
  std::vector<std::pair<std::string, Parity>> too_many(
      64, {"g", Parity::Odd});
  CHECK_THROWS_AS(make_generators(too_many), std::invalid_argument);
}
