#pragma once

#include "supersle/poly.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace supersle {

enum class Parity : int { Even = 0, Odd = 1 };

/// Ordered list of nilpotent generators (each squares to zero).  Odd
/// generators anticommute among themselves; even generators commute with
/// everything but still square to zero.
struct GeneratorSet {
  std::vector<std::string> names;
  std::uint64_t odd_mask = 0;

  std::size_t size() const { return names.size(); }
  bool is_odd(std::size_t i) const { return (odd_mask >> i) & 1u; }
  std::optional<std::size_t> index_of(const std::string& name) const;
};

using GenCtx = std::shared_ptr<const GeneratorSet>;

GenCtx make_generators(const std::vector<std::pair<std::string, Parity>>& gens);

/// Element of the algebra generated by a GeneratorSet over Poly scalars.
/// Terms are keyed by the subset of generators present (bitmask over the
/// declared order); the stored coefficient stands to the left of the sorted
/// generator product.
class Grassmann {
 public:
  Grassmann() = default;
  explicit Grassmann(GenCtx ctx) : ctx_(std::move(ctx)) {}

  static Grassmann constant(GenCtx ctx, const Poly& p);
  static Grassmann constant(GenCtx ctx, const Rational& c) { return constant(ctx, Poly(c)); }
  static Grassmann one(GenCtx ctx) { return constant(std::move(ctx), Rational(1)); }
  static Grassmann generator(GenCtx ctx, std::size_t index);
  static Grassmann generator(GenCtx ctx, const std::string& name);
  static Grassmann monomial(GenCtx ctx, std::uint64_t mask, const Poly& coeff);

  const GenCtx& ctx() const { return ctx_; }

  Grassmann operator+(const Grassmann& o) const;
  Grassmann operator-(const Grassmann& o) const;
  Grassmann operator-() const;
  Grassmann operator*(const Grassmann& o) const;
  Grassmann& operator+=(const Grassmann& o);
  bool operator==(const Grassmann& o) const { return terms_ == o.terms_; }

  Grassmann scale(const Poly& p) const;
  Grassmann scale(const Rational& c) const { return scale(Poly(c)); }

  bool is_zero() const { return terms_.empty(); }
  /// Scalar part: coefficient of the empty generator subset.
  Poly body() const;
  Grassmann soul() const;
  bool is_nilpotent() const { return body().is_zero(); }

  /// Parity of a homogeneous element (count of odd generators mod 2);
  /// nullopt for mixed elements.  Zero counts as even.
  std::optional<int> parity() const;
  Grassmann even_part() const;
  Grassmann odd_part() const;

  /// Multiplicative inverse; requires an invertible (nonzero constant) body.
  Grassmann inverse() const;
  /// a^p for rational p via the terminating binomial series; requires body 1.
  Grassmann pow(const Rational& p) const;

  /// Graded left derivative with respect to an odd generator.
  Grassmann derivative(std::size_t gen) const;
  /// Splits a = a0 + g·a1 with a0, a1 free of generator g (left factor).
  std::pair<Grassmann, Grassmann> factor_generator(std::size_t gen) const;
  bool depends_on_generator(std::size_t gen) const;

  Grassmann map_coeffs(const std::function<Poly(const Poly&)>& fn) const;
  Grassmann reduce_k(const Rational& kappa) const;
  void for_each(const std::function<void(std::uint64_t, const Poly&)>& fn) const;
  std::size_t term_count() const { return terms_.size(); }
  Poly coeff(std::uint64_t mask) const;

  std::string str() const;

 private:
  void add_term(std::uint64_t mask, const Poly& c);

  GenCtx ctx_;
  std::map<std::uint64_t, Poly> terms_;
};

/// Sign of moving sorted monomial b through sorted monomial a (concatenation
/// a·b brought to sorted order); 0 coefficient if they share a generator.
int merge_sign(std::uint64_t a, std::uint64_t b, std::uint64_t odd_mask);

}  // namespace supersle
