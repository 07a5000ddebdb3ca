#pragma once

#include "supersle/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace supersle {

// Commuting polynomial symbols shared across the library.  Index 0 is the
// time symbol t, index 1 is k (the square root of kappa, reduced by k^2 ->
// kappa where a numeric kappa is in force), and indices 2.. are the Brownian
// components B1, B2, ...
inline constexpr std::size_t SYM_T = 0;
inline constexpr std::size_t SYM_K = 1;
inline constexpr std::size_t sym_brownian(std::size_t i) { return 1 + i; }

std::string symbol_name(std::size_t idx);

/// Monomial exponent vector with trailing zeros trimmed.
struct Mono {
  std::vector<std::uint32_t> e;

  void trim();
  std::uint32_t exp(std::size_t idx) const { return idx < e.size() ? e[idx] : 0; }
  bool operator==(const Mono& o) const { return e == o.e; }
  bool operator<(const Mono& o) const;
};

/// Sparse multivariate polynomial over exact rationals.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const Rational& c);
  static Poly symbol(std::size_t idx, std::uint32_t power = 1);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rational& c) const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (coefficient of the empty monomial).
  Rational constant_value() const;

  Poly derivative(std::size_t idx) const;
  /// Substitutes 0 for the symbol (drops every monomial containing it).
  Poly at_zero(std::size_t idx) const;
  /// Substitutes an exact rational value for the symbol.
  Poly eval_symbol(std::size_t idx, const Rational& v) const;
  /// Rewrites sym^(2m+s) -> value^m * sym^s; used for k^2 -> kappa.
  Poly reduce_square(std::size_t idx, const Rational& value) const;
  std::uint32_t degree(std::size_t idx) const;
  bool depends_on(std::size_t idx) const { return degree(idx) > 0; }

  void add_term(const Mono& m, const Rational& c);
  void for_each(const std::function<void(const Mono&, const Rational&)>& fn) const;
  std::size_t term_count() const { return terms_.size(); }

  std::string str() const;

 private:
  std::map<Mono, Rational> terms_;
};

inline Poly operator*(const Rational& c, const Poly& p) { return p * c; }

}  // namespace supersle
