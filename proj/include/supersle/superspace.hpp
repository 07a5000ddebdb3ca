#pragma once

#include "supersle/grassmann.hpp"

#include <map>
#include <string>
#include <utility>

namespace supersle {

/// Default generator context: the superspace coordinate theta plus auxiliary
/// nilpotent parameters (y even with y^2 = 0; eta, eps, zeta odd).
GenCtx default_ctx();
std::size_t theta_index(const GenCtx& ctx);

/// Function on (1|1) superspace: finite sum over half-integer powers of z
/// with Grassmann coefficients.  Exponents are stored doubled (two_e = 2e),
/// and the odd coordinate theta lives inside the coefficients as the
/// generator named "theta".
class SuperFunction {
 public:
  SuperFunction() = default;
  explicit SuperFunction(GenCtx ctx) : ctx_(std::move(ctx)) {}

  static SuperFunction constant(GenCtx ctx, const Grassmann& g);
  static SuperFunction constant(GenCtx ctx, const Rational& c);
  static SuperFunction constant(GenCtx ctx, const Poly& p);
  /// z^{two_e/2}
  static SuperFunction z_power(GenCtx ctx, int two_e);
  static SuperFunction theta(GenCtx ctx);
  /// a + theta * b with a, b free of theta.
  static SuperFunction from_components(const SuperFunction& a, const SuperFunction& b);

  const GenCtx& ctx() const { return ctx_; }

  SuperFunction operator+(const SuperFunction& o) const;
  SuperFunction operator-(const SuperFunction& o) const;
  SuperFunction operator-() const;
  SuperFunction operator*(const SuperFunction& o) const;
  SuperFunction& operator+=(const SuperFunction& o);
  bool operator==(const SuperFunction& o) const { return terms_ == o.terms_; }

  SuperFunction scale(const Poly& p) const;
  SuperFunction scale(const Rational& c) const { return scale(Poly(c)); }
  /// Left multiplication by a Grassmann constant.
  SuperFunction left_mul(const Grassmann& g) const;
  /// Multiply by z^{d_two_e/2}.
  SuperFunction shift(int d_two_e) const;

  /// d/dz
  SuperFunction dz() const;
  /// z d/dz
  SuperFunction z_dz() const;
  /// Graded left derivative with respect to theta.
  SuperFunction dtheta() const;
  /// D = d/dtheta + theta d/dz  (D^2 = d/dz)
  SuperFunction D() const;
  /// Dalt = d/dtheta + theta z d/dz  (Dalt^2 = z d/dz)
  SuperFunction Dalt() const;

  /// Derivative / evaluation in the scalar polynomial symbols (t, k, B_i).
  SuperFunction dsym(std::uint32_t sym) const;
  SuperFunction at_zero_sym(std::uint32_t sym) const;
  SuperFunction eval_sym(std::uint32_t sym, const Rational& v) const;
  SuperFunction reduce_k(const Rational& kappa) const;

  /// f = even_part + theta * theta_part, both parts free of theta.
  SuperFunction even_part() const;
  SuperFunction theta_part() const;

  /// Split by total Grassmann parity (theta counted as odd).
  SuperFunction parity_even_part() const;
  SuperFunction parity_odd_part() const;

  bool is_zero() const { return terms_.empty(); }
  Grassmann coeff(int two_e) const;
  void set_coeff(int two_e, const Grassmann& g);
  void for_each(const std::function<void(int, const Grassmann&)>& fn) const;
  bool has_half_integer_exponent() const;
  int min_two_e() const;
  int max_two_e() const;

  std::string str() const;

 private:
  GenCtx ctx_;
  std::map<int, Grassmann> terms_;  // two_e -> coefficient
};

/// Superspace map z -> z'(z, theta), theta -> theta'(z, theta).
struct SuperMap {
  SuperFunction z;
  SuperFunction theta;
};

/// f(z'(z,theta), theta'(z,theta)).  Requires the z image to be
/// c*z*(1 + nilpotent) with c a nonzero rational constant (admitting an exact
/// square root whenever f carries half-integer exponents).
SuperFunction substitute(const SuperFunction& f, const SuperMap& m);

/// base^{two_p/2} under the same leading-monomial requirements.
SuperFunction sf_power(const SuperFunction& base, int two_p);

/// Which superconformal structure a check refers to: the conventional
/// superderivative D or the alternative one Dalt.
enum class Structure { Conv, Alt };
std::string structure_name(Structure s);

/// D z' - theta' * D theta'; vanishes iff m is superconformal for D.
SuperFunction conv_residual(const SuperMap& m);
/// Dalt z' - theta' * z' * Dalt theta'; vanishes iff m is superconformal for Dalt.
SuperFunction alt_residual(const SuperMap& m);
/// Dispatch on the structure.
SuperFunction check_superconformal(const SuperMap& m, Structure s);

/// Component form of the D condition for z' = g + theta*gamma,
/// theta' = tau + theta*s: gamma = tau*s and dg/dz = s^2 - tau dtau/dz.
struct ComponentResiduals {
  SuperFunction gamma_residual;
  SuperFunction g_residual;
};
ComponentResiduals conv_component_residuals(const SuperMap& m);

/// Chain-rule residual for the chosen structure:
///   Conv: D(f o m)    - (D theta')    * ((D f) o m)
///   Alt:  Dalt(f o m) - (Dalt theta') * ((Dalt f) o m)
/// Vanishes for every m superconformal with respect to that structure.
SuperFunction chain_rule_residual(const SuperFunction& f, const SuperMap& m,
                                  Structure s = Structure::Conv);

}  // namespace supersle
