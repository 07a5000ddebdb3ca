#include "supersle/superspace.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

namespace supersle {

GenCtx default_ctx() {
  static GenCtx ctx = make_generators({{"theta", Parity::Odd},
                                       {"y", Parity::Even},
                                       {"eta", Parity::Odd},
                                       {"eps", Parity::Odd},
                                       {"zeta", Parity::Odd}});
  return ctx;
}

std::size_t theta_index(const GenCtx& ctx) {
  auto idx = ctx->index_of("theta");
  if (!idx) throw std::invalid_argument("context has no theta generator");
  return *idx;
}

SuperFunction SuperFunction::constant(GenCtx ctx, const Grassmann& g) {
  SuperFunction f(std::move(ctx));
  if (!g.is_zero()) f.terms_.emplace(0, g);
  return f;
}

SuperFunction SuperFunction::constant(GenCtx ctx, const Rational& c) {
  return constant(ctx, Grassmann::constant(ctx, c));
}

SuperFunction SuperFunction::constant(GenCtx ctx, const Poly& p) {
  return constant(ctx, Grassmann::constant(ctx, p));
}

SuperFunction SuperFunction::z_power(GenCtx ctx, int two_e) {
  SuperFunction f(ctx);
  f.terms_.emplace(two_e, Grassmann::one(ctx));
  return f;
}

SuperFunction SuperFunction::theta(GenCtx ctx) {
  SuperFunction f(ctx);
  f.terms_.emplace(0, Grassmann::generator(ctx, theta_index(ctx)));
  return f;
}

SuperFunction SuperFunction::from_components(const SuperFunction& a, const SuperFunction& b) {
  const GenCtx& ctx = a.ctx_ ? a.ctx_ : b.ctx_;
  return a + theta(ctx) * b;
}

SuperFunction SuperFunction::operator+(const SuperFunction& o) const {
  SuperFunction r = *this;
  r += o;
  return r;
}

SuperFunction& SuperFunction::operator+=(const SuperFunction& o) {
  if (!ctx_) ctx_ = o.ctx_;
  for (const auto& [e, g] : o.terms_) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, g);
    } else {
      it->second += g;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  return *this;
}

SuperFunction SuperFunction::operator-() const {
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) r.terms_.emplace(e, -g);
  return r;
}

SuperFunction SuperFunction::operator-(const SuperFunction& o) const { return *this + (-o); }

SuperFunction SuperFunction::operator*(const SuperFunction& o) const {
  SuperFunction r(ctx_ ? ctx_ : o.ctx_);
  for (const auto& [ea, ga] : terms_) {
    for (const auto& [eb, gb] : o.terms_) {
      Grassmann g = ga * gb;
      if (g.is_zero()) continue;
      auto it = r.terms_.find(ea + eb);
      if (it == r.terms_.end()) {
        r.terms_.emplace(ea + eb, g);
      } else {
        it->second += g;
        if (it->second.is_zero()) r.terms_.erase(it);
      }
    }
  }
  return r;
}

SuperFunction SuperFunction::scale(const Poly& p) const {
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) {
    Grassmann sg = g.scale(p);
    if (!sg.is_zero()) r.terms_.emplace(e, sg);
  }
  return r;
}

SuperFunction SuperFunction::left_mul(const Grassmann& g) const {
  SuperFunction r(ctx_);
  for (const auto& [e, c] : terms_) {
    Grassmann gc = g * c;
    if (!gc.is_zero()) r.terms_.emplace(e, gc);
  }
  return r;
}

SuperFunction SuperFunction::shift(int d_two_e) const {
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) r.terms_.emplace(e + d_two_e, g);
  return r;
}

SuperFunction SuperFunction::dz() const {
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) {
    if (e == 0) continue;
    Grassmann sg = g.scale(Rational(e) / 2);
    if (!sg.is_zero()) r.terms_.emplace(e - 2, sg);
  }
  return r;
}

SuperFunction SuperFunction::z_dz() const {
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) {
    if (e == 0) continue;
    Grassmann sg = g.scale(Rational(e) / 2);
    if (!sg.is_zero()) r.terms_.emplace(e, sg);
  }
  return r;
}

SuperFunction SuperFunction::dtheta() const {
  std::size_t th = theta_index(ctx_);
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) {
    Grassmann dg = g.derivative(th);
    if (!dg.is_zero()) r.terms_.emplace(e, dg);
  }
  return r;
}

SuperFunction SuperFunction::D() const { return dtheta() + theta(ctx_) * dz(); }

SuperFunction SuperFunction::Dalt() const { return dtheta() + theta(ctx_) * z_dz(); }

SuperFunction SuperFunction::dsym(std::uint32_t sym) const {
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) {
    Grassmann dg = g.map_coeffs([&](const Poly& p) { return p.derivative(sym); });
    if (!dg.is_zero()) r.terms_.emplace(e, dg);
  }
  return r;
}

SuperFunction SuperFunction::at_zero_sym(std::uint32_t sym) const {
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) {
    Grassmann zg = g.map_coeffs([&](const Poly& p) { return p.at_zero(sym); });
    if (!zg.is_zero()) r.terms_.emplace(e, zg);
  }
  return r;
}

SuperFunction SuperFunction::eval_sym(std::uint32_t sym, const Rational& v) const {
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) {
    Grassmann eg = g.map_coeffs([&](const Poly& p) { return p.eval_symbol(sym, v); });
    if (!eg.is_zero()) r.terms_.emplace(e, eg);
  }
  return r;
}

SuperFunction SuperFunction::reduce_k(const Rational& kappa) const {
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) {
    Grassmann rg = g.reduce_k(kappa);
    if (!rg.is_zero()) r.terms_.emplace(e, rg);
  }
  return r;
}

SuperFunction SuperFunction::even_part() const {
  std::size_t th = theta_index(ctx_);
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) {
    Grassmann a = g.factor_generator(th).first;
    if (!a.is_zero()) r.terms_.emplace(e, a);
  }
  return r;
}

SuperFunction SuperFunction::theta_part() const {
  std::size_t th = theta_index(ctx_);
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) {
    Grassmann b = g.factor_generator(th).second;
    if (!b.is_zero()) r.terms_.emplace(e, b);
  }
  return r;
}

SuperFunction SuperFunction::parity_even_part() const {
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) {
    Grassmann a = g.even_part();
    if (!a.is_zero()) r.terms_.emplace(e, a);
  }
  return r;
}

SuperFunction SuperFunction::parity_odd_part() const {
  SuperFunction r(ctx_);
  for (const auto& [e, g] : terms_) {
    Grassmann a = g.odd_part();
    if (!a.is_zero()) r.terms_.emplace(e, a);
  }
  return r;
}

Grassmann SuperFunction::coeff(int two_e) const {
  auto it = terms_.find(two_e);
  return it == terms_.end() ? Grassmann(ctx_) : it->second;
}

void SuperFunction::set_coeff(int two_e, const Grassmann& g) {
  if (g.is_zero()) {
    terms_.erase(two_e);
  } else {
    terms_[two_e] = g;
  }
}

void SuperFunction::for_each(const std::function<void(int, const Grassmann&)>& fn) const {
  for (const auto& [e, g] : terms_) fn(e, g);
}

bool SuperFunction::has_half_integer_exponent() const {
  for (const auto& [e, g] : terms_) {
    if (e % 2 != 0) return true;
  }
  return false;
}

int SuperFunction::min_two_e() const {
  return terms_.empty() ? 0 : terms_.begin()->first;
}

int SuperFunction::max_two_e() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first;
}

std::string SuperFunction::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, g] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "[" << g.str() << "]";
    if (e != 0) {
      os << "*z^";
      if (e % 2 == 0) {
        os << (e / 2);
      } else {
        os << "(" << e << "/2)";
      }
    }
  }
  return os.str();
}

namespace {

/// Shared engine for powers of a superfunction of the form
/// Z = c*z*(1 + N) with c a nonzero rational constant and N nilpotent.
class PowerEngine {
 public:
  explicit PowerEngine(const SuperFunction& Z) : ctx_(Z.ctx()) {
    if (!ctx_) throw std::domain_error("power base has no generator context");
    Rational c = 0;
    bool found = false;
    Z.for_each([&](int e, const Grassmann& g) {
      Poly b = g.body();
      if (b.is_zero()) return;
      if (e != 2) throw std::domain_error("power base must have leading term c*z");
      if (!b.is_constant()) {
        throw std::domain_error("power base leading coefficient must be a rational constant");
      }
      c = b.constant_value();
      found = true;
    });
    if (!found || c == 0) {
      throw std::domain_error("power base must have an invertible leading term c*z");
    }
    c_ = c;
    SuperFunction N =
        Z.shift(-2).scale(Rational(1) / c) - SuperFunction::constant(ctx_, Rational(1));
    N.for_each([&](int, const Grassmann& g) {
      if (!g.body().is_zero()) {
        throw std::domain_error("power base displacement must be nilpotent");
      }
    });
    n_powers_.push_back(SuperFunction::constant(ctx_, Rational(1)));
    SuperFunction p = n_powers_.back();
    for (std::size_t j = 1; j <= ctx_->size() + 1; ++j) {
      p = p * N;
      if (p.is_zero()) break;
      n_powers_.push_back(p);
    }
  }

  /// Z^{two_p/2}
  SuperFunction power(int two_p) const {
    Rational scal;
    if (two_p % 2 == 0) {
      scal = pow_int(c_, two_p / 2);
    } else {
      auto s = exact_sqrt(c_);
      if (!s) {
        throw std::domain_error(
            "half-integer power needs an exact square root of the leading coefficient");
      }
      scal = pow_int(*s, two_p);
    }
    Rational p = Rational(two_p) / 2;
    SuperFunction acc(ctx_);
    for (std::size_t j = 0; j < n_powers_.size(); ++j) {
      Rational b = binomial(p, static_cast<unsigned>(j));
      if (b != 0) acc += n_powers_[j].scale(b);
    }
    return acc.shift(two_p).scale(scal);
  }

 private:
  GenCtx ctx_;
  Rational c_;
  std::vector<SuperFunction> n_powers_;
};

}  // namespace

SuperFunction sf_power(const SuperFunction& base, int two_p) {
  return PowerEngine(base).power(two_p);
}

SuperFunction substitute(const SuperFunction& f, const SuperMap& m) {
  const GenCtx& ctx = m.z.ctx() ? m.z.ctx() : f.ctx();
  if (!ctx) throw std::domain_error("substitute requires a generator context");
  PowerEngine engine(m.z);
  std::size_t th = theta_index(ctx);
  SuperFunction out(ctx);
  f.for_each([&](int e, const Grassmann& g) {
    auto [a, b] = g.factor_generator(th);
    SuperFunction base = SuperFunction::constant(ctx, a);
    if (!b.is_zero()) base += m.theta * SuperFunction::constant(ctx, b);
    out += base * engine.power(e);
  });
  return out;
}

SuperFunction conv_residual(const SuperMap& m) {
  return m.z.D() - m.theta * m.theta.D();
}

SuperFunction alt_residual(const SuperMap& m) {
  return m.z.Dalt() - m.theta * m.z * m.theta.Dalt();
}

std::string structure_name(Structure s) {
  return s == Structure::Conv ? "conv" : "alt";
}

SuperFunction check_superconformal(const SuperMap& m, Structure s) {
  return s == Structure::Conv ? conv_residual(m) : alt_residual(m);
}

ComponentResiduals conv_component_residuals(const SuperMap& m) {
  SuperFunction g = m.z.even_part();
  SuperFunction gamma = m.z.theta_part();
  SuperFunction tau = m.theta.even_part();
  SuperFunction s = m.theta.theta_part();
  ComponentResiduals r;
  r.gamma_residual = gamma - tau * s;
  r.g_residual = g.dz() - s * s + tau * tau.dz();
  return r;
}

SuperFunction chain_rule_residual(const SuperFunction& f, const SuperMap& m,
                                  Structure s) {
  if (s == Structure::Conv) {
    SuperFunction lhs = substitute(f, m).D();
    SuperFunction rhs = m.theta.D() * substitute(f.D(), m);
    return lhs - rhs;
  }
  SuperFunction lhs = substitute(f, m).Dalt();
  SuperFunction rhs = m.theta.Dalt() * substitute(f.Dalt(), m);
  return lhs - rhs;
}

}  // namespace supersle
