#include "supersle/grassmann.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace supersle {

std::optional<std::size_t> GeneratorSet::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

GenCtx make_generators(const std::vector<std::pair<std::string, Parity>>& gens) {
  if (gens.size() > 63) throw std::invalid_argument("too many generators");
  auto set = std::make_shared<GeneratorSet>();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    set->names.push_back(gens[i].first);
    if (gens[i].second == Parity::Odd) set->odd_mask |= (std::uint64_t{1} << i);
  }
  return set;
}

int merge_sign(std::uint64_t a, std::uint64_t b, std::uint64_t odd_mask) {
  if (a & b) return 0;  // repeated nilpotent generator
  // Each odd generator of b must hop over the odd generators of a that sit
  // strictly above it in the declared order.
  std::uint64_t b_odd = b & odd_mask;
  std::uint64_t a_odd = a & odd_mask;
  int inversions = 0;
  while (b_odd) {
    std::uint64_t low = b_odd & (~b_odd + 1);  // lowest set bit
    // bits of a_odd strictly greater than this one
    std::uint64_t above = a_odd & ~((low << 1) - 1);
    inversions += std::popcount(above);
    b_odd ^= low;
  }
  return (inversions & 1) ? -1 : 1;
}

Grassmann Grassmann::constant(GenCtx ctx, const Poly& p) {
  Grassmann g(std::move(ctx));
  g.add_term(0, p);
  return g;
}

Grassmann Grassmann::generator(GenCtx ctx, std::size_t index) {
  if (index >= ctx->size()) throw std::out_of_range("generator index");
  Grassmann g(ctx);
  g.add_term(std::uint64_t{1} << index, Poly(Rational(1)));
  return g;
}

Grassmann Grassmann::generator(GenCtx ctx, const std::string& name) {
  auto idx = ctx->index_of(name);
  if (!idx) throw std::invalid_argument("unknown generator: " + name);
  return generator(ctx, *idx);
}

Grassmann Grassmann::monomial(GenCtx ctx, std::uint64_t mask, const Poly& coeff) {
  Grassmann g(std::move(ctx));
  g.add_term(mask, coeff);
  return g;
}

void Grassmann::add_term(std::uint64_t mask, const Poly& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(mask);
  if (it == terms_.end()) {
    terms_.emplace(mask, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Grassmann Grassmann::operator+(const Grassmann& o) const {
  Grassmann r = *this;
  if (!r.ctx_) r.ctx_ = o.ctx_;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Grassmann& Grassmann::operator+=(const Grassmann& o) {
  if (!ctx_) ctx_ = o.ctx_;
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Grassmann Grassmann::operator-() const {
  Grassmann r(ctx_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Grassmann Grassmann::operator-(const Grassmann& o) const { return *this + (-o); }

Grassmann Grassmann::operator*(const Grassmann& o) const {
  Grassmann r(ctx_ ? ctx_ : o.ctx_);
  const std::uint64_t odd = r.ctx_ ? r.ctx_->odd_mask : 0;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      int s = merge_sign(ma, mb, odd);
      if (s == 0) continue;
      Poly c = ca * cb;
      if (s < 0) c = -c;
      r.add_term(ma | mb, c);
    }
  }
  return r;
}

Grassmann Grassmann::scale(const Poly& p) const {
  Grassmann r(ctx_);
  for (const auto& [m, c] : terms_) {
    Poly pc = c * p;
    if (!pc.is_zero()) r.terms_.emplace(m, pc);
  }
  return r;
}

Poly Grassmann::body() const {
  auto it = terms_.find(0);
  return it == terms_.end() ? Poly() : it->second;
}

Grassmann Grassmann::soul() const {
  Grassmann r = *this;
  r.terms_.erase(0);
  return r;
}

std::optional<int> Grassmann::parity() const {
  if (!ctx_) return 0;
  std::optional<int> p;
  for (const auto& [m, c] : terms_) {
    int tp = std::popcount(m & ctx_->odd_mask) & 1;
    if (!p) {
      p = tp;
    } else if (*p != tp) {
      return std::nullopt;
    }
  }
  return p ? p : std::optional<int>(0);
}

Grassmann Grassmann::even_part() const {
  Grassmann r(ctx_);
  const std::uint64_t odd = ctx_ ? ctx_->odd_mask : 0;
  for (const auto& [m, c] : terms_) {
    if ((std::popcount(m & odd) & 1) == 0) r.terms_.emplace(m, c);
  }
  return r;
}

Grassmann Grassmann::odd_part() const {
  Grassmann r(ctx_);
  const std::uint64_t odd = ctx_ ? ctx_->odd_mask : 0;
  for (const auto& [m, c] : terms_) {
    if ((std::popcount(m & odd) & 1) == 1) r.terms_.emplace(m, c);
  }
  return r;
}

Grassmann Grassmann::inverse() const {
  Poly b = body();
  if (!b.is_constant() || b.constant_value() == 0) {
    throw std::domain_error("inverse requires a nonzero constant body");
  }
  Rational c = b.constant_value();
  // a = c(1 + n) with n nilpotent; a^{-1} = c^{-1} sum (-n)^j.
  Grassmann n = soul().scale(Rational(1) / c);
  Grassmann acc = Grassmann::one(ctx_);
  Grassmann power = Grassmann::one(ctx_);
  std::size_t bound = (ctx_ ? ctx_->size() : 0) + 1;
  for (std::size_t j = 1; j <= bound; ++j) {
    power = power * n;
    if (power.is_zero()) break;
    if (j % 2 == 1) {
      acc += -power;
    } else {
      acc += power;
    }
  }
  return acc.scale(Rational(1) / c);
}

Grassmann Grassmann::pow(const Rational& p) const {
  Poly b = body();
  if (!b.is_constant() || b.constant_value() != 1) {
    throw std::domain_error("pow requires body 1");
  }
  // (1+n)^p = sum_j binom(p, j) n^j, terminating by nilpotency.
  Grassmann n = soul();
  Grassmann acc = Grassmann::one(ctx_);
  Grassmann power = Grassmann::one(ctx_);
  std::size_t bound = (ctx_ ? ctx_->size() : 0) + 1;
  for (std::size_t j = 1; j <= bound; ++j) {
    power = power * n;
    if (power.is_zero()) break;
    acc += power.scale(Poly(binomial(p, static_cast<unsigned>(j))));
  }
  return acc;
}

Grassmann Grassmann::derivative(std::size_t gen) const {
  if (!ctx_ || gen >= ctx_->size()) throw std::out_of_range("generator index");
  if (!ctx_->is_odd(gen)) throw std::domain_error("derivative only for odd generators");
  const std::uint64_t bit = std::uint64_t{1} << gen;
  const std::uint64_t odd = ctx_->odd_mask;
  Grassmann r(ctx_);
  for (const auto& [m, c] : terms_) {
    if (!(m & bit)) continue;
    // Move gen to the front: hop over the odd generators below it.
    std::uint64_t below = m & odd & (bit - 1);
    int s = (std::popcount(below) & 1) ? -1 : 1;
    r.add_term(m ^ bit, s < 0 ? -c : c);
  }
  return r;
}

std::pair<Grassmann, Grassmann> Grassmann::factor_generator(std::size_t gen) const {
  if (!ctx_ || gen >= ctx_->size()) throw std::out_of_range("generator index");
  const std::uint64_t bit = std::uint64_t{1} << gen;
  const std::uint64_t odd = ctx_->odd_mask;
  Grassmann without(ctx_), with(ctx_);
  for (const auto& [m, c] : terms_) {
    if (!(m & bit)) {
      without.add_term(m, c);
    } else if (ctx_->is_odd(gen)) {
      std::uint64_t below = m & odd & (bit - 1);
      int s = (std::popcount(below) & 1) ? -1 : 1;
      with.add_term(m ^ bit, s < 0 ? -c : c);
    } else {
      with.add_term(m ^ bit, c);
    }
  }
  return {without, with};
}

bool Grassmann::depends_on_generator(std::size_t gen) const {
  const std::uint64_t bit = std::uint64_t{1} << gen;
  for (const auto& [m, c] : terms_) {
    if (m & bit) return true;
  }
  return false;
}

Grassmann Grassmann::map_coeffs(const std::function<Poly(const Poly&)>& fn) const {
  Grassmann r(ctx_);
  for (const auto& [m, c] : terms_) {
    Poly fc = fn(c);
    if (!fc.is_zero()) r.terms_.emplace(m, fc);
  }
  return r;
}

Grassmann Grassmann::reduce_k(const Rational& kappa) const {
  return map_coeffs([&](const Poly& p) { return p.reduce_square(SYM_K, kappa); });
}

void Grassmann::for_each(const std::function<void(std::uint64_t, const Poly&)>& fn) const {
  for (const auto& [m, c] : terms_) fn(m, c);
}

Poly Grassmann::coeff(std::uint64_t mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Poly() : it->second;
}

std::string Grassmann::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    for (std::size_t i = 0; ctx_ && i < ctx_->size(); ++i) {
      if ((m >> i) & 1u) os << "*" << ctx_->names[i];
    }
  }
  return os.str();
}

}  // namespace supersle
