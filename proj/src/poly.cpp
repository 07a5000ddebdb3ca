#include "supersle/poly.hpp"

#include <algorithm>
#include <sstream>

namespace supersle {

std::string symbol_name(std::size_t idx) {
  if (idx == SYM_T) return "t";
  if (idx == SYM_K) return "k";
  return "B" + std::to_string(idx - 1);
}

void Mono::trim() {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

bool Mono::operator<(const Mono& o) const {
  std::size_t n = std::max(e.size(), o.e.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t a = exp(i), b = o.exp(i);
    if (a != b) return a < b;
  }
  return false;
}

Poly::Poly(const Rational& c) {
  if (c != 0) terms_[Mono{}] = c;
}

Poly Poly::symbol(std::size_t idx, std::uint32_t power) {
  Poly p;
  if (power == 0) return Poly(Rational(1));
  Mono m;
  m.e.assign(idx + 1, 0);
  m.e[idx] = power;
  p.terms_[m] = Rational(1);
  return p;
}

void Poly::add_term(const Mono& m, const Rational& c) {
  if (c == 0) return;
  Mono key = m;
  key.trim();
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  r -= o;
  return r;
}

Poly Poly::operator-() const {
  Poly r;
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Mono m;
      m.e.resize(std::max(ma.e.size(), mb.e.size()), 0);
      for (std::size_t i = 0; i < m.e.size(); ++i) m.e[i] = ma.exp(i) + mb.exp(i);
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

Poly Poly::operator*(const Rational& c) const {
  Poly r;
  if (c == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_[m] = v * c;
  return r;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first.e.empty();
}

Rational Poly::constant_value() const {
  auto it = terms_.find(Mono{});
  return it == terms_.end() ? Rational(0) : it->second;
}

Poly Poly::derivative(std::size_t idx) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    std::uint32_t p = m.exp(idx);
    if (p == 0) continue;
    Mono d = m;
    d.e[idx] = p - 1;
    d.trim();
    r.add_term(d, c * Rational(p));
  }
  return r;
}

Poly Poly::at_zero(std::size_t idx) const {
  Poly r;
  for (const auto& [m, c] : terms_)
    if (m.exp(idx) == 0) r.add_term(m, c);
  return r;
}

Poly Poly::eval_symbol(std::size_t idx, const Rational& v) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    std::uint32_t p = m.exp(idx);
    Mono d = m;
    if (p) {
      d.e[idx] = 0;
      d.trim();
    }
    r.add_term(d, c * pow_int(v, p));
  }
  return r;
}

Poly Poly::reduce_square(std::size_t idx, const Rational& value) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    std::uint32_t p = m.exp(idx);
    Mono d = m;
    if (p >= 2) {
      d.e[idx] = p % 2;
      d.trim();
    }
    r.add_term(d, c * pow_int(value, p / 2));
  }
  return r;
}

std::uint32_t Poly::degree(std::size_t idx) const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) {
    (void)c;
    d = std::max(d, m.exp(idx));
  }
  return d;
}

void Poly::for_each(const std::function<void(const Mono&, const Rational&)>& fn) const {
  for (const auto& [m, c] : terms_) fn(m, c);
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << to_string(c);
    for (std::size_t i = 0; i < m.e.size(); ++i) {
      if (m.e[i] == 0) continue;
      os << " " << symbol_name(i);
      if (m.e[i] > 1) os << "^" << m.e[i];
    }
  }
  return os.str();
}

}  // namespace supersle
