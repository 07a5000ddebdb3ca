#include "supersle/superalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace supersle {

std::string sector_name(Sector s) {
  switch (s) {
    case Sector::NS: return "ns";
    case Sector::Ramond: return "ramond";
    case Sector::Virasoro: return "virasoro";
  }
  return "?";
}

Mode mode_L(int n) { return Mode{2 * n, Mode::L}; }

Mode mode_G2(int two_r) { return Mode{two_r, Mode::G}; }

bool mode_valid(Sector s, Mode m) {
  if (m.kind == Mode::L) return m.two_index % 2 == 0;
  switch (s) {
    case Sector::Virasoro: return false;
    case Sector::NS: return m.two_index % 2 != 0;       // half-integer r
    case Sector::Ramond: return m.two_index % 2 == 0;   // integer r
  }
  return false;
}

std::string mode_str(Mode m) {
  std::ostringstream os;
  os << (m.kind == Mode::L ? "L" : "G") << "[";
  if (m.two_index % 2 == 0) {
    os << m.two_index / 2;
  } else {
    os << m.two_index << "/2";
  }
  os << "]";
  return os.str();
}

int monomial_parity(const Monomial& w) {
  int p = 0;
  for (const Mode& m : w) p ^= mode_parity(m);
  return p;
}

int monomial_two_level(const Monomial& w) {
  int lvl = 0;
  for (const Mode& m : w) lvl -= m.two_index;
  return lvl;
}

Monomial adjoint_word(const Monomial& w) {
  Monomial r(w.rbegin(), w.rend());
  for (Mode& m : r) m.two_index = -m.two_index;
  return r;
}

std::string monomial_str(const Monomial& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += " ";
    s += mode_str(w[i]);
  }
  return s;
}

namespace {

struct BracketTerm {
  Rational coeff;
  std::optional<Mode> mode;  // nullopt = central scalar
};

/// Graded bracket [a, b} of two modes.
std::vector<BracketTerm> mode_bracket(Mode a, Mode b, const Rational& c) {
  std::vector<BracketTerm> out;
  if (a.kind == Mode::L && b.kind == Mode::L) {
    Rational n = Rational(a.two_index) / 2;
    Rational m = Rational(b.two_index) / 2;
    if (n != m) out.push_back({n - m, Mode{a.two_index + b.two_index, Mode::L}});
    if (a.two_index + b.two_index == 0) {
      Rational central = c / 12 * n * (n * n - 1);
      if (central != 0) out.push_back({central, std::nullopt});
    }
  } else if (a.kind == Mode::L && b.kind == Mode::G) {
    Rational coeff = Rational(a.two_index) / 4 - Rational(b.two_index) / 2;
    if (coeff != 0) out.push_back({coeff, Mode{a.two_index + b.two_index, Mode::G}});
  } else if (a.kind == Mode::G && b.kind == Mode::L) {
    // [G_r, L_n] = -[L_n, G_r]
    Rational coeff = Rational(b.two_index) / 4 - Rational(a.two_index) / 2;
    if (coeff != 0) out.push_back({-coeff, Mode{a.two_index + b.two_index, Mode::G}});
  } else {
    // {G_r, G_s} = 2 L_{r+s} + (c/3)(r^2 - 1/4) delta
    out.push_back({Rational(2), Mode{a.two_index + b.two_index, Mode::L}});
    if (a.two_index + b.two_index == 0) {
      Rational r = Rational(a.two_index) / 2;
      Rational central = c / 3 * (r * r - Rational(1, 4));
      if (central != 0) out.push_back({central, std::nullopt});
    }
  }
  return out;
}

void accumulate(WordMap& out, const Monomial& w, const Rational& coeff) {
  auto it = out.find(w);
  if (it == out.end()) {
    if (coeff != 0) out.emplace(w, coeff);
  } else {
    it->second += coeff;
    if (it->second == 0) out.erase(it);
  }
}

}  // namespace

WordMap normalize_word(const Monomial& w, const Rational& c) {
  WordMap out;
  std::vector<std::pair<Rational, Monomial>> work;
  work.emplace_back(Rational(1), w);
  while (!work.empty()) {
    auto [coeff, word] = std::move(work.back());
    work.pop_back();
    // Find the first adjacent pair needing a rewrite.
    std::size_t i = 0;
    bool sorted = true;
    for (; i + 1 < word.size(); ++i) {
      const Mode& a = word[i];
      const Mode& b = word[i + 1];
      if (b < a || (a == b && a.kind == Mode::G)) {
        sorted = false;
        break;
      }
    }
    if (sorted) {
      accumulate(out, word, coeff);
      continue;
    }
    Mode a = word[i];
    Mode b = word[i + 1];
    if (a == b) {
      // G_r G_r = (1/2){G_r, G_r} = L_{2r} + (c/6)(r^2 - 1/4) delta_{r,0}
      Monomial repl(word.begin(), word.begin() + i);
      repl.push_back(Mode{2 * a.two_index, Mode::L});
      repl.insert(repl.end(), word.begin() + i + 2, word.end());
      work.emplace_back(coeff, std::move(repl));
      if (a.two_index == 0) {
        Monomial rest(word.begin(), word.begin() + i);
        rest.insert(rest.end(), word.begin() + i + 2, word.end());
        work.emplace_back(coeff * (-c / 24), std::move(rest));
      }
      continue;
    }
    const bool both_odd = a.kind == Mode::G && b.kind == Mode::G;
    Monomial swapped = word;
    std::swap(swapped[i], swapped[i + 1]);
    work.emplace_back(both_odd ? -coeff : coeff, std::move(swapped));
    for (const BracketTerm& bt : mode_bracket(a, b, c)) {
      Monomial repl(word.begin(), word.begin() + i);
      if (bt.mode) repl.push_back(*bt.mode);
      repl.insert(repl.end(), word.begin() + i + 2, word.end());
      work.emplace_back(coeff * bt.coeff, std::move(repl));
    }
  }
  return out;
}

WordMap word_mult(const WordMap& a, const WordMap& b, const Rational& c) {
  WordMap out;
  for (const auto& [wa, ca] : a) {
    for (const auto& [wb, cb] : b) {
      Monomial concat = wa;
      concat.insert(concat.end(), wb.begin(), wb.end());
      Rational f = ca * cb;
      for (const auto& [w, r] : normalize_word(concat, c)) accumulate(out, w, f * r);
    }
  }
  return out;
}

std::optional<int> word_map_parity(const WordMap& m) {
  std::optional<int> p;
  for (const auto& [w, r] : m) {
    int wp = monomial_parity(w);
    if (!p) {
      p = wp;
    } else if (*p != wp) {
      return std::nullopt;
    }
  }
  return p ? p : std::optional<int>(0);
}

WordMap word_bracket(const WordMap& a, const WordMap& b, const Rational& c) {
  auto pa = word_map_parity(a);
  auto pb = word_map_parity(b);
  if (!pa || !pb) throw std::domain_error("bracket requires parity-homogeneous inputs");
  WordMap ab = word_mult(a, b, c);
  WordMap ba = word_mult(b, a, c);
  const int sign = (*pa && *pb) ? 1 : -1;  // subtract (-1)^{pa pb} ba
  for (const auto& [w, r] : ba) accumulate(ab, w, sign > 0 ? r : -r);
  return ab;
}

AlgebraElement AlgebraElement::scalar(const AlgCtx& ctx, const Grassmann& g) {
  AlgebraElement e(ctx);
  e.add({}, g);
  return e;
}

AlgebraElement AlgebraElement::scalar(const AlgCtx& ctx, const Rational& r) {
  return scalar(ctx, Grassmann::constant(ctx.gens, r));
}

AlgebraElement AlgebraElement::mode(const AlgCtx& ctx, Mode m) {
  if (!mode_valid(ctx.sector, m)) {
    throw std::invalid_argument("mode " + mode_str(m) + " not valid in sector " +
                                sector_name(ctx.sector));
  }
  AlgebraElement e(ctx);
  e.add({m}, Grassmann::one(ctx.gens));
  return e;
}

AlgebraElement AlgebraElement::word(const AlgCtx& ctx, const Monomial& w, const Grassmann& coeff) {
  for (Mode m : w) {
    if (!mode_valid(ctx.sector, m)) {
      throw std::invalid_argument("mode " + mode_str(m) + " not valid in sector " +
                                  sector_name(ctx.sector));
    }
  }
  AlgebraElement e(ctx);
  for (const auto& [nw, r] : normalize_word(w, ctx.c)) e.add(nw, coeff.scale(r));
  return e;
}

void AlgebraElement::add(const Monomial& w, const Grassmann& coeff) {
  if (coeff.is_zero()) return;
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    terms_.emplace(w, coeff);
  } else {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  AlgebraElement r = *this;
  r += o;
  return r;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  if (!ctx_.gens) ctx_ = o.ctx_;
  for (const auto& [w, g] : o.terms_) add(w, g);
  return *this;
}

AlgebraElement AlgebraElement::operator-() const {
  AlgebraElement r(ctx_);
  for (const auto& [w, g] : terms_) r.terms_.emplace(w, -g);
  return r;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const { return *this + (-o); }

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  AlgebraElement r(ctx_.gens ? ctx_ : o.ctx_);
  const Rational& c = r.ctx_.c;
  for (const auto& [wa, ga] : terms_) {
    const int pa = monomial_parity(wa);
    for (const auto& [wb, gb] : o.terms_) {
      // Move gb left through wa: split gb by Grassmann parity.
      for (int part = 0; part < 2; ++part) {
        Grassmann h = part == 0 ? gb.even_part() : gb.odd_part();
        if (h.is_zero()) continue;
        Grassmann coeff = ga * h;
        if (coeff.is_zero()) continue;
        if (pa && part) coeff = -coeff;
        Monomial concat = wa;
        concat.insert(concat.end(), wb.begin(), wb.end());
        for (const auto& [w, r2] : normalize_word(concat, c)) r.add(w, coeff.scale(r2));
      }
    }
  }
  return r;
}

AlgebraElement AlgebraElement::scale(const Grassmann& g) const {
  AlgebraElement r(ctx_);
  for (const auto& [w, h] : terms_) r.add(w, g * h);
  return r;
}

AlgebraElement AlgebraElement::scale(const Rational& rat) const {
  AlgebraElement r(ctx_);
  for (const auto& [w, h] : terms_) r.add(w, h.scale(rat));
  return r;
}

AlgebraElement AlgebraElement::reduce_k(const Rational& kappa) const {
  AlgebraElement r(ctx_);
  for (const auto& [w, h] : terms_) r.add(w, h.reduce_k(kappa));
  return r;
}

std::optional<int> AlgebraElement::total_parity() const {
  std::optional<int> p;
  for (const auto& [w, g] : terms_) {
    auto gp = g.parity();
    if (!gp) return std::nullopt;
    int tp = (monomial_parity(w) + *gp) & 1;
    if (!p) {
      p = tp;
    } else if (*p != tp) {
      return std::nullopt;
    }
  }
  return p ? p : std::optional<int>(0);
}

AlgebraElement AlgebraElement::graded_bracket(const AlgebraElement& o) const {
  auto pa = total_parity();
  auto pb = o.total_parity();
  if (!pa || !pb) throw std::domain_error("bracket requires parity-homogeneous inputs");
  AlgebraElement ab = (*this) * o;
  AlgebraElement ba = o * (*this);
  return (*pa && *pb) ? ab + ba : ab - ba;
}

void AlgebraElement::for_each(
    const std::function<void(const Monomial&, const Grassmann&)>& fn) const {
  for (const auto& [w, g] : terms_) fn(w, g);
}

Grassmann AlgebraElement::coeff(const Monomial& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Grassmann(ctx_.gens) : it->second;
}

std::string AlgebraElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, g] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "{" << g.str() << "} " << monomial_str(w);
  }
  return os.str();
}

int state_two_level(const StateKey& k) { return monomial_two_level(k.first); }

VermaState VermaState::vacuum(const ModCtx& ctx) {
  VermaState v(ctx);
  v.add({Monomial{}, 0}, Grassmann::one(ctx.alg.gens));
  return v;
}

VermaState VermaState::basis_state(const ModCtx& ctx, const StateKey& key) {
  VermaState v(ctx);
  v.add(key, Grassmann::one(ctx.alg.gens));
  return v;
}

void VermaState::add(const StateKey& key, const Grassmann& coeff) {
  if (coeff.is_zero()) return;
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, coeff);
  } else {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

VermaState VermaState::operator+(const VermaState& o) const {
  VermaState r = *this;
  r += o;
  return r;
}

VermaState& VermaState::operator+=(const VermaState& o) {
  if (!ctx_.alg.gens) ctx_ = o.ctx_;
  for (const auto& [k, g] : o.terms_) add(k, g);
  return *this;
}

VermaState VermaState::operator-() const {
  VermaState r(ctx_);
  for (const auto& [k, g] : terms_) r.terms_.emplace(k, -g);
  return r;
}

VermaState VermaState::operator-(const VermaState& o) const { return *this + (-o); }

VermaState VermaState::scale(const Grassmann& g) const {
  VermaState r(ctx_);
  for (const auto& [k, h] : terms_) r.add(k, g * h);
  return r;
}

VermaState VermaState::scale(const Rational& rat) const {
  VermaState r(ctx_);
  for (const auto& [k, h] : terms_) r.add(k, h.scale(rat));
  return r;
}

VermaState VermaState::reduce_k(const Rational& kappa) const {
  VermaState r(ctx_);
  for (const auto& [k, h] : terms_) r.add(k, h.reduce_k(kappa));
  return r;
}

VermaState VermaState::truncate(int max_two_level) const {
  VermaState r(ctx_);
  for (const auto& [k, h] : terms_) {
    if (state_two_level(k) <= max_two_level) r.add(k, h);
  }
  return r;
}

void VermaState::for_each(const std::function<void(const StateKey&, const Grassmann&)>& fn) const {
  for (const auto& [k, g] : terms_) fn(k, g);
}

Grassmann VermaState::coeff(const StateKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Grassmann(ctx_.alg.gens) : it->second;
}

std::vector<int> VermaState::levels() const {
  std::vector<int> out;
  for (const auto& [k, g] : terms_) {
    int lvl = state_two_level(k);
    if (std::find(out.begin(), out.end(), lvl) == out.end()) out.push_back(lvl);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string VermaState::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, g] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "{" << g.str() << "} " << monomial_str(k.first);
    if (k.second) os << " G[0]";
    os << " |D>";
  }
  return os.str();
}

namespace {

struct GroundResult {
  Rational factor;
  StateKey key;
};

/// Evaluate a normal-ordered word on the ground space: strip non-negative
/// modes from the right (L_0 -> delta; G_0 toggles the ground component with
/// G_0^2 = L_0 - c/24; positive modes annihilate).
std::optional<GroundResult> evaluate_on_ground(Monomial word, const Rational& delta,
                                               const Rational& c) {
  Rational f = 1;
  int ground = 0;
  while (!word.empty()) {
    const Mode m = word.back();
    if (m.two_index < 0) break;
    word.pop_back();
    if (m.two_index > 0) return std::nullopt;
    if (m.kind == Mode::L) {
      f *= delta;
    } else {
      if (ground == 0) {
        ground = 1;
      } else {
        ground = 0;
        f *= delta - c / 24;
      }
    }
  }
  return GroundResult{f, {std::move(word), ground}};
}

}  // namespace

VermaState apply(const AlgebraElement& a, const VermaState& v) {
  const ModCtx& mc = v.mctx();
  const Rational& c = mc.alg.c;
  VermaState out(mc);
  a.for_each([&](const Monomial& wa, const Grassmann& ga) {
    const int pa = monomial_parity(wa);
    v.for_each([&](const StateKey& key, const Grassmann& h) {
      for (int part = 0; part < 2; ++part) {
        Grassmann hp = part == 0 ? h.even_part() : h.odd_part();
        if (hp.is_zero()) continue;
        Grassmann coeff = ga * hp;
        if (coeff.is_zero()) continue;
        if (pa && part) coeff = -coeff;
        Monomial full = wa;
        full.insert(full.end(), key.first.begin(), key.first.end());
        if (key.second) full.push_back(mode_G2(0));
        for (const auto& [w, r] : normalize_word(full, c)) {
          auto gr = evaluate_on_ground(w, mc.delta, c);
          if (!gr) continue;
          out.add(gr->key, coeff.scale(r * gr->factor));
        }
      }
    });
  });
  return out;
}

AlgebraElement lift(const VermaState& v) {
  AlgebraElement out(v.mctx().alg);
  v.for_each([&](const StateKey& key, const Grassmann& g) {
    Monomial w = key.first;
    if (key.second) w.push_back(mode_G2(0));
    out.add(w, g);
  });
  return out;
}

std::vector<StateKey> level_basis(Sector s, int two_level) {
  std::vector<StateKey> out;
  if (two_level < 0) return out;
  // Modes available for lowering words, ascending (most negative first).
  std::vector<Mode> modes;
  for (int ti = -two_level; ti <= -1; ++ti) {
    if (ti % 2 == 0) modes.push_back(mode_L(ti / 2));
    if (s == Sector::NS && ti % 2 != 0) modes.push_back(mode_G2(ti));
    if (s == Sector::Ramond && ti % 2 == 0) modes.push_back(mode_G2(ti));
  }
  std::sort(modes.begin(), modes.end());
  std::vector<Monomial> words;
  Monomial current;
  // Build ascending words; L modes may repeat, G modes may not.
  std::function<void(int, std::size_t)> rec = [&](int remaining, std::size_t from) {
    if (remaining == 0) {
      words.push_back(current);
      return;
    }
    for (std::size_t i = from; i < modes.size(); ++i) {
      const Mode m = modes[i];
      if (-m.two_index > remaining) continue;
      current.push_back(m);
      rec(remaining + m.two_index, m.kind == Mode::G ? i + 1 : i);
      current.pop_back();
    }
  };
  rec(two_level, 0);
  for (const Monomial& w : words) {
    out.push_back({w, 0});
    if (s == Sector::Ramond) out.push_back({w, 1});
  }
  return out;
}

SingularSpace find_singular(const ModCtx& ctx, int two_level) {
  SingularSpace res;
  res.basis = level_basis(ctx.alg.sector, two_level);
  const std::size_t n = res.basis.size();
  if (n == 0) return res;

  // Positive modes with index <= level.
  std::vector<Mode> raising;
  for (int ti = 1; ti <= two_level; ++ti) {
    if (ti % 2 == 0) raising.push_back(mode_L(ti / 2));
    if (ctx.alg.sector == Sector::NS && ti % 2 != 0) raising.push_back(mode_G2(ti));
    if (ctx.alg.sector == Sector::Ramond && ti % 2 == 0) raising.push_back(mode_G2(ti));
  }

  Matrix constraints;
  for (const Mode m : raising) {
    const int target_level = two_level - m.two_index;
    std::vector<StateKey> target = level_basis(ctx.alg.sector, target_level);
    std::map<StateKey, std::size_t> target_index;
    for (std::size_t i = 0; i < target.size(); ++i) target_index.emplace(target[i], i);
    Matrix block(target.size(), Vec(n, Rational(0)));
    for (std::size_t j = 0; j < n; ++j) {
      VermaState img = apply(AlgebraElement::mode(ctx.alg, m),
                             VermaState::basis_state(ctx, res.basis[j]));
      img.for_each([&](const StateKey& key, const Grassmann& g) {
        Poly b = g.body();
        auto it = target_index.find(key);
        if (it == target_index.end()) {
          throw std::logic_error("raised state left the expected level");
        }
        if (!b.is_constant()) throw std::logic_error("non-constant raising coefficient");
        block[it->second][j] = b.constant_value();
      });
    }
    for (auto& row : block) constraints.push_back(std::move(row));
  }

  res.vectors = nullspace(constraints, n);
  for (Vec& v : res.vectors) {
    for (const Rational& x : v) {
      if (x != 0) {
        Rational inv = Rational(1) / x;
        for (Rational& y : v) y *= inv;
        break;
      }
    }
  }
  return res;
}

Matrix gram_matrix(const ModCtx& ctx, int two_level) {
  std::vector<StateKey> basis = level_basis(ctx.alg.sector, two_level);
  const std::size_t n = basis.size();
  Matrix g(n, Vec(n, Rational(0)));
  const Rational& c = ctx.alg.c;
  for (std::size_t i = 0; i < n; ++i) {
    // adjoint of (w_i G0^{gr_i}) = G0^{gr_i} adjoint(w_i)
    Monomial left;
    if (basis[i].second) left.push_back(mode_G2(0));
    Monomial adj = adjoint_word(basis[i].first);
    left.insert(left.end(), adj.begin(), adj.end());
    for (std::size_t j = 0; j < n; ++j) {
      Monomial full = left;
      full.insert(full.end(), basis[j].first.begin(), basis[j].first.end());
      if (basis[j].second) full.push_back(mode_G2(0));
      Rational entry = 0;
      for (const auto& [w, r] : normalize_word(full, c)) {
        auto gr = evaluate_on_ground(w, ctx.delta, c);
        if (!gr) continue;
        if (gr->key.first.empty() && gr->key.second == 0) entry += r * gr->factor;
      }
      g[i][j] = entry;
    }
  }
  return g;
}

}  // namespace supersle
