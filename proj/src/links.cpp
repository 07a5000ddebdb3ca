#include "supersle/links.hpp"

#include "json.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace supersle {

namespace {

AlgebraElement map_elem_coeffs(const AlgebraElement& a,
                               const std::function<Poly(const Poly&)>& fn) {
  AlgebraElement out(a.actx());
  a.for_each([&](const Monomial& w, const Grassmann& g) {
    Grassmann ng = g.map_coeffs(fn);
    if (!ng.is_zero()) out.add(w, ng);
  });
  return out;
}

VermaState map_state_coeffs(const VermaState& v,
                            const std::function<Poly(const Poly&)>& fn) {
  VermaState out(v.mctx());
  v.for_each([&](const StateKey& k, const Grassmann& g) {
    Grassmann ng = g.map_coeffs(fn);
    if (!ng.is_zero()) out.add(k, ng);
  });
  return out;
}

/// k^2 -> kappa, or exact evaluation when the walk pins a rational k.
AlgebraElement normalize_scalars(const WalkSpec& w, const AlgebraElement& a) {
  if (w.k_value) {
    Rational k = *w.k_value;
    return map_elem_coeffs(a, [&](const Poly& p) { return p.eval_symbol(SYM_K, k); });
  }
  return a.reduce_k(w.kappa);
}

VermaState normalize_scalars(const WalkSpec& w, const VermaState& v) {
  if (w.k_value) {
    Rational k = *w.k_value;
    return map_state_coeffs(v, [&](const Poly& p) { return p.eval_symbol(SYM_K, k); });
  }
  return v.reduce_k(w.kappa);
}

SuperFunction normalize_scalars(const WalkSpec& w, const SuperFunction& f) {
  return w.k_value ? f.eval_sym(SYM_K, *w.k_value) : f;
}

}  // namespace

void validate_walk(const WalkSpec& w) {
  if (!w.alg.gens) throw std::invalid_argument("walk requires a generator context");
  if (w.k_value && *w.k_value * *w.k_value != w.kappa)
    throw std::invalid_argument("walk kappa must equal k^2");
  auto check_elem = [&](const AlgebraElement& a, const std::string& what) {
    a.for_each([&](const Monomial& word, const Grassmann& p) {
      if (word.size() != 1)
        throw std::invalid_argument(what + ": walk elements must be linear in modes");
      Mode m = word[0];
      if (!mode_valid(w.alg.sector, m))
        throw std::invalid_argument(what + ": mode index does not match the sector");
      auto par = p.parity();
      if (!par || *par != mode_parity(m))
        throw std::invalid_argument(what + ": coefficient parity must match its mode");
    });
  };
  check_elem(w.alpha0, "alpha0");
  for (std::size_t i = 0; i < w.beta.size(); ++i)
    check_elem(w.beta[i], "beta[" + std::to_string(i) + "]");
}

AlgebraElement full_drift_generator(const WalkSpec& w) {
  AlgebraElement alpha = w.alpha0;
  for (const auto& beta : w.beta)
    alpha += (beta * beta).scale(Rational(1, 2));
  return alpha;
}

SdeSpec build_sde(const WalkSpec& w) {
  validate_walk(w);
  const GenCtx& ctx = w.alg.gens;
  const bool conv = w.structure == Structure::Conv;

  // Transcription of one mode-linear element a = sum y_n L_n + sum eta_r G_r
  // into its (z', theta') increment pair:
  //   conv: z: -y_n z^{n+1},              eta_r theta z^{r+1/2}
  //         theta: -(n+1)/2 y_n theta z^n, -eta_r z^{r+1/2}
  //   alt:  z: -y_n z^{n+1},              eta_r theta z^{r+1}
  //         theta: -n/2 y_n theta z^n,     -eta_r z^r
  auto transcribe = [&](const AlgebraElement& a) {
    std::pair<SuperFunction, SuperFunction> out{SuperFunction(ctx),
                                                SuperFunction(ctx)};
    a.for_each([&](const Monomial& word, const Grassmann& p) {
      Mode m = word[0];
      if (m.kind == Mode::L) {
        int two_n = m.two_index;
        out.first +=
            SuperFunction::z_power(ctx, two_n + 2).left_mul(p).scale(Rational(-1));
        Rational coef = conv ? Rational(-(two_n / 2 + 1), 2) : Rational(-two_n, 4);
        if (coef != 0)
          out.second += (SuperFunction::theta(ctx) * SuperFunction::z_power(ctx, two_n))
                            .left_mul(p)
                            .scale(coef);
      } else {
        int two_r = m.two_index;
        out.first += (SuperFunction::theta(ctx) *
                      SuperFunction::z_power(ctx, conv ? two_r + 1 : two_r + 2))
                         .left_mul(p);
        out.second += SuperFunction::z_power(ctx, conv ? two_r + 1 : two_r)
                          .left_mul(p)
                          .scale(Rational(-1));
      }
    });
    return out;
  };

  SdeSpec s;
  auto [bz, bth] = transcribe(w.alpha0);
  for (const auto& beta : w.beta) {
    auto [zi, thi] = transcribe(beta);
    s.z_diff.push_back(zi);
    s.theta_diff.push_back(thi);
  }
  // Second-order drift corrections 1/2 (z'_i d_z + theta'_i d_theta) applied
  // to each increment pair.
  SuperFunction cz(ctx), cth(ctx);
  for (std::size_t i = 0; i < s.z_diff.size(); ++i) {
    const SuperFunction& zi = s.z_diff[i];
    const SuperFunction& thi = s.theta_diff[i];
    cz += (zi * zi.dz() + thi * zi.dtheta()).scale(Rational(1, 2));
    cth += (zi * thi.dz() + thi * thi.dtheta()).scale(Rational(1, 2));
  }
  s.z_drift = bz + cz;
  s.theta_drift = bth + cth;
  if (w.k_value) {
    s.z_drift = normalize_scalars(w, s.z_drift);
    s.theta_drift = normalize_scalars(w, s.theta_drift);
    for (auto& f : s.z_diff) f = normalize_scalars(w, f);
    for (auto& f : s.theta_diff) f = normalize_scalars(w, f);
  }
  return s;
}

VermaState drift_state(const WalkSpec& w) {
  validate_walk(w);
  return normalize_scalars(
      w, apply(full_drift_generator(w), VermaState::vacuum(w.mod())));
}

SubmoduleLevel singular_descendants(const ModCtx& ctx, int target_two_level) {
  SubmoduleLevel out;
  out.two_level = target_two_level;
  out.basis = level_basis(ctx.alg.sector, target_two_level);
  std::map<StateKey, std::size_t> index;
  for (std::size_t i = 0; i < out.basis.size(); ++i) index[out.basis[i]] = i;

  for (int l = 1; l <= target_two_level; ++l) {
    SingularSpace ss = find_singular(ctx, l);
    if (ss.vectors.empty()) continue;
    out.singular_levels.push_back(l);
    for (const Vec& coeffs : ss.vectors) {
      VermaState chi(ctx);
      for (std::size_t i = 0; i < ss.basis.size(); ++i) {
        if (coeffs[i] != 0)
          chi.add(ss.basis[i], Grassmann::constant(ctx.alg.gens, coeffs[i]));
      }
      for (const StateKey& wkey : level_basis(ctx.alg.sector, target_two_level - l)) {
        Monomial word = wkey.first;
        if (wkey.second) word.push_back(mode_G2(0));
        AlgebraElement e =
            AlgebraElement::word(ctx.alg, word, Grassmann::one(ctx.alg.gens));
        VermaState desc = apply(e, chi);
        if (desc.is_zero()) continue;
        Vec coords(out.basis.size(), Rational(0));
        desc.for_each([&](const StateKey& k, const Grassmann& g) {
          auto it = index.find(k);
          if (it == index.end())
            throw std::logic_error("descendant left its expected level");
          Poly p = g.coeff(0);
          if (!p.is_constant())
            throw std::logic_error("descendant coefficient is not rational");
          coords[it->second] = p.constant_value();
        });
        out.span.push_back(std::move(coords));
      }
    }
  }
  return out;
}

namespace {

/// Exact rational coordinates of the level component of a state, one vector
/// per (Grassmann monomial, scalar monomial) pair.
std::map<std::pair<std::uint64_t, Mono>, Vec> level_coordinates(
    const VermaState& s, const std::vector<StateKey>& basis, int two_level) {
  std::map<StateKey, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
  std::map<std::pair<std::uint64_t, Mono>, Vec> out;
  s.for_each([&](const StateKey& key, const Grassmann& g) {
    if (state_two_level(key) != two_level) return;
    auto it = index.find(key);
    if (it == index.end()) throw std::logic_error("state key outside level basis");
    g.for_each([&](std::uint64_t mask, const Poly& p) {
      p.for_each([&](const Mono& m, const Rational& c) {
        auto& v = out[{mask, m}];
        if (v.empty()) v.assign(basis.size(), Rational(0));
        v[it->second] = c;
      });
    });
  });
  return out;
}

}  // namespace

MartingaleReport martingale_check(const WalkSpec& w) {
  VermaState d = drift_state(w);
  MartingaleReport r;
  if (d.is_zero()) {
    r.drift_zero = true;
    r.in_submodule = true;
    r.detail = "drift state vanishes";
    return r;
  }
  std::vector<int> levels = d.levels();
  r.drift_two_level = *std::max_element(levels.begin(), levels.end());
  bool all = true;
  std::ostringstream detail;
  for (int l : levels) {
    if (l == 0) {
      all = false;
      detail << "drift has a component along the highest-weight vector; ";
      continue;
    }
    SubmoduleLevel sub = singular_descendants(w.mod(), l);
    for (int sl : sub.singular_levels)
      if (std::find(r.singular_levels.begin(), r.singular_levels.end(), sl) ==
          r.singular_levels.end())
        r.singular_levels.push_back(sl);
    auto coords = level_coordinates(d, sub.basis, l);
    for (const auto& [key, vec] : coords) {
      if (!in_span(sub.span, vec)) {
        all = false;
        detail << "level " << l << "/2 component outside the singular submodule; ";
      }
    }
  }
  std::sort(r.singular_levels.begin(), r.singular_levels.end());
  r.in_submodule = all;
  if (all)
    detail << "drift state lies in the submodule generated by singular vectors";
  r.detail = detail.str();
  return r;
}

VermaState expected_state(const WalkSpec& w, int max_two_level) {
  validate_walk(w);
  auto require_lowering = [](const AlgebraElement& a) {
    a.for_each([&](const Monomial& word, const Grassmann&) {
      for (Mode m : word) {
        if (m.two_index > 0 || (m.two_index == 0 && m.kind == Mode::L))
          throw std::invalid_argument(
              "expected_state requires a lowering walk (G_0 allowed)");
      }
    });
  };
  require_lowering(w.alpha0);
  for (const auto& beta : w.beta) require_lowering(beta);

  AlgebraElement alpha = normalize_scalars(w, full_drift_generator(w));
  VermaState vac = VermaState::vacuum(w.mod());
  {
    VermaState d = apply(alpha, vac);
    for (int l : d.levels())
      if (l > max_two_level)
        throw std::invalid_argument("expected_state truncation below the drift level");
  }
  VermaState total = vac;
  VermaState term = vac;
  Rational factorial(1);
  constexpr int kMaxOrder = 64;
  for (int k = 1; k <= kMaxOrder; ++k) {
    term = apply(lift(term) * alpha, vac).truncate(max_two_level);
    if (term.is_zero()) break;
    if (k == kMaxOrder)
      throw std::logic_error("expected_state series failed to terminate");
    factorial *= Rational(k);
    Poly tk = Poly::symbol(SYM_T, static_cast<std::uint32_t>(k)) *
              (Rational(1) / factorial);
    total += term.scale(Grassmann::constant(w.alg.gens, tk));
  }
  return total;
}

VermaState quotient_reduce(const ModCtx& ctx, const VermaState& s,
                           int max_two_level) {
  VermaState out(ctx);
  for (int l : s.levels()) {
    if (l > max_two_level)
      throw std::logic_error("quotient_reduce: state level exceeds the truncation");
    if (l == 0) {
      s.for_each([&](const StateKey& key, const Grassmann& g) {
        if (state_two_level(key) == 0) out.add(key, g);
      });
      continue;
    }
    SubmoduleLevel sub = singular_descendants(ctx, l);
    auto coords = level_coordinates(s, sub.basis, l);
    for (const auto& [key, vec] : coords) {
      Vec red = reduce_mod_span(sub.span, vec);
      for (std::size_t j = 0; j < red.size(); ++j) {
        if (red[j] == 0) continue;
        Poly p;
        p.add_term(key.second, red[j]);
        out.add(sub.basis[j], Grassmann::monomial(ctx.alg.gens, key.first, p));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON interface.

namespace {

using nlohmann::json;

/// Scalar symbols admitted inside coefficient generator lists.
bool scalar_symbol(const std::string& name, std::size_t& idx) {
  if (name == "k") {
    idx = SYM_K;
    return true;
  }
  if (name == "t") {
    idx = SYM_T;
    return true;
  }
  if (name.size() >= 2 && name[0] == 'B') {
    std::size_t i = std::stoul(name.substr(1));
    if (i >= 1) {
      idx = sym_brownian(i);
      return true;
    }
  }
  return false;
}

Grassmann grassmann_from_json(const json& arr, const GenCtx& ctx) {
  Grassmann out(ctx);
  for (const auto& pair : arr) {
    if (!pair.is_array() || pair.size() != 2)
      throw std::invalid_argument("coefficient entries must be [names, rational]");
    Grassmann term = Grassmann::constant(
        ctx, parse_rational(pair.at(1).get<std::string>()));
    for (const auto& nm : pair.at(0)) {
      std::string name = nm.get<std::string>();
      std::size_t sym;
      if (scalar_symbol(name, sym)) {
        term = term * Grassmann::constant(ctx, Poly::symbol(sym));
      } else {
        term = term * Grassmann::generator(ctx, name);
      }
    }
    out = out + term;
  }
  return out;
}

json grassmann_json(const Grassmann& g) {
  const GenCtx& ctx = g.ctx();
  json arr = json::array();
  g.for_each([&](std::uint64_t mask, const Poly& p) {
    p.for_each([&](const Mono& m, const Rational& c) {
      json names = json::array();
      for (std::size_t i = 0; i < ctx->size(); ++i)
        if (mask & (std::uint64_t(1) << i)) names.push_back(ctx->names[i]);
      for (std::size_t s = 0; s < m.e.size(); ++s)
        for (std::uint32_t rep = 0; rep < m.e[s]; ++rep)
          names.push_back(symbol_name(s));
      arr.push_back(json::array({names, to_string(c)}));
    });
  });
  return arr;
}

int parse_two_index(const std::string& text) {
  Rational r = parse_rational(text);
  Rational doubled = r * 2;
  Integer num = boost::multiprecision::numerator(doubled);
  Integer den = boost::multiprecision::denominator(doubled);
  if (den != 1) throw std::invalid_argument("mode index must be a half-integer");
  return static_cast<int>(num);
}

AlgebraElement element_from_json(const json& arr, const AlgCtx& alg) {
  AlgebraElement out(alg);
  for (const auto& term : arr) {
    std::string kind = term.at("mode").get<std::string>();
    int two_index = parse_two_index(term.at("index").get<std::string>());
    Mode m = kind == "L" ? mode_L(two_index / 2) : mode_G2(two_index);
    if (kind == "L" && two_index % 2 != 0)
      throw std::invalid_argument("L-mode index must be an integer");
    if (kind != "L" && kind != "G")
      throw std::invalid_argument("mode must be L or G");
    Grassmann coeff = grassmann_from_json(term.at("coeff"), alg.gens);
    out += AlgebraElement::word(alg, Monomial{m}, coeff);
  }
  return out;
}

json element_json(const AlgebraElement& a) {
  json arr = json::array();
  a.for_each([&](const Monomial& word, const Grassmann& g) {
    if (word.size() != 1) throw std::invalid_argument("element is not mode-linear");
    Mode m = word[0];
    json term;
    term["mode"] = m.kind == Mode::L ? "L" : "G";
    term["index"] = to_string(Rational(m.two_index, 2));
    term["coeff"] = grassmann_json(g);
    arr.push_back(term);
  });
  return arr;
}

json superfunction_json(const SuperFunction& f) {
  json arr = json::array();
  f.for_each([&](int two_e, const Grassmann& g) {
    json term;
    term["exponent"] = to_string(Rational(two_e, 2));
    term["coeff"] = grassmann_json(g);
    arr.push_back(term);
  });
  return arr;
}

}  // namespace

WalkSpec walk_from_json(const std::string& text, const GenCtx& gens) {
  json j = json::parse(text);
  WalkSpec w;
  w.alg.gens = gens;
  std::string sector = j.at("sector").get<std::string>();
  if (sector == "ns")
    w.alg.sector = Sector::NS;
  else if (sector == "ramond")
    w.alg.sector = Sector::Ramond;
  else if (sector == "virasoro" || sector == "classical")
    w.alg.sector = Sector::Virasoro;
  else
    throw std::invalid_argument("sector must be ns, ramond or virasoro");
  std::string structure = j.value("structure", "conv");
  if (structure == "conv")
    w.structure = Structure::Conv;
  else if (structure == "alt")
    w.structure = Structure::Alt;
  else
    throw std::invalid_argument("structure must be conv or alt");
  w.alg.c = parse_rational(j.at("c").get<std::string>());
  w.delta = parse_rational(j.at("delta").get<std::string>());
  if (j.contains("k")) {
    w.k_value = parse_rational(j.at("k").get<std::string>());
    w.kappa = *w.k_value * *w.k_value;
  } else if (j.contains("kappa")) {
    w.kappa = parse_rational(j.at("kappa").get<std::string>());
  } else {
    throw std::invalid_argument("walk needs either k or kappa");
  }
  w.alpha0 = element_from_json(j.at("alpha0"), w.alg);
  for (const auto& b : j.at("beta")) w.beta.push_back(element_from_json(b, w.alg));
  validate_walk(w);
  return w;
}

std::string walk_to_json(const WalkSpec& w) {
  json j;
  j["sector"] = sector_name(w.alg.sector);
  j["structure"] = structure_name(w.structure);
  j["c"] = to_string(w.alg.c);
  j["delta"] = to_string(w.delta);
  j["kappa"] = to_string(w.kappa);
  if (w.k_value) j["k"] = to_string(*w.k_value);
  j["alpha0"] = element_json(w.alpha0);
  json betas = json::array();
  for (const auto& b : w.beta) betas.push_back(element_json(b));
  j["beta"] = betas;
  return j.dump(2);
}

std::string grassmann_to_json(const Grassmann& g) { return grassmann_json(g).dump(); }

std::string verma_state_to_json(const VermaState& v) {
  json j;
  j["sector"] = sector_name(v.mctx().alg.sector);
  j["c"] = to_string(v.mctx().alg.c);
  j["delta"] = to_string(v.mctx().delta);
  json levels = json::array();
  for (int l : v.levels()) levels.push_back(to_string(Rational(l, 2)));
  j["levels"] = levels;
  json terms = json::array();
  v.for_each([&](const StateKey& key, const Grassmann& g) {
    json term;
    std::string word = monomial_str(key.first);
    if (key.second) word += word.empty() ? "G0" : " G0";
    term["state"] = word;
    term["coeff"] = grassmann_json(g);
    terms.push_back(term);
  });
  j["terms"] = terms;
  return j.dump(2);
}

std::string sde_to_json(const SdeSpec& s) {
  json j;
  j["z_drift"] = superfunction_json(s.z_drift);
  j["theta_drift"] = superfunction_json(s.theta_drift);
  json zd = json::array(), td = json::array();
  for (const auto& f : s.z_diff) zd.push_back(superfunction_json(f));
  for (const auto& f : s.theta_diff) td.push_back(superfunction_json(f));
  j["z_diff"] = zd;
  j["theta_diff"] = td;
  return j.dump(2);
}

}  // namespace supersle
