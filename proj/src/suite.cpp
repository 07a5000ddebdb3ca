#include "supersle/report.hpp"

#include "supersle/catalog.hpp"
#include "supersle/sim.hpp"

#include "json.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>

namespace supersle {

namespace {

}  // namespace

Report algebra_scan(Sector sector, int range, const Rational& c) {
  Report r;
  r.name = std::string("algebra-") + sector_name(sector);
  r.provenance = "graded-bracket-relations-and-jacobi";
  std::vector<Mode> modes;
  for (int n = -range; n <= range; ++n) modes.push_back(mode_L(n));
  if (sector != Sector::Virasoro) {
    int lo = -2 * range, hi = 2 * range;
    for (int tr = lo; tr <= hi; ++tr) {
      Mode g = mode_G2(tr);
      if (mode_valid(sector, g)) modes.push_back(g);
    }
  }
  const std::size_t n = modes.size();
  std::vector<WordMap> single(n);
  for (std::size_t i = 0; i < n; ++i)
    single[i] = normalize_word(Monomial{modes[i]}, c);
  std::vector<std::vector<WordMap>> pair(n, std::vector<WordMap>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      pair[i][j] = word_bracket(single[i], single[j], c);
  // Sorted triples suffice: the bracket is graded-antisymmetric by
  // construction, so the Jacobiator of a permuted triple differs from the
  // sorted one only by a sign.
  long checked = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        // graded Jacobi: [a,[b,d}} = [[a,b},d} + (-1)^{|a||b|} [b,[a,d}}
        WordMap lhs = word_bracket(single[i], pair[j][k], c);
        WordMap rhs1 = word_bracket(pair[i][j], single[k], c);
        WordMap rhs2 = word_bracket(single[j], pair[i][k], c);
        int sign = (mode_parity(modes[i]) && mode_parity(modes[j])) ? -1 : 1;
        WordMap rhs = rhs1;
        for (const auto& [w, coef] : rhs2) {
          rhs[w] += sign * coef;
          if (rhs[w] == 0) rhs.erase(w);
        }
        if (lhs != rhs) {
          r.pass = false;
          r.detail = "Jacobi identity failed for the triple " +
                     mode_str(modes[i]) + " " + mode_str(modes[j]) + " " +
                     mode_str(modes[k]);
          return r;
        }
        ++checked;
      }
  r.pass = true;
  std::ostringstream os;
  os << "graded Jacobi identity holds for " << checked
     << " sorted mode triples (|index| <= " << range
     << ", c = " << to_string(c)
     << "); permutations follow from the bracket's antisymmetry";
  r.detail = os.str();
  return r;
}

namespace {

Report check_algebra(Sector sector) {
  return algebra_scan(sector, 3, Rational(11, 7));
}

// --- singular-vector checks ------------------------------------------------

struct SingularCase {
  std::string name;
  Sector sector;
  int two_level;
  std::function<Rational(const Rational&)> c_of;
  std::function<Rational(const Rational&)> delta_of;
  std::function<Rational(const Rational&, const Rational&)> constraint;
};

SingularCase singular_case(const std::string& which) {
  if (which == "ns")
    return {"ns", Sector::NS, 3, c_of_kappa, delta_ns_of_kappa,
            ns_singular_constraint};
  if (which == "r")
    return {"r", Sector::Ramond, 2, c_of_kappa, delta_r_of_kappa,
            r_singular_constraint};
  return {"classical", Sector::Virasoro, 4, c_classical_of_kappa,
          delta_classical_of_kappa, classical_singular_constraint};
}

bool annihilated_by_raising(const ModCtx& ctx, const VermaState& v,
                            int two_level) {
  for (int tn = 2; tn <= two_level; tn += 2)
    if (!apply(AlgebraElement::L(ctx.alg, tn / 2), v).is_zero()) return false;
  if (ctx.alg.sector != Sector::Virasoro) {
    for (int tr = ctx.alg.sector == Sector::NS ? 1 : 2; tr <= two_level;
         tr += 2)
      if (mode_valid(ctx.alg.sector, mode_G2(tr)) &&
          !apply(AlgebraElement::G2(ctx.alg, tr), v).is_zero())
        return false;
  }
  return true;
}

Report check_singular(const std::string& which) {
  SingularCase sc = singular_case(which);
  Report r;
  r.name = "singular-" + sc.name;
  r.provenance = "singular-vector-locus-level-" + std::to_string(sc.two_level) +
                 "-half-units";
  std::vector<Rational> kappas = {Rational(2), Rational(8, 3), Rational(3),
                                  Rational(4), Rational(6), Rational(16, 5)};
  for (const Rational& kappa : kappas) {
    Rational c = sc.c_of(kappa), delta = sc.delta_of(kappa);
    if (sc.constraint(c, delta) != 0) {
      r.detail = "locus formulas violate the constraint at kappa = " +
                 to_string(kappa);
      return r;
    }
    ModCtx ctx{AlgCtx{sc.sector, c, default_ctx()}, delta};
    SingularSpace ss = find_singular(ctx, sc.two_level);
    // The Ramond ground space is two-dimensional ({primary, G_0 partner}),
    // so its level-1 singular space is two-dimensional as well: the stated
    // vector over the primary plus its partner over G_0|Delta>.
    std::size_t expected_dim = sc.sector == Sector::Ramond ? 2 : 1;
    if (ss.vectors.size() != expected_dim) {
      r.detail = "expected a singular space of dimension " +
                 std::to_string(expected_dim) + " at kappa = " +
                 to_string(kappa) + ", found " +
                 std::to_string(ss.vectors.size());
      return r;
    }
    // The closed-form candidate lies in the computed span.
    VermaState candidate =
        sc.sector == Sector::NS        ? chi_ns(ctx)
        : sc.sector == Sector::Ramond  ? chi_r(ctx)
                                       : chi_classical(ctx, kappa);
    Vec cand_coords(ss.basis.size(), Rational(0));
    bool coords_ok = true;
    candidate.for_each([&](const StateKey& key, const Grassmann& g) {
      Poly p = g.coeff(0);
      for (std::size_t i = 0; i < ss.basis.size(); ++i)
        if (ss.basis[i] == key) {
          if (!p.is_constant()) coords_ok = false;
          cand_coords[i] = p.constant_value();
          return;
        }
      coords_ok = false;
    });
    if (!coords_ok || !in_span(ss.vectors, cand_coords)) {
      r.detail = "stated singular vector missing from the computed span";
      return r;
    }
    for (const Vec& coords : ss.vectors) {
      VermaState chi(ctx);
      for (std::size_t i = 0; i < ss.basis.size(); ++i)
        if (coords[i] != 0)
          chi.add(ss.basis[i], Grassmann::constant(ctx.alg.gens, coords[i]));
      if (!annihilated_by_raising(ctx, chi, sc.two_level)) {
        r.detail = "raising modes do not annihilate the singular vector";
        return r;
      }
    }
    // Gram-kernel oracle: the kernel of the contravariant form at this level
    // equals the span of all singular-vector descendants reaching it (it can
    // exceed the same-level singular space when a lower-level singular
    // vector exists, e.g. at delta = 0).
    Matrix gram = gram_matrix(ctx, sc.two_level);
    std::vector<Vec> kernel = nullspace(gram, ss.basis.size());
    SubmoduleLevel sd = singular_descendants(ctx, sc.two_level);
    bool kernel_ok = kernel.size() == rank(sd.span);
    for (const Vec& v : kernel) kernel_ok = kernel_ok && in_span(sd.span, v);
    for (const Vec& v : sd.span) kernel_ok = kernel_ok && in_span(kernel, v);
    for (const Vec& v : ss.vectors) kernel_ok = kernel_ok && in_span(kernel, v);
    if (!kernel_ok) {
      r.detail = "Gram-matrix kernel disagrees with the singular-descendant "
                 "span";
      return r;
    }
    // Off-locus: perturb delta, expect nothing singular.
    ModCtx off{AlgCtx{sc.sector, c, default_ctx()}, delta + 1};
    if (sc.constraint(c, delta + 1) == 0 ||
        !find_singular(off, sc.two_level).vectors.empty()) {
      r.detail = "off-locus point unexpectedly has a singular vector";
      return r;
    }
  }
  r.pass = true;
  r.detail = "singular space found (stated vector in span), annihilated by "
             "raising modes, and the Gram kernel equals the singular-"
             "descendant span at 6 locus points; absent off locus";
  return r;
}

// --- link checks -------------------------------------------------------------

Report check_link(const std::string& walk_name) {
  Report r;
  r.name = "link-" + walk_name;
  r.provenance = "walk-to-superspace-sde-transcription-and-jet-identity";
  GenCtx ctx = default_ctx();
  const Rational kappa(3);
  WalkSpec w = named_walk(walk_name, ctx, kappa);
  SdeSpec sde = build_sde(w);
  SdeSpec frozen = walk_name == "ns"       ? frozen_sde_ns_conv(ctx)
                   : walk_name == "ns-alt" ? frozen_sde_ns_alt(ctx)
                   : walk_name == "r"      ? frozen_sde_r_conv(ctx)
                                           : frozen_sde_r_alt(ctx);
  if (!(sde == frozen)) {
    r.detail = "transcribed SDE differs from the closed-form statement";
    return r;
  }
  LinkResidual res = verify_link(w);
  if (!res.is_zero()) {
    r.detail = "jet residual of the link identity is nonzero";
    return r;
  }
  r.pass = true;
  r.detail = "SDE matches the closed form termwise and the jet link identity "
             "vanishes identically (symbolic weight, symbolic k)";
  return r;
}

// --- solution checks ---------------------------------------------------------

Report check_solution(const std::string& walk_name) {
  Report r;
  r.name = "solution-" + walk_name;
  r.provenance = "closed-form-flow-solves-sde-and-is-superconformal";
  GenCtx ctx = default_ctx();
  SdeSpec sde;
  SuperMap sol;
  Structure structure;
  std::vector<IntermediateCheck> inter;
  if (walk_name == "ns") {
    sde = frozen_sde_ns_conv(ctx);
    sol = solution_ns_conv(ctx);
    structure = Structure::Conv;
  } else if (walk_name == "r") {
    sde = frozen_sde_r_conv(ctx);
    sol = solution_r_conv(ctx);
    structure = Structure::Conv;
    inter = intermediates_r_conv(ctx);
  } else if (walk_name == "r-alt") {
    sde = frozen_sde_r_alt(ctx);
    sol = solution_r_alt(ctx);
    structure = Structure::Alt;
    inter = intermediates_r_alt(ctx);
  } else {
    sde = frozen_sde_ns_alt(ctx);
    sol = solution_ns_alt(ctx);
    structure = Structure::Alt;
    inter = intermediates_ns_alt(ctx);
  }
  if (!verify_solution(sde, sol).ok()) {
    r.detail = "candidate flow does not solve the SDE exactly";
    return r;
  }
  if (!check_superconformal(sol, structure).is_zero()) {
    r.detail = "flow violates the superconformal condition of its structure";
    return r;
  }
  for (const IntermediateCheck& ic : inter) {
    SuperFunction composed = substitute(ic.value, sol);
    if (ic.closed_form && !(composed == *ic.closed_form)) {
      r.detail = "intermediate '" + ic.name + "' misses its closed form";
      return r;
    }
    ItoDifferential d = ito_d(composed, 1);
    if (!(d - ic.claimed).is_zero()) {
      r.detail = "intermediate '" + ic.name + "' has the wrong differential";
      return r;
    }
  }
  r.pass = true;
  std::ostringstream os;
  os << "flow solves the SDE with zero residual and is superconformal ("
     << structure_name(structure) << ")";
  if (!inter.empty())
    os << "; " << inter.size() << " intermediate substitutions verified";
  r.detail = os.str();
  return r;
}

// --- martingale checks -------------------------------------------------------

Report check_martingale(const std::string& which) {
  Report r;
  r.name = "martingale-" + which;
  r.provenance = "drift-state-in-singular-submodule-iff-on-locus";
  GenCtx ctx = default_ctx();
  std::vector<Rational> kappas = {Rational(8, 3), Rational(4)};
  int two_level_max = which == "classical" ? 8 : 4;
  for (const Rational& kappa : kappas) {
    WalkSpec w = named_walk(which, ctx, kappa);
    MartingaleReport on = martingale_check(w);
    if (!on.in_submodule) {
      r.detail = "drift state escapes the singular submodule on the locus at "
                 "kappa = " + to_string(kappa);
      return r;
    }
    // Exact conservation in the quotient, identically in t.
    VermaState expect = expected_state(w, two_level_max);
    VermaState reduced = quotient_reduce(w.mod(), expect, two_level_max);
    if (!(reduced == VermaState::vacuum(w.mod()))) {
      r.detail = "expected state is not conserved in the quotient at kappa = " +
                 to_string(kappa);
      return r;
    }
    // Off locus the check must fail.
    WalkSpec off = w;
    off.delta = w.delta + 1;
    if (martingale_check(off).in_submodule) {
      r.detail = "off-locus drift state unexpectedly lies in the submodule";
      return r;
    }
  }
  r.pass = true;
  r.detail = "drift state lies in the singular submodule and the quotient "
             "expectation stays at the primary state for all t; off-locus "
             "points fail";
  return r;
}

// --- numeric checks ----------------------------------------------------------

Report check_numeric_simulate() {
  Report r;
  r.name = "numeric-simulate";
  r.provenance = "loewner-euler-integrator-closed-form-and-determinism";
  SimConfig cfg;
  cfg.kappa = Rational(0);
  cfg.paths = 1;
  cfg.steps = 1000;
  cfg.t_max = 0.5;
  cfg.grid = {{0.0, 2.0}};
  double err = kappa0_max_error(cfg);
  if (!(err < 1e-3)) {
    r.detail = "kappa = 0 closed-form error " + std::to_string(err) +
               " exceeds 1e-3";
    return r;
  }
  SimConfig mc;
  mc.kappa = Rational(8, 3);
  mc.paths = 64;
  mc.steps = 200;
  mc.t_max = 0.25;
  std::string a = simulate_sle(mc).to_csv();
  std::string b = simulate_sle(mc).to_csv();
  if (a != b) {
    r.detail = "identical configurations produced different tables";
    return r;
  }
  r.pass = true;
  std::ostringstream os;
  os << "kappa = 0 max integrator error " << err
     << " < 1e-3; repeated runs byte-identical";
  r.detail = os.str();
  return r;
}

Report check_numeric_martingale() {
  Report r;
  r.name = "numeric-martingale";
  r.provenance = "monte-carlo-quotient-mean-matches-exact-expectation";
  SimConfig cfg;
  cfg.kappa = Rational(8, 3);
  cfg.paths = 1500;
  cfg.steps = 300;
  cfg.t_max = 1.0;
  MartingaleEstimate est = estimate_martingale(
      cfg, 8, c_classical_of_kappa(cfg.kappa),
      delta_classical_of_kappa(cfg.kappa));
  r.pass = est.pass;
  r.detail = est.detail;
  return r;
}

using CheckFn = std::function<Report()>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> reg = {
      {"algebra-ns", [] { return check_algebra(Sector::NS); }},
      {"algebra-ramond", [] { return check_algebra(Sector::Ramond); }},
      {"algebra-virasoro", [] { return check_algebra(Sector::Virasoro); }},
      {"singular-ns", [] { return check_singular("ns"); }},
      {"singular-r", [] { return check_singular("r"); }},
      {"singular-classical", [] { return check_singular("classical"); }},
      {"link-ns", [] { return check_link("ns"); }},
      {"link-ns-alt", [] { return check_link("ns-alt"); }},
      {"link-r", [] { return check_link("r"); }},
      {"link-r-alt", [] { return check_link("r-alt"); }},
      {"solution-ns", [] { return check_solution("ns"); }},
      {"solution-r", [] { return check_solution("r"); }},
      {"solution-r-alt", [] { return check_solution("r-alt"); }},
      {"solution-ns-alt", [] { return check_solution("ns-alt"); }},
      {"martingale-ns", [] { return check_martingale("ns"); }},
      {"martingale-r", [] { return check_martingale("r"); }},
      {"martingale-classical", [] { return check_martingale("classical"); }},
      {"numeric-simulate", check_numeric_simulate},
      {"numeric-martingale", check_numeric_martingale},
  };
  return reg;
}

}  // namespace

std::vector<std::string> suite_check_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

Report run_check(const std::string& name) {
  for (const auto& [n, fn] : registry())
    if (n == name) return fn();
  throw std::invalid_argument("unknown check: " + name);
}

std::vector<Report> run_suite(const std::vector<std::string>& filters) {
  std::vector<Report> out;
  if (filters.empty()) {
    for (const auto& [name, fn] : registry()) out.push_back(fn());
    return out;
  }
  for (const std::string& f : filters) {
    bool matched = false;
    for (const auto& [name, fn] : registry()) {
      if (name.find(f) != std::string::npos) {
        matched = true;
        bool seen = false;
        for (const Report& r : out) seen = seen || r.name == name;
        if (!seen) out.push_back(fn());
      }
    }
    if (!matched) throw std::invalid_argument("no check matches filter: " + f);
  }
  return out;
}

std::string reports_to_json(const std::vector<Report>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Report& r : reports) {
    nlohmann::json j;
    j["name"] = r.name;
    j["status"] = r.pass ? "pass" : "fail";
    j["detail"] = r.detail;
    j["provenance"] = r.provenance;
    arr.push_back(j);
  }
  return arr.dump(2);
}

}  // namespace supersle
