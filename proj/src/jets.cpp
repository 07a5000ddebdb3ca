#include "supersle/links.hpp"

#include <stdexcept>

namespace supersle {

JetFunction::JetFunction(const GenCtx& ctx) {
  for (auto& s : slot) s = SuperFunction(ctx);
}

JetFunction JetFunction::operator+(const JetFunction& o) const {
  JetFunction r = *this;
  r += o;
  return r;
}

JetFunction JetFunction::operator-(const JetFunction& o) const {
  JetFunction r = *this;
  for (int i = 0; i < kSlots; ++i) r.slot[i] = r.slot[i] - o.slot[i];
  return r;
}

JetFunction& JetFunction::operator+=(const JetFunction& o) {
  for (int i = 0; i < kSlots; ++i) slot[i] += o.slot[i];
  return *this;
}

bool JetFunction::is_zero() const {
  for (const auto& s : slot)
    if (!s.is_zero()) return false;
  return true;
}

std::string JetFunction::str() const {
  static const char* names[kSlots] = {"phi",  "phi'",  "phi''",
                                      "psi",  "psi'",  "psi''"};
  std::string out;
  for (int i = 0; i < kSlots; ++i) {
    if (slot[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + slot[i].str() + ")*" + names[i];
  }
  return out.empty() ? "0" : out;
}

JetFunction jet_dw(const JetFunction& j) {
  const GenCtx& ctx = j.slot[0].ctx();
  JetFunction r(ctx);
  for (int base : {0, 3}) {
    for (int m = 0; m < 3; ++m) {
      const SuperFunction& c = j.slot[base + m];
      if (c.is_zero()) continue;
      if (m == 2) throw std::runtime_error("jet order insufficient");
      r.slot[base + m] += c.dz();
      r.slot[base + m + 1] += c;
    }
  }
  return r;
}

JetFunction jet_scale(const SuperFunction& s, const JetFunction& j) {
  JetFunction r(j.slot[0].ctx());
  for (int i = 0; i < JetFunction::kSlots; ++i) {
    if (!j.slot[i].is_zero()) r.slot[i] = s * j.slot[i];
  }
  return r;
}

namespace {

JetFunction jet_neg(const JetFunction& j) {
  JetFunction r(j.slot[0].ctx());
  for (int i = 0; i < JetFunction::kSlots; ++i) r.slot[i] = -j.slot[i];
  return r;
}

/// [M, phi} (base = 0) or [M, psi} (base = 3) from the primary-field action
/// tables, with the weight kept symbolic.
JetFunction base_action(const GenCtx& ctx, Mode m, bool psi, Structure s) {
  JetFunction r(ctx);
  Poly delta = Poly::symbol(SYM_DELTA);
  if (m.kind == Mode::L) {
    int n = m.two_index / 2;
    r.slot[psi ? 4 : 1] += SuperFunction::z_power(ctx, m.two_index + 2);
    Poly w;
    if (!psi) {
      w = delta * Rational(n + 1);
    } else if (s == Structure::Conv) {
      w = (delta + Poly(Rational(1, 2))) * Rational(n + 1);
    } else {
      w = delta * Rational(n + 1) + Poly(Rational(n, 2));
    }
    r.slot[psi ? 3 : 0] += SuperFunction::z_power(ctx, m.two_index).scale(w);
  } else {
    int two_r = m.two_index;
    if (!psi) {
      r.slot[3] +=
          SuperFunction::z_power(ctx, s == Structure::Conv ? two_r + 1 : two_r);
    } else {
      int p1 = s == Structure::Conv ? two_r + 1 : two_r + 2;
      int p0 = s == Structure::Conv ? two_r - 1 : two_r;
      r.slot[1] += SuperFunction::z_power(ctx, p1);
      r.slot[0] +=
          SuperFunction::z_power(ctx, p0).scale(delta * Rational(two_r + 1));
    }
  }
  return r;
}

/// ad_{p M}(j) for a single mode M with coefficient p (|p| must equal |M|):
/// per slot with coefficient C, (-1)^{|M||C|} (p C) [M, sym}.
JetFunction jet_term_action(const Grassmann& p, Mode m, const JetFunction& j,
                            Structure s) {
  const GenCtx& ctx = j.slot[0].ctx();
  JetFunction r(ctx);
  for (int base : {0, 3}) {
    bool psi = base == 3;
    JetFunction table(ctx);
    int table_order = -1;
    for (int q = 0; q < 3; ++q) {
      const SuperFunction& c = j.slot[base + q];
      if (c.is_zero()) continue;
      if (table_order < 0) {
        table = base_action(ctx, m, psi, s);
        table_order = 0;
      }
      while (table_order < q) {
        table = jet_dw(table);
        ++table_order;
      }
      SuperFunction signed_c =
          mode_parity(m) ? c.parity_even_part() - c.parity_odd_part() : c;
      r += jet_scale(signed_c.left_mul(p), table);
    }
  }
  return r;
}

}  // namespace

JetFunction jet_mode_action(Mode m, const JetFunction& j, Structure s) {
  return jet_term_action(Grassmann::one(j.slot[0].ctx()), m, j, s);
}

JetFunction jet_ad(const AlgebraElement& a, const JetFunction& j, Structure s) {
  const GenCtx& ctx = j.slot[0].ctx();
  JetFunction r(ctx);
  a.for_each([&](const Monomial& w, const Grassmann& p) {
    if (w.empty()) return;  // scalars graded-commute with everything
    if (w.size() != 1)
      throw std::invalid_argument("jet_ad requires mode-linear elements");
    auto par = p.parity();
    if (!par || *par != mode_parity(w[0]))
      throw std::invalid_argument(
          "jet_ad requires coefficient parity matching its mode");
    r += jet_term_action(p, w[0], j, s);
  });
  return r;
}

bool LinkResidual::is_zero() const {
  if (!drift.is_zero()) return false;
  for (const auto& d : diffusion)
    if (!d.is_zero()) return false;
  return true;
}

LinkResidual verify_link_with(const WalkSpec& w, const SdeSpec& sde) {
  validate_walk(w);
  const GenCtx& ctx = w.alg.gens;
  const int b = static_cast<int>(w.beta.size());
  if (sde.n_brownian() != b)
    throw std::invalid_argument("verify_link: SDE Brownian dimension mismatch");
  const Structure s = w.structure;
  const Poly delta = Poly::symbol(SYM_DELTA);

  // Jet of the primary superfield Phi = phi + theta' psi and its derivatives.
  JetFunction Phi0(ctx), Phi_z(ctx), Phi_th(ctx), Phi_zz(ctx), Phi_zth(ctx);
  SuperFunction one = SuperFunction::constant(ctx, Rational(1));
  SuperFunction th = SuperFunction::theta(ctx);
  Phi0.slot[0] = one;
  Phi0.slot[3] = th;
  Phi_z.slot[1] = one;
  Phi_z.slot[4] = th;
  Phi_th.slot[3] = one;
  Phi_zz.slot[2] = one;
  Phi_zz.slot[5] = th;
  Phi_zth.slot[4] = one;

  // Algebra side: -ad_{alpha0}(Phi) + 1/2 sum_i ad_{beta_i}^2(Phi) dt
  //               - ad_{beta_i}(Phi) dB_i.
  JetFunction lhs_drift = jet_neg(jet_ad(w.alpha0, Phi0, s));
  std::vector<JetFunction> lhs_diff;
  SuperFunction half = SuperFunction::constant(ctx, Rational(1, 2));
  for (const auto& beta : w.beta) {
    JetFunction adb = jet_ad(beta, Phi0, s);
    lhs_drift += jet_scale(half, jet_ad(beta, adb, s));
    lhs_diff.push_back(jet_neg(adb));
  }

  // Transformation side: prefactor log-differential.  Conv: K = (D theta')^
  // {2 Delta}.  Alt: A K with A = (z'/z)^Delta and K = (Dalt theta')^{2 Delta};
  // u_a = D theta'_a (resp. Dalt theta'_a) on the SDE coefficients.
  auto Dop = [s](const SuperFunction& f) {
    return s == Structure::Conv ? f.D() : f.Dalt();
  };
  SuperFunction u0 = Dop(sde.theta_drift);
  std::vector<SuperFunction> ui;
  for (const auto& f : sde.theta_diff) ui.push_back(Dop(f));

  SuperFunction K_dt = u0.scale(delta * Rational(2));
  std::vector<SuperFunction> G_dB;
  for (int i = 0; i < b; ++i) {
    K_dt += (ui[i] * ui[i]).scale(delta * (delta * Rational(2) - Poly(Rational(1))));
    G_dB.push_back(ui[i].scale(delta * Rational(2)));
  }
  SuperFunction G_dt = K_dt;
  if (s == Structure::Alt) {
    SuperFunction winv = SuperFunction::z_power(ctx, -2);
    SuperFunction A_dt = (winv * sde.z_drift).scale(delta);
    std::vector<SuperFunction> A_dB;
    for (int i = 0; i < b; ++i) {
      A_dt += (winv * winv * sde.z_diff[i] * sde.z_diff[i])
                  .scale(delta * (delta - Poly(Rational(1))) * Rational(1, 2));
      A_dB.push_back((winv * sde.z_diff[i]).scale(delta));
    }
    for (int i = 0; i < b; ++i) {
      G_dt += A_dB[i] * G_dB[i];  // Ito cross term (A^-1 dA)(K^-1 dK)
      G_dB[i] += A_dB[i];
    }
    G_dt += A_dt;
  }

  // d Phi along the SDE.
  JetFunction dPhi_drift =
      jet_scale(sde.z_drift, Phi_z) + jet_scale(sde.theta_drift, Phi_th);
  std::vector<JetFunction> dPhi_diff;
  for (int i = 0; i < b; ++i) {
    dPhi_drift +=
        jet_scale((sde.z_diff[i] * sde.z_diff[i]).scale(Rational(1, 2)), Phi_zz);
    dPhi_drift += jet_scale(sde.z_diff[i] * sde.theta_diff[i], Phi_zth);
    dPhi_diff.push_back(jet_scale(sde.z_diff[i], Phi_z) +
                        jet_scale(sde.theta_diff[i], Phi_th));
  }

  JetFunction rhs_drift = jet_scale(G_dt, Phi0) + dPhi_drift;
  LinkResidual res{JetFunction(ctx), {}};
  for (int i = 0; i < b; ++i) {
    rhs_drift += jet_scale(G_dB[i], dPhi_diff[i]);
    res.diffusion.push_back(lhs_diff[i] -
                            (jet_scale(G_dB[i], Phi0) + dPhi_diff[i]));
  }
  res.drift = lhs_drift - rhs_drift;
  return res;
}

LinkResidual verify_link(const WalkSpec& w) {
  return verify_link_with(w, build_sde(w));
}

}  // namespace supersle
