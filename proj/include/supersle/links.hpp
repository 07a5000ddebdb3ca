#pragma once

#include "supersle/ito.hpp"
#include "supersle/superalg.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace supersle {

/// Polynomial symbol index for the symbolic conformal weight used by the jet
/// verification (kept symbolic so link identities are certified for every
/// weight at once).
inline constexpr std::size_t SYM_DELTA = 99;

/// Random walk on the supergroup: dG = G (alpha0 dt + sum_i beta_i dB_i).
/// alpha0 and each beta_i are linear in algebra modes with Grassmann
/// coefficients; the full Ito drift generator is alpha0 + 1/2 sum beta_i^2.
struct WalkSpec {
  AlgCtx alg;
  Structure structure = Structure::Conv;
  Rational delta;
  /// kappa = k^2; the square root k stays a polynomial symbol inside
  /// coefficients and even powers are reduced to kappa where needed.
  Rational kappa;
  /// When set, k itself is rational and is substituted exactly (kappa must
  /// equal k_value^2).
  std::optional<Rational> k_value;
  AlgebraElement alpha0;
  std::vector<AlgebraElement> beta;

  ModCtx mod() const { return ModCtx{alg, delta}; }
};

/// Throws std::invalid_argument when a walk violates the contract: terms must
/// be linear in modes, modes must match the sector, each coefficient must
/// carry the parity of its mode, and alpha0 / beta_i must be parity-even.
void validate_walk(const WalkSpec& w);

/// alpha0 + (1/2) sum_i beta_i^2, the generator of d E[G]/dt.
AlgebraElement full_drift_generator(const WalkSpec& w);

/// Transcribes the walk into the superspace SDE of the chosen structure.
/// Drift components include the 1/2 sum_i (z'_i d_z + theta'_i d_theta)
/// second-order corrections.
SdeSpec build_sde(const WalkSpec& w);

/// (alpha0 + 1/2 sum beta^2)|Delta> with scalars normalized (k^2 -> kappa,
/// or k evaluated when the walk pins a rational k).
VermaState drift_state(const WalkSpec& w);

// ---------------------------------------------------------------------------
// Formal jets of a primary superfield Phi = phi(z') + theta' psi(z').

/// Slot order: phi, phi', phi'', psi, psi', psi''.  Slots 0-2 are even
/// symbols, 3-5 odd; each coefficient is a SuperFunction standing to the left
/// of its symbol.
struct JetFunction {
  static constexpr int kSlots = 6;
  std::array<SuperFunction, kSlots> slot;

  explicit JetFunction(const GenCtx& ctx);
  JetFunction operator+(const JetFunction& o) const;
  JetFunction operator-(const JetFunction& o) const;
  JetFunction& operator+=(const JetFunction& o);
  bool is_zero() const;
  std::string str() const;
};

/// d/dw of a jet expression; raising a second-derivative slot with a nonzero
/// coefficient throws std::runtime_error("jet order insufficient").
JetFunction jet_dw(const JetFunction& j);

/// Left multiplication by a scalar SuperFunction.
JetFunction jet_scale(const SuperFunction& s, const JetFunction& j);

/// Graded bracket [M, j} of a single mode with a jet, for the primary-field
/// action tables of the chosen structure (weight symbolic as SYM_DELTA).
JetFunction jet_mode_action(Mode m, const JetFunction& j, Structure s);

/// ad_a(j) = sum over terms p*M of the mode-linear element a of
/// (+/-) (p * C) [M, sym}; requires every word of a to be a single mode.
JetFunction jet_ad(const AlgebraElement& a, const JetFunction& j, Structure s);

/// Jet residuals of the walk <-> SDE link, one JetFunction per differential.
struct LinkResidual {
  JetFunction drift;
  std::vector<JetFunction> diffusion;

  bool is_zero() const;
};

/// Expands both sides of the link identity
///   d(G_t Phi(z',theta')) with prefactor (D theta')^{2 Delta}        (conv)
///   d(G_t Phi(z',theta')) with prefactor ((z'/z)(Dalt theta')^2)^Delta (alt)
/// against the algebra side -ad_{alpha0} + 1/2 sum ad_{beta_i}^2 and returns
/// the termwise difference; identically zero (in the jet symbols, z', theta',
/// the symbolic weight and the symbol k) certifies the SDE transcription.
LinkResidual verify_link(const WalkSpec& w);
/// Same residual with an explicitly supplied SDE (sensitivity controls).
LinkResidual verify_link_with(const WalkSpec& w, const SdeSpec& sde);

// ---------------------------------------------------------------------------
// Martingale machinery.

/// Basis and descendant span of the singular submodule at a fixed level.
struct SubmoduleLevel {
  int two_level = 0;
  std::vector<StateKey> basis;
  std::vector<Vec> span;
  std::vector<int> singular_levels;
};

/// Descendants at target_two_level of every singular vector at levels
/// 1..target_two_level (G_0 partners included in the Ramond sector).
SubmoduleLevel singular_descendants(const ModCtx& ctx, int target_two_level);

struct MartingaleReport {
  bool in_submodule = false;
  bool drift_zero = false;
  int drift_two_level = 0;
  std::vector<int> singular_levels;
  std::string detail;
};

/// Exact decision: does the drift state lie in the submodule generated by the
/// singular vectors at or below its level?
MartingaleReport martingale_check(const WalkSpec& w);

/// E[G_t |Delta>] truncated to two_level <= max_two_level, computed from the
/// nilpotent right-multiplication expansion; coefficients are exact
/// polynomials in t.  Requires a strictly-lowering walk (G_0 allowed) and
/// max_two_level >= the drift-state level.
VermaState expected_state(const WalkSpec& w, int max_two_level);

/// Reduce every level component of a state modulo the singular-descendant
/// span (per Grassmann monomial and scalar monomial); the image represents
/// the state in the quotient module.
VermaState quotient_reduce(const ModCtx& ctx, const VermaState& s,
                           int max_two_level);

// ---------------------------------------------------------------------------
// JSON interface.

/// Parses {"sector", "structure", "c", "delta", "k"|"kappa", "alpha0": [term...],
/// "beta": [[term...], ...]} with term = {"mode": "L"|"G", "index": "p/q",
/// "coeff": [[["gen"...], "p/q"], ...]}; the reserved coefficient generator
/// names "k", "t", "B<i>" denote the scalar symbols.
WalkSpec walk_from_json(const std::string& text, const GenCtx& gens);
std::string walk_to_json(const WalkSpec& w);

std::string grassmann_to_json(const Grassmann& g);
std::string verma_state_to_json(const VermaState& v);
std::string sde_to_json(const SdeSpec& s);

}  // namespace supersle
