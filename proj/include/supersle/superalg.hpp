#pragma once

#include "supersle/grassmann.hpp"
#include "supersle/linalg.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace supersle {

enum class Sector { NS, Ramond, Virasoro };

std::string sector_name(Sector s);

/// Generator mode: L_{two_index/2} or G_{two_index/2}.  Indices are stored
/// doubled so NS half-integer G indices stay integral.  The member order
/// makes the default comparison the normal-ordering comparator: increasing
/// index, L before G at equal index.
struct Mode {
  int two_index = 0;
  enum Kind : int { L = 0, G = 1 } kind = L;
  friend auto operator<=>(const Mode&, const Mode&) = default;
};

Mode mode_L(int n);
Mode mode_G2(int two_r);
bool mode_valid(Sector s, Mode m);
inline int mode_parity(Mode m) { return m.kind == Mode::G ? 1 : 0; }
std::string mode_str(Mode m);

/// Normal-ordered product of modes (sorted ascending).
using Monomial = std::vector<Mode>;

int monomial_parity(const Monomial& w);
/// 2 * (level lowered by w) = -sum of two_index.
int monomial_two_level(const Monomial& w);
/// Reverse the word and negate every index (L_n -> L_{-n}, G_r -> G_{-r}).
Monomial adjoint_word(const Monomial& w);
std::string monomial_str(const Monomial& w);

/// Scalar-coefficient layer: exact rewriting into the normal-ordered basis.
using WordMap = std::map<Monomial, Rational>;

/// Rewrite an arbitrary word into normal-ordered form using
///   [L_n, L_m] = (n-m) L_{n+m} + (c/12) n (n^2-1) delta_{n+m,0}
///   [L_n, G_r] = (n/2 - r) G_{n+r}
///   {G_r, G_s} = 2 L_{r+s} + (c/3)(r^2 - 1/4) delta_{r+s,0}
WordMap normalize_word(const Monomial& w, const Rational& c);
WordMap word_mult(const WordMap& a, const WordMap& b, const Rational& c);
/// Graded bracket a b - (-1)^{|a||b|} b a for parity-homogeneous inputs.
WordMap word_bracket(const WordMap& a, const WordMap& b, const Rational& c);
std::optional<int> word_map_parity(const WordMap& m);

struct AlgCtx {
  Sector sector = Sector::NS;
  Rational c;
  GenCtx gens;
};

/// Element of the mode algebra with Grassmann coefficients, kept
/// normal-ordered; coefficients stand to the left of the mode word.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(AlgCtx ctx) : ctx_(std::move(ctx)) {}

  static AlgebraElement zero(const AlgCtx& ctx) { return AlgebraElement(ctx); }
  static AlgebraElement scalar(const AlgCtx& ctx, const Grassmann& g);
  static AlgebraElement scalar(const AlgCtx& ctx, const Rational& r);
  static AlgebraElement mode(const AlgCtx& ctx, Mode m);
  static AlgebraElement L(const AlgCtx& ctx, int n) { return mode(ctx, mode_L(n)); }
  static AlgebraElement G2(const AlgCtx& ctx, int two_r) { return mode(ctx, mode_G2(two_r)); }
  static AlgebraElement word(const AlgCtx& ctx, const Monomial& w, const Grassmann& coeff);

  const AlgCtx& actx() const { return ctx_; }

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator-() const;
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement& operator+=(const AlgebraElement& o);
  bool operator==(const AlgebraElement& o) const { return terms_ == o.terms_; }

  AlgebraElement scale(const Grassmann& g) const;  // left multiplication
  AlgebraElement scale(const Rational& r) const;
  AlgebraElement reduce_k(const Rational& kappa) const;

  bool is_zero() const { return terms_.empty(); }
  /// Parity (mode word + Grassmann coefficient) if homogeneous.
  std::optional<int> total_parity() const;
  /// ab - (-1)^{|a||b|} ba; both sides must be parity-homogeneous.
  AlgebraElement graded_bracket(const AlgebraElement& o) const;

  void add(const Monomial& w, const Grassmann& coeff);
  void for_each(const std::function<void(const Monomial&, const Grassmann&)>& fn) const;
  Grassmann coeff(const Monomial& w) const;
  std::size_t term_count() const { return terms_.size(); }
  std::string str() const;

 private:
  AlgCtx ctx_;
  std::map<Monomial, Grassmann> terms_;
};

struct ModCtx {
  AlgCtx alg;
  Rational delta;
};

/// Basis label of a Verma-module state: a normal-ordered word of
/// negative-index modes, plus the ground-space component.  ground = 0 is the
/// primary vector; ground = 1 (Ramond only) is its G_0 partner.
using StateKey = std::pair<Monomial, int>;

int state_two_level(const StateKey& k);

/// Vector in the Verma module with Grassmann coefficients.
class VermaState {
 public:
  VermaState() = default;
  explicit VermaState(ModCtx ctx) : ctx_(std::move(ctx)) {}

  static VermaState vacuum(const ModCtx& ctx);
  static VermaState basis_state(const ModCtx& ctx, const StateKey& key);

  const ModCtx& mctx() const { return ctx_; }

  VermaState operator+(const VermaState& o) const;
  VermaState operator-(const VermaState& o) const;
  VermaState operator-() const;
  VermaState& operator+=(const VermaState& o);
  bool operator==(const VermaState& o) const { return terms_ == o.terms_; }

  VermaState scale(const Grassmann& g) const;  // left multiplication
  VermaState scale(const Rational& r) const;
  VermaState reduce_k(const Rational& kappa) const;
  VermaState truncate(int max_two_level) const;

  bool is_zero() const { return terms_.empty(); }
  void add(const StateKey& key, const Grassmann& coeff);
  void for_each(const std::function<void(const StateKey&, const Grassmann&)>& fn) const;
  Grassmann coeff(const StateKey& key) const;
  /// Distinct two_levels present.
  std::vector<int> levels() const;
  std::string str() const;

 private:
  ModCtx ctx_;
  std::map<StateKey, Grassmann> terms_;
};

/// Left action a . v.
VermaState apply(const AlgebraElement& a, const VermaState& v);
/// The state as an algebra element (word * G_0^{ground} with its coefficient).
AlgebraElement lift(const VermaState& v);

/// Normal-ordered basis words at exactly two_level (Ramond includes the G_0
/// ground variants; level counts only the word part).
std::vector<StateKey> level_basis(Sector s, int two_level);

struct SingularSpace {
  std::vector<StateKey> basis;   // basis of the level
  std::vector<Vec> vectors;      // annihilated-by-positive-modes vectors
};

/// States at two_level killed by every positive-index mode; vectors are
/// normalized so the first nonzero coordinate is 1.
SingularSpace find_singular(const ModCtx& ctx, int two_level);

/// Contravariant form on level_basis(two_level) with L_n^+ = L_{-n},
/// G_r^+ = G_{-r}, <vac|vac> = 1.
Matrix gram_matrix(const ModCtx& ctx, int two_level);

}  // namespace supersle
