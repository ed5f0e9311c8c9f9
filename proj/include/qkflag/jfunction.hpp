#pragma once

#include <climits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qkflag/flag_geometry.hpp"

namespace qkflag {

/// d^i_j ≥ 0 for 1 ≤ i ≤ n, 1 ≤ j ≤ v_i; d[i-1][j-1].
struct DegreeVector {
  std::vector<std::vector<int>> d;

  static DegreeVector zero(const FlagShape& shape);
  /// Every degree with |d| ≤ max_total, in graded lexicographic order.
  static std::vector<DegreeVector> enumerate(const FlagShape& shape, int max_total);

  /// d^i_j; level n+1 reads as 0.
  int at(int i, int j) const;
  int total() const;
  int level_sum(int i) const;
  bool is_zero() const { return total() == 0; }
  bool operator==(const DegreeVector&) const = default;
  auto operator<=>(const DegreeVector&) const = default;
  std::string to_string() const;  // "1|1,0"
};

/// Sentinel degree of an identically zero term.
inline constexpr int kMinusInfinity = INT_MIN;

/// coef · prefactor · q^q_power · ∏ (1 − c q^ℓ)^{mult}, kept cancelled. Each
/// factor is stored in a canonical orientation (ℓ > 0, or ℓ = 0 with c
/// "positive"), the flipped sign and monomial folded into the prefactor, so
/// equal rational functions have equal representations.
class QFactorProduct {
 public:
  using Key = std::pair<Monomial, int>;  // (c, ℓ)

  static QFactorProduct one() { return {}; }

  /// Multiplies by (1 − c q^ℓ)^mult. A (1 − q⁰) numerator makes the
  /// product zero; a (1 − q⁰) denominator throws DomainError.
  void multiply_factor(const Monomial& c, int l, int mult = 1);
  void multiply(const QFactorProduct& o);
  QFactorProduct inverse() const;

  /// Substitutes monomials for Laurent variables, then re-cancels.
  QFactorProduct substitute(const std::map<VarTag, Monomial>& values) const;

  bool is_zero() const { return zero_; }
  const Rational& coefficient() const { return coef_; }
  const Monomial& prefactor() const { return prefactor_; }
  int q_power() const { return q_power_; }
  const std::map<Key, int>& factors() const { return factors_; }

  bool operator==(const QFactorProduct& o) const;

  /// Exact value at numeric variables (q included via var::q()).
  Rational evaluate(const std::map<VarTag, Rational>& values) const;

  std::string to_string() const;
  nlohmann::json to_json() const;

 private:
  Rational coef_ = 1;
  Monomial prefactor_;
  int q_power_ = 0;
  std::map<Key, int> factors_;
  bool zero_ = false;
};

/// J_d with λ symbolic, Λ^i → 1 (i < n). With a restriction, P is sent to
/// its fixed-point value Λ_{F_i(j)} and the product re-cancelled.
QFactorProduct build_jd(const FlagShape& shape, const DegreeVector& d,
                        const std::optional<FixedPoint>& restriction = std::nullopt);

/// Degree of the rational function in q; kMinusInfinity for zero. Throws
/// InternalError on a stored factor with multiplicity 0.
int q_degree(const QFactorProduct& term);

/// Σ_i (Σ_{j,k} C(d^i_j − d^i_k + 1, 2) − Σ_{s,r} C(d^i_s − d^{i+1}_r + 1, 2)).
int degree_formula(const FlagShape& shape, const DegreeVector& d);

struct BoundCheck {
  std::string family;  // "sum" or "top-l"
  int i = 0, l = 0, j = 0;
  int bound = 0;      // deg must be < bound
  bool passed = false;
};

struct PoleCensus {
  int poles_at_roots_of_unity = 0;   // denominator factors (1 − c q^ℓ), ℓ ≥ 1
  int constant_factors = 0;          // q-free denominator factors
  std::vector<std::string> violations;
  bool vanishes_at_infinity = true;  // (1 − q)·J_d
  bool clean() const { return violations.empty() && vanishes_at_infinity; }
};

struct DegreeReport {
  DegreeVector d;
  int q_degree = 0;           // unrestricted
  int restricted_degree = 0;  // at Ã; kMinusInfinity when zero
  int formula = 0;
  bool formula_matches = false;
  std::vector<BoundCheck> bounds;
  /// Triviality gates: level i passes when deg < −Σ_j d^i_j (linear classes)
  /// and when deg < −(v_{i+1} − v_i)·max_j d^i_j (the e·h products).
  std::vector<std::pair<std::string, bool>> gates;
  PoleCensus poles;

  bool passed() const;
  nlohmann::json to_json() const;
};

/// Both degree-bound families for d ≠ 0 plus the formula cross-check.
DegreeReport verify_bounds(const FlagShape& shape, const DegreeVector& d);

/// Census of J_d at Ã after λ → 1.
PoleCensus pole_audit(const FlagShape& shape, const DegreeVector& d);

struct ResidualEntry {
  DegreeVector d;
  bool zero = true;  // as classes in localized equivariant K-theory
  QFactorProduct lhs, rhs;  // the two sides at Q^d
};

struct ResidualReport {
  int i = 0, j = 0, cap = 0;
  std::vector<ResidualEntry> entries;  // every d with |d| ≤ cap + 1
  /// True when every coefficient with |d| ≤ cap − 1 vanishes.
  bool vanishes_below_cap = false;
  /// True when all nonzero coefficients sit at |d| = cap + 1.
  bool boundary_only = false;
  int nonzero_count = 0;
  /// Coefficients that differ symbolically but agree at every fixed point.
  int classical_count = 0;

  nlohmann::json to_json() const;
};

/// Applies the (i, j) q-difference operator pair to Σ_{|d|≤cap} Q^d J_d:
/// J_d L(d) − J_{d−e} R(d−e) at each Q^d, e the unit vector at (i, j), with
///   L(d) = ∏_{k≠j}(1 − λ_{kj} q P^i_k/P^i_j q^{d_k−d_j}) ∏_b(1 − P^i_j/P^{i+1}_b q^{d^i_j − d^{i+1}_b}),
///   R(d) = ∏_a(1 − P^{i−1}_a/P^i_j q^{d^{i−1}_a − d^i_j}) ∏_{k≠j}(1 − λ_{jk} q P^i_j/P^i_k q^{d_j−d_k}).
ResidualReport qde_residual(const FlagShape& shape, int i, int j, int cap);

}  // namespace qkflag
