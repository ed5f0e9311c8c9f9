#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qkflag/flag_geometry.hpp"
#include "qkflag/groebner.hpp"

namespace qkflag {

inline constexpr int kPresentationSchemaVersion = 1;

/// Generators plus relations, each relation tagged with the construction
/// that produced it.
struct Presentation {
  std::string kind;  // "classical-whitney", "quantum-whitney", "vieta", "bethe", "wronskian"
  FlagShape shape;
  std::vector<VarTag> generators;
  std::vector<VarTag> auxiliary;  // eliminated generators (∧^ℓR_i)
  std::vector<MultiPoly> relations;
  std::vector<std::string> provenance;
  bool equivariant = true;

  void add(MultiPoly relation, std::string tag);
  /// Substitutes rational values for parameters (Λ, Q) in every relation.
  Presentation specialize(const std::map<VarTag, Rational>& values) const;
  /// Λ_r -> 1.
  Presentation nonequivariant() const;
  /// Variables occurring in the relations that are neither generators nor
  /// auxiliary (Λ, Q, ...).
  std::vector<VarTag> parameters() const;

  nlohmann::json to_json() const;
  /// Throws DomainError on malformed documents or a schema mismatch.
  static Presentation from_json(const nlohmann::json& doc);
  std::string to_text() const;
};

nlohmann::json poly_to_json(const MultiPoly& p);
MultiPoly poly_from_json(const nlohmann::json& doc);

/// ∧^ℓS_i as a polynomial: 1 at ℓ = 0, 0 out of range, e_ℓ(Λ) at i = n+1,
/// Λ_y(S_0) = 1.
MultiPoly wedge_S(const FlagShape& shape, int i, int l);
/// ∧^ℓR_i (auxiliary variable), 1 at ℓ = 0, 0 out of range.
MultiPoly wedge_R(const FlagShape& shape, int i, int l);

Presentation classical_whitney(const FlagShape& shape, bool equivariant = true);
Presentation quantum_whitney(const FlagShape& shape, bool equivariant = true);

/// Values of ∧^ℓS_i and ∧^ℓR_i at a fixed point (classical localization).
std::map<VarTag, MultiPoly> whitney_localization(const FlagShape& shape, const FixedPoint& fp);

// ------------------------------------------------------------------ Bethe

/// One unspecialized relation, kept factored:
///   lhs = Q^i_j · prefactor · ∏ ratio.num / ratio.den.
struct BetheRelation {
  int i = 0, j = 0;
  MultiPoly lhs;
  MultiPoly prefactor;  // Q^i_j ∏_a (1 - P^{i-1}_a / x)
  std::vector<std::pair<MultiPoly, MultiPoly>> ratios;

  /// lhs·∏den − prefactor·∏num, normalized.
  MultiPoly cleared() const;
};

/// Divides by the monomial content in P and Λ and makes the leading coefficient
/// positive, so equal relations compare equal.
MultiPoly normalize_relation(const MultiPoly& p);

/// Cleared polynomial per (i, j), level by level. `specialized = false`
/// returns the root-parameter form multiplied out.
std::vector<MultiPoly> bethe_equations(const FlagShape& shape, bool specialized = true);
std::vector<BetheRelation> bethe_relations_factored(const FlagShape& shape);
/// λ -> 1, Q^i_j -> Q_i, each ratio cancelled exactly to −x/P_k, then
/// cleared. Throws PresentationMismatch if a ratio fails to cancel.
MultiPoly specialize_bethe(const BetheRelation& rel);
Presentation bethe_presentation(const FlagShape& shape);

/// F_i(t), of degree v_{i+1} in t, vanishing at every P^i_j modulo the
/// Bethe equations.
MultiPoly characteristic_poly(const FlagShape& shape, int i);

// ---------------------------------------------------- quantum quotient

/// ∧^ℓR̂_i = wedge[ℓ] / (1 − Q_i)^{denominator_power[ℓ]}, ℓ = 0..k.
struct QuantumQuotientBundle {
  int level = 0;
  int rank = 0;  // k = v_{i+1} − v_i
  std::vector<MultiPoly> wedge;
  std::vector<int> denominator_power;
};

struct VietaResult {
  QuantumQuotientBundle bundle;
  /// y-degree components ℓ = k+1..v_{i+1} of
  /// Λ_y(S_i)Λ_y(R̂_i) = Λ_y(S_{i+1}) + Q_i y^k det R̂_i Λ_y(S_{i−1}), cleared.
  std::vector<MultiPoly> relations;
};

VietaResult vieta_symmetrize(const FlagShape& shape, int i);
Presentation vieta_presentation(const FlagShape& shape, bool equivariant = true);

// -------------------------------------------------------------- Wronskian

/// Tridiagonal (n+1)×(n+1) matrix over y, Q_i and ∧^ℓR̂_i (R̂_0 = S_1).
struct WronskianMatrix {
  int size = 0;
  std::vector<std::vector<MultiPoly>> entries;

  /// Leading principal minor of order m (1..size) via the three-term
  /// recurrence.
  MultiPoly leading_minor(int m) const;
  /// Cofactor expansion, independent of the recurrence.
  MultiPoly determinant_by_expansion() const;
};

WronskianMatrix wronskian_matrix(const FlagShape& shape);
/// Generators Rhat(i,ℓ); relations are the y-components of
/// det M − ∏_r (1 + yΛ_r).
Presentation wronskian_presentation(const FlagShape& shape, bool equivariant = true);

/// Λ_y(S_j) in Whitney generators (j = n+1 gives ∏(1 + yΛ_r)).
MultiPoly lambda_y_S(const FlagShape& shape, int j);

/// Residual of det(M_j) − Λ_y(S_j) in Whitney generators, cleared by
/// ∏(1 − Q_r), with `values` substituted for parameters, reduced by
/// `whitney` and split into y-degrees. Throws PresentationMismatch when a
/// component is nonzero and `strict` is set.
std::vector<MultiPoly> wronskian_det_check(const FlagShape& shape, int j,
                                           const ReducedBasis& whitney,
                                           const std::map<VarTag, Rational>& values = {},
                                           bool strict = true);

}  // namespace qkflag
