#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qkflag/numeric.hpp"
#include "qkflag/presentations.hpp"

namespace qkflag {

enum class ScalarMode { Formal, Numeric };

struct RingOptions {
  ScalarMode mode = ScalarMode::Formal;
  TruncationPolicy trunc{};
  /// Values for Λ (always) and Q (numeric mode).
  std::map<VarTag, Rational> values;
  /// Defaults to the number of W-orbits of fixed points.
  std::optional<long> expected_rank;
  GroebnerLimits limits{};
};

using ScalarMatrix = std::vector<std::vector<MultiPoly>>;

/// Matrix of multiplication by `element`; column k holds the coordinates of
/// element · basis_k.
struct MultOperator {
  MultiPoly element;
  ScalarMatrix matrix;

  /// Numeric mode only: every entry must be a constant.
  RationalMatrix rational() const;
};

class QuotientRing {
 public:
  const Presentation& presentation() const { return presentation_; }
  const ReducedBasis& basis() const { return basis_; }
  /// Standard monomials free of Novikov variables, ascending.
  const std::vector<Monomial>& module_basis() const { return module_basis_; }
  ScalarMode mode() const { return mode_; }
  std::size_t rank() const { return module_basis_.size(); }
  const std::map<VarTag, Rational>& values() const { return values_; }
  const std::optional<TruncationPolicy>& truncation() const { return basis_.truncation(); }

  /// Substitutes the ring's parameter values, then reduces.
  MultiPoly reduce(const MultiPoly& p) const;
  MultiPoly multiply(const MultiPoly& a, const MultiPoly& b) const;
  /// Scalar coordinates (polynomials in Q, or constants) in module_basis().
  std::vector<MultiPoly> coordinates(const MultiPoly& element) const;
  MultiPoly from_coordinates(const std::vector<MultiPoly>& coords) const;
  MultOperator mult_operator(const MultiPoly& element) const;
  /// c[i][j][k] with basis_i · basis_j = Σ_k c[i][j][k] basis_k.
  std::vector<std::vector<std::vector<MultiPoly>>> structure_constants() const;

  nlohmann::json to_json(bool include_structure_constants = false) const;

  QuotientRing(Presentation p, ReducedBasis b, std::vector<Monomial> module_basis, ScalarMode mode,
               std::map<VarTag, Rational> values);

 private:
  Presentation presentation_;
  ReducedBasis basis_;
  std::vector<Monomial> module_basis_;
  ScalarMode mode_;
  std::map<VarTag, Rational> values_;
};

/// Variables of a presentation in the default elimination order; the
/// Novikov block is local when `local_novikov` (needs a truncation).
MonomialOrder presentation_order(const Presentation& p, const std::vector<VarTag>& extra,
                                 bool local_novikov = false);

/// Builds the quotient. Throws DomainError if a non-Novikov parameter lacks
/// a value, RankError if the quotient is not free of the expected rank.
QuotientRing build_ring(const Presentation& p, const RingOptions& options = {});

struct GateReport {
  bool passed = false;
  long expected_rank = 0;
  long observed_rank = -1;
  long classical_rank = -1;
  bool free_over_novikov = false;
  bool mod_q_matches_classical = false;
  std::vector<std::string> failures;

  nlohmann::json to_json() const;
};

/// Checks (a) the formal quotient is free of the expected rank, (b) the
/// relations at Q = 0 generate the classical ideal, (c) the classical
/// quotient has the expected rank. Without `classical`, the presentation at
/// Q = 0 stands in for it.
GateReport rank_gate(const Presentation& quantum, const std::optional<Presentation>& classical,
                     const RingOptions& options = {});

struct IdealComparison {
  std::string left, right;  // presentation kinds
  /// Relations of one side (auxiliary generators eliminated) that do not
  /// reduce to zero modulo the other.
  std::vector<std::string> left_not_in_right, right_not_in_left;
  bool equal() const { return left_not_in_right.empty() && right_not_in_left.empty(); }
  nlohmann::json to_json() const;
};

/// Mutual normal-form membership of the ideals cut out on the common
/// generators, after substituting `values` and eliminating each side's
/// auxiliary generators. With `trunc` the comparison is modulo Novikov
/// degree cap+1.
IdealComparison compare_ideals(const Presentation& left, const Presentation& right,
                               const std::map<VarTag, Rational>& values = {},
                               std::optional<TruncationPolicy> trunc = std::nullopt,
                               const GroebnerLimits& limits = {});

/// φ(e_ℓ(P^i)) = ∧^ℓS_i, the Whitney generator for a symmetric class.
MultiPoly whitney_class(int level, int l);

/// Eigenvalues of a numeric multiplication operator, by multiplicity.
std::vector<Complex> eigenvalues(const MultOperator& op);

}  // namespace qkflag
