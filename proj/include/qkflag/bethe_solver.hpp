#pragma once

#include <map>
#include <vector>

#include "json.hpp"
#include "qkflag/flag_geometry.hpp"
#include "qkflag/numeric.hpp"
#include "qkflag/quantum_ring.hpp"

namespace qkflag {

/// The cleared Bethe equations of a shape, one per (i, j), with unknowns
/// P^i_j and parameters Q_1..Q_n, Λ_1..Λ_N (in that order).
class BetheSystem {
 public:
  explicit BetheSystem(const FlagShape& shape);

  const FlagShape& shape() const { return shape_; }
  const std::vector<MultiPoly>& equations() const { return equations_; }
  const std::vector<VarTag>& unknowns() const { return unknowns_; }
  const std::vector<VarTag>& parameters() const { return parameters_; }
  std::size_t size() const { return unknowns_.size(); }

  /// Parameter vector from a value map; missing Q default to 0, a missing Λ
  /// throws DomainError.
  std::vector<Complex> parameter_vector(const std::map<VarTag, Rational>& values) const;

  std::vector<Complex> evaluate(const std::vector<Complex>& x, const std::vector<Complex>& params) const;
  /// max over equations of |F| / Σ|terms|.
  double relative_residual(const std::vector<Complex>& x, const std::vector<Complex>& params) const;

  struct Term {
    Rational coef;
    std::vector<int> exps;  // unknowns then parameters
  };
  const std::vector<std::vector<Term>>& compiled() const { return compiled_; }

 private:
  FlagShape shape_;
  std::vector<MultiPoly> equations_;
  std::vector<VarTag> unknowns_;
  std::vector<VarTag> parameters_;
  std::vector<std::vector<Term>> compiled_;
};

struct BetheSolution {
  /// Indexed like BetheSystem::unknowns().
  std::vector<Complex> values;
  double residual = 0;
  int q_steps = 0;
  int orbit = -1;
  FixedPoint seed;

  /// Values sorted within each level; equal for W-related solutions.
  std::vector<Complex> canonical(const FlagShape& shape) const;
  std::map<VarTag, Complex> assignment(const FlagShape& shape) const;
  nlohmann::json to_json(const FlagShape& shape) const;
};

struct HomotopyOptions {
  int steps = 32;
  double first_step = 1e-6;  // t_1 of the geometric ramp
  int max_halvings = 24;
  double tolerance = 1e-10;
  double polish_threshold = 1e-11;
  double safety_radius = 0.5;
  /// γ in the path p0 + (t + γ t(1 − t))(p1 − p0); 0 gives the straight ramp.
  Complex detour{0.35, 0.6};
  bool force = false;  // skip the safety radius
};

/// One solution per fixed point at Q = 0, P^i_j = Λ_{F_i(j)}, with orbit ids
/// numbered by first appearance. Throws DegeneracyError on repeated or zero Λ.
std::vector<BetheSolution> seed_solutions(const FlagShape& shape, const std::map<VarTag, Rational>& lambda);

/// Tracks every seed from Q = 0 to `target` (Q values; Λ from `target` too)
/// along Q(t) = φ(t)·Q with φ a complex detour from 0 to 1. Throws
/// PathError on divergence or a level collision, StructuralError if distinct orbits land on one W-canonical solution,
/// DomainError outside the safety radius.
std::vector<BetheSolution> continue_to(const BetheSystem& system, const std::vector<BetheSolution>& seeds,
                                       const std::map<VarTag, Rational>& target,
                                       const HomotopyOptions& options = {});

/// Full solve: seeds at the target Λ, or for degenerate Λ (the
/// nonequivariant case) at Λ_r = 1 + (r−1)/(4N) followed by a second leg
/// moving Λ to its target at fixed Q.
std::vector<BetheSolution> solve_bethe(const FlagShape& shape, const std::map<VarTag, Rational>& target,
                                       const HomotopyOptions& options = {});

/// One solution per orbit, in orbit order.
std::vector<BetheSolution> orbit_representatives(const std::vector<BetheSolution>& solutions);

/// τ over orbit representatives. τ may involve P, Q and Λ; values of Q and
/// Λ come from `values`. Throws DomainError if τ is not W-invariant.
std::vector<Complex> eigenvalue_table(const FlagShape& shape, const std::vector<BetheSolution>& solutions,
                                      const MultiPoly& tau, const std::map<VarTag, Rational>& values);

struct SpectrumReport {
  MultiPoly tau;
  std::vector<Complex> operator_eigenvalues;
  std::vector<Complex> bethe_values;
  MatchReport match;
  bool passed = false;

  nlohmann::json to_json() const;
};

/// Compares eigenvalues of multiplication by τ (or φ(τ) for Whitney-type
/// presentations) in a numeric ring with τ over Bethe orbits. Pass iff the
/// matched relative distance is below `tolerance`.
SpectrumReport spectrum_match(const QuotientRing& ring, const std::vector<BetheSolution>& solutions,
                              const MultiPoly& tau, double tolerance = 1e-8);

}  // namespace qkflag
