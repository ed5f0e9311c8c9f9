#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "qkflag/multipoly.hpp"

namespace qkflag {

enum class OrderKind { Degrevlex, Lex, Block };

/// A monomial order on a fixed variable list. Block orders compare blocks
/// left to right (first block dominates) with degrevlex inside each block.
struct MonomialOrder {
  OrderKind kind = OrderKind::Degrevlex;
  std::vector<std::vector<VarTag>> blocks;
  /// Per block: compare with the reversed order (1 beats every other
  /// monomial of the block). Only allowed for Novikov blocks under a
  /// truncation, where exponents are bounded. Empty means all global.
  std::vector<bool> local;

  static MonomialOrder degrevlex(std::vector<VarTag> ranking);
  static MonomialOrder lex(std::vector<VarTag> ranking);
  static MonomialOrder block(std::vector<std::vector<VarTag>> blocks);

  /// Default for presentations: auxiliary quotient wedges first (so they are
  /// eliminated), then the remaining generators, then Novikov variables, then
  /// symbolic parameters.
  /// With `local_novikov`, the Novikov block comes first and is ordered
  /// locally: the lowest Q-degree part of a polynomial holds its lead, so a
  /// quotient flat over Q has standard set B × {Q^a}.
  static MonomialOrder novikov_last(const std::vector<VarTag>& vars, bool local_novikov = false);

  std::vector<VarTag> variables() const;
};

struct GroebnerLimits {
  std::size_t max_basis_size = 4000;
  std::size_t max_reduction_steps = 50'000'000;
  std::size_t max_standard_monomials = 200'000;
};

/// A reduced Gröbner basis of ⟨relations⟩ (+ all Novikov monomials of
/// degree cap+1 when truncated). Immutable; cheap to copy.
class ReducedBasis {
 public:
  const std::vector<VarTag>& variables() const;
  const MonomialOrder& order() const;
  const std::optional<TruncationPolicy>& truncation() const;

  /// Reduced basis elements, sorted by leading monomial (ascending),
  /// including the truncation monomials.
  std::vector<MultiPoly> polynomials() const;
  std::vector<Monomial> leading_monomials() const;
  std::size_t size() const;

  /// Unique remainder of p. Throws DomainError on foreign variables or
  /// negative exponents.
  MultiPoly normal_form(const MultiPoly& p) const;
  bool contains(const MultiPoly& p) const { return normal_form(p).is_zero(); }
  /// True when every basis element of `other` reduces to zero here.
  bool contains_ideal(const ReducedBasis& other) const;

  /// Monomials (over all ring variables) outside the leading-term ideal,
  /// ascending in the order. Throws RankError if the staircase is infinite
  /// (more than the configured limit).
  std::vector<Monomial> standard_monomials() const;

  /// Leading monomial of p under this basis' order (p ≠ 0).
  Monomial leading_monomial(const MultiPoly& p) const;
  /// Order comparison: negative, zero or positive.
  int compare(const Monomial& a, const Monomial& b) const;

  struct Impl;
  explicit ReducedBasis(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Buchberger with Gebauer–Möller pair pruning. Throws DomainError on
/// non-polynomial input and ResourceError when a limit is exceeded.
ReducedBasis groebner(const std::vector<MultiPoly>& relations, const MonomialOrder& order,
                      std::optional<TruncationPolicy> trunc = std::nullopt,
                      const GroebnerLimits& limits = {});

}  // namespace qkflag
