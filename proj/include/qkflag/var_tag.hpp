#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace qkflag {

/// Variable families. The declaration order is also the canonical print order.
enum class VarKind : std::uint8_t {
  ChernRoot,   // P^i_j
  WedgeS,      // ∧^ℓ S_i
  WedgeR,      // ∧^ℓ R_i, R_i = S_{i+1}/S_i
  WedgeRhat,   // ∧^ℓ R̂_i, the quantum quotient classes (R̂_0 = S_1)
  Novikov,     // Q_i (j = 0) or Q^i_j
  EquivParam,  // Λ_r (i = 0) or the large-torus Λ^i_r
  RootParam,   // λ(i, j, k), stored with j < k
  Deformation, // y
  LoopParam,   // q
  Auxiliary,   // t
};

/// A tagged variable. Index meaning depends on the kind; unused indices are 0.
struct VarTag {
  VarKind kind = VarKind::Auxiliary;
  std::int8_t i = 0;
  std::int8_t j = 0;
  std::int8_t k = 0;

  auto operator<=>(const VarTag&) const = default;
  bool operator==(const VarTag&) const = default;

  /// Laurent variables may carry negative exponents.
  bool is_laurent() const noexcept {
    return kind == VarKind::ChernRoot || kind == VarKind::EquivParam ||
           kind == VarKind::RootParam || kind == VarKind::LoopParam;
  }
  bool is_novikov() const noexcept { return kind == VarKind::Novikov; }

  /// Stable ASCII name, e.g. "P(1,2)", "S(2,1)", "Q(1)", "lam(1,1,2)".
  std::string name() const;
};

/// Inverse of VarTag::name(); throws DomainError.
VarTag parse_var(const std::string& text);

namespace var {

VarTag P(int level, int index);
VarTag S(int level, int degree);
VarTag R(int level, int degree);
VarTag Rhat(int level, int degree);
VarTag Q(int level);
VarTag Q(int level, int index);
VarTag Lambda(int r);
VarTag LambdaT(int level, int r);
VarTag y();
VarTag q();
VarTag t();

}  // namespace var

}  // namespace qkflag
