#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qkflag/multipoly.hpp"

namespace qkflag {

/// Dimension vector v_1 < ... < v_n < N of a partial flag variety.
class FlagShape {
 public:
  /// Throws DomainError unless dims is strictly increasing, positive and
  /// ends below N.
  FlagShape(std::vector<int> dims, int N);
  /// Parses "v1,...,vn:N".
  static FlagShape parse(const std::string& text);

  int n() const { return static_cast<int>(dims_.size()); }
  int N() const { return N_; }
  /// v_i with v_0 = 0 and v_{n+1} = N.
  int v(int i) const;
  const std::vector<int>& dims() const { return dims_; }

  std::string spec() const;  // "1,2:3"
  std::string name() const;  // "Fl(1,2;3)"

  /// Chern-root variables of level i (1..n); level n+1 gives the Λ's.
  std::vector<VarTag> roots(int i) const;
  /// Every P variable, level by level.
  std::vector<VarTag> all_roots() const;

  bool operator==(const FlagShape& o) const { return dims_ == o.dims_ && N_ == o.N_; }

 private:
  std::vector<int> dims_;
  int N_;
};

/// Injections f_i: {1..v_i} -> {1..v_{i+1}} for each level, values 1-based.
struct FixedPoint {
  std::vector<std::vector<int>> f;

  /// F_i(j) = f_n ∘ ... ∘ f_i (j), an index in 1..N.
  int composite(int i, int j) const;
  bool operator==(const FixedPoint&) const = default;
  auto operator<=>(const FixedPoint&) const = default;
  std::string to_string() const;
};

std::vector<FixedPoint> enumerate_fixed_points(const FlagShape& shape);
/// The point with f_i(k) = k at every level.
FixedPoint distinguished_point(const FlagShape& shape);

/// ∏ v_{i+1}! / (v_{i+1} - v_i)!.
long fixed_point_count(const FlagShape& shape);
/// |W| = ∏ v_i!.
long weyl_order(const FlagShape& shape);
/// Number of W-orbits of fixed points: N! / (v_1! ∏ (v_{i+1}-v_i)!).
long orbit_count(const FlagShape& shape);

/// Simplicial cone spanned by p^i_j - p^{i+1}_{f_i(j)} (p^{n+1} = 0).
/// Coordinates are indexed like FlagShape::all_roots().
struct ConeDescriptor {
  std::vector<std::vector<int>> rays;

  /// Coefficients expressing `point` in the rays (exact); throws
  /// DomainError if the rays are dependent.
  std::vector<Rational> coordinates(const std::vector<Rational>& point) const;
  /// True when `point` lies in the interior.
  bool contains_interior(const std::vector<Rational>& point) const;
};

ConeDescriptor cone_of(const FlagShape& shape, const FixedPoint& fp);
/// The stability vector (1, ..., 1).
std::vector<Rational> theta(const FlagShape& shape);

/// One permutation per level; sigma[i-1][j-1] is the image of j, 1-based.
struct WeylElement {
  std::vector<std::vector<int>> sigma;

  static WeylElement identity(const FlagShape& shape);
  WeylElement operator*(const WeylElement& o) const;  // (this ∘ o)
  WeylElement inverse() const;
  int image(int level, int j) const { return sigma[level - 1][j - 1]; }
  bool operator==(const WeylElement&) const = default;
};

std::vector<WeylElement> weyl_group(const FlagShape& shape);

/// P^i_j -> P^i_{σ_i(j)}, Q^i_j -> Q^i_{σ_i(j)}, λ(i,j,k) -> λ(i,σ_i(j),σ_i(k)).
MultiPoly weyl_act(const FlagShape& shape, const WeylElement& w, const MultiPoly& p);
/// |W|^{-1} Σ_w w·p.
MultiPoly weyl_symmetrize(const FlagShape& shape, const MultiPoly& p);
bool is_weyl_invariant(const FlagShape& shape, const MultiPoly& p);

enum class LocalizationMode { Classical, TildeT };

/// Assignment of every P^i_j. TildeT: P^n_j -> Λ^n_{f_n(j)} and
/// P^i_j -> Λ^i_{f_i(j)} · P^{i+1}_{f_i(j)}. Classical: the TildeT assignment
/// followed by Λ^n_r -> Λ_r and Λ^i_r -> 1 (i < n), i.e. P^i_j -> Λ_{F_i(j)}.
std::map<VarTag, MultiPoly> localization_substitution(const FlagShape& shape,
                                                      const FixedPoint& fp,
                                                      LocalizationMode mode);

/// Distinct rationals a/b in (1, 2) for Λ_1..Λ_N, drawn from a seeded
/// generator with an explicit (platform-independent) reduction.
std::map<VarTag, Rational> random_equivariant_values(const FlagShape& shape, std::uint64_t seed);
/// Λ_r -> 1.
std::map<VarTag, Rational> unit_equivariant_values(const FlagShape& shape);

/// Rewrites a W-invariant polynomial in e_ℓ(P^i) as one in ∧^ℓS_i and maps
/// Q^i_j -> Q_i. Throws DomainError on non-invariant input.
MultiPoly phi_map(const FlagShape& shape, const MultiPoly& sym);

}  // namespace qkflag
