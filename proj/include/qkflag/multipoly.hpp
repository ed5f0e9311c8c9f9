#pragma once

#include <complex>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qkflag/errors.hpp"
#include "qkflag/rational.hpp"
#include "qkflag/var_tag.hpp"

namespace qkflag {

/// A monomial: variables with nonzero exponents, sorted by tag.
class Monomial {
 public:
  using Factor = std::pair<VarTag, int>;

  Monomial() = default;
  /// Throws DomainError for a negative exponent on a non-Laurent variable.
  explicit Monomial(std::vector<Factor> factors);
  static Monomial of(VarTag v, int e = 1);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  bool is_one() const noexcept { return factors_.empty(); }
  int exponent(VarTag v) const noexcept;
  int total_degree() const noexcept;
  int novikov_degree() const noexcept;

  Monomial operator*(const Monomial& other) const;
  Monomial inverse() const;  // Laurent variables only
  Monomial without(VarTag v) const;

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;

  std::string to_string() const;

 private:
  std::vector<Factor> factors_;
};

/// Caps the total Novikov degree of every monomial.
struct TruncationPolicy {
  int novikov_total_degree_cap = 3;
};

/// Sparse exact-rational Laurent polynomial over tagged variables.
class MultiPoly {
 public:
  using Terms = std::map<Monomial, Rational>;

  MultiPoly() = default;
  MultiPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  MultiPoly(long c) : MultiPoly(Rational(c)) {}  // NOLINT
  MultiPoly(int c) : MultiPoly(Rational(c)) {}   // NOLINT
  MultiPoly(const Monomial& m, const Rational& c = 1);
  static MultiPoly variable(VarTag v, int e = 1);

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  Rational constant_term() const;
  std::size_t size() const noexcept { return terms_.size(); }

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& c);
  MultiPoly operator-() const;

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
  friend MultiPoly operator*(long c, MultiPoly a) { return a *= Rational(c); }
  friend MultiPoly operator*(MultiPoly a, long c) { return a *= Rational(c); }
  friend MultiPoly operator*(int c, MultiPoly a) { return a *= Rational(c); }
  friend MultiPoly operator*(MultiPoly a, int c) { return a *= Rational(c); }
  bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }

  /// Adds c·m in place.
  void add_term(const Monomial& m, const Rational& c);

  /// Largest / smallest exponent of v over all terms (0 for the zero poly).
  int max_degree(VarTag v) const;
  int min_degree(VarTag v) const;
  /// Coefficient of v^e, as a polynomial free of v.
  MultiPoly coefficient(VarTag v, int e) const;
  bool contains(VarTag v) const;
  std::vector<VarTag> variables() const;

  /// Substitutes polynomials for variables. A variable with a negative
  /// exponent must map to a monomial (times a nonzero scalar).
  MultiPoly substitute(const std::map<VarTag, MultiPoly>& values) const;
  /// Renames variables (monomial substitution with exponent 1).
  MultiPoly rename(const std::function<VarTag(VarTag)>& f) const;
  MultiPoly derivative(VarTag v) const;

  /// Divides by the monomial content over variables accepted by `pred`
  /// (the per-variable minimum exponent), making those exponents ≥ 0 with
  /// no common factor.
  MultiPoly clear_monomial_content(const std::function<bool(VarTag)>& pred) const;
  /// The monomial the previous call divides by.
  Monomial monomial_content(const std::function<bool(VarTag)>& pred) const;

  template <class T>
  T evaluate(const std::map<VarTag, T>& values) const;

  std::string to_string() const;

 private:
  Terms terms_;
};

MultiPoly pow(const MultiPoly& base, int e);
MultiPoly pow(const MultiPoly& base, int e, const TruncationPolicy& trunc);
MultiPoly truncate(const MultiPoly& p, const TruncationPolicy& trunc);
MultiPoly mul(const MultiPoly& a, const MultiPoly& b, const TruncationPolicy& trunc);

/// λ(i,j,k) as a polynomial; for j > k this is λ(i,k,j)⁻¹.
MultiPoly root_param(int level, int j, int k);

/// Converts exact coefficients into a numeric type; specialize for types
/// that need more than double precision.
template <class T>
struct RationalCast {
  static T apply(const Rational& c) { return T(c.get_d()); }
};

template <class T>
T MultiPoly::evaluate(const std::map<VarTag, T>& values) const {
  T total{};
  for (const auto& [m, c] : terms_) {
    T term = RationalCast<T>::apply(c);
    for (const auto& [v, e] : m.factors()) {
      auto it = values.find(v);
      if (it == values.end()) throw DomainError("evaluate: no value for " + v.name());
      T base = it->second;
      if (e < 0) base = T(1) / base;
      for (int k = 0; k < std::abs(e); ++k) term *= base;
    }
    total += term;
  }
  return total;
}

/// Exact evaluation into the rationals.
Rational evaluate_exact(const MultiPoly& p, const std::map<VarTag, Rational>& values);

}  // namespace qkflag
