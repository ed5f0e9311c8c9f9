#pragma once

#include <complex>
#include <vector>

#include <boost/multiprecision/cpp_complex.hpp>

#include "qkflag/rational.hpp"

namespace qkflag {

using Complex = std::complex<double>;
using QuadFloat = boost::multiprecision::cpp_bin_float_quad;
using QuadComplex = boost::multiprecision::cpp_complex_quad;

QuadFloat to_quad(const Rational& r);

/// Dense exact matrix, row-major.
using RationalMatrix = std::vector<std::vector<Rational>>;

/// Univariate polynomial, coefficients from degree 0 upward, no trailing
/// zeros (the zero polynomial is empty).
using RationalUPoly = std::vector<Rational>;

void trim(RationalUPoly& p);
RationalUPoly derivative(const RationalUPoly& p);
/// Quotient and remainder; throws DomainError on division by zero.
std::pair<RationalUPoly, RationalUPoly> divmod(const RationalUPoly& a, const RationalUPoly& b);
/// Monic gcd.
RationalUPoly gcd(const RationalUPoly& a, const RationalUPoly& b);

/// det(t·I − A), exact, through a similarity transform to Hessenberg form.
RationalUPoly characteristic_polynomial(const RationalMatrix& a);

/// Squarefree factors f_1, f_2, ... with p = c ∏ f_m^m.
std::vector<RationalUPoly> squarefree_decomposition(const RationalUPoly& p);

/// All complex roots, repeated by multiplicity. Each squarefree factor is
/// solved through its companion matrix and polished by Newton in quad
/// precision.
std::vector<Complex> polynomial_roots(const RationalUPoly& p);

struct MatchReport {
  double max_relative_distance = 0;
  /// pairs[k] = (index in a, index in b)
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// |a − b| / max(|a|, |b|), and 0 when both vanish.
double relative_distance(Complex a, Complex b);

/// Global greedy matching of two equal-size multisets (closest pair first).
/// Throws StructuralError on a size mismatch.
MatchReport match_multisets(const std::vector<Complex>& a, const std::vector<Complex>& b);

}  // namespace qkflag
