#include "qkflag/numeric.hpp"

#include <algorithm>
#include <tuple>

#include <Eigen/Dense>

#include "qkflag/errors.hpp"

namespace qkflag {

QuadFloat to_quad(const Rational& r) {
  return QuadFloat(r.get_num().get_str()) / QuadFloat(r.get_den().get_str());
}

void trim(RationalUPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RationalUPoly derivative(const RationalUPoly& p) {
  RationalUPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
  trim(d);
  return d;
}

std::pair<RationalUPoly, RationalUPoly> divmod(const RationalUPoly& a, const RationalUPoly& b) {
  if (b.empty()) throw DomainError("polynomial division by zero");
  RationalUPoly r = a;
  trim(r);
  if (r.size() < b.size()) return {{}, r};
  RationalUPoly q(r.size() - b.size() + 1);
  for (std::size_t k = q.size(); k-- > 0;) {
    const Rational c = r[k + b.size() - 1] / b.back();
    q[k] = c;
    if (c == 0) continue;
    for (std::size_t m = 0; m < b.size(); ++m) r[k + m] -= c * b[m];
  }
  trim(q);
  trim(r);
  return {q, r};
}

RationalUPoly gcd(const RationalUPoly& a, const RationalUPoly& b) {
  RationalUPoly x = a, y = b;
  trim(x);
  trim(y);
  while (!y.empty()) {
    auto r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  if (!x.empty()) {
    const Rational lead = x.back();
    for (auto& c : x) c /= lead;
  }
  return x;
}

RationalUPoly characteristic_polynomial(const RationalMatrix& a) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw DomainError("characteristic_polynomial: matrix is not square");
  RationalMatrix h = a;
  // Similarity reduction to upper Hessenberg form.
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t piv = j + 1;
    while (piv < n && h[piv][j] == 0) ++piv;
    if (piv == n) continue;
    if (piv != j + 1) {
      std::swap(h[piv], h[j + 1]);
      for (auto& row : h) std::swap(row[piv], row[j + 1]);
    }
    for (std::size_t r = j + 2; r < n; ++r) {
      if (h[r][j] == 0) continue;
      const Rational f = h[r][j] / h[j + 1][j];
      for (std::size_t c = 0; c < n; ++c) h[r][c] -= f * h[j + 1][c];
      for (std::size_t c = 0; c < n; ++c) h[c][j + 1] += f * h[c][r];
    }
  }
  // p_m = (t − h_mm) p_{m−1} − Σ_{i<m} h_im ∏_{k=i+1}^{m} h_{k,k−1} p_{i−1}.
  std::vector<RationalUPoly> p(n + 1);
  p[0] = {Rational(1)};
  for (std::size_t m = 1; m <= n; ++m) {
    RationalUPoly next(m + 1);
    for (std::size_t k = 0; k < p[m - 1].size(); ++k) {
      next[k + 1] += p[m - 1][k];
      next[k] -= h[m - 1][m - 1] * p[m - 1][k];
    }
    Rational sub = 1;
    for (std::size_t i = m - 1; i-- > 0;) {
      sub *= h[i + 1][i];
      if (sub == 0) break;
      const Rational c = h[i][m - 1] * sub;
      for (std::size_t k = 0; k < p[i].size(); ++k) next[k] -= c * p[i][k];
    }
    trim(next);
    p[m] = std::move(next);
  }
  return p[n];
}

std::vector<RationalUPoly> squarefree_decomposition(const RationalUPoly& p) {
  // Yun's algorithm.
  std::vector<RationalUPoly> out;
  RationalUPoly f = p;
  trim(f);
  if (f.size() <= 1) return out;
  RationalUPoly a = gcd(f, derivative(f));
  RationalUPoly b = divmod(f, a).first;
  RationalUPoly c = divmod(derivative(f), a).first;
  RationalUPoly d = c;
  {
    RationalUPoly db = derivative(b);
    d.resize(std::max(c.size(), db.size()));
    for (std::size_t k = 0; k < db.size(); ++k) d[k] -= db[k];
    trim(d);
  }
  while (b.size() > 1) {
    RationalUPoly g = gcd(b, d);
    out.push_back(g);
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    RationalUPoly db = derivative(b);
    d = c;
    d.resize(std::max(c.size(), db.size()));
    for (std::size_t k = 0; k < db.size(); ++k) d[k] -= db[k];
    trim(d);
  }
  return out;
}

namespace {

std::vector<Complex> simple_roots(const RationalUPoly& f) {
  const std::size_t deg = f.size() - 1;
  std::vector<Complex> roots;
  if (deg == 0) return roots;
  if (deg == 1) {
    const Rational root = -f[0] / f[1];
    roots.emplace_back(root.get_d(), 0.0);
  } else {
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    const double lead = f.back().get_d();
    for (std::size_t r = 1; r < deg; ++r) comp(r, r - 1) = 1.0;
    for (std::size_t r = 0; r < deg; ++r) comp(r, deg - 1) = -f[r].get_d() / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) roots.push_back(es.eigenvalues()[k]);
  }
  std::vector<QuadFloat> qc;
  for (const auto& c : f) qc.push_back(to_quad(c));
  for (auto& z : roots) {
    QuadComplex x(z.real(), z.imag());
    for (int it = 0; it < 8; ++it) {
      QuadComplex val(0), der(0);
      for (std::size_t k = qc.size(); k-- > 0;) {
        der = der * x + val;
        val = val * x + qc[k];
      }
      if (abs(der) == 0) break;
      const QuadComplex step = val / der;
      x -= step;
      if (abs(step) <= abs(x) * QuadFloat(1e-30)) break;
    }
    z = Complex(static_cast<double>(x.real()), static_cast<double>(x.imag()));
  }
  return roots;
}

}  // namespace

std::vector<Complex> polynomial_roots(const RationalUPoly& p) {
  std::vector<Complex> out;
  const auto factors = squarefree_decomposition(p);
  for (std::size_t m = 0; m < factors.size(); ++m)
    for (const auto& z : simple_roots(factors[m]))
      for (std::size_t rep = 0; rep <= m; ++rep) out.push_back(z);
  return out;
}

double relative_distance(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0) return 0;
  return std::abs(a - b) / scale;
}

MatchReport match_multisets(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size())
    throw StructuralError("spectrum sizes differ: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  std::vector<std::tuple<double, std::size_t, std::size_t>> cand;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) cand.emplace_back(relative_distance(a[i], b[j]), i, j);
  std::sort(cand.begin(), cand.end());
  std::vector<bool> used_a(a.size()), used_b(b.size());
  MatchReport rep;
  for (const auto& [d, i, j] : cand) {
    if (used_a[i] || used_b[j]) continue;
    used_a[i] = used_b[j] = true;
    rep.pairs.emplace_back(i, j);
    rep.max_relative_distance = std::max(rep.max_relative_distance, d);
  }
  std::sort(rep.pairs.begin(), rep.pairs.end());
  return rep;
}

}  // namespace qkflag
