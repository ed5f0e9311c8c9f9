#include "qkflag/symmetric.hpp"

#include <algorithm>

namespace qkflag {

MultiPoly elementary_symmetric(const std::vector<MultiPoly>& roots, int k) {
  const int n = static_cast<int>(roots.size());
  if (k < 0 || k > n) return MultiPoly();
  // Row-by-row expansion of ∏(1 + x_i z), keeping coefficients up to z^k.
  std::vector<MultiPoly> coeff(k + 1);
  coeff[0] = MultiPoly(1);
  for (const auto& x : roots)
    for (int d = k; d >= 1; --d) coeff[d] += coeff[d - 1] * x;
  return coeff[k];
}

MultiPoly elementary_symmetric(const std::vector<VarTag>& vars, int k) {
  std::vector<MultiPoly> roots;
  roots.reserve(vars.size());
  for (auto v : vars) roots.push_back(MultiPoly::variable(v));
  return elementary_symmetric(roots, k);
}

MultiPoly complete_homogeneous(const std::vector<VarTag>& vars, int k) {
  if (k < 0) return MultiPoly();
  std::vector<MultiPoly> coeff(k + 1);
  coeff[0] = MultiPoly(1);
  // Multiply by 1/(1 - x z) = Σ x^m z^m, truncated at z^k.
  for (auto v : vars) {
    const MultiPoly x = MultiPoly::variable(v);
    for (int d = 1; d <= k; ++d) coeff[d] += coeff[d - 1] * x;
  }
  return coeff[k];
}

MultiPoly complete_from_elementary(const std::vector<MultiPoly>& elementary, int m) {
  if (m < 0) return MultiPoly();
  std::vector<MultiPoly> h(m + 1);
  h[0] = MultiPoly(1);
  const int v = static_cast<int>(elementary.size());
  for (int d = 1; d <= m; ++d) {
    for (int j = 1; j <= std::min(d, v); ++j) {
      const MultiPoly term = elementary[j - 1] * h[d - j];
      if (j % 2 == 1) h[d] += term;
      else h[d] -= term;
    }
  }
  return h[m];
}

MultiPoly symmetric_decompose(const MultiPoly& p, const std::vector<VarTag>& vars,
                              const std::vector<VarTag>& generators) {
  if (generators.size() != vars.size())
    throw DomainError("symmetric_decompose: need one generator per variable");
  const std::size_t n = vars.size();
  auto exps_of = [&](const Monomial& m) {
    std::vector<int> e(n);
    for (std::size_t a = 0; a < n; ++a) e[a] = m.exponent(vars[a]);
    return e;
  };
  auto rest_of = [&](const Monomial& m) {
    Monomial r = m;
    for (auto v : vars) r = r.without(v);
    return r;
  };

  MultiPoly work = p;
  MultiPoly result;
  std::size_t guard = 0;
  while (!work.is_zero()) {
    if (++guard > 1000000) throw ResourceError("symmetric_decompose: too many steps");
    // Lex-leading exponent vector in `vars`, then any term carrying it.
    const Monomial* lead = nullptr;
    std::vector<int> lead_e;
    for (const auto& [m, c] : work.terms()) {
      auto e = exps_of(m);
      if (!lead || e > lead_e) {
        lead = &m;
        lead_e = std::move(e);
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      if (lead_e[a] < 0) throw DomainError("symmetric_decompose: negative exponent");
      if (a + 1 < n && lead_e[a] < lead_e[a + 1])
        throw DomainError("symmetric_decompose: input is not symmetric");
    }
    const Monomial rest = rest_of(*lead);
    const Rational c = work.terms().at(*lead);
    // c·rest·∏ e_a^{λ_a − λ_{a+1}} has the same lex-leading term.
    MultiPoly in_vars(rest, c);
    MultiPoly in_gens(rest, c);
    for (std::size_t a = 0; a < n; ++a) {
      const int power = lead_e[a] - (a + 1 < n ? lead_e[a + 1] : 0);
      if (power == 0) continue;
      in_vars = in_vars * pow(elementary_symmetric(vars, static_cast<int>(a + 1)), power);
      in_gens = in_gens * MultiPoly::variable(generators[a], power);
    }
    work -= in_vars;
    result += in_gens;
  }
  return result;
}

}  // namespace qkflag
