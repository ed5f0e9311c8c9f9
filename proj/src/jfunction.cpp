#include "qkflag/jfunction.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "qkflag/errors.hpp"

namespace qkflag {

namespace {

Monomial mono_pow(const Monomial& m, int e) {
  std::vector<Monomial::Factor> fs;
  for (const auto& [v, x] : m.factors()) fs.emplace_back(v, x * e);
  return Monomial(std::move(fs));
}

Monomial ratio(VarTag num, VarTag den) {
  return Monomial({{num, 1}, {den, -1}});
}

Monomial root_mono(int level, int j, int k) {
  return root_param(level, j, k).terms().begin()->first;
}

/// P^i_j with level n+1 read as Λ_j.
VarTag root_var(const FlagShape& shape, int i, int j) {
  return i == shape.n() + 1 ? var::Lambda(j) : var::P(i, j);
}

long binom2(long a) { return a <= 1 ? 0 : a * (a - 1) / 2; }

/// Multiplies `prod` by the modified product ∏~_{l=1}^{top} (1 − c q^l)^sign.
void modified_product(QFactorProduct& prod, const Monomial& c, int top, int sign) {
  if (top > 0)
    for (int l = 1; l <= top; ++l) prod.multiply_factor(c, l, sign);
  else
    for (int l = top + 1; l <= 0; ++l) prod.multiply_factor(c, l, -sign);
}

std::map<VarTag, Monomial> restriction_values(const FlagShape& shape, const FixedPoint& fp) {
  std::map<VarTag, Monomial> out;
  for (const auto& [v, p] : localization_substitution(shape, fp, LocalizationMode::Classical)) {
    if (p.size() != 1 || p.terms().begin()->second != 1)
      throw InternalError("fixed-point value of " + v.name() + " is not a monomial");
    out[v] = p.terms().begin()->first;
  }
  return out;
}

std::map<VarTag, Monomial> lambda_to_one(const QFactorProduct& p) {
  std::map<VarTag, Monomial> out;
  auto collect = [&](const Monomial& m) {
    for (const auto& [v, e] : m.factors())
      if (v.kind == VarKind::RootParam) out[v] = Monomial();
  };
  collect(p.prefactor());
  for (const auto& [key, m] : p.factors()) collect(key.first);
  return out;
}

}  // namespace

// ------------------------------------------------------------ DegreeVector

DegreeVector DegreeVector::zero(const FlagShape& shape) {
  DegreeVector d;
  for (int i = 1; i <= shape.n(); ++i) d.d.emplace_back(static_cast<std::size_t>(shape.v(i)), 0);
  return d;
}

std::vector<DegreeVector> DegreeVector::enumerate(const FlagShape& shape, int max_total) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 1; i <= shape.n(); ++i)
    for (int j = 1; j <= shape.v(i); ++j) slots.emplace_back(i, j);
  std::vector<DegreeVector> out;
  DegreeVector cur = zero(shape);
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
    if (k == slots.size()) {
      out.push_back(cur);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      cur.d[static_cast<std::size_t>(slots[k].first - 1)][static_cast<std::size_t>(slots[k].second - 1)] = x;
      rec(k + 1, left - x);
    }
    cur.d[static_cast<std::size_t>(slots[k].first - 1)][static_cast<std::size_t>(slots[k].second - 1)] = 0;
  };
  rec(0, max_total);
  std::stable_sort(out.begin(), out.end(),
                   [](const DegreeVector& a, const DegreeVector& b) { return a.total() < b.total(); });
  return out;
}

int DegreeVector::at(int i, int j) const {
  if (i < 1 || i > static_cast<int>(d.size())) return 0;
  return d[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
}

int DegreeVector::total() const {
  int t = 0;
  for (const auto& row : d)
    for (int x : row) t += x;
  return t;
}

int DegreeVector::level_sum(int i) const {
  if (i < 1 || i > static_cast<int>(d.size())) return 0;
  int t = 0;
  for (int x : d[static_cast<std::size_t>(i - 1)]) t += x;
  return t;
}

std::string DegreeVector::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) os << '|';
    for (std::size_t j = 0; j < d[i].size(); ++j) os << (j ? "," : "") << d[i][j];
  }
  return os.str();
}

// ---------------------------------------------------------- QFactorProduct

void QFactorProduct::multiply_factor(const Monomial& c, int l, int mult) {
  if (mult == 0) return;
  if (c.is_one() && l == 0) {
    if (mult < 0) throw DomainError("division by the zero factor (1 - q^0)");
    zero_ = true;
    return;
  }
  Monomial key_c = c;
  int key_l = l;
  const bool flip = l < 0 || (l == 0 && c.factors().front().second < 0);
  if (flip) {
    // 1 − c q^l = −c q^l (1 − c⁻¹ q^{−l})
    if (mult % 2 != 0) coef_ = -coef_;
    prefactor_ = prefactor_ * mono_pow(c, mult);
    q_power_ += l * mult;
    key_c = c.inverse();
    key_l = -l;
  }
  auto [it, inserted] = factors_.try_emplace(Key{key_c, key_l}, 0);
  it->second += mult;
  if (it->second == 0) factors_.erase(it);
}

void QFactorProduct::multiply(const QFactorProduct& o) {
  coef_ *= o.coef_;
  prefactor_ = prefactor_ * o.prefactor_;
  q_power_ += o.q_power_;
  zero_ = zero_ || o.zero_;
  for (const auto& [key, m] : o.factors_) multiply_factor(key.first, key.second, m);
}

QFactorProduct QFactorProduct::inverse() const {
  if (zero_) throw DomainError("inverse of a zero product");
  QFactorProduct out;
  out.coef_ = 1 / coef_;
  out.prefactor_ = prefactor_.inverse();
  out.q_power_ = -q_power_;
  for (const auto& [key, m] : factors_) out.factors_[key] = -m;
  return out;
}

QFactorProduct QFactorProduct::substitute(const std::map<VarTag, Monomial>& values) const {
  auto apply = [&](const Monomial& m) {
    Monomial r;
    for (const auto& [v, e] : m.factors()) {
      auto it = values.find(v);
      r = r * (it == values.end() ? Monomial::of(v, e) : mono_pow(it->second, e));
    }
    return r;
  };
  QFactorProduct out;
  out.coef_ = coef_;
  out.prefactor_ = apply(prefactor_);
  out.q_power_ = q_power_;
  out.zero_ = zero_;
  // Numerators first so a vanishing factor is seen before its inverse.
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& [key, m] : factors_)
      if ((pass == 0) == (m > 0)) out.multiply_factor(apply(key.first), key.second, m);
  return out;
}

bool QFactorProduct::operator==(const QFactorProduct& o) const {
  if (zero_ || o.zero_) return zero_ == o.zero_;
  return coef_ == o.coef_ && prefactor_ == o.prefactor_ && q_power_ == o.q_power_ && factors_ == o.factors_;
}

Rational QFactorProduct::evaluate(const std::map<VarTag, Rational>& values) const {
  if (zero_) return 0;
  auto mono = [&](const Monomial& m) { return evaluate_exact(MultiPoly(m), values); };
  Rational q = 1;
  if (auto it = values.find(var::q()); it != values.end()) q = it->second;
  else if (q_power_ != 0 || !factors_.empty()) throw DomainError("evaluate: no value for q");
  auto qpow = [&](int e) {
    Rational r = 1;
    for (int k = 0; k < std::abs(e); ++k) r *= q;
    return e < 0 ? 1 / r : r;
  };
  Rational out = coef_ * mono(prefactor_) * qpow(q_power_);
  for (const auto& [key, m] : factors_) {
    const Rational f = 1 - mono(key.first) * qpow(key.second);
    if (f == 0 && m < 0) throw DomainError("evaluate: pole at the given point");
    for (int k = 0; k < std::abs(m); ++k) {
      if (m > 0) out *= f;
      else out /= f;
    }
  }
  return out;
}

std::string QFactorProduct::to_string() const {
  if (zero_) return "0";
  std::ostringstream os;
  os << qkflag::to_string(coef_);
  if (!prefactor_.is_one()) os << "*" << prefactor_.to_string();
  if (q_power_ != 0) os << "*q^" << q_power_;
  for (const auto& [key, m] : factors_) {
    os << "*(1 - ";
    if (!key.first.is_one()) os << key.first.to_string();
    if (key.second != 0) os << (key.first.is_one() ? "" : "*") << "q^" << key.second;
    if (key.first.is_one() && key.second == 0) os << "1";
    os << ")^" << m;
  }
  return os.str();
}

nlohmann::json QFactorProduct::to_json() const {
  nlohmann::json f = nlohmann::json::array();
  for (const auto& [key, m] : factors_) f.push_back({{"c", key.first.to_string()}, {"l", key.second}, {"mult", m}});
  return {{"zero", zero_},
          {"coefficient", qkflag::to_string(coef_)},
          {"prefactor", prefactor_.to_string()},
          {"q_power", q_power_},
          {"factors", f}};
}

// -------------------------------------------------------------- operations

QFactorProduct build_jd(const FlagShape& shape, const DegreeVector& d, const std::optional<FixedPoint>& restriction) {
  if (static_cast<int>(d.d.size()) != shape.n()) throw DomainError("degree vector does not match the shape");
  for (int i = 1; i <= shape.n(); ++i)
    if (static_cast<int>(d.d[static_cast<std::size_t>(i - 1)].size()) != shape.v(i))
      throw DomainError("degree vector does not match the shape");
  QFactorProduct prod;
  for (int i = 1; i <= shape.n(); ++i) {
    for (int s = 1; s <= shape.v(i); ++s)
      for (int r = 1; r <= shape.v(i); ++r) {
        if (r == s) continue;
        const Monomial c = root_mono(i, s, r) * ratio(var::P(i, s), var::P(i, r));
        modified_product(prod, c, d.at(i, s) - d.at(i, r), +1);
      }
    for (int s = 1; s <= shape.v(i); ++s)
      for (int r = 1; r <= shape.v(i + 1); ++r)
        modified_product(prod, ratio(var::P(i, s), root_var(shape, i + 1, r)), d.at(i, s) - d.at(i + 1, r), -1);
  }
  if (restriction) prod = prod.substitute(restriction_values(shape, *restriction));
  return prod;
}

int q_degree(const QFactorProduct& term) {
  if (term.is_zero()) return kMinusInfinity;
  int deg = term.q_power();
  for (const auto& [key, m] : term.factors()) {
    if (m == 0) throw InternalError("uncancelled factor pair in a product");
    deg += key.second * m;
  }
  return deg;
}

int degree_formula(const FlagShape& shape, const DegreeVector& d) {
  long total = 0;
  for (int i = 1; i <= shape.n(); ++i) {
    for (int j = 1; j <= shape.v(i); ++j)
      for (int k = 1; k <= shape.v(i); ++k) total += binom2(d.at(i, j) - d.at(i, k) + 1);
    for (int s = 1; s <= shape.v(i); ++s)
      for (int r = 1; r <= shape.v(i + 1); ++r) total -= binom2(d.at(i, s) - d.at(i + 1, r) + 1);
  }
  return static_cast<int>(total);
}

PoleCensus pole_audit(const FlagShape& shape, const DegreeVector& d) {
  PoleCensus census;
  QFactorProduct term = build_jd(shape, d, distinguished_point(shape));
  term = term.substitute(lambda_to_one(term));
  if (term.is_zero()) return census;
  if (term.q_power() < 0) census.violations.push_back("pole at q = 0 of order " + std::to_string(-term.q_power()));
  for (const auto& [key, m] : term.factors()) {
    if (m > 0) continue;
    const auto& [c, l] = key;
    if (l == 0) {
      ++census.constant_factors;
      continue;
    }
    bool unit = true;
    for (const auto& [v, e] : c.factors()) unit = unit && v.kind == VarKind::EquivParam;
    if (unit)
      census.poles_at_roots_of_unity += -m;
    else
      census.violations.push_back("pole away from roots of unity: (1 - " + c.to_string() + "*q^" +
                                  std::to_string(l) + ")");
  }
  census.vanishes_at_infinity = d.is_zero() || q_degree(build_jd(shape, d)) + 1 <= -1;
  return census;
}

DegreeReport verify_bounds(const FlagShape& shape, const DegreeVector& d) {
  if (d.is_zero()) throw DomainError("verify_bounds needs a nonzero degree");
  DegreeReport rep;
  rep.d = d;
  rep.q_degree = q_degree(build_jd(shape, d));
  rep.restricted_degree = q_degree(build_jd(shape, d, distinguished_point(shape)));
  rep.formula = degree_formula(shape, d);
  rep.formula_matches = rep.q_degree == rep.formula &&
                        (rep.restricted_degree == kMinusInfinity || rep.restricted_degree == rep.formula);
  const int deg = rep.q_degree;
  for (int i = 1; i <= shape.n(); ++i) {
    const int bound = -d.level_sum(i);
    rep.bounds.push_back({"sum", i, 0, 0, bound, deg < bound});
  }
  for (int i = 1; i <= shape.n(); ++i) {
    std::vector<int> next;
    if (i < shape.n())
      for (int k = 1; k <= shape.v(i + 1); ++k) next.push_back(d.at(i + 1, k));
    else
      next.assign(static_cast<std::size_t>(shape.N()), 0);
    std::sort(next.rbegin(), next.rend());
    int top = 0;
    for (int l = 0; l <= shape.v(i + 1) - shape.v(i); ++l) {
      if (l > 0) top += next[static_cast<std::size_t>(l - 1)];
      for (int j = 1; j <= shape.v(i); ++j) {
        const int bound = -top + (shape.v(i) - shape.v(i + 1) + l) * d.at(i, j);
        rep.bounds.push_back({"top-l", i, l, j, bound, deg < bound});
      }
    }
  }
  for (int i = 1; i <= shape.n(); ++i) {
    int mx = 0;
    for (int j = 1; j <= shape.v(i); ++j) mx = std::max(mx, d.at(i, j));
    rep.gates.emplace_back("P" + std::to_string(i) + "-linear", deg < -d.level_sum(i));
    rep.gates.emplace_back("e-h level " + std::to_string(i), deg < -(shape.v(i + 1) - shape.v(i)) * mx);
  }
  rep.poles = pole_audit(shape, d);
  return rep;
}

bool DegreeReport::passed() const {
  if (!formula_matches || !poles.clean()) return false;
  return std::all_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.passed; });
}

nlohmann::json DegreeReport::to_json() const {
  nlohmann::json b = nlohmann::json::array();
  for (const auto& c : bounds)
    b.push_back({{"family", c.family}, {"i", c.i}, {"l", c.l}, {"j", c.j}, {"bound", c.bound}, {"passed", c.passed}});
  nlohmann::json g = nlohmann::json::object();
  for (const auto& [name, ok] : gates) g[name] = ok;
  nlohmann::json restricted = restricted_degree == kMinusInfinity ? nlohmann::json("-inf") : nlohmann::json(restricted_degree);
  return {{"d", d.to_string()},
          {"q_degree", q_degree},
          {"restricted_degree", restricted},
          {"formula", formula},
          {"formula_matches", formula_matches},
          {"bounds", b},
          {"gates", g},
          {"poles",
           {{"roots_of_unity", poles.poles_at_roots_of_unity},
            {"constant_factors", poles.constant_factors},
            {"violations", poles.violations},
            {"vanishes_at_infinity", poles.vanishes_at_infinity}}},
          {"passed", passed()}};
}

ResidualReport qde_residual(const FlagShape& shape, int i, int j, int cap) {
  if (i < 1 || i > shape.n() || j < 1 || j > shape.v(i)) throw DomainError("no Bethe index (i, j) in this shape");
  if (cap < 0) throw DomainError("negative truncation cap");
  auto L = [&](const DegreeVector& d) {
    QFactorProduct p;
    for (int k = 1; k <= shape.v(i); ++k)
      if (k != j) p.multiply_factor(root_mono(i, k, j) * ratio(var::P(i, k), var::P(i, j)), 1 + d.at(i, k) - d.at(i, j));
    for (int b = 1; b <= shape.v(i + 1); ++b)
      p.multiply_factor(ratio(var::P(i, j), root_var(shape, i + 1, b)), d.at(i, j) - d.at(i + 1, b));
    return p;
  };
  auto R = [&](const DegreeVector& d) {
    QFactorProduct p;
    for (int a = 1; a <= shape.v(i - 1); ++a)
      p.multiply_factor(ratio(var::P(i - 1, a), var::P(i, j)), d.at(i - 1, a) - d.at(i, j));
    for (int k = 1; k <= shape.v(i); ++k)
      if (k != j) p.multiply_factor(root_mono(i, j, k) * ratio(var::P(i, j), var::P(i, k)), 1 + d.at(i, j) - d.at(i, k));
    return p;
  };
  QFactorProduct zero;
  zero.multiply_factor(Monomial(), 0, 1);

  std::map<DegreeVector, QFactorProduct> jd;
  auto J = [&](const DegreeVector& d) -> const QFactorProduct& {
    auto it = jd.find(d);
    if (it == jd.end()) it = jd.emplace(d, build_jd(shape, d)).first;
    return it->second;
  };

  std::vector<std::map<VarTag, Monomial>> points;
  for (const auto& fp : enumerate_fixed_points(shape)) points.push_back(restriction_values(shape, fp));

  ResidualReport rep;
  rep.i = i;
  rep.j = j;
  rep.cap = cap;
  rep.vanishes_below_cap = true;
  rep.boundary_only = true;
  for (const auto& d : DegreeVector::enumerate(shape, cap + 1)) {
    ResidualEntry e;
    e.d = d;
    e.lhs = zero;
    e.rhs = zero;
    if (d.total() <= cap) {
      e.lhs = J(d);
      e.lhs.multiply(L(d));
    }
    if (d.at(i, j) > 0) {
      DegreeVector prev = d;
      --prev.d[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
      e.rhs = J(prev);
      e.rhs.multiply(R(prev));
    }
    e.zero = e.lhs == e.rhs;
    if (!e.zero) {
      // Multiples of a classical relation vanish at every fixed point.
      e.zero = std::all_of(points.begin(), points.end(), [&](const auto& vals) {
        return e.lhs.substitute(vals) == e.rhs.substitute(vals);
      });
      if (e.zero) ++rep.classical_count;
    }
    if (!e.zero) {
      ++rep.nonzero_count;
      if (d.total() <= cap - 1) rep.vanishes_below_cap = false;
      if (d.total() != cap + 1) rep.boundary_only = false;
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

nlohmann::json ResidualReport::to_json() const {
  nlohmann::json nz = nlohmann::json::array();
  for (const auto& e : entries)
    if (!e.zero) nz.push_back(e.d.to_string());
  return {{"i", i},
          {"j", j},
          {"cap", cap},
          {"coefficients", entries.size()},
          {"nonzero", nz},
          {"classical", classical_count},
          {"vanishes_below_cap", vanishes_below_cap},
          {"boundary_only", boundary_only}};
}

}  // namespace qkflag
