#include "qkflag/multipoly.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace qkflag {

namespace {

void check_exponent(VarTag v, int e) {
  if (e < 0 && !v.is_laurent())
    throw DomainError("negative exponent on non-Laurent variable " + v.name());
}

}  // namespace

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.first < b.first; });
  for (const auto& [v, e] : factors) {
    if (!factors_.empty() && factors_.back().first == v) {
      factors_.back().second += e;
      if (factors_.back().second == 0) factors_.pop_back();
    } else if (e != 0) {
      factors_.emplace_back(v, e);
    }
  }
  for (const auto& [v, e] : factors_) check_exponent(v, e);
}

Monomial Monomial::of(VarTag v, int e) { return Monomial({{v, e}}); }

int Monomial::exponent(VarTag v) const noexcept {
  for (const auto& [w, e] : factors_)
    if (w == v) return e;
  return 0;
}

int Monomial::total_degree() const noexcept {
  int d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

int Monomial::novikov_degree() const noexcept {
  int d = 0;
  for (const auto& [v, e] : factors_)
    if (v.is_novikov()) d += e;
  return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      out.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      out.factors_.push_back(*b++);
    } else {
      const int e = a->second + b->second;
      if (e != 0) {
        check_exponent(a->first, e);
        out.factors_.emplace_back(a->first, e);
      }
      ++a;
      ++b;
    }
  }
  return out;
}

Monomial Monomial::inverse() const {
  Monomial out;
  for (const auto& [v, e] : factors_) {
    check_exponent(v, -e);
    out.factors_.emplace_back(v, -e);
  }
  return out;
}

Monomial Monomial::without(VarTag v) const {
  Monomial out;
  for (const auto& f : factors_)
    if (f.first != v) out.factors_.push_back(f);
  return out;
}

std::string Monomial::to_string() const {
  if (factors_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, e] : factors_) {
    if (!first) os << '*';
    first = false;
    os << v.name();
    if (e != 1) os << '^' << e;
  }
  return os.str();
}

// --------------------------------------------------------------- MultiPoly

MultiPoly::MultiPoly(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial(), c);
}

MultiPoly::MultiPoly(const Monomial& m, const Rational& c) {
  if (c != 0) terms_.emplace(m, c);
}

MultiPoly MultiPoly::variable(VarTag v, int e) { return MultiPoly(Monomial::of(v, e)); }

bool MultiPoly::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational MultiPoly::constant_term() const {
  auto it = terms_.find(Monomial());
  return it == terms_.end() ? Rational(0) : it->second;
}

void MultiPoly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  return out;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) { return *this = *this * o; }

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coeff] : terms_) coeff *= c;
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

int MultiPoly::max_degree(VarTag v) const {
  if (terms_.empty()) return 0;
  int best = INT_MIN;
  for (const auto& [m, c] : terms_) best = std::max(best, m.exponent(v));
  return best;
}

int MultiPoly::min_degree(VarTag v) const {
  if (terms_.empty()) return 0;
  int best = INT_MAX;
  for (const auto& [m, c] : terms_) best = std::min(best, m.exponent(v));
  return best;
}

MultiPoly MultiPoly::coefficient(VarTag v, int e) const {
  MultiPoly out;
  for (const auto& [m, c] : terms_)
    if (m.exponent(v) == e) out.add_term(m.without(v), c);
  return out;
}

bool MultiPoly::contains(VarTag v) const {
  for (const auto& [m, c] : terms_)
    if (m.exponent(v) != 0) return true;
  return false;
}

std::vector<VarTag> MultiPoly::variables() const {
  std::vector<VarTag> out;
  for (const auto& [m, c] : terms_)
    for (const auto& f : m.factors()) out.push_back(f.first);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MultiPoly MultiPoly::substitute(const std::map<VarTag, MultiPoly>& values) const {
  // Cache powers per variable; most substitutions reuse small powers.
  std::map<std::pair<VarTag, int>, MultiPoly> cache;
  auto power = [&](VarTag v, const MultiPoly& base, int e) -> const MultiPoly& {
    auto key = std::make_pair(v, e);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    MultiPoly val;
    if (e >= 0) {
      val = pow(base, e);
    } else {
      if (base.size() != 1)
        throw DomainError("cannot invert non-monomial substitution for " + v.name());
      const auto& [m, c] = *base.terms().begin();
      MultiPoly inv(m.inverse(), Rational(1) / c);
      val = pow(inv, -e);
    }
    return cache.emplace(key, std::move(val)).first->second;
  };
  MultiPoly out;
  for (const auto& [m, c] : terms_) {
    MultiPoly term(Monomial(), c);
    std::vector<Monomial::Factor> kept;
    for (const auto& [v, e] : m.factors()) {
      auto it = values.find(v);
      if (it == values.end()) {
        kept.emplace_back(v, e);
      } else {
        term = term * power(v, it->second, e);
      }
    }
    if (!kept.empty()) term = term * MultiPoly(Monomial(std::move(kept)));
    out += term;
  }
  return out;
}

MultiPoly MultiPoly::rename(const std::function<VarTag(VarTag)>& f) const {
  MultiPoly out;
  for (const auto& [m, c] : terms_) {
    std::vector<Monomial::Factor> fs;
    for (const auto& [v, e] : m.factors()) fs.emplace_back(f(v), e);
    out.add_term(Monomial(std::move(fs)), c);
  }
  return out;
}

MultiPoly MultiPoly::derivative(VarTag v) const {
  MultiPoly out;
  for (const auto& [m, c] : terms_) {
    const int e = m.exponent(v);
    if (e == 0) continue;
    std::vector<Monomial::Factor> fs;
    for (const auto& f : m.factors()) {
      if (f.first == v) {
        if (e - 1 != 0) fs.emplace_back(v, e - 1);
      } else {
        fs.push_back(f);
      }
    }
    out.add_term(Monomial(std::move(fs)), c * e);
  }
  return out;
}

Monomial MultiPoly::monomial_content(const std::function<bool(VarTag)>& pred) const {
  std::map<VarTag, int> mins;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::map<VarTag, int> here;
    for (const auto& [v, e] : m.factors())
      if (pred(v)) here[v] = e;
    if (first) {
      mins = here;
      first = false;
      continue;
    }
    // Variables absent from this term have exponent 0.
    for (auto& [v, e] : mins) {
      auto it = here.find(v);
      e = std::min(e, it == here.end() ? 0 : it->second);
    }
    for (const auto& [v, e] : here)
      if (!mins.count(v)) mins[v] = std::min(0, e);
  }
  std::vector<Monomial::Factor> fs;
  for (const auto& [v, e] : mins)
    if (e != 0) fs.emplace_back(v, e);
  // Content may carry negative exponents on non-Laurent variables only if
  // the input did, which the constructor already rejects.
  Monomial out;
  if (!fs.empty()) out = Monomial(std::move(fs));
  return out;
}

MultiPoly MultiPoly::clear_monomial_content(const std::function<bool(VarTag)>& pred) const {
  const Monomial content = monomial_content(pred);
  if (content.is_one()) return *this;
  // Dividing by a monomial with positive exponents on non-Laurent variables
  // is valid here because every term is divisible by it.
  MultiPoly out;
  for (const auto& [m, c] : terms_) {
    std::vector<Monomial::Factor> fs = m.factors();
    for (const auto& [v, e] : content.factors()) fs.emplace_back(v, -e);
    out.add_term(Monomial(std::move(fs)), c);
  }
  return out;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest-degree terms first reads better.
  std::vector<std::pair<Monomial, Rational>> ts(terms_.begin(), terms_.end());
  std::stable_sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
    return a.first.total_degree() > b.first.total_degree();
  });
  for (const auto& [m, c] : ts) {
    Rational mag = abs(c);
    const bool neg = c < 0;
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    if (m.is_one()) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << '*';
      os << m.to_string();
    }
  }
  return os.str();
}

// ------------------------------------------------------------ free helpers

MultiPoly pow(const MultiPoly& base, int e) {
  if (e < 0) throw DomainError("pow: negative exponent");
  MultiPoly result(1);
  MultiPoly b = base;
  while (e > 0) {
    if (e & 1) result = result * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return result;
}

MultiPoly pow(const MultiPoly& base, int e, const TruncationPolicy& trunc) {
  if (e < 0) throw DomainError("pow: negative exponent");
  MultiPoly result(1);
  MultiPoly b = truncate(base, trunc);
  while (e > 0) {
    if (e & 1) result = mul(result, b, trunc);
    e >>= 1;
    if (e) b = mul(b, b, trunc);
  }
  return result;
}

MultiPoly truncate(const MultiPoly& p, const TruncationPolicy& trunc) {
  MultiPoly out;
  for (const auto& [m, c] : p.terms())
    if (m.novikov_degree() <= trunc.novikov_total_degree_cap) out.add_term(m, c);
  return out;
}

MultiPoly mul(const MultiPoly& a, const MultiPoly& b, const TruncationPolicy& trunc) {
  MultiPoly out;
  const int cap = trunc.novikov_total_degree_cap;
  for (const auto& [ma, ca] : a.terms()) {
    const int da = ma.novikov_degree();
    if (da > cap) continue;
    for (const auto& [mb, cb] : b.terms()) {
      if (da + mb.novikov_degree() > cap) continue;
      out.add_term(ma * mb, ca * cb);
    }
  }
  return out;
}

MultiPoly root_param(int level, int j, int k) {
  if (j == k) throw DomainError("root parameter needs distinct indices");
  if (j < k) {
    return MultiPoly::variable(VarTag{VarKind::RootParam, static_cast<std::int8_t>(level),
                                      static_cast<std::int8_t>(j), static_cast<std::int8_t>(k)});
  }
  return MultiPoly::variable(VarTag{VarKind::RootParam, static_cast<std::int8_t>(level),
                                    static_cast<std::int8_t>(k), static_cast<std::int8_t>(j)},
                             -1);
}

Rational evaluate_exact(const MultiPoly& p, const std::map<VarTag, Rational>& values) {
  Rational total = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational term = c;
    for (const auto& [v, e] : m.factors()) {
      auto it = values.find(v);
      if (it == values.end()) throw DomainError("evaluate: no value for " + v.name());
      Rational base = it->second;
      if (e < 0) {
        if (base == 0) throw DomainError("evaluate: inverse of zero for " + v.name());
        base = 1 / base;
      }
      for (int k = 0; k < std::abs(e); ++k) term *= base;
    }
    total += term;
  }
  return total;
}

}  // namespace qkflag
