#include "qkflag/presentations.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qkflag/symmetric.hpp"

namespace qkflag {

namespace {

MultiPoly X(VarTag v, int e = 1) { return MultiPoly::variable(v, e); }

bool is_unit_variable(VarTag v) {
  return v.kind == VarKind::ChernRoot || v.kind == VarKind::EquivParam;
}

std::vector<MultiPoly> wedge_S_row(const FlagShape& shape, int i) {
  std::vector<MultiPoly> out;
  for (int l = 1; l <= shape.v(i); ++l) out.push_back(wedge_S(shape, i, l));
  return out;
}

// Σ_j (−1)^j h_j(S_i) ∧^{ℓ−j}S_{i+1}.
MultiPoly classical_quotient_wedge(const FlagShape& shape, int i, int l) {
  const auto elementary = wedge_S_row(shape, i);
  MultiPoly out;
  for (int j = 0; j <= l; ++j) {
    const MultiPoly h = complete_from_elementary(elementary, j);
    const MultiPoly term = h * wedge_S(shape, i + 1, l - j);
    if (j % 2) out -= term;
    else out += term;
  }
  return out;
}

// Classical Whitney component Σ_r ∧^{ℓ−r}S_i ∧^rR_i − ∧^ℓS_{i+1}, with the
// quotient wedges supplied by `quotient(r)`.
template <class QuotientWedge>
MultiPoly whitney_component(const FlagShape& shape, int i, int l, QuotientWedge quotient) {
  const int k = shape.v(i + 1) - shape.v(i);
  MultiPoly out;
  for (int r = 0; r <= std::min(k, l); ++r) out += wedge_S(shape, i, l - r) * quotient(r);
  return out - wedge_S(shape, i + 1, l);
}

}  // namespace

// ------------------------------------------------------------ Presentation

void Presentation::add(MultiPoly relation, std::string tag) {
  if (relation.is_zero()) return;
  relations.push_back(std::move(relation));
  provenance.push_back(std::move(tag));
}

Presentation Presentation::specialize(const std::map<VarTag, Rational>& values) const {
  std::map<VarTag, MultiPoly> sub;
  for (const auto& [v, c] : values) sub[v] = MultiPoly(c);
  Presentation out = *this;
  out.relations.clear();
  out.provenance.clear();
  for (std::size_t a = 0; a < relations.size(); ++a)
    out.add(relations[a].substitute(sub), provenance[a]);
  return out;
}

Presentation Presentation::nonequivariant() const {
  std::map<VarTag, Rational> ones;
  for (int r = 1; r <= shape.N(); ++r) ones[var::Lambda(r)] = 1;
  Presentation out = specialize(ones);
  out.equivariant = false;
  return out;
}

std::vector<VarTag> Presentation::parameters() const {
  std::set<VarTag> seen;
  for (const auto& r : relations)
    for (auto v : r.variables()) seen.insert(v);
  for (auto v : generators) seen.erase(v);
  for (auto v : auxiliary) seen.erase(v);
  return {seen.begin(), seen.end()};
}

nlohmann::json poly_to_json(const MultiPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : p.terms()) {
    nlohmann::json mono = nlohmann::json::array();
    for (const auto& [v, e] : m.factors()) mono.push_back({v.name(), e});
    terms.push_back({{"c", to_string(c)}, {"m", mono}});
  }
  return terms;
}

MultiPoly poly_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw DomainError("polynomial must be a JSON array of terms");
  MultiPoly out;
  for (const auto& term : doc) {
    if (!term.is_object() || !term.contains("c") || !term.contains("m"))
      throw DomainError("polynomial term needs fields 'c' and 'm'");
    std::vector<Monomial::Factor> factors;
    for (const auto& f : term.at("m")) {
      if (!f.is_array() || f.size() != 2) throw DomainError("monomial factor must be [name, exponent]");
      factors.emplace_back(parse_var(f[0].get<std::string>()), f[1].get<int>());
    }
    std::sort(factors.begin(), factors.end());
    out.add_term(Monomial(std::move(factors)), parse_rational(term.at("c").get<std::string>()));
  }
  return out;
}

nlohmann::json Presentation::to_json() const {
  nlohmann::json doc;
  doc["schema_version"] = kPresentationSchemaVersion;
  doc["kind"] = kind;
  doc["shape"] = shape.spec();
  doc["equivariant"] = equivariant;
  auto names = [](const std::vector<VarTag>& vs) {
    nlohmann::json a = nlohmann::json::array();
    for (auto v : vs) a.push_back(v.name());
    return a;
  };
  doc["generators"] = names(generators);
  doc["auxiliary"] = names(auxiliary);
  doc["parameters"] = names(parameters());
  nlohmann::json rels = nlohmann::json::array();
  for (std::size_t a = 0; a < relations.size(); ++a)
    rels.push_back({{"provenance", provenance[a]}, {"terms", poly_to_json(relations[a])}});
  doc["relations"] = rels;
  return doc;
}

Presentation Presentation::from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != kPresentationSchemaVersion)
      throw DomainError("unsupported presentation schema version");
    Presentation p{.kind = doc.at("kind").get<std::string>(),
                   .shape = FlagShape::parse(doc.at("shape").get<std::string>())};
    p.equivariant = doc.value("equivariant", true);
    for (const auto& g : doc.at("generators")) p.generators.push_back(parse_var(g.get<std::string>()));
    for (const auto& g : doc.at("auxiliary")) p.auxiliary.push_back(parse_var(g.get<std::string>()));
    for (const auto& r : doc.at("relations")) {
      p.relations.push_back(poly_from_json(r.at("terms")));
      p.provenance.push_back(r.value("provenance", std::string("unknown")));
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed presentation document: ") + e.what());
  }
}

std::string Presentation::to_text() const {
  std::ostringstream os;
  os << kind << " presentation of " << shape.name() << (equivariant ? " (equivariant)" : "") << "\n";
  os << "generators:";
  for (auto g : generators) os << ' ' << g.name();
  os << "\n";
  if (!auxiliary.empty()) {
    os << "auxiliary:";
    for (auto g : auxiliary) os << ' ' << g.name();
    os << "\n";
  }
  for (std::size_t a = 0; a < relations.size(); ++a)
    os << "[" << provenance[a] << "] " << relations[a].to_string() << " = 0\n";
  return os.str();
}

// ---------------------------------------------------------------- Whitney

MultiPoly wedge_S(const FlagShape& shape, int i, int l) {
  if (l == 0) return MultiPoly(1);
  if (l < 0 || i <= 0 || l > shape.v(i)) return MultiPoly();
  if (i == shape.n() + 1) return elementary_symmetric(shape.roots(i), l);
  return X(var::S(i, l));
}

MultiPoly wedge_R(const FlagShape& shape, int i, int l) {
  if (l == 0) return MultiPoly(1);
  if (l < 0 || l > shape.v(i + 1) - shape.v(i)) return MultiPoly();
  return X(var::R(i, l));
}

namespace {

Presentation whitney_skeleton(const FlagShape& shape, const std::string& kind, bool equivariant) {
  Presentation p{.kind = kind, .shape = shape};
  p.equivariant = equivariant;
  for (int i = 1; i <= shape.n(); ++i)
    for (int l = 1; l <= shape.v(i); ++l) p.generators.push_back(var::S(i, l));
  for (int i = 1; i <= shape.n(); ++i)
    for (int l = 1; l <= shape.v(i + 1) - shape.v(i); ++l) p.auxiliary.push_back(var::R(i, l));
  return p;
}

Presentation finish(Presentation p, bool equivariant) {
  return equivariant ? p : p.nonequivariant();
}

}  // namespace

Presentation classical_whitney(const FlagShape& shape, bool equivariant) {
  Presentation p = whitney_skeleton(shape, "classical-whitney", equivariant);
  for (int i = 1; i <= shape.n(); ++i)
    for (int l = 1; l <= shape.v(i + 1); ++l)
      p.add(whitney_component(shape, i, l, [&](int r) { return wedge_R(shape, i, r); }), "whitney");
  return finish(std::move(p), equivariant);
}

Presentation quantum_whitney(const FlagShape& shape, bool equivariant) {
  Presentation p = whitney_skeleton(shape, "quantum-whitney", equivariant);
  for (int i = 1; i <= shape.n(); ++i) {
    const int k = shape.v(i + 1) - shape.v(i);
    const MultiPoly Q = X(var::Q(i));
    for (int l = 1; l <= shape.v(i + 1); ++l) {
      const MultiPoly classical =
          whitney_component(shape, i, l, [&](int r) { return wedge_R(shape, i, r); });
      const MultiPoly correction =
          wedge_R(shape, i, k) * (wedge_S(shape, i, l - k) - wedge_S(shape, i - 1, l - k));
      if (correction.is_zero()) p.add(classical, "whitney-quantum");
      else p.add((1 - Q) * classical + Q * correction, "whitney-quantum-cleared");
    }
  }
  return finish(std::move(p), equivariant);
}

std::map<VarTag, MultiPoly> whitney_localization(const FlagShape& shape, const FixedPoint& fp) {
  std::map<VarTag, MultiPoly> out;
  auto composite = [&](int level, int j) {
    return level == shape.n() + 1 ? j : fp.composite(level, j);
  };
  for (int i = 1; i <= shape.n(); ++i) {
    std::vector<VarTag> sub, quot;
    std::set<int> image;
    for (int j = 1; j <= shape.v(i); ++j) {
      sub.push_back(var::Lambda(composite(i, j)));
      image.insert(fp.f[i - 1][j - 1]);
    }
    for (int b = 1; b <= shape.v(i + 1); ++b)
      if (!image.count(b)) quot.push_back(var::Lambda(composite(i + 1, b)));
    for (int l = 1; l <= shape.v(i); ++l) out[var::S(i, l)] = elementary_symmetric(sub, l);
    for (int l = 1; l <= static_cast<int>(quot.size()); ++l)
      out[var::R(i, l)] = elementary_symmetric(quot, l);
  }
  return out;
}

// ------------------------------------------------------------------ Bethe

MultiPoly normalize_relation(const MultiPoly& p) {
  MultiPoly out = p.clear_monomial_content(is_unit_variable);
  if (out.is_zero()) return out;
  const Rational lead = out.terms().rbegin()->second;
  if (lead < 0) out *= Rational(-1);
  return out;
}

namespace {

std::vector<MultiPoly> root_values(const FlagShape& shape, int level) {
  std::vector<MultiPoly> out;
  if (level <= 0) return out;
  for (auto v : shape.roots(level)) out.push_back(X(v));
  return out;
}

// ∏_b (1 − x / P^{i+1}_b) and ∏_a (1 − P^{i−1}_a / x).
MultiPoly upper_product(const FlagShape& shape, int i, VarTag x) {
  MultiPoly out(1);
  for (auto v : shape.roots(i + 1)) out *= 1 - X(x) * X(v, -1);
  return out;
}

MultiPoly lower_product(const FlagShape& shape, int i, VarTag x) {
  MultiPoly out(1);
  if (i <= 1) return out;
  for (auto v : shape.roots(i - 1)) out *= 1 - X(v) * X(x, -1);
  return out;
}

MultiPoly specialized_bethe(const FlagShape& shape, int i, int j) {
  const VarTag x = var::P(i, j);
  const int vi = shape.v(i);
  const MultiPoly e = elementary_symmetric(shape.roots(i), vi);
  const MultiPoly sign((vi - 1) % 2 ? -1 : 1);
  return normalize_relation(sign * e * upper_product(shape, i, x) -
                            X(x, vi) * X(var::Q(i)) * lower_product(shape, i, x));
}

}  // namespace

MultiPoly BetheRelation::cleared() const {
  MultiPoly left = lhs, right = prefactor;
  for (const auto& [num, den] : ratios) {
    left *= den;
    right *= num;
  }
  return normalize_relation(left - right);
}

std::vector<BetheRelation> bethe_relations_factored(const FlagShape& shape) {
  std::vector<BetheRelation> out;
  for (int i = 1; i <= shape.n(); ++i)
    for (int j = 1; j <= shape.v(i); ++j) {
      const VarTag x = var::P(i, j);
      BetheRelation rel;
      rel.i = i;
      rel.j = j;
      rel.lhs = upper_product(shape, i, x);
      rel.prefactor = X(var::Q(i, j)) * lower_product(shape, i, x);
      for (int k = 1; k <= shape.v(i); ++k) {
        if (k == j) continue;
        const VarTag pk = var::P(i, k);
        rel.ratios.emplace_back(1 - root_param(i, j, k) * X(x) * X(pk, -1),
                                1 - root_param(i, k, j) * X(pk) * X(x, -1));
      }
      out.push_back(std::move(rel));
    }
  return out;
}

std::vector<MultiPoly> bethe_equations(const FlagShape& shape, bool specialized) {
  std::vector<MultiPoly> out;
  if (!specialized) {
    for (const auto& rel : bethe_relations_factored(shape)) out.push_back(rel.cleared());
    return out;
  }
  for (int i = 1; i <= shape.n(); ++i)
    for (int j = 1; j <= shape.v(i); ++j) out.push_back(specialized_bethe(shape, i, j));
  return out;
}

MultiPoly specialize_bethe(const BetheRelation& rel) {
  std::map<VarTag, MultiPoly> sub;
  auto collect = [&](const MultiPoly& p) {
    for (auto v : p.variables()) {
      if (v.kind == VarKind::RootParam) sub[v] = MultiPoly(1);
      if (v.kind == VarKind::Novikov && v.j != 0) sub[v] = X(var::Q(v.i));
    }
  };
  collect(rel.prefactor);
  for (const auto& [num, den] : rel.ratios) {
    collect(num);
    collect(den);
  }
  const VarTag x = var::P(rel.i, rel.j);
  MultiPoly right = rel.prefactor.substitute(sub);
  for (const auto& [num, den] : rel.ratios) {
    const MultiPoly n1 = num.substitute(sub), d1 = den.substitute(sub);
    // The ratio must collapse to a monomial: (1 − x/y)/(1 − y/x) = −x/y.
    VarTag other = x;
    for (auto v : n1.variables())
      if (v != x) other = v;
    const MultiPoly ratio = -1 * X(x) * X(other, -1);
    if (!(n1 == ratio * d1))
      throw PresentationMismatch("root-parameter ratio does not cancel at λ = 1");
    right *= ratio;
  }
  return normalize_relation(rel.lhs - right);
}

Presentation bethe_presentation(const FlagShape& shape) {
  Presentation p{.kind = "bethe", .shape = shape};
  p.generators = shape.all_roots();
  for (auto& r : bethe_equations(shape, true)) p.add(std::move(r), "bethe");
  return p;
}

MultiPoly characteristic_poly(const FlagShape& shape, int i) {
  if (i < 1 || i > shape.n()) throw DomainError("characteristic_poly: level out of range");
  const MultiPoly t = X(var::t());
  const int k = shape.v(i + 1) - shape.v(i);
  MultiPoly upper(1), lower = pow(t, shape.v(i) - shape.v(i - 1));
  for (const auto& p : root_values(shape, i + 1)) upper *= t - p;
  for (const auto& p : root_values(shape, i - 1)) lower *= t - p;
  const MultiPoly e_i = elementary_symmetric(shape.roots(i), shape.v(i));
  const MultiPoly e_next = elementary_symmetric(shape.roots(i + 1), shape.v(i + 1));
  return e_i * upper + (k % 2 ? -1 : 1) * X(var::Q(i)) * e_next * lower;
}

// ---------------------------------------------------- quantum quotient

VietaResult vieta_symmetrize(const FlagShape& shape, int i) {
  if (i < 1 || i > shape.n()) throw DomainError("vieta_symmetrize: level out of range");
  const int k = shape.v(i + 1) - shape.v(i);
  VietaResult res;
  res.bundle.level = i;
  res.bundle.rank = k;
  for (int l = 0; l <= k; ++l) {
    res.bundle.wedge.push_back(classical_quotient_wedge(shape, i, l));
    res.bundle.denominator_power.push_back(l == k ? 1 : 0);
  }
  const MultiPoly Q = X(var::Q(i));
  const auto& C = res.bundle.wedge;
  for (int l = k + 1; l <= shape.v(i + 1); ++l) {
    MultiPoly rel;
    for (int r = 0; r < k; ++r) rel += (1 - Q) * wedge_S(shape, i, l - r) * C[r];
    rel += wedge_S(shape, i, l - k) * C[k];
    rel -= (1 - Q) * wedge_S(shape, i + 1, l);
    rel -= Q * C[k] * wedge_S(shape, i - 1, l - k);
    res.relations.push_back(std::move(rel));
  }
  return res;
}

Presentation vieta_presentation(const FlagShape& shape, bool equivariant) {
  Presentation p{.kind = "vieta", .shape = shape};
  p.equivariant = equivariant;
  for (int i = 1; i <= shape.n(); ++i)
    for (int l = 1; l <= shape.v(i); ++l) p.generators.push_back(var::S(i, l));
  for (int i = 1; i <= shape.n(); ++i)
    for (auto& r : vieta_symmetrize(shape, i).relations) p.add(std::move(r), "vieta-quotient");
  return finish(std::move(p), equivariant);
}

// -------------------------------------------------------------- Wronskian

namespace {

int quotient_rank(const FlagShape& shape, int r) {
  return r == 0 ? shape.v(1) : shape.v(r + 1) - shape.v(r);
}

MultiPoly lambda_y_rhat(const FlagShape& shape, int r) {
  MultiPoly out(1);
  for (int l = 1; l <= quotient_rank(shape, r); ++l) out += X(var::y(), l) * X(var::Rhat(r, l));
  return out;
}

}  // namespace

WronskianMatrix wronskian_matrix(const FlagShape& shape) {
  const int size = shape.n() + 1;
  WronskianMatrix m;
  m.size = size;
  m.entries.assign(size, std::vector<MultiPoly>(size));
  for (int r = 0; r < size; ++r) {
    m.entries[r][r] = lambda_y_rhat(shape, r);
    if (r + 1 < size) {
      const int k = quotient_rank(shape, r + 1);
      m.entries[r + 1][r] = X(var::Q(r + 1));
      m.entries[r][r + 1] = X(var::y(), k) * X(var::Rhat(r + 1, k));
    }
  }
  return m;
}

MultiPoly WronskianMatrix::leading_minor(int order) const {
  if (order < 0 || order > size) throw DomainError("minor order out of range");
  MultiPoly prev2(1), prev1(1);
  if (order == 0) return prev1;
  prev1 = entries[0][0];
  for (int m = 2; m <= order; ++m) {
    MultiPoly next = entries[m - 1][m - 1] * prev1 - entries[m - 2][m - 1] * entries[m - 1][m - 2] * prev2;
    prev2 = std::move(prev1);
    prev1 = std::move(next);
  }
  return prev1;
}

MultiPoly WronskianMatrix::determinant_by_expansion() const {
  std::function<MultiPoly(const std::vector<int>&, int)> det = [&](const std::vector<int>& cols,
                                                                   int row) -> MultiPoly {
    if (cols.empty()) return MultiPoly(1);
    MultiPoly acc;
    for (std::size_t a = 0; a < cols.size(); ++a) {
      const MultiPoly& e = entries[row][cols[a]];
      if (e.is_zero()) continue;
      std::vector<int> rest = cols;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(a));
      const MultiPoly term = e * det(rest, row + 1);
      if (a % 2) acc -= term;
      else acc += term;
    }
    return acc;
  };
  std::vector<int> cols(size);
  for (int c = 0; c < size; ++c) cols[c] = c;
  return det(cols, 0);
}

MultiPoly lambda_y_S(const FlagShape& shape, int j) {
  MultiPoly out(1);
  for (int l = 1; l <= shape.v(j); ++l) out += X(var::y(), l) * wedge_S(shape, j, l);
  return out;
}

Presentation wronskian_presentation(const FlagShape& shape, bool equivariant) {
  Presentation p{.kind = "wronskian", .shape = shape};
  p.equivariant = equivariant;
  for (int r = 0; r <= shape.n(); ++r)
    for (int l = 1; l <= quotient_rank(shape, r); ++l) p.generators.push_back(var::Rhat(r, l));
  const MultiPoly diff =
      wronskian_matrix(shape).leading_minor(shape.n() + 1) - lambda_y_S(shape, shape.n() + 1);
  for (int l = 1; l <= shape.N(); ++l) p.add(diff.coefficient(var::y(), l), "wronskian-det");
  return finish(std::move(p), equivariant);
}

std::vector<MultiPoly> wronskian_det_check(const FlagShape& shape, int j, const ReducedBasis& whitney,
                                           const std::map<VarTag, Rational>& values, bool strict) {
  if (j < 1 || j > shape.n() + 1) throw DomainError("wronskian_det_check: index out of range");
  MultiPoly residual = wronskian_matrix(shape).leading_minor(j) - lambda_y_S(shape, j);
  // Top quotient wedges carry (1 − Q_r)^{-1}; each term of the minor holds at
  // most one of them, so multiplying by ∏(1 − Q_r) splits cleanly.
  for (int r = 1; r < j; ++r) {
    const int k = quotient_rank(shape, r);
    const VarTag top = var::Rhat(r, k);
    const MultiPoly without = residual.coefficient(top, 0);
    const MultiPoly with = residual.coefficient(top, 1);
    if (residual.max_degree(top) > 1) throw InternalError("quotient top wedge appears squared");
    residual = (1 - X(var::Q(r))) * without + with * X(var::R(r, k));
  }
  std::map<VarTag, MultiPoly> sub;
  for (int l = 1; l <= shape.v(1); ++l) sub[var::Rhat(0, l)] = X(var::S(1, l));
  for (int r = 1; r <= shape.n(); ++r)
    for (int l = 1; l < quotient_rank(shape, r); ++l) sub[var::Rhat(r, l)] = X(var::R(r, l));
  for (const auto& [v, c] : values) sub[v] = MultiPoly(c);
  residual = residual.substitute(sub);

  std::vector<MultiPoly> components;
  bool ok = true;
  for (int l = 0; l <= residual.max_degree(var::y()); ++l) {
    MultiPoly c = whitney.normal_form(residual.coefficient(var::y(), l));
    ok = ok && c.is_zero();
    components.push_back(std::move(c));
  }
  if (strict && !ok)
    throw PresentationMismatch("det(M_" + std::to_string(j) + ") differs from Λ_y(S_" +
                               std::to_string(j) + ") in the quantum ring");
  return components;
}

}  // namespace qkflag
