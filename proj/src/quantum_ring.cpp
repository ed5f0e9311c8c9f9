#include "qkflag/quantum_ring.hpp"

#include <algorithm>
#include <set>

namespace qkflag {

namespace {

std::vector<VarTag> novikov_of(const FlagShape& shape) {
  std::vector<VarTag> out;
  for (int i = 1; i <= shape.n(); ++i) out.push_back(var::Q(i));
  return out;
}

long binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (long a = 1; a <= k; ++a) r = r * (n - k + a) / a;
  return r;
}

Monomial novikov_part(const Monomial& m) {
  std::vector<Monomial::Factor> fs;
  for (const auto& f : m.factors())
    if (f.first.is_novikov()) fs.push_back(f);
  return Monomial(std::move(fs));
}

Monomial module_part(const Monomial& m) {
  std::vector<Monomial::Factor> fs;
  for (const auto& f : m.factors())
    if (!f.first.is_novikov()) fs.push_back(f);
  return Monomial(std::move(fs));
}

nlohmann::json values_json(const std::map<VarTag, Rational>& values) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [v, c] : values) out[v.name()] = to_string(c);
  return out;
}

}  // namespace

RationalMatrix MultOperator::rational() const {
  RationalMatrix out(matrix.size());
  for (std::size_t r = 0; r < matrix.size(); ++r)
    for (const auto& e : matrix[r]) {
      if (!e.is_constant()) throw DomainError("multiplication operator has non-constant entries");
      out[r].push_back(e.constant_term());
    }
  return out;
}

QuotientRing::QuotientRing(Presentation p, ReducedBasis b, std::vector<Monomial> module_basis,
                           ScalarMode mode, std::map<VarTag, Rational> values)
    : presentation_(std::move(p)),
      basis_(std::move(b)),
      module_basis_(std::move(module_basis)),
      mode_(mode),
      values_(std::move(values)) {}

MultiPoly QuotientRing::reduce(const MultiPoly& p) const {
  std::map<VarTag, MultiPoly> sub;
  for (auto v : p.variables()) {
    auto it = values_.find(v);
    if (it != values_.end()) sub[v] = MultiPoly(it->second);
  }
  return basis_.normal_form(sub.empty() ? p : p.substitute(sub));
}

MultiPoly QuotientRing::multiply(const MultiPoly& a, const MultiPoly& b) const {
  return reduce(reduce(a) * reduce(b));
}

std::vector<MultiPoly> QuotientRing::coordinates(const MultiPoly& element) const {
  const MultiPoly nf = reduce(element);
  std::vector<MultiPoly> out(module_basis_.size());
  for (const auto& [m, c] : nf.terms()) {
    const Monomial b = module_part(m);
    auto it = std::lower_bound(module_basis_.begin(), module_basis_.end(), b,
                               [&](const Monomial& x, const Monomial& y) { return basis_.compare(x, y) < 0; });
    if (it == module_basis_.end() || !(*it == b))
      throw InternalError("normal form left the standard basis: " + b.to_string());
    out[it - module_basis_.begin()].add_term(novikov_part(m), c);
  }
  return out;
}

MultiPoly QuotientRing::from_coordinates(const std::vector<MultiPoly>& coords) const {
  if (coords.size() != module_basis_.size()) throw DomainError("coordinate vector has the wrong length");
  MultiPoly out;
  for (std::size_t k = 0; k < coords.size(); ++k) out += coords[k] * MultiPoly(module_basis_[k]);
  return reduce(out);
}

MultOperator QuotientRing::mult_operator(const MultiPoly& element) const {
  MultOperator op;
  op.element = element;
  const std::size_t r = rank();
  op.matrix.assign(r, std::vector<MultiPoly>(r));
  const MultiPoly e = reduce(element);
  for (std::size_t col = 0; col < r; ++col) {
    const auto coords = coordinates(e * MultiPoly(module_basis_[col]));
    for (std::size_t row = 0; row < r; ++row) op.matrix[row][col] = coords[row];
  }
  return op;
}

std::vector<std::vector<std::vector<MultiPoly>>> QuotientRing::structure_constants() const {
  const std::size_t r = rank();
  std::vector<std::vector<std::vector<MultiPoly>>> c(r, std::vector<std::vector<MultiPoly>>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      if (j < i) {
        c[i][j] = c[j][i];
        continue;
      }
      c[i][j] = coordinates(MultiPoly(module_basis_[i]) * MultiPoly(module_basis_[j]));
    }
  return c;
}

nlohmann::json QuotientRing::to_json(bool include_structure_constants) const {
  nlohmann::json doc;
  doc["shape"] = presentation_.shape.spec();
  doc["presentation"] = presentation_.kind;
  doc["mode"] = mode_ == ScalarMode::Formal ? "formal" : "numeric";
  doc["rank"] = rank();
  if (truncation()) doc["novikov_cap"] = truncation()->novikov_total_degree_cap;
  doc["values"] = values_json(values_);
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& m : module_basis_) basis.push_back(m.to_string());
  doc["basis"] = basis;
  nlohmann::json gb = nlohmann::json::array();
  for (const auto& p : basis_.polynomials()) gb.push_back(poly_to_json(p));
  doc["groebner_basis"] = gb;
  if (include_structure_constants) {
    nlohmann::json sc = nlohmann::json::array();
    for (const auto& row : structure_constants()) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& cell : row) {
        nlohmann::json ks = nlohmann::json::array();
        for (const auto& k : cell) ks.push_back(k.to_string());
        r.push_back(ks);
      }
      sc.push_back(r);
    }
    doc["structure_constants"] = sc;
  }
  return doc;
}

MonomialOrder presentation_order(const Presentation& p, const std::vector<VarTag>& extra, bool local_novikov) {
  std::vector<VarTag> vars = p.auxiliary;
  vars.insert(vars.end(), p.generators.begin(), p.generators.end());
  for (auto v : extra)
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  return MonomialOrder::novikov_last(vars, local_novikov);
}

QuotientRing build_ring(const Presentation& p, const RingOptions& options) {
  const Presentation spec = p.specialize(options.values);
  std::vector<VarTag> novikov;
  for (auto v : spec.parameters()) {
    if (v.is_novikov() && options.mode == ScalarMode::Formal) continue;
    throw DomainError("build_ring: no value for parameter " + v.name());
  }
  if (options.mode == ScalarMode::Formal) novikov = novikov_of(p.shape);
  std::optional<TruncationPolicy> trunc;
  if (options.mode == ScalarMode::Formal) trunc = options.trunc;

  ReducedBasis gb = groebner(spec.relations,
                             presentation_order(spec, novikov, options.mode == ScalarMode::Formal),
                             trunc, options.limits);
  const long expected = options.expected_rank.value_or(orbit_count(p.shape));

  std::vector<Monomial> standard;
  try {
    standard = gb.standard_monomials();
  } catch (const RankError&) {
    throw RankError("quotient has infinite rank over the scalars", -1, expected);
  }
  std::vector<Monomial> module_basis;
  for (const auto& m : standard)
    if (novikov_part(m).is_one()) module_basis.push_back(m);

  if (options.mode == ScalarMode::Formal) {
    // With Q ordered locally, a free quotient has standard set B × {Q^a}.
    const long per_block = binomial(trunc->novikov_total_degree_cap + static_cast<long>(novikov.size()),
                                    static_cast<long>(novikov.size()));
    std::set<Monomial> base(module_basis.begin(), module_basis.end());
    bool free = static_cast<long>(standard.size()) == static_cast<long>(module_basis.size()) * per_block;
    for (const auto& m : standard) free = free && base.count(module_part(m));
    if (!free)
      throw RankError("quotient is not free over the truncated Novikov ring",
                      static_cast<long>(module_basis.size()), expected);
  }
  if (static_cast<long>(module_basis.size()) != expected)
    throw RankError("quotient rank " + std::to_string(module_basis.size()) + " differs from expected " +
                        std::to_string(expected),
                    static_cast<long>(module_basis.size()), expected);
  return QuotientRing(spec, std::move(gb), std::move(module_basis), options.mode, options.values);
}

nlohmann::json GateReport::to_json() const {
  return {{"passed", passed},
          {"expected_rank", expected_rank},
          {"observed_rank", observed_rank},
          {"classical_rank", classical_rank},
          {"free_over_novikov", free_over_novikov},
          {"mod_q_matches_classical", mod_q_matches_classical},
          {"failures", failures}};
}

GateReport rank_gate(const Presentation& quantum, const std::optional<Presentation>& classical,
                     const RingOptions& options) {
  GateReport rep;
  rep.expected_rank = options.expected_rank.value_or(orbit_count(quantum.shape));
  RingOptions formal = options;
  formal.mode = ScalarMode::Formal;
  formal.expected_rank = rep.expected_rank;
  try {
    auto ring = build_ring(quantum, formal);
    rep.observed_rank = static_cast<long>(ring.rank());
    rep.free_over_novikov = true;
  } catch (const RankError& e) {
    rep.observed_rank = e.observed();
    rep.failures.push_back(std::string("quantum quotient: ") + e.what());
  }

  std::map<VarTag, Rational> at_zero = options.values;
  for (int i = 1; i <= quantum.shape.n(); ++i) at_zero[var::Q(i)] = 0;
  const Presentation reduced = quantum.specialize(at_zero);
  const Presentation base = (classical ? *classical : quantum).specialize(at_zero);
  const MonomialOrder order = presentation_order(reduced, {});
  try {
    auto gb_q = groebner(reduced.relations, order, std::nullopt, options.limits);
    auto gb_c = groebner(base.relations, order, std::nullopt, options.limits);
    rep.mod_q_matches_classical = gb_q.polynomials() == gb_c.polynomials();
    if (!rep.mod_q_matches_classical)
      rep.failures.push_back("relations modulo Q do not generate the classical ideal");
    try {
      rep.classical_rank = static_cast<long>(gb_c.standard_monomials().size());
    } catch (const RankError&) {
      rep.classical_rank = -1;
    }
    if (rep.classical_rank != rep.expected_rank)
      rep.failures.push_back("classical quotient rank " + std::to_string(rep.classical_rank) +
                             " differs from expected " + std::to_string(rep.expected_rank));
  } catch (const DomainError& e) {
    rep.failures.push_back(std::string("classical comparison: ") + e.what());
  }
  rep.passed = rep.failures.empty();
  return rep;
}

MultiPoly whitney_class(int level, int l) { return MultiPoly::variable(var::S(level, l)); }

std::vector<Complex> eigenvalues(const MultOperator& op) {
  return polynomial_roots(characteristic_polynomial(op.rational()));
}

namespace {

/// Basis elements free of the presentation's auxiliary generators.
std::vector<MultiPoly> eliminated(const ReducedBasis& gb, const Presentation& p) {
  std::vector<MultiPoly> out;
  for (const auto& g : gb.polynomials()) {
    bool aux = false;
    for (const auto& [m, c] : g.terms())
      for (const auto& [v, e] : m.factors())
        aux = aux || std::find(p.auxiliary.begin(), p.auxiliary.end(), v) != p.auxiliary.end();
    if (!aux) out.push_back(g);
  }
  return out;
}

}  // namespace

IdealComparison compare_ideals(const Presentation& left, const Presentation& right,
                               const std::map<VarTag, Rational>& values, std::optional<TruncationPolicy> trunc,
                               const GroebnerLimits& limits) {
  const Presentation a = left.specialize(values), b = right.specialize(values);
  std::vector<VarTag> extra = a.parameters();
  for (auto v : b.parameters()) extra.push_back(v);
  for (auto v : b.generators) extra.push_back(v);
  for (auto v : a.generators) extra.push_back(v);
  for (auto v : b.auxiliary) extra.push_back(v);
  // One order over both variable sets, each side's auxiliaries on top.
  Presentation joint = a;
  for (auto v : b.auxiliary)
    if (std::find(joint.auxiliary.begin(), joint.auxiliary.end(), v) == joint.auxiliary.end())
      joint.auxiliary.push_back(v);
  const MonomialOrder order = presentation_order(joint, extra);
  const ReducedBasis ga = groebner(a.relations, order, trunc, limits);
  const ReducedBasis gb = groebner(b.relations, order, trunc, limits);

  IdealComparison out;
  out.left = left.kind;
  out.right = right.kind;
  for (const auto& g : eliminated(ga, a))
    if (!gb.contains(g)) out.left_not_in_right.push_back(g.to_string());
  for (const auto& g : eliminated(gb, b))
    if (!ga.contains(g)) out.right_not_in_left.push_back(g.to_string());
  return out;
}

nlohmann::json IdealComparison::to_json() const {
  return {{"left", left},
          {"right", right},
          {"equal", equal()},
          {"left_not_in_right", left_not_in_right},
          {"right_not_in_left", right_not_in_left}};
}

}  // namespace qkflag
