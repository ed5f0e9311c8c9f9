#include "qkflag/groebner.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace qkflag {

namespace {

constexpr int kMaxVars = 48;

struct Exps {
  std::array<std::int16_t, kMaxVars> e{};
  bool operator==(const Exps& o) const { return e == o.e; }
};

struct Term {
  Exps m;
  Rational c;
};

using Poly = std::vector<Term>;  // strictly descending in the ring order

std::uint64_t support_mask(const Exps& m, int n) {
  std::uint64_t mask = 0;
  for (int i = 0; i < n; ++i)
    if (m.e[i] != 0) mask |= (std::uint64_t{1} << i);
  return mask;
}

}  // namespace

// Shared, immutable ring description plus the final basis.
struct ReducedBasis::Impl {
  std::vector<VarTag> vars;  // in block order
  MonomialOrder order;
  std::vector<int> block_end;  // exclusive end index per block
  std::vector<bool> local_block;
  std::vector<bool> novikov;
  std::optional<TruncationPolicy> trunc;
  GroebnerLimits limits;

  std::vector<Poly> basis;  // reduced, monic, ascending by leading monomial
  std::vector<std::uint64_t> lead_mask;

  int n() const { return static_cast<int>(vars.size()); }

  int cmp(const Exps& a, const Exps& b) const {
    const int nv = n();
    if (order.kind == OrderKind::Lex) {
      for (int i = 0; i < nv; ++i)
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? 1 : -1;
      return 0;
    }
    int start = 0;
    for (std::size_t blk = 0; blk < block_end.size(); ++blk) {
      const int end = block_end[blk];
      const int sign = local_block[blk] ? -1 : 1;
      int da = 0, db = 0;
      for (int i = start; i < end; ++i) {
        da += a.e[i];
        db += b.e[i];
      }
      if (da != db) return da > db ? sign : -sign;
      for (int i = end - 1; i >= start; --i)
        if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? sign : -sign;
      start = end;
    }
    return 0;
  }

  bool truncated(const Exps& m) const {
    if (!trunc) return false;
    int d = 0;
    for (int i = 0; i < n(); ++i)
      if (novikov[i]) d += m.e[i];
    return d > trunc->novikov_total_degree_cap;
  }

  bool divides(const Exps& a, const Exps& b) const {
    for (int i = 0; i < n(); ++i)
      if (a.e[i] > b.e[i]) return false;
    return true;
  }

  Exps mul(const Exps& a, const Exps& b) const {
    Exps r;
    for (int i = 0; i < n(); ++i) r.e[i] = static_cast<std::int16_t>(a.e[i] + b.e[i]);
    return r;
  }

  Exps div(const Exps& a, const Exps& b) const {
    Exps r;
    for (int i = 0; i < n(); ++i) r.e[i] = static_cast<std::int16_t>(a.e[i] - b.e[i]);
    return r;
  }

  Exps lcm(const Exps& a, const Exps& b) const {
    Exps r;
    for (int i = 0; i < n(); ++i) r.e[i] = std::max(a.e[i], b.e[i]);
    return r;
  }

  bool coprime(const Exps& a, const Exps& b) const {
    for (int i = 0; i < n(); ++i)
      if (a.e[i] != 0 && b.e[i] != 0) return false;
    return true;
  }

  int total(const Exps& a) const {
    int d = 0;
    for (int i = 0; i < n(); ++i) d += a.e[i];
    return d;
  }

  Poly from_multipoly(const MultiPoly& p) const {
    std::map<VarTag, int> index;
    for (int i = 0; i < n(); ++i) index[vars[i]] = i;
    Poly out;
    for (const auto& [mono, c] : p.terms()) {
      Exps e;
      for (const auto& [v, ex] : mono.factors()) {
        auto it = index.find(v);
        if (it == index.end())
          throw DomainError("variable " + v.name() + " is not in the ring");
        if (ex < 0) throw DomainError("non-polynomial input: negative exponent on " + v.name());
        e.e[it->second] = static_cast<std::int16_t>(ex);
      }
      if (!truncated(e)) out.push_back({e, c});
    }
    std::sort(out.begin(), out.end(),
              [this](const Term& a, const Term& b) { return cmp(a.m, b.m) > 0; });
    return out;
  }

  Monomial to_monomial(const Exps& e) const {
    std::vector<Monomial::Factor> fs;
    for (int i = 0; i < n(); ++i)
      if (e.e[i] != 0) fs.emplace_back(vars[i], e.e[i]);
    return Monomial(std::move(fs));
  }

  MultiPoly to_multipoly(const Poly& p) const {
    MultiPoly out;
    for (const auto& t : p) out.add_term(to_monomial(t.m), t.c);
    return out;
  }

  struct Greater {
    const Impl* ring;
    bool operator()(const Exps& a, const Exps& b) const { return ring->cmp(a, b) > 0; }
  };

  /// Full reduction of p by `reducers` (monic). Counts steps into *steps.
  Poly reduce(const Poly& p, const std::vector<const Poly*>& reducers,
              const std::vector<std::uint64_t>& masks, std::size_t* steps) const {
    std::map<Exps, Rational, Greater> work(Greater{this});
    for (const auto& t : p) work.emplace(t.m, t.c);
    Poly rem;
    while (!work.empty()) {
      auto it = work.begin();
      const Exps m = it->first;
      const std::uint64_t mmask = support_mask(m, n());
      const Poly* red = nullptr;
      for (std::size_t r = 0; r < reducers.size(); ++r) {
        if ((masks[r] & ~mmask) != 0) continue;
        if (divides(reducers[r]->front().m, m)) {
          red = reducers[r];
          break;
        }
      }
      if (!red) {
        rem.push_back({m, it->second});
        work.erase(it);
        continue;
      }
      if (steps && ++*steps > limits.max_reduction_steps)
        throw ResourceError("groebner: reduction step limit exceeded");
      const Rational factor = it->second;
      const Exps shift = div(m, red->front().m);
      work.erase(it);
      for (std::size_t k = 1; k < red->size(); ++k) {
        const Exps mm = mul((*red)[k].m, shift);
        if (truncated(mm)) continue;
        auto [jt, inserted] = work.try_emplace(mm, 0);
        jt->second -= factor * (*red)[k].c;
        if (jt->second == 0) work.erase(jt);
      }
    }
    return rem;
  }

  static void make_monic(Poly& p) {
    if (p.empty()) return;
    const Rational lead = p.front().c;
    if (lead == 1) return;
    for (auto& t : p) t.c /= lead;
  }

  Poly spoly(const Poly& f, const Poly& g) const {
    const Exps l = lcm(f.front().m, g.front().m);
    const Exps sf = div(l, f.front().m);
    const Exps sg = div(l, g.front().m);
    std::map<Exps, Rational, Greater> acc(Greater{this});
    for (std::size_t k = 1; k < f.size(); ++k) {
      const Exps mm = mul(f[k].m, sf);
      if (truncated(mm)) continue;
      acc[mm] += f[k].c;
    }
    for (std::size_t k = 1; k < g.size(); ++k) {
      const Exps mm = mul(g[k].m, sg);
      if (truncated(mm)) continue;
      acc[mm] -= g[k].c;
    }
    Poly out;
    for (auto& [m, c] : acc)
      if (c != 0) out.push_back({m, c});
    return out;
  }
};

// ------------------------------------------------------------ MonomialOrder

MonomialOrder MonomialOrder::degrevlex(std::vector<VarTag> ranking) {
  return {OrderKind::Degrevlex, {std::move(ranking)}, {}};
}

MonomialOrder MonomialOrder::lex(std::vector<VarTag> ranking) {
  return {OrderKind::Lex, {std::move(ranking)}, {}};
}

MonomialOrder MonomialOrder::block(std::vector<std::vector<VarTag>> blocks) {
  return {OrderKind::Block, std::move(blocks), {}};
}

MonomialOrder MonomialOrder::novikov_last(const std::vector<VarTag>& vars, bool local_novikov) {
  std::vector<VarTag> aux, gens, nov, params;
  for (auto v : vars) {
    switch (v.kind) {
      case VarKind::WedgeR: aux.push_back(v); break;
      case VarKind::Novikov: nov.push_back(v); break;
      case VarKind::EquivParam:
      case VarKind::RootParam:
      case VarKind::Deformation:
      case VarKind::LoopParam:
      case VarKind::Auxiliary: params.push_back(v); break;
      default: gens.push_back(v); break;
    }
  }
  // Higher level first inside a block: larger wedges of deeper levels are
  // eliminated in favour of lower ones.
  auto by_rank = [](VarTag a, VarTag b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.i != b.i) return a.i > b.i;
    if (a.j != b.j) return a.j > b.j;
    return a.k > b.k;
  };
  MonomialOrder order{OrderKind::Block, {}, {}};
  std::vector<std::vector<VarTag>*> layout{&aux, &gens, &nov, &params};
  if (local_novikov) layout = {&nov, &aux, &gens, &params};
  for (auto* b : layout) {
    if (b->empty()) continue;
    std::sort(b->begin(), b->end(), by_rank);
    order.blocks.push_back(*b);
    order.local.push_back(local_novikov && b == &nov);
  }
  return order;
}

std::vector<VarTag> MonomialOrder::variables() const {
  std::vector<VarTag> out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

// ------------------------------------------------------------ ReducedBasis

const std::vector<VarTag>& ReducedBasis::variables() const { return impl_->vars; }
const MonomialOrder& ReducedBasis::order() const { return impl_->order; }
const std::optional<TruncationPolicy>& ReducedBasis::truncation() const { return impl_->trunc; }
std::size_t ReducedBasis::size() const { return impl_->basis.size(); }

std::vector<MultiPoly> ReducedBasis::polynomials() const {
  std::vector<MultiPoly> out;
  for (const auto& p : impl_->basis) out.push_back(impl_->to_multipoly(p));
  return out;
}

std::vector<Monomial> ReducedBasis::leading_monomials() const {
  std::vector<Monomial> out;
  for (const auto& p : impl_->basis) out.push_back(impl_->to_monomial(p.front().m));
  return out;
}

MultiPoly ReducedBasis::normal_form(const MultiPoly& p) const {
  const Poly in = impl_->from_multipoly(p);
  std::vector<const Poly*> reducers;
  for (const auto& b : impl_->basis) reducers.push_back(&b);
  return impl_->to_multipoly(impl_->reduce(in, reducers, impl_->lead_mask, nullptr));
}

bool ReducedBasis::contains_ideal(const ReducedBasis& other) const {
  for (const auto& p : other.polynomials())
    if (!contains(p)) return false;
  return true;
}

std::vector<Monomial> ReducedBasis::standard_monomials() const {
  const Impl& r = *impl_;
  auto in_lead_ideal = [&](const Exps& m) {
    const std::uint64_t mm = support_mask(m, r.n());
    for (std::size_t k = 0; k < r.basis.size(); ++k) {
      if ((r.lead_mask[k] & ~mm) != 0) continue;
      if (r.divides(r.basis[k].front().m, m)) return true;
    }
    return false;
  };
  std::vector<Exps> found;
  Exps one;
  if (in_lead_ideal(one)) return {};
  // Finite iff every variable has a pure power among the leads.
  for (int i = 0; i < r.n(); ++i) {
    bool pure = false;
    for (const auto& g : r.basis) {
      const Exps& m = g.front().m;
      bool only_i = m.e[i] > 0;
      for (int k = 0; k < r.n() && only_i; ++k) only_i = k == i || m.e[k] == 0;
      pure = pure || only_i;
    }
    if (!pure) throw RankError("standard monomials: staircase is infinite", -1, -1);
  }
  std::deque<Exps> queue{one};
  std::set<std::vector<std::int16_t>> seen{{one.e.begin(), one.e.begin() + r.n()}};
  while (!queue.empty()) {
    Exps m = queue.front();
    queue.pop_front();
    found.push_back(m);
    if (found.size() > r.limits.max_standard_monomials)
      throw RankError("standard monomials: staircase is infinite or too large", -1, -1);
    for (int i = 0; i < r.n(); ++i) {
      Exps next = m;
      ++next.e[i];
      std::vector<std::int16_t> key(next.e.begin(), next.e.begin() + r.n());
      if (seen.count(key)) continue;
      seen.insert(key);
      if (!in_lead_ideal(next)) queue.push_back(next);
    }
  }
  std::sort(found.begin(), found.end(),
            [&](const Exps& a, const Exps& b) { return r.cmp(a, b) < 0; });
  std::vector<Monomial> out;
  for (const auto& e : found) out.push_back(r.to_monomial(e));
  return out;
}

Monomial ReducedBasis::leading_monomial(const MultiPoly& p) const {
  const Poly in = impl_->from_multipoly(p);
  if (in.empty()) throw DomainError("leading_monomial of zero");
  return impl_->to_monomial(in.front().m);
}

int ReducedBasis::compare(const Monomial& a, const Monomial& b) const {
  const Poly pa = impl_->from_multipoly(MultiPoly(a));
  const Poly pb = impl_->from_multipoly(MultiPoly(b));
  return impl_->cmp(pa.front().m, pb.front().m);
}

// ---------------------------------------------------------------- groebner

namespace {

struct Pair {
  std::size_t i, j;
  Exps lcm;
  int degree;
};

}  // namespace

ReducedBasis groebner(const std::vector<MultiPoly>& relations, const MonomialOrder& order,
                      std::optional<TruncationPolicy> trunc, const GroebnerLimits& limits) {
  auto impl = std::make_shared<ReducedBasis::Impl>();
  impl->order = order;
  impl->trunc = trunc;
  impl->limits = limits;
  for (std::size_t blk = 0; blk < order.blocks.size(); ++blk) {
    const auto& b = order.blocks[blk];
    impl->vars.insert(impl->vars.end(), b.begin(), b.end());
    impl->block_end.push_back(static_cast<int>(impl->vars.size()));
    const bool local = blk < order.local.size() && order.local[blk];
    if (local) {
      if (!trunc) throw DomainError("a local block needs a Novikov truncation");
      for (auto v : b)
        if (!v.is_novikov()) throw DomainError("only Novikov variables may be ordered locally");
    }
    impl->local_block.push_back(local);
  }
  {
    std::vector<VarTag> sorted = impl->vars;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw DomainError("monomial order lists a variable twice");
  }
  if (impl->n() > kMaxVars || impl->n() > 64)
    throw ResourceError("groebner: too many variables");
  for (auto v : impl->vars) impl->novikov.push_back(v.is_novikov());
  ReducedBasis::Impl& R = *impl;

  std::vector<Poly> inputs;
  for (const auto& rel : relations) {
    Poly p = R.from_multipoly(rel);
    if (!p.empty()) inputs.push_back(std::move(p));
  }
  // Truncation ideal: every Novikov monomial of total degree cap+1.
  if (trunc) {
    std::vector<int> nov_idx;
    for (int i = 0; i < R.n(); ++i)
      if (R.novikov[i]) nov_idx.push_back(i);
    const int target = trunc->novikov_total_degree_cap + 1;
    std::vector<int> e(nov_idx.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
      if (pos + 1 == nov_idx.size() || nov_idx.empty()) {
        if (nov_idx.empty()) return;
        e[pos] = left;
        Exps m;
        for (std::size_t a = 0; a < nov_idx.size(); ++a)
          m.e[nov_idx[a]] = static_cast<std::int16_t>(e[a]);
        inputs.push_back(Poly{{m, Rational(1)}});
        return;
      }
      for (int x = left; x >= 0; --x) {
        e[pos] = x;
        rec(pos + 1, left - x);
      }
    };
    rec(0, target);
  }
  // Truncation monomials are not "truncated away" by from_multipoly because
  // they are built directly above.

  std::vector<Poly> G;
  std::vector<bool> active;
  std::vector<std::uint64_t> masks;
  std::vector<Pair> pairs;
  std::size_t steps = 0;

  auto reducers = [&]() {
    std::vector<const Poly*> out;
    std::vector<std::uint64_t> ms;
    for (std::size_t k = 0; k < G.size(); ++k)
      if (active[k]) {
        out.push_back(&G[k]);
        ms.push_back(masks[k]);
      }
    return std::make_pair(out, ms);
  };

  // Gebauer–Möller update with new element h (already appended at index hi).
  auto update = [&](std::size_t hi) {
    const Exps& lh = G[hi].front().m;
    std::vector<Pair> C, D;
    for (std::size_t g = 0; g < hi; ++g) {
      if (!active[g]) continue;
      Exps l = R.lcm(lh, G[g].front().m);
      C.push_back({g, hi, l, R.total(l)});
    }
    while (!C.empty()) {
      Pair p = C.back();
      C.pop_back();
      const bool cop = R.coprime(lh, G[p.i].front().m);
      bool keep = cop;
      if (!keep) {
        keep = true;
        for (const auto* set : {&C, &D})
          for (const auto& o : *set)
            if (R.divides(o.lcm, p.lcm)) keep = false;
      }
      if (keep) D.push_back(p);
    }
    std::vector<Pair> E;
    for (const auto& p : D)
      if (!R.coprime(lh, G[p.i].front().m)) E.push_back(p);
    std::vector<Pair> Bn;
    for (const auto& p : pairs) {
      const bool drop = R.divides(lh, p.lcm) &&
                        !(R.lcm(G[p.i].front().m, lh) == p.lcm) &&
                        !(R.lcm(lh, G[p.j].front().m) == p.lcm);
      if (!drop) Bn.push_back(p);
    }
    Bn.insert(Bn.end(), E.begin(), E.end());
    pairs = std::move(Bn);
    for (std::size_t g = 0; g < hi; ++g)
      if (active[g] && R.divides(lh, G[g].front().m)) active[g] = false;
  };

  auto insert = [&](Poly h) {
    ReducedBasis::Impl::make_monic(h);
    G.push_back(std::move(h));
    active.push_back(true);
    masks.push_back(support_mask(G.back().front().m, R.n()));
    if (G.size() > limits.max_basis_size) throw ResourceError("groebner: basis size limit exceeded");
    update(G.size() - 1);
  };

  // Low-degree inputs first keeps intermediate growth down.
  std::stable_sort(inputs.begin(), inputs.end(), [&](const Poly& a, const Poly& b) {
    return R.cmp(a.front().m, b.front().m) < 0;
  });
  for (auto& f : inputs) {
    auto [red, ms] = reducers();
    Poly h = R.reduce(f, red, ms, &steps);
    if (!h.empty()) insert(std::move(h));
  }

  while (!pairs.empty()) {
    // Normal selection: smallest lcm (degree, then order).
    std::size_t best = 0;
    for (std::size_t k = 1; k < pairs.size(); ++k) {
      const auto& a = pairs[k];
      const auto& b = pairs[best];
      if (a.degree < b.degree || (a.degree == b.degree && R.cmp(a.lcm, b.lcm) < 0)) best = k;
    }
    Pair p = pairs[best];
    pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(best));
    Poly s = R.spoly(G[p.i], G[p.j]);
    if (s.empty()) continue;
    auto [red, ms] = reducers();
    Poly h = R.reduce(s, red, ms, &steps);
    if (!h.empty()) insert(std::move(h));
  }

  // Minimal basis = active elements; now inter-reduce tails.
  std::vector<Poly> minimal;
  for (std::size_t k = 0; k < G.size(); ++k)
    if (active[k]) minimal.push_back(G[k]);
  std::sort(minimal.begin(), minimal.end(),
            [&](const Poly& a, const Poly& b) { return R.cmp(a.front().m, b.front().m) < 0; });
  std::vector<std::uint64_t> mm;
  for (const auto& p : minimal) mm.push_back(support_mask(p.front().m, R.n()));
  for (std::size_t k = 0; k < minimal.size(); ++k) {
    std::vector<const Poly*> others;
    std::vector<std::uint64_t> om;
    for (std::size_t o = 0; o < minimal.size(); ++o)
      if (o != k) {
        others.push_back(&minimal[o]);
        om.push_back(mm[o]);
      }
    Poly tail(minimal[k].begin() + 1, minimal[k].end());
    Poly reduced_tail = R.reduce(tail, others, om, &steps);
    Poly full{minimal[k].front()};
    full.insert(full.end(), reduced_tail.begin(), reduced_tail.end());
    minimal[k] = std::move(full);
  }
  impl->basis = std::move(minimal);
  for (const auto& p : impl->basis) impl->lead_mask.push_back(support_mask(p.front().m, R.n()));
  return ReducedBasis(std::move(impl));
}

}  // namespace qkflag
