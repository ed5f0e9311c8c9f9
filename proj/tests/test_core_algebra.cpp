#include <random>

#include "doctest.h"
#include "qkflag/errors.hpp"
#include "qkflag/groebner.hpp"
#include "qkflag/multipoly.hpp"
#include "qkflag/symmetric.hpp"

using namespace qkflag;

namespace {

MultiPoly X(VarTag v, int e = 1) { return MultiPoly::variable(v, e); }

const VarTag P = var::P(1, 1);
const VarTag Q = var::Q(1);

}  // namespace

TEST_CASE("laurent arithmetic in P") {
  CHECK((1 - X(P)) * (1 + X(P)) == 1 - X(P, 2));
  CHECK(X(P, -1) * X(P) == MultiPoly(1));
  CHECK_THROWS_AS(Monomial::of(Q, -1), DomainError);
}

TEST_CASE("novikov truncation drops high degree") {
  TruncationPolicy cap{3};
  CHECK(mul(X(Q, 3), X(Q), cap).is_zero());
  CHECK(mul(X(Q, 2), X(Q), cap) == X(Q, 3));
  CHECK(pow(1 + X(Q), 5, cap) == 1 + 5 * X(Q) + 10 * X(Q, 2) + 10 * X(Q, 3));
}

TEST_CASE("root parameters invert") {
  CHECK(root_param(1, 1, 2) * root_param(1, 2, 1) == MultiPoly(1));
  CHECK_THROWS_AS(root_param(1, 1, 1), DomainError);
}

TEST_CASE("variable names round trip") {
  for (VarTag v : {var::P(1, 2), var::S(2, 1), var::R(1, 3), var::Rhat(0, 1), var::Q(1),
                   var::Q(2, 1), var::Lambda(3), var::LambdaT(1, 2), var::y(), var::q(),
                   var::t(), parse_var("lam(1,1,2)")})
    CHECK(parse_var(v.name()) == v);
  CHECK_THROWS_AS(parse_var("Z(1)"), DomainError);
  CHECK_THROWS_AS(parse_var("lam(1,2,1)"), DomainError);
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
  CHECK_THROWS_AS(parse_rational("x"), DomainError);
}

TEST_CASE("normal form modulo the quantum projective line") {
  auto order = MonomialOrder::block({{P}, {Q}});
  auto gb = groebner({pow(1 - X(P), 2) - X(Q)}, order);
  CHECK(gb.normal_form(X(P, 2)) == 2 * X(P) - 1 + X(Q));
  CHECK_THROWS_AS(gb.standard_monomials(), RankError);

  auto numeric = groebner({pow(1 - X(P), 2) - Rational(1, 3)}, MonomialOrder::degrevlex({P}));
  CHECK(numeric.standard_monomials() == std::vector<Monomial>{Monomial(), Monomial::of(P)});

  auto truncated = groebner({pow(1 - X(P), 2) - X(Q)}, order, TruncationPolicy{3});
  CHECK(truncated.standard_monomials().size() == 8);
  CHECK(truncated.normal_form(X(Q, 4)).is_zero());
}

TEST_CASE("groebner basis of a zero-dimensional system") {
  const VarTag a = var::P(1, 1), b = var::P(1, 2);
  auto gb = groebner({X(a) + X(b) - 3, X(a) * X(b) - 2}, MonomialOrder::lex({a, b}));
  CHECK(gb.standard_monomials().size() == 2);
  CHECK(gb.contains(X(a, 2) - 3 * X(a) + 2));
  CHECK(gb.contains(X(b, 2) - 3 * X(b) + 2));
  CHECK_FALSE(gb.contains(X(a) - 1));
  CHECK_THROWS_AS(gb.normal_form(X(var::P(2, 1))), DomainError);
}

TEST_CASE("normal form is linear and idempotent") {
  const VarTag a = var::P(1, 1), b = var::P(1, 2);
  auto gb = groebner({X(a, 3) - X(b) * X(a) + 1, X(b, 2) - X(a) - 2},
                     MonomialOrder::degrevlex({a, b}));
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5), ex(0, 5);
  for (int trial = 0; trial < 20; ++trial) {
    MultiPoly f, g;
    for (int t = 0; t < 4; ++t) {
      f += coef(rng) * X(a, ex(rng)) * X(b, ex(rng));
      g += coef(rng) * X(a, ex(rng)) * X(b, ex(rng));
    }
    auto nf = gb.normal_form(f);
    CHECK(gb.normal_form(nf) == nf);
    CHECK(gb.normal_form(f + 3 * g) == nf + 3 * gb.normal_form(g));
    CHECK(gb.normal_form(f * g) == gb.normal_form(nf * gb.normal_form(g)));
  }
}

TEST_CASE("symmetric functions") {
  std::vector<VarTag> xs{var::P(1, 1), var::P(1, 2), var::P(1, 3)};
  auto e2 = elementary_symmetric(xs, 2);
  CHECK(e2.size() == 3);
  CHECK(elementary_symmetric(xs, 4).is_zero());
  CHECK(elementary_symmetric(xs, 0) == MultiPoly(1));
  // Newton-type identity: sum_j (-1)^j e_j h_{m-j} = 0 for m >= 1.
  for (int m = 1; m <= 5; ++m) {
    MultiPoly acc;
    for (int j = 0; j <= m; ++j)
      acc += (j % 2 ? -1 : 1) * elementary_symmetric(xs, j) * complete_homogeneous(xs, m - j);
    CHECK(acc.is_zero());
  }
  std::vector<VarTag> gens{var::S(1, 1), var::S(1, 2), var::S(1, 3)};
  auto p2 = X(xs[0], 2) + X(xs[1], 2) + X(xs[2], 2);
  CHECK(symmetric_decompose(p2, xs, gens) == X(gens[0], 2) - 2 * X(gens[1]));
  CHECK_THROWS_AS(symmetric_decompose(X(xs[0]), xs, gens), DomainError);
  std::vector<MultiPoly> egens;
  for (auto g : gens) egens.push_back(X(g));
  CHECK(complete_from_elementary(egens, 2) == X(gens[0], 2) - X(gens[1]));
}

TEST_CASE("degenerate ideals") {
  const VarTag x = var::P(1, 1);
  auto lin = groebner({X(x) - 1}, MonomialOrder::degrevlex({x}));
  CHECK(lin.normal_form(X(x, 3)) == MultiPoly(1));
  CHECK(lin.standard_monomials().size() == 1);

  auto empty = groebner({}, MonomialOrder::degrevlex({x}));
  CHECK(empty.size() == 0);
  CHECK(empty.normal_form(X(x, 2) + 1) == X(x, 2) + 1);
  CHECK_THROWS_AS(empty.standard_monomials(), RankError);

  auto unit = groebner({X(x) * 0 + 5}, MonomialOrder::degrevlex({x}));
  CHECK(unit.contains(X(x, 7)));
}
