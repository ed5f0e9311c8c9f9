#include "doctest.h"
#include "qkflag/errors.hpp"
#include "qkflag/jfunction.hpp"

using namespace qkflag;

namespace {

DegreeVector deg(std::vector<std::vector<int>> d) { return DegreeVector{std::move(d)}; }

std::vector<FlagShape> shapes_up_to_4() {
  std::vector<FlagShape> out;
  for (int N = 2; N <= 4; ++N)
    for (int mask = 1; mask < (1 << (N - 1)); ++mask) {
      std::vector<int> dims;
      for (int d = 1; d < N; ++d)
        if (mask & (1 << (d - 1))) dims.push_back(d);
      out.emplace_back(dims, N);
    }
  return out;
}

}  // namespace

TEST_CASE("factor products cancel canonically") {
  const Monomial x = Monomial::of(var::P(1, 1)) * Monomial::of(var::Lambda(1), -1);
  QFactorProduct a;
  a.multiply_factor(x, 2, 1);
  a.multiply_factor(x, 2, -1);
  CHECK(a == QFactorProduct::one());

  // 1 − x q^{-1} = −x q^{-1}(1 − x⁻¹ q)
  QFactorProduct b, c;
  b.multiply_factor(x, -1, 1);
  c.multiply_factor(x.inverse(), 1, 1);
  CHECK_FALSE(b == c);
  CHECK(b.q_power() == -1);
  CHECK(b.coefficient() == -1);
  CHECK(b.factors() == c.factors());
  CHECK(q_degree(b) == 0);

  std::map<VarTag, Rational> at{{var::P(1, 1), Rational(3)}, {var::Lambda(1), Rational(5)}, {var::q(), Rational(2, 7)}};
  CHECK(b.evaluate(at) == 1 - Rational(3, 5) * Rational(7, 2));

  QFactorProduct z;
  z.multiply_factor(Monomial(), 0, 1);
  CHECK(z.is_zero());
  CHECK(q_degree(z) == kMinusInfinity);
  QFactorProduct bad;
  CHECK_THROWS_AS(bad.multiply_factor(Monomial(), 0, -1), DomainError);
}

TEST_CASE("J_d terms of the projective line") {
  FlagShape p1({1}, 2);
  CHECK(build_jd(p1, deg({{0}})) == QFactorProduct::one());
  CHECK(q_degree(build_jd(p1, deg({{0}}))) == 0);
  CHECK(degree_formula(p1, deg({{0}})) == 0);

  QFactorProduct expect;
  for (int r = 1; r <= 2; ++r)
    expect.multiply_factor(Monomial::of(var::P(1, 1)) * Monomial::of(var::Lambda(r), -1), 1, -1);
  CHECK(build_jd(p1, deg({{1}})) == expect);
  CHECK(q_degree(build_jd(p1, deg({{1}}), distinguished_point(p1))) == -2);
  CHECK(degree_formula(p1, deg({{1}})) == -2);
  CHECK(q_degree(build_jd(p1, deg({{2}}))) == -6);  // C(3,2)·2
  CHECK(degree_formula(p1, deg({{2}})) == -6);

  auto r1 = verify_bounds(p1, deg({{1}}));
  CHECK(r1.passed());
  auto r3 = verify_bounds(p1, deg({{3}}));
  CHECK(r3.q_degree == -12);
  CHECK(r3.passed());
  CHECK_THROWS_AS(verify_bounds(p1, deg({{0}})), DomainError);

  auto census = pole_audit(p1, deg({{1}}));
  CHECK(census.clean());
  CHECK(census.poles_at_roots_of_unity == 2);
  CHECK(pole_audit(p1, deg({{0}})).poles_at_roots_of_unity == 0);
}

TEST_CASE("restriction kills degrees off the cone") {
  FlagShape f({1, 2}, 3);
  // d^1_1 < d^2_1 pairs P^1_1 with P^2_1 at Ã.
  auto d = deg({{0}, {1, 0}});
  CHECK(build_jd(f, d, distinguished_point(f)).is_zero());
  CHECK_FALSE(build_jd(f, d).is_zero());
  auto d2 = deg({{1}, {1, 0}});
  auto restricted = build_jd(f, d2, distinguished_point(f));
  CHECK_FALSE(restricted.is_zero());
  CHECK(q_degree(restricted) == degree_formula(f, d2));
}

TEST_CASE("degree identity and bounds on small shapes") {
  for (const auto& shape : shapes_up_to_4())
    for (const auto& d : DegreeVector::enumerate(shape, 4)) {
      if (d.is_zero()) continue;
      auto rep = verify_bounds(shape, d);
      INFO(shape.name() << " d=" << d.to_string() << " " << rep.to_json().dump());
      CHECK(rep.passed());
    }
}

TEST_CASE("restricted terms agree with symbolic evaluation") {
  FlagShape f({1, 2}, 3);
  std::map<VarTag, Rational> at{{var::Lambda(1), Rational(2)},
                                {var::Lambda(2), Rational(3)},
                                {var::Lambda(3), Rational(7)},
                                {var::q(), Rational(1, 5)}};
  const auto fp = distinguished_point(f);
  for (const auto& [v, p] : localization_substitution(f, fp, LocalizationMode::Classical))
    at[v] = evaluate_exact(p, at);
  for (int j = 1; j <= 2; ++j)
    for (int k = j + 1; k <= 2; ++k) at[root_param(2, j, k).terms().begin()->first.factors()[0].first] = Rational(11, 3);
  for (const auto& d : DegreeVector::enumerate(f, 3)) {
    auto full = build_jd(f, d);
    auto restricted = build_jd(f, d, fp);
    if (restricted.is_zero()) continue;
    CHECK(full.evaluate(at) == restricted.evaluate(at));
  }
}

TEST_CASE("q-difference residual") {
  FlagShape p1({1}, 2);
  for (int cap : {1, 3}) {
    auto rep = qde_residual(p1, 1, 1, cap);
    CHECK(rep.vanishes_below_cap);
    CHECK(rep.boundary_only);
    CHECK(rep.nonzero_count == 1);
  }
  FlagShape f({1, 2}, 3);
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= f.v(i); ++j) {
      auto rep = qde_residual(f, i, j, 3);
      INFO(rep.to_json().dump());
      CHECK(rep.vanishes_below_cap);
      CHECK(rep.boundary_only);
      CHECK(rep.nonzero_count > 0);
    }
  CHECK_THROWS_AS(qde_residual(f, 3, 1, 2), DomainError);
}
