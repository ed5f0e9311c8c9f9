#include <set>

#include "doctest.h"
#include "qkflag/flag_geometry.hpp"
#include "qkflag/symmetric.hpp"

using namespace qkflag;

namespace {

MultiPoly X(VarTag v, int e = 1) { return MultiPoly::variable(v, e); }

std::vector<FlagShape> shapes_up_to(int max_n) {
  std::vector<FlagShape> out;
  for (int N = 2; N <= max_n; ++N)
    for (int mask = 1; mask < (1 << (N - 1)); ++mask) {
      std::vector<int> dims;
      for (int b = 0; b < N - 1; ++b)
        if (mask & (1 << b)) dims.push_back(b + 1);
      out.emplace_back(dims, N);
    }
  return out;
}

}  // namespace

TEST_CASE("shape parsing") {
  auto s = FlagShape::parse("1,2:3");
  CHECK(s.n() == 2);
  CHECK(s.v(0) == 0);
  CHECK(s.v(3) == 3);
  CHECK(s.name() == "Fl(1,2;3)");
  CHECK(FlagShape::parse(s.spec()) == s);
  CHECK_THROWS_AS(FlagShape::parse("3,2:4"), DomainError);
  CHECK_THROWS_AS(FlagShape::parse("2:2"), DomainError);
  CHECK_THROWS_AS(FlagShape::parse("a:3"), DomainError);
}

TEST_CASE("fixed point counts") {
  CHECK(enumerate_fixed_points(FlagShape({1}, 2)).size() == 2);
  CHECK(enumerate_fixed_points(FlagShape({1, 2}, 3)).size() == 12);
  CHECK(enumerate_fixed_points(FlagShape({2}, 4)).size() == 12);
  CHECK(orbit_count(FlagShape({2}, 4)) == 6);
  CHECK(orbit_count(FlagShape({1, 2}, 3)) == 6);
  CHECK(orbit_count(FlagShape({1, 2, 3}, 4)) == 24);

  for (const auto& shape : shapes_up_to(5)) {
    auto pts = enumerate_fixed_points(shape);
    CHECK(static_cast<long>(pts.size()) == fixed_point_count(shape));
    CHECK(std::set<FixedPoint>(pts.begin(), pts.end()).size() == pts.size());
    CHECK(std::find(pts.begin(), pts.end(), distinguished_point(shape)) != pts.end());
    CHECK(orbit_count(shape) * weyl_order(shape) >= fixed_point_count(shape));
  }
}

TEST_CASE("theta lies in every fixed-point cone") {
  for (const auto& shape : shapes_up_to(5))
    for (const auto& fp : enumerate_fixed_points(shape)) {
      auto cone = cone_of(shape, fp);
      CHECK(cone.contains_interior(theta(shape)));
    }
}

TEST_CASE("weyl action") {
  FlagShape shape({2}, 3);
  WeylElement swap{{{2, 1}}};
  const VarTag a = var::P(1, 1), b = var::P(1, 2);
  CHECK(weyl_act(shape, swap, elementary_symmetric(shape.roots(1), 1)) ==
        elementary_symmetric(shape.roots(1), 1));
  CHECK(weyl_act(shape, swap, X(a)) == X(b));
  CHECK(weyl_act(shape, swap, root_param(1, 1, 2)) == root_param(1, 2, 1));
  CHECK(weyl_act(shape, swap, X(var::Q(1, 1))) == X(var::Q(1, 2)));
  CHECK(weyl_symmetrize(shape, X(a)) == Rational(1, 2) * (X(a) + X(b)));

  FlagShape big({1, 3}, 4);
  auto group = weyl_group(big);
  CHECK(group.size() == 6);
  MultiPoly p = X(var::P(2, 1), 2) * X(var::P(2, 2)) + 3 * X(var::P(1, 1)) * X(var::P(2, 3));
  auto sym = weyl_symmetrize(big, p);
  CHECK(is_weyl_invariant(big, sym));
  CHECK_FALSE(is_weyl_invariant(big, p));
  for (const auto& w : group) {
    CHECK(weyl_symmetrize(big, weyl_act(big, w, p)) == sym);
    CHECK((w * w.inverse()) == WeylElement::identity(big));
  }
}

TEST_CASE("localization assignments") {
  FlagShape p1({1}, 2);
  auto sub = localization_substitution(p1, distinguished_point(p1), LocalizationMode::Classical);
  CHECK(sub.at(var::P(1, 1)) == X(var::Lambda(1)));

  FlagShape f3({1, 2}, 3);
  FixedPoint fp{{{2}, {1, 2}}};
  CHECK(localization_substitution(f3, fp, LocalizationMode::Classical).at(var::P(1, 1)) ==
        X(var::Lambda(2)));

  std::set<std::pair<int, std::set<int>>> seen;
  for (const auto& pt : enumerate_fixed_points(f3)) {
    auto s = localization_substitution(f3, pt, LocalizationMode::Classical);
    auto idx = [&](VarTag v) { return s.at(v).variables().front().j; };
    const int a = idx(var::P(1, 1));
    std::set<int> level2{idx(var::P(2, 1)), idx(var::P(2, 2))};
    CHECK(level2.size() == 2);
    CHECK(level2.count(a) == 1);
    seen.insert({a, level2});
  }
  CHECK(seen.size() == 6);

  for (const auto& shape : shapes_up_to(5))
    for (const auto& pt : enumerate_fixed_points(shape)) {
      auto tilde = localization_substitution(shape, pt, LocalizationMode::TildeT);
      auto classical = localization_substitution(shape, pt, LocalizationMode::Classical);
      for (int i = 1; i <= shape.n(); ++i) {
        std::set<MultiPoly::Terms> values;
        for (int j = 1; j <= shape.v(i); ++j) {
          CHECK(classical.at(var::P(i, j)) == X(var::Lambda(pt.composite(i, j))));
          values.insert(classical.at(var::P(i, j)).terms());
          CHECK(tilde.at(var::P(i, j)).size() == 1);
        }
        CHECK(static_cast<int>(values.size()) == shape.v(i));
      }
    }
}

TEST_CASE("phi map") {
  FlagShape shape({1, 2}, 3);
  CHECK(phi_map(shape, elementary_symmetric(shape.roots(2), 2)) == X(var::S(2, 2)));
  CHECK(phi_map(shape, X(var::P(1, 1), 2)) == X(var::S(1, 1), 2));
  FlagShape g({2}, 3);
  CHECK(phi_map(g, X(var::Q(1, 1)) + X(var::Q(1, 2))) == 2 * X(var::Q(1)));
  CHECK_THROWS_AS(phi_map(g, X(var::P(1, 1))), DomainError);
  MultiPoly inv = X(var::P(1, 1), 2) + X(var::P(1, 2), 2);
  CHECK(phi_map(g, weyl_symmetrize(g, inv)) == phi_map(g, inv));
}
