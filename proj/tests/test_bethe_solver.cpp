#include "doctest.h"
#include "qkflag/bethe_solver.hpp"
#include "qkflag/errors.hpp"
#include "qkflag/symmetric.hpp"

using namespace qkflag;

namespace {

std::map<VarTag, Rational> lam(std::initializer_list<long> num, long den = 1) {
  std::map<VarTag, Rational> m;
  int r = 1;
  for (long a : num) m[var::Lambda(r++)] = Rational(a, den);
  return m;
}

std::vector<double> sorted_real(const std::vector<Complex>& zs) {
  std::vector<double> out;
  for (auto z : zs) {
    CHECK(std::abs(z.imag()) < 1e-9);
    out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

MultiPoly e_level(const FlagShape& shape, int level, int l) {
  return elementary_symmetric(shape.roots(level), l);
}

}  // namespace

TEST_CASE("seeds are the fixed points") {
  FlagShape p1({1}, 2);
  auto seeds = seed_solutions(p1, lam({2, 3}));
  REQUIRE(seeds.size() == 2);
  CHECK(seeds[0].values[0] == Complex(2, 0));
  CHECK(seeds[1].values[0] == Complex(3, 0));

  FlagShape g({2}, 3);
  auto s2 = seed_solutions(g, lam({2, 3, 5}));
  CHECK(s2.size() == 6);
  CHECK(orbit_representatives(s2).size() == 3);

  FlagShape f({1, 2}, 3);
  auto s3 = seed_solutions(f, lam({2, 3, 5}));
  CHECK(s3.size() == 12);
  CHECK(orbit_representatives(s3).size() == 6);

  for (int N = 2; N <= 5; ++N)
    for (int mask = 1; mask < (1 << (N - 1)); ++mask) {
      std::vector<int> dims;
      for (int d = 1; d < N; ++d)
        if (mask & (1 << (d - 1))) dims.push_back(d);
      FlagShape s(dims, N);
      auto seeds_s = seed_solutions(s, random_equivariant_values(s, 3));
      CHECK(static_cast<long>(seeds_s.size()) == fixed_point_count(s));
      CHECK(static_cast<long>(orbit_representatives(seeds_s).size()) == orbit_count(s));
    }

  CHECK_THROWS_AS(seed_solutions(p1, lam({1, 1})), DegeneracyError);
}

TEST_CASE("projective line oracles") {
  FlagShape p1({1}, 2);
  BetheSystem sys(p1);
  auto target = lam({2, 3});
  target[var::Q(1)] = Rational(1, 10);
  auto sols = continue_to(sys, seed_solutions(p1, target), target);
  REQUIRE(sols.size() == 2);
  std::vector<Complex> ps{sols[0].values[0], sols[1].values[0]};
  auto r = sorted_real(ps);
  const double d = std::sqrt(25.0 - 4 * 5.4);
  CHECK(r[0] == doctest::Approx((5 - d) / 2).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx((5 + d) / 2).epsilon(1e-12));
  for (double p : r) CHECK((1 - p / 2) * (1 - p / 3) == doctest::Approx(0.1));
  for (const auto& s : sols) CHECK(s.residual < 1e-10);

  // Nonequivariant: 1 ± √Q.
  auto flat = lam({1, 1});
  flat[var::Q(1)] = Rational(1, 4);
  CHECK_THROWS_AS(seed_solutions(p1, flat), DegeneracyError);
  auto ne = solve_bethe(p1, flat);
  auto table = sorted_real(eigenvalue_table(p1, ne, e_level(p1, 1, 1), flat));
  REQUIRE(table.size() == 2);
  CHECK(table[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(table[1] == doctest::Approx(1.5).epsilon(1e-12));

  auto ones = eigenvalue_table(p1, ne, MultiPoly(1), flat);
  for (auto z : ones) CHECK(z == Complex(1, 0));
}

TEST_CASE("safety radius and continuity") {
  FlagShape p1({1}, 2);
  BetheSystem sys(p1);
  auto target = lam({2, 3});
  target[var::Q(1)] = Rational(3, 4);
  CHECK_THROWS_AS(continue_to(sys, seed_solutions(p1, target), target), DomainError);
  HomotopyOptions forced;
  forced.force = true;
  CHECK(continue_to(sys, seed_solutions(p1, target), target, forced).size() == 2);

  FlagShape f({1, 2}, 3);
  BetheSystem sf(f);
  auto near = random_equivariant_values(f, 5);
  near[var::Q(1)] = Rational(1, 100000000);
  near[var::Q(2)] = Rational(1, 100000000);
  auto seeds = seed_solutions(f, near);
  auto sols = continue_to(sf, seeds, near);
  for (std::size_t k = 0; k < seeds.size(); ++k)
    for (std::size_t j = 0; j < seeds[k].values.size(); ++j)
      CHECK(std::abs(sols[k].values[j] - seeds[k].values[j]) < 1e-6);
}

TEST_CASE("Weyl stability of canonical forms") {
  FlagShape f({1, 3}, 4);
  auto vals = random_equivariant_values(f, 9);
  vals[var::Q(1)] = Rational(1, 7);
  vals[var::Q(2)] = Rational(1, 5);
  auto sols = solve_bethe(f, vals);
  for (const auto& s : orbit_representatives(sols)) {
    const auto canon = s.canonical(f);
    for (const auto& w : weyl_group(f)) {
      BetheSolution moved = s;
      const auto vars = f.all_roots();
      for (std::size_t k = 0; k < vars.size(); ++k) {
        const VarTag src = var::P(vars[k].i, w.image(vars[k].i, vars[k].j));
        const auto pos = std::find(vars.begin(), vars.end(), src) - vars.begin();
        moved.values[k] = s.values[static_cast<std::size_t>(pos)];
      }
      const auto c2 = moved.canonical(f);
      for (std::size_t k = 0; k < canon.size(); ++k) CHECK(std::abs(c2[k] - canon[k]) < 1e-12);
    }
  }
}

TEST_CASE("spectrum match against multiplication operators") {
  // ℙ¹ nonequivariant at Q = 1/4.
  FlagShape p1({1}, 2);
  auto flat = lam({1, 1});
  flat[var::Q(1)] = Rational(1, 4);
  auto sols = solve_bethe(p1, flat);
  RingOptions o;
  o.mode = ScalarMode::Numeric;
  o.values = flat;
  auto ring = build_ring(quantum_whitney(p1), o);
  auto rep = spectrum_match(ring, sols, e_level(p1, 1, 1));
  CHECK(rep.passed);
  CHECK(rep.match.max_relative_distance < 1e-12);
  CHECK(spectrum_match(ring, sols, MultiPoly(3)).passed);

  // Fl(1,2;3) at Q = (1/8, 1/9), random Λ.
  FlagShape f({1, 2}, 3);
  auto vals = random_equivariant_values(f, 17);
  vals[var::Q(1)] = Rational(1, 8);
  vals[var::Q(2)] = Rational(1, 9);
  auto fs = solve_bethe(f, vals);
  RingOptions of;
  of.mode = ScalarMode::Numeric;
  of.values = vals;
  auto ringf = build_ring(quantum_whitney(f), of);
  for (auto tau : {e_level(f, 1, 1), e_level(f, 2, 1), e_level(f, 2, 2)}) {
    auto r = spectrum_match(ringf, fs, tau);
    INFO(r.to_json().dump());
    CHECK(r.passed);
  }
  CHECK_THROWS_AS(eigenvalue_table(f, fs, MultiPoly::variable(var::P(2, 1)), vals), DomainError);
}
