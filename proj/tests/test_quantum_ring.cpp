#include <chrono>
#include <random>

#include "doctest.h"
#include "qkflag/quantum_ring.hpp"

using namespace qkflag;

namespace {

MultiPoly X(VarTag v, int e = 1) { return MultiPoly::variable(v, e); }

RingOptions numeric_options(const FlagShape& shape, std::vector<Rational> q, std::uint64_t seed) {
  RingOptions o;
  o.mode = ScalarMode::Numeric;
  o.values = seed ? random_equivariant_values(shape, seed) : unit_equivariant_values(shape);
  for (std::size_t i = 0; i < q.size(); ++i) o.values[var::Q(static_cast<int>(i) + 1)] = q[i];
  return o;
}

}  // namespace

TEST_CASE("quantum K ring of the projective line") {
  FlagShape p1({1}, 2);
  RingOptions formal;
  formal.values = unit_equivariant_values(p1);
  auto ring = build_ring(quantum_whitney(p1, true), formal);
  CHECK(ring.rank() == 2);
  const MultiPoly P = X(var::S(1, 1)), Q = X(var::Q(1));
  CHECK(ring.multiply(1 - P, 1 - P) == Q);
  CHECK(ring.multiply(1, P) == P);
  auto op = ring.mult_operator(P);
  REQUIRE(op.matrix.size() == 2);
  CHECK(op.matrix[0][0].is_zero());
  CHECK(op.matrix[0][1] == Q - 1);
  CHECK(op.matrix[1][0] == MultiPoly(1));
  CHECK(op.matrix[1][1] == MultiPoly(2));
  auto sc = ring.structure_constants();
  CHECK(sc[1][1][0] == Q - 1);
  CHECK(sc[1][1][1] == MultiPoly(2));

  auto numeric = build_ring(quantum_whitney(p1, true), numeric_options(p1, {Rational(1, 4)}, 0));
  auto ev = eigenvalues(numeric.mult_operator(P));
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  REQUIRE(ev.size() == 2);
  CHECK(std::abs(ev[0] - Complex(0.5)) < 1e-14);
  CHECK(std::abs(ev[1] - Complex(1.5)) < 1e-14);
  auto id = numeric.mult_operator(1);
  CHECK(id.rational() == RationalMatrix{{1, 0}, {0, 1}});
}

TEST_CASE("missing parameters are rejected") {
  FlagShape p1({1}, 2);
  CHECK_THROWS_AS(build_ring(quantum_whitney(p1, true)), DomainError);
  RingOptions o;
  o.mode = ScalarMode::Numeric;
  o.values = unit_equivariant_values(p1);
  CHECK_THROWS_AS(build_ring(quantum_whitney(p1, true), o), DomainError);
}

TEST_CASE("rank gate") {
  for (const auto& shape : {FlagShape({1}, 3), FlagShape({2}, 4), FlagShape({1, 2}, 3)}) {
    RingOptions o;
    o.values = random_equivariant_values(shape, 11);
    auto rep = rank_gate(quantum_whitney(shape), classical_whitney(shape), o);
    CHECK(rep.passed);
    CHECK(rep.observed_rank == orbit_count(shape));
    auto wr = rank_gate(wronskian_presentation(shape), std::nullopt, o);
    CHECK(wr.passed);
  }
  // Dropping a relation leaves a bigger (here infinite) quotient.
  FlagShape shape({1}, 3);
  auto broken = quantum_whitney(shape);
  broken.relations.pop_back();
  broken.provenance.pop_back();
  RingOptions o;
  o.values = random_equivariant_values(shape, 11);
  auto rep = rank_gate(broken, classical_whitney(shape), o);
  CHECK_FALSE(rep.passed);
  CHECK_THROWS_AS(build_ring(broken, o), RankError);
}

TEST_CASE("ring axioms and commuting operators") {
  FlagShape shape({1, 2}, 3);
  RingOptions o = numeric_options(shape, {Rational(1, 8), Rational(1, 9)}, 5);
  auto ring = build_ring(quantum_whitney(shape), o);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(ring.rank()) - 1), coef(-3, 3);
  auto random_element = [&] {
    MultiPoly e;
    for (int t = 0; t < 3; ++t) e += coef(rng) * MultiPoly(ring.module_basis()[pick(rng)]);
    return e;
  };
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_element(), b = random_element(), c = random_element();
    CHECK(ring.multiply(ring.multiply(a, b), c) == ring.multiply(a, ring.multiply(b, c)));
    CHECK(ring.multiply(a, b) == ring.multiply(b, a));
    CHECK(ring.multiply(a, b + c) == ring.multiply(a, b) + ring.multiply(a, c));
  }
  std::vector<RationalMatrix> ops;
  for (auto cls : {whitney_class(1, 1), whitney_class(2, 1), whitney_class(2, 2)})
    ops.push_back(ring.mult_operator(cls).rational());
  auto mul = [](const RationalMatrix& x, const RationalMatrix& y) {
    RationalMatrix z(x.size(), std::vector<Rational>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j)
        for (std::size_t k = 0; k < x.size(); ++k) z[i][j] += x[i][k] * y[k][j];
    return z;
  };
  for (std::size_t a = 0; a < ops.size(); ++a)
    for (std::size_t b = 0; b < ops.size(); ++b) CHECK(mul(ops[a], ops[b]) == mul(ops[b], ops[a]));
  auto sc = ring.structure_constants();
  for (std::size_t i = 0; i < ring.rank(); ++i)
    for (std::size_t j = 0; j < ring.rank(); ++j) CHECK(sc[i][j] == sc[j][i]);
}

TEST_CASE("freeness across the criterion shapes") {
  for (const auto& shape : {FlagShape({1}, 2), FlagShape({1}, 3), FlagShape({2}, 3), FlagShape({2}, 4),
                            FlagShape({1, 2}, 3), FlagShape({1, 3}, 4), FlagShape({1, 2, 3}, 4)}) {
    RingOptions o;
    o.values = random_equivariant_values(shape, 1);
    const auto start = std::chrono::steady_clock::now();
    auto ring = build_ring(quantum_whitney(shape), o);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    MESSAGE(shape.name() << " rank " << ring.rank() << " in " << secs << " s");
    CHECK(static_cast<long>(ring.rank()) == orbit_count(shape));
  }
}

TEST_CASE("vieta relations cut out the quantum whitney ideal") {
  for (const auto& shape : {FlagShape({1}, 2), FlagShape({2}, 4), FlagShape({1, 2}, 3), FlagShape({1, 3}, 4)}) {
    auto c = compare_ideals(vieta_presentation(shape), quantum_whitney(shape));
    INFO(c.to_json().dump());
    CHECK(c.equal());
  }
  FlagShape f({1, 2}, 3);
  auto broken = quantum_whitney(f);
  broken.relations.back() += X(var::Q(1));
  auto c = compare_ideals(vieta_presentation(f), broken, random_equivariant_values(f, 7));
  CHECK_FALSE(c.equal());
  CHECK_FALSE(c.left_not_in_right.empty());
  CHECK_FALSE(compare_ideals(classical_whitney(f), quantum_whitney(f)).equal());
}
