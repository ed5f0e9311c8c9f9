// One line per acceptance criterion; nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qkflag/bethe_solver.hpp"
#include "qkflag/errors.hpp"
#include "qkflag/jfunction.hpp"
#include "qkflag/presentations.hpp"
#include "qkflag/quantum_ring.hpp"
#include "qkflag/symmetric.hpp"

using namespace qkflag;

namespace {

MultiPoly X(VarTag v, int e = 1) { return MultiPoly::variable(v, e); }

const std::vector<FlagShape>& gate_shapes() {
  static const std::vector<FlagShape> shapes{FlagShape({1}, 2),    FlagShape({1}, 3),    FlagShape({2}, 3),
                                             FlagShape({2}, 4),    FlagShape({1, 2}, 3), FlagShape({1, 3}, 4),
                                             FlagShape({1, 2, 3}, 4)};
  return shapes;
}

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<bool(std::ostringstream&)> body;
};

// ---------------------------------------------------------------- 1

bool projective_oracle(std::ostringstream& why) {
  for (int n = 1; n <= 4; ++n) {
    FlagShape s({1}, n + 1);
    const MultiPoly P = X(var::S(1, 1)), Q = X(var::Q(1));
    Presentation flat{.kind = "oracle", .shape = s};
    flat.generators = {var::S(1, 1)};
    flat.add(pow(1 - P, n + 1) - Q, "oracle");
    flat.equivariant = false;
    auto c = compare_ideals(quantum_whitney(s, false), flat);
    if (!c.equal()) {
      why << "nonequivariant n=" << n << " " << c.to_json().dump();
      return false;
    }
    // ∏(1 − P/Λ_i) = Q, cleared by ∏Λ_i.
    MultiPoly lhs(1), lam(1);
    for (int r = 1; r <= n + 1; ++r) {
      lhs *= X(var::Lambda(r)) - P;
      lam *= X(var::Lambda(r));
    }
    Presentation eq{.kind = "oracle", .shape = s};
    eq.generators = {var::S(1, 1)};
    eq.add(lhs - Q * lam, "oracle");
    auto ce = compare_ideals(quantum_whitney(s, true), eq);
    if (!ce.equal()) {
      why << "equivariant n=" << n << " " << ce.to_json().dump();
      return false;
    }
  }
  why << "n=1..4 both forms";
  return true;
}

// ---------------------------------------------------------------- 2

bool rank_gates(std::ostringstream& why) {
  const std::vector<long> expected{2, 3, 3, 6, 6, 12, 24};
  bool ok = true;
  for (std::size_t k = 0; k < gate_shapes().size(); ++k) {
    const auto& s = gate_shapes()[k];
    RingOptions o;
    o.values = random_equivariant_values(s, 11);
    o.expected_rank = expected[k];
    auto rep = rank_gate(quantum_whitney(s), classical_whitney(s), o);
    why << s.name() << ":" << rep.observed_rank << " ";
    ok = ok && rep.passed && rep.observed_rank == expected[k];
  }
  return ok;
}

// ---------------------------------------------------------------- 3

bool wronskian(std::ostringstream& why) {
  for (const auto& s : gate_shapes()) {
    const Presentation qw = quantum_whitney(s);
    const auto gb = groebner(qw.relations, presentation_order(qw, qw.parameters()), TruncationPolicy{3});
    for (int j = 1; j <= s.n() + 1; ++j)
      for (const auto& c : wronskian_det_check(s, j, gb, {}, false))
        if (!c.is_zero()) {
          why << s.name() << " j=" << j << " residual " << c.to_string();
          return false;
        }
    MultiPoly top(1);
    for (int r = 1; r <= s.N(); ++r) top *= 1 + X(var::y()) * X(var::Lambda(r));
    if (!(lambda_y_S(s, s.n() + 1) == top)) {
      why << s.name() << " top minor target differs from the product";
      return false;
    }
  }
  why << "all residuals exactly 0";
  return true;
}

// ---------------------------------------------------------------- 4

bool vieta(std::ostringstream& why) {
  for (const auto& s : gate_shapes()) {
    auto c = compare_ideals(vieta_presentation(s), quantum_whitney(s));
    if (!c.equal()) {
      why << s.name() << " " << c.to_json().dump();
      return false;
    }
  }
  why << "mutual membership on 7 shapes";
  return true;
}

// ---------------------------------------------------------------- 5

bool spectra(std::ostringstream& why) {
  FlagShape p1({1}, 2);
  std::map<VarTag, Rational> flat{{var::Lambda(1), 1}, {var::Lambda(2), 1}, {var::Q(1), Rational(1, 4)}};
  auto sols = solve_bethe(p1, flat);
  std::vector<Complex> roots;
  for (const auto& s : sols) roots.push_back(s.values[0]);
  auto m = match_multisets(roots, {Complex(0.5), Complex(1.5)});
  RingOptions o;
  o.mode = ScalarMode::Numeric;
  o.values = flat;
  auto rep = spectrum_match(build_ring(quantum_whitney(p1), o), sols, X(var::P(1, 1)), 1e-12);
  why << "P1 roots " << m.max_relative_distance << " operator " << rep.match.max_relative_distance;
  if (m.max_relative_distance > 1e-12 || !rep.passed) return false;

  FlagShape f({1, 2}, 3);
  auto vals = random_equivariant_values(f, 17);
  vals[var::Q(1)] = Rational(1, 8);
  vals[var::Q(2)] = Rational(1, 9);
  auto fs = solve_bethe(f, vals);
  RingOptions of;
  of.mode = ScalarMode::Numeric;
  of.values = vals;
  auto ring = build_ring(quantum_whitney(f), of);
  double worst = 0;
  for (int i = 1; i <= f.n(); ++i)
    for (int l = 1; l <= f.v(i); ++l) {
      auto r = spectrum_match(ring, fs, elementary_symmetric(f.roots(i), l), 1e-8);
      worst = std::max(worst, r.match.max_relative_distance);
      if (!r.passed) {
        why << "; Fl(1,2;3) e" << l << "(P" << i << ") " << r.match.max_relative_distance;
        return false;
      }
    }
  why << "; Fl(1,2;3) worst " << worst;
  return true;
}

// ---------------------------------------------------------------- 6

bool degree_bounds(std::ostringstream& why) {
  int checked = 0;
  for (const auto& s : {FlagShape({1}, 2), FlagShape({1}, 3), FlagShape({2}, 4), FlagShape({1, 2}, 3)})
    for (const auto& d : DegreeVector::enumerate(s, 4)) {
      if (d.is_zero()) continue;
      auto rep = verify_bounds(s, d);
      ++checked;
      if (!rep.passed()) {
        why << s.name() << " d=" << d.to_string() << " " << rep.to_json().dump();
        return false;
      }
    }
  why << checked << " degrees";
  return true;
}

// ---------------------------------------------------------------- 7

bool q_difference(std::ostringstream& why) {
  for (const auto& s : {FlagShape({1}, 2), FlagShape({1, 2}, 3)})
    for (int i = 1; i <= s.n(); ++i)
      for (int j = 1; j <= s.v(i); ++j) {
        auto rep = qde_residual(s, i, j, 3);
        if (!rep.vanishes_below_cap || !rep.boundary_only) {
          why << s.name() << " (" << i << "," << j << ") " << rep.to_json().dump();
          return false;
        }
        why << s.name() << "(" << i << "," << j << "):" << rep.nonzero_count << " ";
      }
  return true;
}

// ---------------------------------------------------------------- 8

bool specialization(std::ostringstream& why) {
  int eqs = 0;
  for (const auto& s : gate_shapes()) {
    auto specialized = bethe_equations(s, true);
    auto factored = bethe_relations_factored(s);
    if (specialized.size() != factored.size()) return false;
    for (std::size_t a = 0; a < factored.size(); ++a, ++eqs)
      if (!(specialize_bethe(factored[a]) == specialized[a])) {
        why << s.name() << " equation (" << factored[a].i << "," << factored[a].j << ")";
        return false;
      }
  }
  why << eqs << " equations";
  return true;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "projective space oracle", 5, projective_oracle},
      {2, "rank gate", 120, rank_gates},
      {3, "wronskian determinant", 120, wronskian},
      {4, "vieta equals whitney", 120, vieta},
      {5, "spectral coincidence", 60, spectra},
      {6, "J-function degree bounds", 120, degree_bounds},
      {7, "q-difference residual", 60, q_difference},
      {8, "specialization chain", 120, specialization},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::ostringstream why;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.body(why);
    } catch (const std::exception& e) {
      why << "threw: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && secs > c.budget_seconds) {
      ok = false;
      why << " (over the " << c.budget_seconds << " s budget)";
    }
    failed += !ok;
    std::printf("[%s] %d %s (%.2f s) %s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs, why.str().c_str());
  }
  return failed == 0 ? 0 : 1;
}
