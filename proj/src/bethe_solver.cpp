#include "qkflag/bethe_solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qkflag/errors.hpp"
#include "qkflag/presentations.hpp"

namespace qkflag {

namespace {

template <class T>
T coef_as(const Rational& c);

template <>
Complex coef_as<Complex>(const Rational& c) {
  return Complex(c.get_d(), 0.0);
}

template <>
QuadComplex coef_as<QuadComplex>(const Rational& c) {
  return QuadComplex(to_quad(c));
}

template <class T>
T power(const T& base, int e) {
  if (e < 0) return T(1) / power(base, -e);
  T r(1);
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

/// F, the Jacobian in the unknowns, and Σ|term| per equation.
template <class T>
struct Evaluation {
  std::vector<T> f;
  std::vector<std::vector<T>> jac;
  std::vector<double> scale;
};

template <class T>
Evaluation<T> evaluate_system(const BetheSystem& sys, const std::vector<T>& x, const std::vector<T>& p,
                              bool want_jacobian) {
  const std::size_t m = x.size();
  Evaluation<T> ev;
  ev.f.assign(sys.compiled().size(), T(0));
  ev.scale.assign(sys.compiled().size(), 0.0);
  if (want_jacobian) ev.jac.assign(sys.compiled().size(), std::vector<T>(m, T(0)));
  for (std::size_t r = 0; r < sys.compiled().size(); ++r) {
    for (const auto& term : sys.compiled()[r]) {
      T val = coef_as<T>(term.coef);
      for (std::size_t k = 0; k < term.exps.size(); ++k) {
        if (term.exps[k] == 0) continue;
        val *= power(k < m ? x[k] : p[k - m], term.exps[k]);
      }
      ev.f[r] += val;
      using std::abs;
      ev.scale[r] += static_cast<double>(abs(val));
      if (!want_jacobian) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (term.exps[k] == 0) continue;
        T d = coef_as<T>(term.coef) * T(term.exps[k]);
        for (std::size_t l = 0; l < term.exps.size(); ++l) {
          const int e = l == k ? term.exps[l] - 1 : term.exps[l];
          if (e != 0) d *= power(l < m ? x[l] : p[l - m], e);
        }
        ev.jac[r][k] += d;
      }
    }
  }
  return ev;
}

/// ∂F/∂p · dp for a parameter direction dp (double precision).
std::vector<Complex> parameter_derivative(const BetheSystem& sys, const std::vector<Complex>& x,
                                          const std::vector<Complex>& p, const std::vector<Complex>& dp) {
  const std::size_t m = x.size();
  std::vector<Complex> out(sys.compiled().size(), 0.0);
  for (std::size_t r = 0; r < sys.compiled().size(); ++r)
    for (const auto& term : sys.compiled()[r])
      for (std::size_t q = 0; q < p.size(); ++q) {
        const int eq = term.exps[m + q];
        if (eq == 0 || dp[q] == 0.0) continue;
        Complex d = term.coef.get_d() * static_cast<double>(eq) * dp[q];
        for (std::size_t l = 0; l < term.exps.size(); ++l) {
          const int e = l == m + q ? term.exps[l] - 1 : term.exps[l];
          if (e != 0) d *= power(l < m ? x[l] : p[l - m], e);
        }
        out[r] += d;
      }
  return out;
}

/// Solves A z = b in place by partial pivoting; false if singular.
template <class T>
bool solve_linear(std::vector<std::vector<T>> a, std::vector<T>& b) {
  using std::abs;
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (abs(a[r][c]) > abs(a[piv][c])) piv = r;
    if (abs(a[piv][c]) == 0) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const T f = a[r][c] / a[c][c];
      if (f == T(0)) continue;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    for (std::size_t k = c + 1; k < n; ++k) b[c] -= a[c][k] * b[k];
    b[c] /= a[c][c];
  }
  return true;
}

double max_relative(const Evaluation<Complex>& ev) {
  double worst = 0;
  for (std::size_t r = 0; r < ev.f.size(); ++r)
    worst = std::max(worst, std::abs(ev.f[r]) / std::max(ev.scale[r], 1e-300));
  return worst;
}

double norm(const std::vector<Complex>& v) {
  double s = 0;
  for (auto z : v) s = std::max(s, std::abs(z));
  return s;
}

/// Newton at fixed parameters. Every iterate must shrink the residual by a
/// factor 4 until it hits the rounding floor.
bool corrector(const BetheSystem& sys, std::vector<Complex>& x, const std::vector<Complex>& p) {
  constexpr double floor = 1e-13;
  double prev = -1;
  for (int it = 0; it < 12; ++it) {
    auto ev = evaluate_system(sys, x, p, true);
    const double res = max_relative(ev);
    if (!std::isfinite(res)) return false;
    if (res < floor) return true;
    if (prev >= 0 && res > 0.25 * prev) return false;
    prev = res;
    std::vector<Complex> step = ev.f;
    if (!solve_linear(ev.jac, step)) return false;
    for (std::size_t k = 0; k < x.size(); ++k) x[k] -= step[k];
    if (norm(step) <= 1e-15 * std::max(1.0, norm(x))) {
      return max_relative(evaluate_system(sys, x, p, false)) < 1e-11;
    }
  }
  return max_relative(evaluate_system(sys, x, p, false)) < 1e-11;
}

bool level_collision(const FlagShape& shape, const std::vector<Complex>& x) {
  std::size_t off = 0;
  for (int i = 1; i <= shape.n(); ++i) {
    const std::size_t vi = static_cast<std::size_t>(shape.v(i));
    for (std::size_t a = 0; a < vi; ++a)
      for (std::size_t b = a + 1; b < vi; ++b)
        if (relative_distance(x[off + a], x[off + b]) < 1e-8) return true;
    off += vi;
  }
  return false;
}

std::vector<double> geometric_ramp(const HomotopyOptions& o) {
  std::vector<double> t{0.0};
  const int steps = std::max(o.steps, 1);
  for (int k = 1; k <= steps; ++k)
    t.push_back(steps == 1 ? 1.0 : std::pow(o.first_step, static_cast<double>(steps - k) / (steps - 1)));
  return t;
}

/// Tracks x along p(t) = p0 + φ(t)(p1 − p0), φ(t) = t + γ t(1 − t), over
/// the schedule; counts steps. The complex γ keeps the path off the real
/// segment, where branch points of the system tend to sit.
void track(const BetheSystem& sys, std::vector<Complex>& x, const std::vector<Complex>& p0,
           const std::vector<Complex>& p1, const std::vector<double>& schedule, const HomotopyOptions& o,
           int& steps_taken) {
  std::vector<Complex> dp(p0.size());
  for (std::size_t q = 0; q < p0.size(); ++q) dp[q] = p1[q] - p0[q];
  const Complex gamma = o.detour;
  auto params_at = [&](double t) {
    const Complex phi = t + gamma * t * (1 - t);
    std::vector<Complex> p(p0.size());
    for (std::size_t q = 0; q < p.size(); ++q) p[q] = p0[q] + phi * dp[q];
    return p;
  };
  double t = schedule.front();
  for (std::size_t k = 1; k < schedule.size(); ++k) {
    const double goal = schedule[k];
    int halvings = 0;
    while (t < goal) {
      double h = std::min(goal - t, (schedule[k] - schedule[k - 1]) / std::ldexp(1.0, halvings));
      const auto p = params_at(t);
      auto ev = evaluate_system(sys, x, p, true);
      std::vector<Complex> tangent = parameter_derivative(sys, x, p, dp);
      const Complex dphi = 1.0 + gamma * (1 - 2 * t);
      for (auto& z : tangent) z = -z * dphi;
      std::vector<Complex> trial = x;
      if (solve_linear(ev.jac, tangent))
        for (std::size_t j = 0; j < x.size(); ++j) trial[j] += h * tangent[j];
      const auto pn = params_at(t + h);
      if (corrector(sys, trial, pn) && !level_collision(sys.shape(), trial)) {
        x = trial;
        t += h;
        ++steps_taken;
        continue;
      }
      if (++halvings > o.max_halvings)
        throw PathError("homotopy path failed to converge near t = " + std::to_string(t + h), t);
    }
  }
}

void polish(const BetheSystem& sys, std::vector<Complex>& x, const std::vector<Complex>& p) {
  std::vector<QuadComplex> qx(x.begin(), x.end()), qp(p.begin(), p.end());
  for (int it = 0; it < 6; ++it) {
    auto ev = evaluate_system(sys, qx, qp, true);
    std::vector<QuadComplex> step = ev.f;
    if (!solve_linear(ev.jac, step)) break;
    QuadFloat size = 0;
    for (std::size_t k = 0; k < qx.size(); ++k) {
      qx[k] -= step[k];
      size = std::max<QuadFloat>(size, abs(step[k]));
    }
    if (size < QuadFloat(1e-28)) break;
  }
  for (std::size_t k = 0; k < x.size(); ++k)
    x[k] = Complex(static_cast<double>(qx[k].real()), static_cast<double>(qx[k].imag()));
}

bool lex_less(Complex a, Complex b) {
  const double tol = 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
  if (std::abs(a.real() - b.real()) > tol) return a.real() < b.real();
  if (std::abs(a.imag() - b.imag()) > tol) return a.imag() < b.imag();
  return false;
}

bool same_values(const std::vector<Complex>& a, const std::vector<Complex>& b, double tol) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (relative_distance(a[k], b[k]) > tol) return false;
  return true;
}

void check_safety(const std::map<VarTag, Rational>& target, const FlagShape& shape, const HomotopyOptions& o) {
  if (o.force) return;
  for (int i = 1; i <= shape.n(); ++i) {
    auto it = target.find(var::Q(i));
    if (it == target.end()) continue;
    if (std::abs(it->second.get_d()) > o.safety_radius)
      throw DomainError("|" + var::Q(i).name() + "| exceeds the safety radius " + std::to_string(o.safety_radius) +
                        " (use force to override)");
  }
}

std::vector<Complex> lambda_values(const FlagShape& shape, const std::map<VarTag, Rational>& values) {
  std::vector<Complex> out;
  for (int r = 1; r <= shape.N(); ++r) {
    auto it = values.find(var::Lambda(r));
    if (it == values.end()) throw DomainError("no value for " + var::Lambda(r).name());
    out.emplace_back(it->second.get_d(), 0.0);
  }
  return out;
}

bool lambda_degenerate(const std::map<VarTag, Rational>& values, const FlagShape& shape) {
  std::set<Rational> seen;
  for (int r = 1; r <= shape.N(); ++r) {
    auto it = values.find(var::Lambda(r));
    if (it == values.end()) throw DomainError("no value for " + var::Lambda(r).name());
    if (it->second == 0 || !seen.insert(it->second).second) return true;
  }
  return false;
}

}  // namespace

// ------------------------------------------------------------ BetheSystem

BetheSystem::BetheSystem(const FlagShape& shape)
    : shape_(shape), equations_(bethe_equations(shape, true)), unknowns_(shape.all_roots()) {
  for (int i = 1; i <= shape.n(); ++i) parameters_.push_back(var::Q(i));
  for (int r = 1; r <= shape.N(); ++r) parameters_.push_back(var::Lambda(r));
  std::map<VarTag, std::size_t> index;
  for (std::size_t k = 0; k < unknowns_.size(); ++k) index[unknowns_[k]] = k;
  for (std::size_t k = 0; k < parameters_.size(); ++k) index[parameters_[k]] = unknowns_.size() + k;
  for (const auto& eq : equations_) {
    std::vector<Term> terms;
    for (const auto& [mono, c] : eq.terms()) {
      Term t{c, std::vector<int>(index.size(), 0)};
      for (const auto& [v, e] : mono.factors()) {
        auto it = index.find(v);
        if (it == index.end()) throw InternalError("Bethe equation has a stray variable " + v.name());
        t.exps[it->second] = e;
      }
      terms.push_back(std::move(t));
    }
    compiled_.push_back(std::move(terms));
  }
}

std::vector<Complex> BetheSystem::parameter_vector(const std::map<VarTag, Rational>& values) const {
  std::vector<Complex> p;
  for (auto v : parameters_) {
    auto it = values.find(v);
    if (it != values.end()) {
      p.emplace_back(it->second.get_d(), 0.0);
      continue;
    }
    if (v.is_novikov()) {
      p.emplace_back(0.0, 0.0);
      continue;
    }
    throw DomainError("no value for " + v.name());
  }
  return p;
}

std::vector<Complex> BetheSystem::evaluate(const std::vector<Complex>& x, const std::vector<Complex>& params) const {
  return evaluate_system(*this, x, params, false).f;
}

double BetheSystem::relative_residual(const std::vector<Complex>& x, const std::vector<Complex>& params) const {
  return max_relative(evaluate_system(*this, x, params, false));
}

// ---------------------------------------------------------- BetheSolution

std::vector<Complex> BetheSolution::canonical(const FlagShape& shape) const {
  std::vector<Complex> out = values;
  std::size_t off = 0;
  for (int i = 1; i <= shape.n(); ++i) {
    const auto vi = static_cast<std::size_t>(shape.v(i));
    std::sort(out.begin() + static_cast<long>(off), out.begin() + static_cast<long>(off + vi), lex_less);
    off += vi;
  }
  return out;
}

std::map<VarTag, Complex> BetheSolution::assignment(const FlagShape& shape) const {
  std::map<VarTag, Complex> out;
  const auto vars = shape.all_roots();
  for (std::size_t k = 0; k < vars.size(); ++k) out[vars[k]] = values[k];
  return out;
}

nlohmann::json BetheSolution::to_json(const FlagShape& shape) const {
  nlohmann::json vals = nlohmann::json::object();
  const auto vars = shape.all_roots();
  const auto canon = canonical(shape);
  nlohmann::json canon_json = nlohmann::json::array();
  for (std::size_t k = 0; k < vars.size(); ++k) {
    vals[vars[k].name()] = {values[k].real(), values[k].imag()};
    canon_json.push_back({canon[k].real(), canon[k].imag()});
  }
  return {{"orbit", orbit},
          {"seed", seed.to_string()},
          {"values", vals},
          {"canonical", canon_json},
          {"residual", residual},
          {"q_steps", q_steps}};
}

// ------------------------------------------------------------- operations

std::vector<BetheSolution> seed_solutions(const FlagShape& shape, const std::map<VarTag, Rational>& lambda) {
  if (lambda_degenerate(lambda, shape))
    throw DegeneracyError("equivariant parameters must be distinct and nonzero");
  const auto lam = lambda_values(shape, lambda);
  std::vector<BetheSolution> seeds;
  std::vector<std::vector<Complex>> orbit_forms;
  for (const auto& fp : enumerate_fixed_points(shape)) {
    BetheSolution s;
    s.seed = fp;
    for (int i = 1; i <= shape.n(); ++i)
      for (int j = 1; j <= shape.v(i); ++j) s.values.push_back(lam[static_cast<std::size_t>(fp.composite(i, j) - 1)]);
    const auto form = s.canonical(shape);
    auto it = std::find_if(orbit_forms.begin(), orbit_forms.end(),
                           [&](const auto& f) { return same_values(f, form, 1e-12); });
    if (it == orbit_forms.end()) {
      s.orbit = static_cast<int>(orbit_forms.size());
      orbit_forms.push_back(form);
    } else {
      s.orbit = static_cast<int>(it - orbit_forms.begin());
    }
    seeds.push_back(std::move(s));
  }
  return seeds;
}

std::vector<BetheSolution> continue_to(const BetheSystem& system, const std::vector<BetheSolution>& seeds,
                                       const std::map<VarTag, Rational>& target, const HomotopyOptions& options) {
  const FlagShape& shape = system.shape();
  check_safety(target, shape, options);
  const auto p1 = system.parameter_vector(target);
  auto p0 = p1;
  for (int i = 0; i < shape.n(); ++i) p0[static_cast<std::size_t>(i)] = 0.0;
  const auto schedule = geometric_ramp(options);

  std::vector<BetheSolution> out;
  for (const auto& seed : seeds) {
    BetheSolution s = seed;
    if (system.relative_residual(s.values, p0) > 1e-12)
      throw DomainError("seed " + seed.seed.to_string() + " does not solve the system at Q = 0");
    track(system, s.values, p0, p1, schedule, options, s.q_steps);
    s.residual = system.relative_residual(s.values, p1);
    if (s.residual > options.polish_threshold) {
      polish(system, s.values, p1);
      s.residual = system.relative_residual(s.values, p1);
    }
    if (!(s.residual < options.tolerance))
      throw PathError("residual " + std::to_string(s.residual) + " above tolerance at the target", 1.0);
    out.push_back(std::move(s));
  }

  // Orbit mates must agree after canonicalization, distinct orbits must not.
  std::map<int, std::vector<Complex>> forms;
  for (const auto& s : out) {
    const auto form = s.canonical(shape);
    auto [it, inserted] = forms.emplace(s.orbit, form);
    if (!inserted && !same_values(it->second, form, 1e-8))
      throw StructuralError("W-related seeds reached different solutions");
  }
  for (auto a = forms.begin(); a != forms.end(); ++a)
    for (auto b = std::next(a); b != forms.end(); ++b)
      if (same_values(a->second, b->second, 1e-8))
        throw StructuralError("orbits " + std::to_string(a->first) + " and " + std::to_string(b->first) +
                              " collided");
  return out;
}

std::vector<BetheSolution> solve_bethe(const FlagShape& shape, const std::map<VarTag, Rational>& target,
                                       const HomotopyOptions& options) {
  BetheSystem system(shape);
  if (!lambda_degenerate(target, shape)) return continue_to(system, seed_solutions(shape, target), target, options);

  // Second leg: equivariant run at spread-out Λ, then Λ -> target at fixed Q.
  std::map<VarTag, Rational> start = target;
  for (int r = 1; r <= shape.N(); ++r) start[var::Lambda(r)] = Rational(4 * shape.N() + r - 1, 4 * shape.N());
  auto sols = continue_to(system, seed_solutions(shape, start), start, options);
  const auto p0 = system.parameter_vector(start);
  const auto p1 = system.parameter_vector(target);
  std::vector<double> schedule;
  const int steps = std::max(options.steps, 1);
  for (int k = 0; k <= steps; ++k) schedule.push_back(static_cast<double>(k) / steps);
  for (auto& s : sols) {
    track(system, s.values, p0, p1, schedule, options, s.q_steps);
    polish(system, s.values, p1);
    s.residual = system.relative_residual(s.values, p1);
    if (!(s.residual < options.tolerance))
      throw PathError("residual " + std::to_string(s.residual) + " above tolerance after the Λ leg", 1.0);
  }
  return sols;
}

std::vector<BetheSolution> orbit_representatives(const std::vector<BetheSolution>& solutions) {
  std::vector<BetheSolution> reps;
  std::set<int> seen;
  for (const auto& s : solutions)
    if (seen.insert(s.orbit).second) reps.push_back(s);
  std::sort(reps.begin(), reps.end(), [](const auto& a, const auto& b) { return a.orbit < b.orbit; });
  return reps;
}

std::vector<Complex> eigenvalue_table(const FlagShape& shape, const std::vector<BetheSolution>& solutions,
                                      const MultiPoly& tau, const std::map<VarTag, Rational>& values) {
  if (!is_weyl_invariant(shape, tau)) throw DomainError("eigenvalue_table: τ is not W-invariant");
  std::vector<Complex> out;
  for (const auto& s : orbit_representatives(solutions)) {
    auto at = s.assignment(shape);
    for (const auto& [v, c] : values) at[v] = Complex(c.get_d(), 0.0);
    out.push_back(tau.evaluate(at));
  }
  return out;
}

nlohmann::json SpectrumReport::to_json() const {
  auto list = [](const std::vector<Complex>& zs) {
    nlohmann::json a = nlohmann::json::array();
    for (auto z : zs) a.push_back({z.real(), z.imag()});
    return a;
  };
  nlohmann::json pairs = nlohmann::json::array();
  for (auto [a, b] : match.pairs) pairs.push_back({a, b});
  return {{"tau", tau.to_string()},
          {"operator_eigenvalues", list(operator_eigenvalues)},
          {"bethe_values", list(bethe_values)},
          {"pairs", pairs},
          {"max_relative_distance", match.max_relative_distance},
          {"passed", passed}};
}

SpectrumReport spectrum_match(const QuotientRing& ring, const std::vector<BetheSolution>& solutions,
                              const MultiPoly& tau, double tolerance) {
  if (ring.mode() != ScalarMode::Numeric) throw DomainError("spectrum_match needs a numeric ring");
  const Presentation& p = ring.presentation();
  MultiPoly element = tau;
  if (p.kind != "bethe") {
    element = phi_map(p.shape, tau);
    std::set<VarTag> known(p.generators.begin(), p.generators.end());
    known.insert(p.auxiliary.begin(), p.auxiliary.end());
    for (auto v : element.variables())
      if (!v.is_novikov() && v.kind != VarKind::EquivParam && !known.count(v))
        throw DomainError("presentation '" + p.kind + "' has no generator " + v.name());
  }
  SpectrumReport rep;
  rep.tau = tau;
  rep.operator_eigenvalues = eigenvalues(ring.mult_operator(element));
  rep.bethe_values = eigenvalue_table(p.shape, solutions, tau, ring.values());
  rep.match = match_multisets(rep.operator_eigenvalues, rep.bethe_values);
  rep.passed = rep.match.max_relative_distance < tolerance;
  return rep;
}

}  // namespace qkflag
