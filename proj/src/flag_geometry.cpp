#include "qkflag/flag_geometry.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <regex>
#include <sstream>

#include "qkflag/symmetric.hpp"

namespace qkflag {

namespace {

long factorial(int n) {
  long r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- FlagShape

FlagShape::FlagShape(std::vector<int> dims, int N) : dims_(std::move(dims)), N_(N) {
  if (dims_.empty()) throw DomainError("flag shape needs at least one dimension");
  for (std::size_t a = 0; a < dims_.size(); ++a) {
    if (dims_[a] <= 0) throw DomainError("flag dimensions must be positive");
    if (a > 0 && dims_[a] <= dims_[a - 1])
      throw DomainError("flag dimensions must be strictly increasing");
  }
  if (N_ <= dims_.back()) throw DomainError("ambient dimension must exceed the last v_i");
  if (N_ > 12) throw DomainError("ambient dimension too large");
}

FlagShape FlagShape::parse(const std::string& text) {
  static const std::regex re(R"(^\s*(\d+(?:\s*,\s*\d+)*)\s*:\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw DomainError("malformed shape '" + text + "'");
  std::vector<int> dims;
  std::stringstream ss(m[1].str());
  std::string item;
  while (std::getline(ss, item, ',')) dims.push_back(std::stoi(item));
  return FlagShape(std::move(dims), std::stoi(m[2].str()));
}

int FlagShape::v(int i) const {
  if (i == 0) return 0;
  if (i == n() + 1) return N_;
  if (i < 0 || i > n() + 1) throw DomainError("level out of range");
  return dims_[i - 1];
}

std::string FlagShape::spec() const {
  std::string s;
  for (std::size_t a = 0; a < dims_.size(); ++a) s += (a ? "," : "") + std::to_string(dims_[a]);
  return s + ":" + std::to_string(N_);
}

std::string FlagShape::name() const {
  std::string s = "Fl(";
  for (std::size_t a = 0; a < dims_.size(); ++a) s += (a ? "," : "") + std::to_string(dims_[a]);
  return s + ";" + std::to_string(N_) + ")";
}

std::vector<VarTag> FlagShape::roots(int i) const {
  std::vector<VarTag> out;
  for (int j = 1; j <= v(i); ++j) out.push_back(i == n() + 1 ? var::Lambda(j) : var::P(i, j));
  return out;
}

std::vector<VarTag> FlagShape::all_roots() const {
  std::vector<VarTag> out;
  for (int i = 1; i <= n(); ++i)
    for (auto v : roots(i)) out.push_back(v);
  return out;
}

// -------------------------------------------------------------- FixedPoint

int FixedPoint::composite(int i, int j) const {
  int x = j;
  for (std::size_t level = i - 1; level < f.size(); ++level) x = f[level][x - 1];
  return x;
}

std::string FixedPoint::to_string() const {
  std::string s;
  for (std::size_t a = 0; a < f.size(); ++a) {
    s += a ? "|" : "";
    for (std::size_t b = 0; b < f[a].size(); ++b) s += (b ? "," : "") + std::to_string(f[a][b]);
  }
  return s;
}

std::vector<FixedPoint> enumerate_fixed_points(const FlagShape& shape) {
  // All injections per level, then the cartesian product.
  std::vector<std::vector<std::vector<int>>> per_level;
  for (int i = 1; i <= shape.n(); ++i) {
    const int a = shape.v(i), b = shape.v(i + 1);
    std::vector<std::vector<int>> inj;
    std::vector<int> cur;
    std::vector<bool> used(b + 1, false);
    std::function<void()> rec = [&]() {
      if (static_cast<int>(cur.size()) == a) {
        inj.push_back(cur);
        return;
      }
      for (int x = 1; x <= b; ++x) {
        if (used[x]) continue;
        used[x] = true;
        cur.push_back(x);
        rec();
        cur.pop_back();
        used[x] = false;
      }
    };
    rec();
    per_level.push_back(std::move(inj));
  }
  std::vector<FixedPoint> out{FixedPoint{}};
  for (const auto& choices : per_level) {
    std::vector<FixedPoint> next;
    for (const auto& fp : out)
      for (const auto& c : choices) {
        FixedPoint e = fp;
        e.f.push_back(c);
        next.push_back(std::move(e));
      }
    out = std::move(next);
  }
  return out;
}

FixedPoint distinguished_point(const FlagShape& shape) {
  FixedPoint fp;
  for (int i = 1; i <= shape.n(); ++i) {
    std::vector<int> id(shape.v(i));
    std::iota(id.begin(), id.end(), 1);
    fp.f.push_back(id);
  }
  return fp;
}

long fixed_point_count(const FlagShape& shape) {
  long c = 1;
  for (int i = 1; i <= shape.n(); ++i)
    c *= factorial(shape.v(i + 1)) / factorial(shape.v(i + 1) - shape.v(i));
  return c;
}

long weyl_order(const FlagShape& shape) {
  long c = 1;
  for (int i = 1; i <= shape.n(); ++i) c *= factorial(shape.v(i));
  return c;
}

long orbit_count(const FlagShape& shape) {
  long c = factorial(shape.N());
  for (int i = 0; i <= shape.n(); ++i) c /= factorial(shape.v(i + 1) - shape.v(i));
  return c;
}

// ------------------------------------------------------------------- cones

std::vector<Rational> ConeDescriptor::coordinates(const std::vector<Rational>& point) const {
  const std::size_t n = rays.size();
  if (point.size() != n) throw DomainError("cone: dimension mismatch");
  // Solve Σ c_k rays[k] = point by Gaussian elimination on the transpose.
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t k = 0; k < n; ++k) a[row][k] = rays[k][row];
    a[row][n] = point[row];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw DomainError("cone rays are linearly dependent");
    std::swap(a[piv], a[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Rational factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k <= n; ++k) a[row][k] -= factor * a[col][k];
    }
  }
  std::vector<Rational> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = a[k][n] / a[k][k];
  return c;
}

bool ConeDescriptor::contains_interior(const std::vector<Rational>& point) const {
  for (const auto& c : coordinates(point))
    if (c <= 0) return false;
  return true;
}

ConeDescriptor cone_of(const FlagShape& shape, const FixedPoint& fp) {
  std::vector<int> offset{0};
  for (int i = 1; i <= shape.n(); ++i) offset.push_back(offset.back() + shape.v(i));
  const int dim = offset.back();
  ConeDescriptor cone;
  for (int i = 1; i <= shape.n(); ++i)
    for (int j = 1; j <= shape.v(i); ++j) {
      std::vector<int> ray(dim, 0);
      ray[offset[i - 1] + j - 1] = 1;
      if (i < shape.n()) ray[offset[i] + fp.f[i - 1][j - 1] - 1] = -1;
      cone.rays.push_back(std::move(ray));
    }
  return cone;
}

std::vector<Rational> theta(const FlagShape& shape) {
  int dim = 0;
  for (int i = 1; i <= shape.n(); ++i) dim += shape.v(i);
  return std::vector<Rational>(dim, Rational(1));
}

// -------------------------------------------------------------------- Weyl

WeylElement WeylElement::identity(const FlagShape& shape) {
  return WeylElement{distinguished_point(shape).f};
}

WeylElement WeylElement::operator*(const WeylElement& o) const {
  WeylElement r = o;
  for (std::size_t a = 0; a < sigma.size(); ++a)
    for (std::size_t b = 0; b < sigma[a].size(); ++b) r.sigma[a][b] = sigma[a][o.sigma[a][b] - 1];
  return r;
}

WeylElement WeylElement::inverse() const {
  WeylElement r = *this;
  for (std::size_t a = 0; a < sigma.size(); ++a)
    for (std::size_t b = 0; b < sigma[a].size(); ++b)
      r.sigma[a][sigma[a][b] - 1] = static_cast<int>(b) + 1;
  return r;
}

std::vector<WeylElement> weyl_group(const FlagShape& shape) {
  std::vector<WeylElement> out{WeylElement{}};
  for (int i = 1; i <= shape.n(); ++i) {
    std::vector<int> perm(shape.v(i));
    std::iota(perm.begin(), perm.end(), 1);
    std::vector<std::vector<int>> perms;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<WeylElement> next;
    for (const auto& w : out)
      for (const auto& p : perms) {
        WeylElement e = w;
        e.sigma.push_back(p);
        next.push_back(std::move(e));
      }
    out = std::move(next);
  }
  return out;
}

MultiPoly weyl_act(const FlagShape& shape, const WeylElement& w, const MultiPoly& p) {
  std::map<VarTag, MultiPoly> values;
  for (VarTag v : p.variables()) {
    const int level = v.i;
    const bool in_range = level >= 1 && level <= shape.n();
    switch (v.kind) {
      case VarKind::ChernRoot:
        if (in_range) values[v] = MultiPoly::variable(var::P(level, w.image(level, v.j)));
        break;
      case VarKind::Novikov:
        if (in_range && v.j != 0) values[v] = MultiPoly::variable(var::Q(level, w.image(level, v.j)));
        break;
      case VarKind::RootParam:
        if (in_range)
          values[v] = root_param(level, w.image(level, v.j), w.image(level, v.k));
        break;
      default: break;
    }
  }
  return values.empty() ? p : p.substitute(values);
}

MultiPoly weyl_symmetrize(const FlagShape& shape, const MultiPoly& p) {
  MultiPoly acc;
  const auto group = weyl_group(shape);
  for (const auto& w : group) acc += weyl_act(shape, w, p);
  return acc * Rational(1, static_cast<long>(group.size()));
}

bool is_weyl_invariant(const FlagShape& shape, const MultiPoly& p) {
  // Adjacent transpositions per level generate W.
  for (int i = 1; i <= shape.n(); ++i)
    for (int j = 1; j < shape.v(i); ++j) {
      WeylElement w = WeylElement::identity(shape);
      std::swap(w.sigma[i - 1][j - 1], w.sigma[i - 1][j]);
      if (!(weyl_act(shape, w, p) == p)) return false;
    }
  return true;
}

// ------------------------------------------------------------ localization

std::map<VarTag, MultiPoly> localization_substitution(const FlagShape& shape,
                                                      const FixedPoint& fp,
                                                      LocalizationMode mode) {
  std::map<VarTag, MultiPoly> tilde;
  const int n = shape.n();
  for (int i = n; i >= 1; --i)
    for (int j = 1; j <= shape.v(i); ++j) {
      const int target = fp.f[i - 1][j - 1];
      MultiPoly value = MultiPoly::variable(var::LambdaT(n, target));
      if (i < n) value = MultiPoly::variable(var::LambdaT(i, target)) * tilde.at(var::P(i + 1, target));
      tilde[var::P(i, j)] = std::move(value);
    }
  if (mode == LocalizationMode::TildeT) return tilde;

  std::map<VarTag, MultiPoly> specialize;
  for (int i = 1; i <= n; ++i)
    for (int r = 1; r <= shape.v(i + 1); ++r)
      specialize[var::LambdaT(i, r)] = i == n ? MultiPoly::variable(var::Lambda(r)) : MultiPoly(1);
  for (auto& [v, value] : tilde) value = value.substitute(specialize);
  return tilde;
}

std::map<VarTag, Rational> random_equivariant_values(const FlagShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<VarTag, Rational> out;
  std::set<Rational> used;
  for (int r = 1; r <= shape.N(); ++r) {
    Rational value;
    do {
      const long den = 16 + static_cast<long>(rng() % 48);
      const long num = den + 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(den - 1));
      value = Rational(num, den);
      value.canonicalize();
    } while (used.count(value));
    used.insert(value);
    out[var::Lambda(r)] = value;
  }
  return out;
}

std::map<VarTag, Rational> unit_equivariant_values(const FlagShape& shape) {
  std::map<VarTag, Rational> out;
  for (int r = 1; r <= shape.N(); ++r) out[var::Lambda(r)] = 1;
  return out;
}

// --------------------------------------------------------------------- phi

MultiPoly phi_map(const FlagShape& shape, const MultiPoly& sym) {
  if (!is_weyl_invariant(shape, sym)) throw DomainError("phi_map: input is not W-invariant");
  std::map<VarTag, MultiPoly> novikov;
  for (VarTag v : sym.variables())
    if (v.kind == VarKind::Novikov && v.j != 0) novikov[v] = MultiPoly::variable(var::Q(v.i));
  MultiPoly out = novikov.empty() ? sym : sym.substitute(novikov);
  for (int i = 1; i <= shape.n(); ++i) {
    std::vector<VarTag> gens;
    for (int l = 1; l <= shape.v(i); ++l) gens.push_back(var::S(i, l));
    out = symmetric_decompose(out, shape.roots(i), gens);
  }
  return out;
}

}  // namespace qkflag
