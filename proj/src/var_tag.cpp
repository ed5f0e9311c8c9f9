#include "qkflag/var_tag.hpp"

#include <regex>
#include <sstream>

#include "qkflag/errors.hpp"
#include "qkflag/rational.hpp"

namespace qkflag {

namespace {

std::int8_t small(int v) {
  if (v < 0 || v > 120) throw DomainError("variable index out of range: " + std::to_string(v));
  return static_cast<std::int8_t>(v);
}

VarTag make(VarKind kind, int i = 0, int j = 0, int k = 0) {
  return VarTag{kind, small(i), small(j), small(k)};
}

}  // namespace

std::string VarTag::name() const {
  std::ostringstream os;
  switch (kind) {
    case VarKind::ChernRoot: os << "P(" << int(i) << ',' << int(j) << ')'; break;
    case VarKind::WedgeS: os << "S(" << int(i) << ',' << int(j) << ')'; break;
    case VarKind::WedgeR: os << "R(" << int(i) << ',' << int(j) << ')'; break;
    case VarKind::WedgeRhat: os << "Rhat(" << int(i) << ',' << int(j) << ')'; break;
    case VarKind::Novikov:
      if (j == 0) os << "Q(" << int(i) << ')';
      else os << "Q(" << int(i) << ',' << int(j) << ')';
      break;
    case VarKind::EquivParam:
      if (i == 0) os << "Lam(" << int(j) << ')';
      else os << "Lam(" << int(i) << ',' << int(j) << ')';
      break;
    case VarKind::RootParam:
      os << "lam(" << int(i) << ',' << int(j) << ',' << int(k) << ')';
      break;
    case VarKind::Deformation: os << 'y'; break;
    case VarKind::LoopParam: os << 'q'; break;
    case VarKind::Auxiliary: os << 't'; break;
  }
  return os.str();
}

VarTag parse_var(const std::string& text) {
  if (text == "y") return var::y();
  if (text == "q") return var::q();
  if (text == "t") return var::t();
  static const std::regex re(R"(^(P|S|R|Rhat|Q|Lam|lam)\((\d+)(?:,(\d+))?(?:,(\d+))?\)$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw DomainError("unknown variable name: " + text);
  const std::string head = m[1];
  const int a = std::stoi(m[2]);
  const bool has_b = m[3].matched;
  const bool has_c = m[4].matched;
  const int b = has_b ? std::stoi(m[3]) : 0;
  const int c = has_c ? std::stoi(m[4]) : 0;
  auto need = [&](bool ok) {
    if (!ok) throw DomainError("wrong index count in variable name: " + text);
  };
  if (head == "P") { need(has_b && !has_c); return var::P(a, b); }
  if (head == "S") { need(has_b && !has_c); return var::S(a, b); }
  if (head == "R") { need(has_b && !has_c); return var::R(a, b); }
  if (head == "Rhat") { need(has_b && !has_c); return var::Rhat(a, b); }
  if (head == "Q") { need(!has_c); return has_b ? var::Q(a, b) : var::Q(a); }
  if (head == "Lam") { need(!has_c); return has_b ? var::LambdaT(a, b) : var::Lambda(a); }
  need(has_b && has_c);
  if (b >= c) throw DomainError("root parameter must be stored with j < k: " + text);
  return make(VarKind::RootParam, a, b, c);
}

Rational parse_rational(const std::string& text) {
  static const std::regex re(R"(^\s*[-+]?\d+(\s*/\s*\d+)?\s*$)");
  if (!std::regex_match(text, re)) throw DomainError("malformed rational: '" + text + "'");
  std::string cleaned;
  for (char ch : text)
    if (ch != ' ' && ch != '+') cleaned += ch;
  Rational r;
  r.set_str(cleaned, 10);
  if (r.get_den() == 0) throw DomainError("zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

namespace var {

VarTag P(int level, int index) { return make(VarKind::ChernRoot, level, index); }
VarTag S(int level, int degree) { return make(VarKind::WedgeS, level, degree); }
VarTag R(int level, int degree) { return make(VarKind::WedgeR, level, degree); }
VarTag Rhat(int level, int degree) { return make(VarKind::WedgeRhat, level, degree); }
VarTag Q(int level) { return make(VarKind::Novikov, level, 0); }
VarTag Q(int level, int index) { return make(VarKind::Novikov, level, index); }
VarTag Lambda(int r) { return make(VarKind::EquivParam, 0, r); }
VarTag LambdaT(int level, int r) { return make(VarKind::EquivParam, level, r); }
VarTag y() { return make(VarKind::Deformation); }
VarTag q() { return make(VarKind::LoopParam); }
VarTag t() { return make(VarKind::Auxiliary); }

}  // namespace var

}  // namespace qkflag
