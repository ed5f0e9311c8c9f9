#pragma once

#include <gmpxx.h>

#include <string>

namespace qkflag {

using Rational = mpq_class;

/// Canonical "p/q" (or "p" when q = 1) text form.
inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Parses "p", "-p", or "p/q"; throws DomainError on malformed input.
Rational parse_rational(const std::string& text);

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace qkflag
