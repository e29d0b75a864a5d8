#pragma once

/// @file rational.hpp
/// @brief Exact rational scalar used for costs, LP values and certificates.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace stpath {

using Rational = mpq_class;

/// Exact lift of a finite double (every double is a dyadic rational).
Rational rational_from_double(double value);

/// Parses "p", "p/q" or a decimal literal such as "0.0006" exactly.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when integral) string.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

mpz_class floor_of(const Rational& value);
mpz_class ceil_of(const Rational& value);

inline bool is_integral(const Rational& value) { return value.get_den() == 1; }

}  // namespace stpath
