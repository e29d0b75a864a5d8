#include "stpath/rational.hpp"

#include <cctype>
#include <cmath>

#include "stpath/error.hpp"

namespace stpath {

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw InputError("non-finite value cannot be lifted to a rational");
  Rational out(value);  // mpq_set_d is exact
  out.canonicalize();
  return out;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t begin = 0;
  while (begin < s.size() && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  s = s.substr(begin);
  if (s.empty()) throw InputError("empty rational literal");

  const auto dot = s.find('.');
  const bool has_exp = s.find_first_of("eE") != std::string::npos;
  if (has_exp) {
    // Scientific notation: go through the shortest double and lift exactly.
    try {
      return rational_from_double(std::stod(s));
    } catch (const std::logic_error&) {
      throw InputError("malformed rational literal '" + s + "'");
    }
  }
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac = s.size() - dot - 1;
    mpz_class num;
    if (num.set_str(digits, 10) != 0) throw InputError("malformed rational literal '" + s + "'");
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational out(num, den);
    out.canonicalize();
    return out;
  }
  Rational out;
  if (out.set_str(s, 10) != 0 || out.get_den() == 0) {
    throw InputError("malformed rational literal '" + s + "'");
  }
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

double to_double(const Rational& value) { return value.get_d(); }

mpz_class floor_of(const Rational& value) {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

mpz_class ceil_of(const Rational& value) {
  mpz_class out;
  mpz_cdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

}  // namespace stpath
