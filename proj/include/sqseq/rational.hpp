#pragma once

// Exact rational scalars backed by GMP.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "sqseq/errors.hpp"

namespace sqseq {

using Integer = mpz_class;

/// Arbitrary-precision rational. GMP keeps every arithmetic result in lowest
/// terms with a positive denominator; values built from text go through
/// parse_rational, which canonicalizes.
using Rational = mpq_class;

inline Rational parse_rational(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  auto last = text.find_last_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ParseError("empty rational");
  std::string s(text.substr(first, last - first + 1));

  auto valid_int = [](std::string_view part) {
    std::size_t i = 0;
    if (!part.empty() && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i == part.size()) return false;
    return std::all_of(part.begin() + static_cast<std::ptrdiff_t>(i), part.end(),
                       [](unsigned char ch) { return std::isdigit(ch) != 0; });
  };

  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw ParseError("malformed rational '" + s + "'");
  if (num[0] == '+') num.erase(0, 1);

  Integer n(num, 10);
  Integer d(den, 10);
  if (d == 0) throw ParseError("zero denominator in '" + s + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// "n" for integers, "n/d" otherwise.
inline std::string to_string(const Rational& r) { return r.get_str(10); }

inline std::string to_string(const Integer& z) { return z.get_str(10); }

/// Number of decimal digits of the larger of |numerator| and denominator.
inline std::size_t digit_count(const Rational& r) {
  return std::max(mpz_sizeinbase(r.get_num_mpz_t(), 10),
                  mpz_sizeinbase(r.get_den_mpz_t(), 10));
}

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational out(1);
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1U) out *= b;
    exponent >>= 1U;
    if (exponent != 0) b *= b;
  }
  return out;
}

inline Integer isqrt(const Integer& n) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_perfect_square(const Integer& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

/// Non-negative rational square root, or nullopt when r is not a square in Q.
inline std::optional<Rational> rat_sqrt(const Rational& r) {
  if (r < 0) throw DomainError("rat_sqrt of negative rational " + to_string(r));
  const Integer& n = r.get_num();
  const Integer& d = r.get_den();
  if (!is_perfect_square(n) || !is_perfect_square(d)) return std::nullopt;
  Rational s(isqrt(n), isqrt(d));
  s.canonicalize();
  return s;
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace sqseq
