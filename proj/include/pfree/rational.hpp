#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace pfree {

/// Exact scalar used for every operator entry and Fourier coefficient.
using Rational = mpq_class;

/// Parses `p`, `-p` or `p/q`. Throws std::invalid_argument on bad input or a zero
/// denominator.
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto digits = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string num(text.substr(0, slash));
  std::string den = slash == std::string_view::npos ? "1" : std::string(text.substr(slash + 1));
  if (!num.empty() && num.front() == '+') num.erase(0, 1);
  if (!digits(num) || !digits(den) || den.front() == '-' || den.front() == '+')
    throw std::invalid_argument("bad rational literal '" + std::string(text) + "'");
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

/// num/den in lowest terms; den must be nonzero.
inline Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Always `numerator/denominator`, denominator positive.
inline std::string to_fraction(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace pfree
