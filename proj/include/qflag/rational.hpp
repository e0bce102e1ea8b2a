#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qflag {

/// Exact rational numbers (GMP).
using Rational = mpq_class;

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rational r;
  if (r.set_str(s, 10) != 0) {
    throw std::invalid_argument("not a rational literal: '" + s + "'");
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

/// r^e for integer e; throws on 0^negative.
inline Rational rpow(const Rational& r, long e) {
  if (e < 0) {
    if (is_zero(r)) throw std::domain_error("zero raised to a negative power");
    Rational inv = 1 / r;
    return rpow(inv, -e);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), r.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(den.get_mpz_t(), r.get_den_mpz_t(), static_cast<unsigned long>(e));
  Rational out(num, den);
  out.canonicalize();
  return out;
}

/// Exact square root when r is the square of a rational.
inline std::optional<Rational> rational_sqrt(const Rational& r) {
  if (sgn(r) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(r.get_num_mpz_t()) || !mpz_perfect_square_p(r.get_den_mpz_t())) {
    return std::nullopt;
  }
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), r.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), r.get_den_mpz_t());
  Rational out(n, d);
  out.canonicalize();
  return out;
}

}  // namespace qflag
