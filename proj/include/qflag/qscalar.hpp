#pragma once

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "qflag/laurent.hpp"
#include "qflag/rational.hpp"

namespace qflag {

/// Element of Q(s), s = q^(1/2), stored as a reduced fraction num/den.
///
/// Canonical form: gcd(num, den) = 1, den has lowest exponent 0, integer
/// coefficients with content 1 and a positive constant term. Zero is 0/1.
class RatFunc {
 public:
  RatFunc() : den_(Rational(1)) {}
  explicit RatFunc(const Rational& c) : num_(c), den_(Rational(1)) {}
  explicit RatFunc(LaurentPoly num) : num_(std::move(num)), den_(Rational(1)) {}
  RatFunc(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static RatFunc s_power(int k) { return RatFunc(LaurentPoly::monomial(Rational(1), k)); }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_is_one(); }

  RatFunc& operator+=(const RatFunc& o) {
    if (den_is_one() && o.den_is_one()) {
      num_ += o.num_;
      return *this;
    }
    if (den_ == o.den_) {
      num_ += o.num_;
      normalize();
      return *this;
    }
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
    normalize();
    return *this;
  }
  RatFunc& operator-=(const RatFunc& o) { return *this += -o; }
  RatFunc& operator*=(const RatFunc& o) {
    if (den_is_one() && o.den_is_one()) {
      num_ = num_ * o.num_;
      return *this;
    }
    num_ = num_ * o.num_;
    den_ = den_ * o.den_;
    normalize();
    return *this;
  }
  RatFunc& operator/=(const RatFunc& o) {
    if (o.is_zero()) throw std::domain_error("division by zero rational function");
    LaurentPoly n = num_ * o.den_;
    LaurentPoly d = den_ * o.num_;
    num_ = std::move(n);
    den_ = std::move(d);
    normalize();
    return *this;
  }

  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  friend RatFunc operator-(RatFunc a) {
    a.num_ = -a.num_;
    return a;
  }
  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

  /// Text "p(s)" when the denominator is 1, otherwise "(p(s))/(r(s))" with
  /// integer-coefficient p and r.
  std::string to_string() const {
    if (is_zero()) return "0";
    if (den_is_one()) return num_.to_string('s');
    mpz_class l = 1;
    for (const auto& c : num_.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    Rational scale(l);
    LaurentPoly p = num_ * scale;
    LaurentPoly r = den_ * scale;
    if (r == LaurentPoly(Rational(1))) return p.to_string('s');
    return "(" + p.to_string('s') + ")/(" + r.to_string('s') + ")";
  }

 private:
  bool den_is_one() const { return den_.coeffs().size() == 1 && den_.low() == 0 && den_.coeffs()[0] == 1; }

  void normalize() {
    if (den_.is_zero()) throw std::domain_error("zero denominator in rational function");
    if (num_.is_zero()) {
      den_ = LaurentPoly(Rational(1));
      return;
    }
    int shift = num_.low() - den_.low();
    detail::Poly n = num_.coeffs();
    detail::Poly d = den_.coeffs();
    if (d.size() > 1 && n.size() > 1) {
      detail::Poly g = detail::poly_gcd(n, d);
      if (g.size() > 1) {
        n = detail::poly_divmod(n, g).first;
        d = detail::poly_divmod(d, g).first;
      }
    }
    // Rescale so that d has coprime integer coefficients and d[0] > 0.
    mpz_class l = 1;
    for (const auto& c : d) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    mpz_class g = 0;
    for (const auto& c : d) {
      mpz_class v = c.get_num() * (l / c.get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
    Rational scale(l, g);
    scale.canonicalize();
    if (sgn(d[0]) < 0) scale = -scale;
    if (scale != 1) {
      for (auto& c : n) c *= scale;
      for (auto& c : d) c *= scale;
    }
    num_ = LaurentPoly(shift, std::move(n));
    den_ = LaurentPoly(0, std::move(d));
  }

  LaurentPoly num_;
  LaurentPoly den_;
};

inline bool is_zero(const RatFunc& x) { return x.is_zero(); }
inline std::string to_string(const RatFunc& x) { return x.to_string(); }

namespace detail {

inline Rational eval_poly_at_q(const LaurentPoly& p, const Rational& q0, const std::optional<Rational>& s0,
                               const char* what) {
  if (p.has_odd_exponent()) {
    if (!s0) {
      throw std::domain_error(std::string(what) + " " + p.to_string('s') + " has odd powers of s = q^(1/2) and q = " +
                              q0.get_str() + " has no rational square root");
    }
    return p.eval(*s0);
  }
  Rational acc(0);
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
    const Rational& c = p.coeffs()[k];
    if (is_zero(c)) continue;
    acc += c * rpow(q0, (p.low() + static_cast<long>(k)) / 2);
  }
  return acc;
}

}  // namespace detail

/// Exact value of x at q = q0. Throws std::domain_error if the reduced
/// denominator vanishes at q0 (the message names the denominator).
inline Rational evaluate(const RatFunc& x, const Rational& q0) {
  if (sgn(q0) <= 0) throw std::domain_error("evaluation point q must be positive, got " + q0.get_str());
  std::optional<Rational> s0 = rational_sqrt(q0);
  Rational d = detail::eval_poly_at_q(x.den(), q0, s0, "denominator");
  if (is_zero(d)) {
    throw std::domain_error("denominator " + x.den().to_string('s') + " vanishes at q = " + q0.get_str());
  }
  Rational n = detail::eval_poly_at_q(x.num(), q0, s0, "numerator");
  Rational out = n / d;
  return out;
}

inline void check_half_integer(const Rational& e) {
  Rational twice = 2 * e;
  if (twice.get_den() != 1) throw std::domain_error("q-exponent " + e.get_str() + " is not a half-integer");
}

/// Scalars kept as exact rational functions of s = q^(1/2).
struct SymbolicField {
  using value_type = RatFunc;

  value_type zero() const { return RatFunc(); }
  value_type one() const { return RatFunc(Rational(1)); }
  value_type from_int(long n) const { return RatFunc(Rational(n)); }
  value_type from_rational(const Rational& r) const { return RatFunc(r); }

  value_type q_power(const Rational& e) const {
    check_half_integer(e);
    Rational twice = 2 * e;
    return RatFunc::s_power(static_cast<int>(twice.get_num().get_si()));
  }
  value_type q_power(long e) const { return RatFunc::s_power(static_cast<int>(2 * e)); }

  /// [n]_{q^d} in the division-free form sum_k q^{d(n-1-2k)}.
  value_type q_integer(long n, long d) const {
    if (n == 0) return zero();
    long m = n < 0 ? -n : n;
    LaurentPoly p;
    for (long k = 0; k < m; ++k) p += LaurentPoly::monomial(Rational(1), static_cast<int>(2 * d * (m - 1 - 2 * k)));
    return n < 0 ? -RatFunc(p) : RatFunc(p);
  }

  bool symbolic() const { return true; }
  bool classical() const { return false; }
  std::string describe() const { return "symbolic"; }
  Rational value_at(const value_type& x, const Rational& q0) const { return evaluate(x, q0); }
};

/// Scalars evaluated at a fixed rational q > 0 (q = 1 is the classical limit).
struct EvaluatedField {
  using value_type = Rational;

  explicit EvaluatedField(Rational q0) : q(std::move(q0)), sqrt_q(rational_sqrt(q)) {
    if (sgn(q) <= 0) throw std::domain_error("q must be positive, got " + q.get_str());
  }

  Rational q;
  std::optional<Rational> sqrt_q;

  value_type zero() const { return Rational(0); }
  value_type one() const { return Rational(1); }
  value_type from_int(long n) const { return Rational(n); }
  value_type from_rational(const Rational& r) const { return r; }

  value_type q_power(const Rational& e) const {
    check_half_integer(e);
    if (e.get_den() == 1) return rpow(q, e.get_num().get_si());
    if (!sqrt_q) {
      throw std::domain_error("q^" + e.get_str() + " is irrational at q = " + q.get_str());
    }
    Rational twice = 2 * e;
    return rpow(*sqrt_q, twice.get_num().get_si());
  }
  value_type q_power(long e) const { return rpow(q, e); }

  value_type q_integer(long n, long d) const {
    if (n == 0) return zero();
    long m = n < 0 ? -n : n;
    Rational acc(0);
    for (long k = 0; k < m; ++k) acc += rpow(q, d * (m - 1 - 2 * k));
    return n < 0 ? Rational(-acc) : acc;
  }

  bool symbolic() const { return false; }
  bool classical() const { return q == 1; }
  std::string describe() const { return q.get_str(); }
  Rational value_at(const value_type& x, const Rational&) const { return x; }
};

}  // namespace qflag
