#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qflag/rational.hpp"

namespace qflag {

/// Laurent polynomial sum_k c_k s^(low+k) with rational coefficients.
/// Stored trimmed: first and last coefficients are nonzero; zero is empty.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(const Rational& c) {
    if (!qflag::is_zero(c)) coeffs_.push_back(c);
  }
  LaurentPoly(int low, std::vector<Rational> coeffs) : low_(low), coeffs_(std::move(coeffs)) { trim(); }

  static LaurentPoly monomial(const Rational& c, int exponent) {
    LaurentPoly p(c);
    if (!p.is_zero()) p.low_ = exponent;
    return p;
  }

  bool is_zero() const { return coeffs_.empty(); }
  int low() const { return low_; }
  int high() const { return low_ + static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  Rational coeff(int exponent) const {
    if (is_zero() || exponent < low_ || exponent > high()) return Rational(0);
    return coeffs_[static_cast<std::size_t>(exponent - low_)];
  }

  bool is_constant() const { return is_zero() || (coeffs_.size() == 1 && low_ == 0); }

  bool has_odd_exponent() const {
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (!qflag::is_zero(coeffs_[k]) && ((low_ + static_cast<int>(k)) % 2 != 0)) return true;
    }
    return false;
  }

  LaurentPoly shifted(int k) const {
    LaurentPoly out = *this;
    if (!out.is_zero()) out.low_ += k;
    return out;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) { return add_scaled(o, Rational(1)); }
  LaurentPoly& operator-=(const LaurentPoly& o) { return add_scaled(o, Rational(-1)); }

  LaurentPoly& add_scaled(const LaurentPoly& o, const Rational& c) {
    if (o.is_zero() || qflag::is_zero(c)) return *this;
    if (is_zero()) {
      *this = o;
      for (auto& x : coeffs_) x *= c;
      return *this;
    }
    int lo = std::min(low_, o.low_);
    int hi = std::max(high(), o.high());
    std::vector<Rational> out(static_cast<std::size_t>(hi - lo + 1));
    for (std::size_t k = 0; k < coeffs_.size(); ++k) out[static_cast<std::size_t>(low_ - lo) + k] = coeffs_[k];
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) {
      out[static_cast<std::size_t>(o.low_ - lo) + k] += c * o.coeffs_[k];
    }
    low_ = lo;
    coeffs_ = std::move(out);
    trim();
    return *this;
  }

  LaurentPoly& operator*=(const Rational& c) {
    if (qflag::is_zero(c)) {
      coeffs_.clear();
      low_ = 0;
      return *this;
    }
    for (auto& x : coeffs_) x *= c;
    return *this;
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator-(LaurentPoly a) {
    for (auto& x : a.coeffs_) x = -x;
    return a;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (qflag::is_zero(a.coeffs_[i])) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return LaurentPoly(a.low_ + b.low_, std::move(out));
  }
  friend LaurentPoly operator*(LaurentPoly a, const Rational& c) { return a *= c; }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.coeffs_ == b.coeffs_ && (a.is_zero() || a.low_ == b.low_);
  }

  Rational eval(const Rational& s) const {
    if (is_zero()) return Rational(0);
    // Horner in s starting from the top coefficient, then scale by s^low.
    Rational acc(0);
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
      acc *= s;
      acc += coeffs_[k];
    }
    return acc * rpow(s, low_);
  }

  std::string to_string(char var = 's') const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
      const Rational& c = coeffs_[k];
      if (qflag::is_zero(c)) continue;
      int e = low_ + static_cast<int>(k);
      Rational mag = abs(c);
      if (first) {
        if (sgn(c) < 0) os << "-";
      } else {
        os << (sgn(c) < 0 ? " - " : " + ");
      }
      first = false;
      bool unit = (mag == 1);
      if (e == 0) {
        os << mag.get_str();
        continue;
      }
      if (!unit) os << mag.get_str() << "*";
      os << var;
      if (e != 1) os << "^" << e;
    }
    return os.str();
  }

 private:
  void trim() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && qflag::is_zero(coeffs_[lead])) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      low_ = 0;
      return;
    }
    std::size_t tail = coeffs_.size();
    while (qflag::is_zero(coeffs_[tail - 1])) --tail;
    if (lead > 0 || tail < coeffs_.size()) {
      coeffs_ = std::vector<Rational>(coeffs_.begin() + static_cast<std::ptrdiff_t>(lead),
                                      coeffs_.begin() + static_cast<std::ptrdiff_t>(tail));
    }
    low_ += static_cast<int>(lead);
  }

  int low_ = 0;
  std::vector<Rational> coeffs_;
};

namespace detail {

// Ordinary polynomials over Q, index = degree, trimmed (no trailing zeros).
using Poly = std::vector<Rational>;

inline void poly_trim(Poly& p) {
  while (!p.empty() && is_zero(p.back())) p.pop_back();
}

inline std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
  poly_trim(a);
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  Poly quot(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  Rational lead_inv = 1 / b.back();
  while (!a.empty() && a.size() >= b.size()) {
    std::size_t shift = a.size() - b.size();
    Rational c = a.back() * lead_inv;
    quot[shift] = c;
    for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= c * b[k];
    a.pop_back();
    poly_trim(a);
  }
  poly_trim(quot);
  return {quot, a};
}

inline Poly poly_gcd(Poly a, Poly b) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  Rational lead_inv = 1 / a.back();
  for (auto& c : a) c *= lead_inv;
  return a;
}

}  // namespace detail

}  // namespace qflag
