#include <gtest/gtest.h>

#include "qflag/qscalar.hpp"

using namespace qflag;

namespace {

RatFunc s(int k) { return RatFunc::s_power(k); }
Rational r(long a, long b = 1) {
  Rational x(a, b);
  x.canonicalize();
  return x;
}

// (q^{dn} - q^{-dn}) / (q^d - q^{-d}) computed by direct division.
Rational q_integer_quotient(long n, long d, const Rational& q) {
  return (rpow(q, d * n) - rpow(q, -d * n)) / (rpow(q, d) - rpow(q, -d));
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("3/5"), r(3, 5));
  EXPECT_EQ(parse_rational("-4/6"), r(-2, 3));
  EXPECT_EQ(parse_rational("7"), r(7));
  EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
}

TEST(Rational, PowersAndSquareRoots) {
  EXPECT_EQ(rpow(r(2, 3), 3), r(8, 27));
  EXPECT_EQ(rpow(r(2, 3), -2), r(9, 4));
  EXPECT_EQ(rpow(r(5), 0), r(1));
  ASSERT_TRUE(rational_sqrt(r(4, 9)).has_value());
  EXPECT_EQ(*rational_sqrt(r(4, 9)), r(2, 3));
  EXPECT_FALSE(rational_sqrt(r(1, 2)).has_value());
}

TEST(SymbolicField, QPowers) {
  SymbolicField f;
  EXPECT_EQ(f.q_power(2L), s(4));
  EXPECT_EQ(f.q_power(r(3, 2)), s(3));
  EXPECT_EQ(f.q_power(r(-1, 2)), s(-1));
  EXPECT_THROW(f.q_power(r(1, 3)), std::domain_error);
}

TEST(EvaluatedField, QPowers) {
  EvaluatedField f(r(4, 9));
  EXPECT_EQ(f.q_power(r(3, 2)), r(8, 27));
  EXPECT_EQ(f.q_power(-1L), r(9, 4));
  EvaluatedField g(r(1, 2));
  EXPECT_EQ(g.q_power(3L), r(1, 8));
  EXPECT_THROW(g.q_power(r(1, 2)), std::domain_error);
  EXPECT_THROW(EvaluatedField(r(0)), std::domain_error);
  EXPECT_THROW(EvaluatedField(r(-1, 2)), std::domain_error);
  EXPECT_TRUE(EvaluatedField(r(1)).classical());
  EXPECT_FALSE(g.classical());
}

TEST(SymbolicField, QIntegers) {
  SymbolicField f;
  EXPECT_EQ(f.q_integer(2, 1), s(2) + s(-2));
  EXPECT_EQ(f.q_integer(3, 1), s(4) + RatFunc(r(1)) + s(-4));
  EXPECT_EQ(f.q_integer(1, 3), f.one());
  EXPECT_EQ(f.q_integer(0, 2), f.zero());
  EXPECT_EQ(f.q_integer(-3, 2), -f.q_integer(3, 2));
  // [2]_{q^2} = q^2 + q^-2
  EXPECT_EQ(f.q_integer(2, 2), s(4) + s(-4));
}

TEST(EvaluatedField, QIntegersMatchQuotientForm) {
  for (const Rational q : {r(1, 2), r(2, 3), r(3, 5), r(7, 3)}) {
    EvaluatedField f(q);
    for (long n = -4; n <= 6; ++n) {
      for (long d = 1; d <= 3; ++d) {
        Rational expect = n == 0 ? r(0) : q_integer_quotient(n, d, q);
        EXPECT_EQ(f.q_integer(n, d), expect) << "n=" << n << " d=" << d << " q=" << q;
      }
    }
  }
  EXPECT_EQ(EvaluatedField(r(1, 2)).q_integer(2, 1), r(5, 2));
}

TEST(SymbolicField, QIntegersAtClassicalPointAreIntegers) {
  SymbolicField f;
  for (long n = -5; n <= 5; ++n) {
    for (long d = 1; d <= 3; ++d) EXPECT_EQ(evaluate(f.q_integer(n, d), r(1)), r(n));
  }
}

TEST(RatFunc, Evaluation) {
  RatFunc x = s(2) + s(-2);
  EXPECT_EQ(evaluate(x, r(2, 3)), r(13, 6));
  EXPECT_EQ(evaluate(s(1), r(9, 4)), r(3, 2));
  EXPECT_THROW(evaluate(s(1), r(1, 2)), std::domain_error);
  EXPECT_THROW(evaluate(x, r(0)), std::domain_error);
}

TEST(RatFunc, CancellationReducesToCanonicalForm) {
  RatFunc d = s(2) - s(-2);
  EXPECT_EQ(d / d, RatFunc(r(1)));
  RatFunc num = s(4) - s(-4);
  EXPECT_EQ(num / d, s(2) + s(-2));
  RatFunc a(LaurentPoly(0, {r(2), r(4)}), LaurentPoly(0, {r(6), r(12)}));
  EXPECT_EQ(a, RatFunc(r(1, 3)));
  RatFunc b(LaurentPoly(1, {r(1)}), LaurentPoly(0, {r(-2), r(0), r(4)}));
  EXPECT_GT(sgn(b.den().coeffs().front()), 0);
  EXPECT_EQ(b.den().low(), 0);
  EXPECT_EQ(to_string(RatFunc(r(3, 4))), "3/4");
}

TEST(RatFunc, PoleRaisesDomainErrorNamingDenominator) {
  RatFunc x(LaurentPoly(r(1)), LaurentPoly(0, {r(-1), r(0), r(2)}));
  try {
    evaluate(x, r(1, 2));
    FAIL() << "expected a pole";
  } catch (const std::domain_error& e) {
    std::string what = e.what();
    EXPECT_NE(what.find("denominator"), std::string::npos) << what;
    EXPECT_NE(what.find("-2*s^2 + 1"), std::string::npos) << what;
  }
  EXPECT_EQ(evaluate(x, r(1, 4)), r(-2));
}

TEST(RatFunc, DivisionByZeroThrows) {
  EXPECT_THROW(RatFunc(r(1)) / RatFunc(), std::domain_error);
  EXPECT_THROW(RatFunc(LaurentPoly(r(1)), LaurentPoly()), std::domain_error);
}

TEST(RatFunc, HalfIntegerExponentCheck) {
  EXPECT_NO_THROW(check_half_integer(r(5, 2)));
  EXPECT_NO_THROW(check_half_integer(r(-3)));
  EXPECT_THROW(check_half_integer(r(1, 4)), std::domain_error);
}

TEST(LaurentPoly, ArithmeticAndTrim) {
  LaurentPoly p(-1, {r(0), r(1), r(2), r(0)});
  EXPECT_EQ(p.low(), 0);
  EXPECT_EQ(p.high(), 1);
  EXPECT_EQ(p.coeff(1), r(2));
  LaurentPoly q = p * LaurentPoly::monomial(r(1), -3);
  EXPECT_EQ(q.low(), -3);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ(p.eval(r(1, 2)), r(2));
  EXPECT_TRUE(p.has_odd_exponent());
  EXPECT_EQ(LaurentPoly(-2, {r(1), r(0), r(-1)}).to_string('s'), "-1 + s^-2");
}
