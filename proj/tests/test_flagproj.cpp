#include <gtest/gtest.h>

#include <array>

#include "qflag/flagproj.hpp"

using namespace qflag;

namespace {

using F = EvaluatedField;

bool all_pass(const std::vector<Check>& cs) {
  for (const auto& c : cs) {
    if (!c.passed()) return false;
  }
  return !cs.empty();
}

const Check& named(const std::vector<Check>& cs, const std::string& name) {
  for (const auto& c : cs) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no check " + name);
}

// Entrywise P*P - P computed without matrix_product.
template <class Field>
bool idempotent_by_hand(const CoordMatrix<Field>& p) {
  const auto& ring = *p.ring;
  for (int i = 0; i < p.size(); ++i) {
    for (int j = 0; j < p.size(); ++j) {
      CoordElem<Field> s = ring.zero() - p.at(i, j);
      for (int k = 0; k < p.size(); ++k) s += ring.multiply(p.at(i, k), p.at(k, j));
      if (!ring.is_zero(s).zero) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Projection, ShapeAndCounit) {
  CoordRing<F> ring(RootSystem('A', 2), F(Rational(1, 2)));
  int m = ring.add_module({1, 0});
  CoordMatrix<F> p = build_projection(ring, m);
  ASSERT_EQ(p.size(), 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_EQ(ring.counit(p.at(i, j)), Rational(i == 0 && j == 0 ? 1 : 0)) << i << j;
  }
  CoordMatrix<F> r00 = build_matrix_unit(ring, m, 0, 0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_TRUE(ring.is_zero(r00.at(i, j) - p.at(i, j)).zero);
  }
  EXPECT_EQ(p.two_rho(0), 2);
  EXPECT_EQ(p.norm(0), Rational(1));
}

TEST(Projection, QuantumDimension) {
  SymbolicField f;
  CoordRing<SymbolicField> ring(RootSystem('A', 1), f);
  int m = ring.add_module({1});
  EXPECT_EQ(quantum_dimension(ring, m), RatFunc::s_power(2) + RatFunc::s_power(-2));
  CoordRing<F> r2(RootSystem('A', 2), F(Rational(1, 2)));
  int m2 = r2.add_module({1, 0});
  EXPECT_EQ(quantum_dimension(r2, m2), Rational(1, 4) + 1 + 4);
}

TEST(Projection, LawsA1Symbolic) {
  CoordRing<SymbolicField> ring(RootSystem('A', 1), SymbolicField{});
  int m = ring.add_module({1});
  CoordMatrix<SymbolicField> p = build_projection(ring, m);
  auto cs = verify_projection_laws(p, {1});
  EXPECT_TRUE(all_pass(cs));
  EXPECT_EQ(cs.size(), 3u);
  EXPECT_TRUE(idempotent_by_hand(p));
  CoordElem<SymbolicField> tr = quantum_trace(p);
  EXPECT_TRUE(ring.is_zero(tr - ring.scalar(RatFunc::s_power(2))).zero);
}

TEST(Projection, LawsA2AtSeveralQ) {
  for (const Rational q0 : {Rational(1, 2), Rational(2, 3), Rational(3, 5)}) {
    CoordRing<F> ring(RootSystem('A', 2), F(q0));
    int m = ring.add_module({1, 0});
    CoordMatrix<F> p = build_projection(ring, m);
    auto cs = verify_projection_laws(p, {1, 0});
    for (const auto& c : cs) EXPECT_TRUE(c.passed()) << c.name << " q=" << q0 << " " << c.detail;
    EXPECT_TRUE(idempotent_by_hand(p));
    // Tr_q(P) = q^{(2rho, omega_1)} = q^2.
    EXPECT_TRUE(ring.is_zero(quantum_trace(p) - ring.scalar(q0 * q0)).zero);
  }
}

TEST(Projection, PerturbedMatrixFailsTheLaws) {
  CoordRing<F> ring(RootSystem('A', 2), F(Rational(1, 2)));
  int m = ring.add_module({1, 0});
  CoordMatrix<F> p = build_projection(ring, m);
  std::vector<std::vector<CoordElem<F>>> e;
  for (int i = 0; i < 3; ++i) {
    e.emplace_back();
    for (int j = 0; j < 3; ++j) e.back().push_back(p.at(i, j) * Rational(i == 0 && j == 1 ? 2 : 1));
  }
  CoordMatrix<F> bad = make_matrix(ring, m, std::move(e));
  auto cs = verify_projection_laws(bad, {1, 0});
  EXPECT_FALSE(named(cs, "projection.idempotent").passed());
  EXPECT_FALSE(named(cs, "projection.selfadjoint").passed());
  EXPECT_FALSE(idempotent_by_hand(bad));
}

TEST(Projection, LeviInvariance) {
  CoordRing<F> ring(RootSystem('A', 2), F(Rational(2, 3)));
  int m = ring.add_module({1, 0});
  CoordMatrix<F> p = build_projection(ring, m);
  auto cs = verify_levi_invariance(p, {1});
  EXPECT_TRUE(all_pass(cs));
  EXPECT_NO_THROW(named(cs, "invariance.E2"));
  EXPECT_NO_THROW(named(cs, "invariance.F2"));
  EXPECT_NO_THROW(named(cs, "invariance.K1"));
  EXPECT_TRUE(named(cs, "invariance.control.F1").passed());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_TRUE(ring.is_zero(ring.act_left(Gen{Gen::E, 1}, p.at(i, j))).zero);
      EXPECT_TRUE(ring.is_zero(ring.act_left(Gen{Gen::K, 0}, p.at(i, j)) - p.at(i, j)).zero);
    }
  }
  EXPECT_EQ(counit_of(Gen{Gen::K, 0}), 1);
  EXPECT_EQ(counit_of(Gen{Gen::E, 0}), 0);
}

TEST(MatrixUnits, LawsOnVectorRepresentations) {
  CoordRing<SymbolicField> r1(RootSystem('A', 1), SymbolicField{});
  int m1 = r1.add_module({1});
  for (const auto& c : verify_matrix_units(r1, m1, {0, 1})) EXPECT_TRUE(c.passed()) << c.name << " " << c.detail;
  CoordRing<F> r2(RootSystem('A', 2), F(Rational(3, 5)));
  int m2 = r2.add_module({1, 0});
  auto cs = verify_matrix_units(r2, m2, {0, 1, 2});
  EXPECT_EQ(cs.size(), 3u);
  for (const auto& c : cs) EXPECT_TRUE(c.passed()) << c.name << " " << c.detail;
}

TEST(MatrixUnits, ProductTableByHand) {
  // R^a_b R^c_d = delta_ad N_a R^c_b, spot-checked without verify_matrix_units.
  CoordRing<F> ring(RootSystem('A', 2), F(Rational(1, 2)));
  int m = ring.add_module({1, 0});
  const auto& mod = ring.module(m);
  for (auto [a, b, c, d] : std::vector<std::array<int, 4>>{{0, 1, 2, 0}, {1, 2, 0, 1}, {2, 2, 2, 2}, {0, 1, 0, 1}}) {
    CoordMatrix<F> lhs = matrix_product(build_matrix_unit(ring, m, a, b), build_matrix_unit(ring, m, c, d));
    CoordMatrix<F> rhs = build_matrix_unit(ring, m, c, b);
    Rational scale = a == d ? mod.norm(a) : Rational(0);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        EXPECT_TRUE(ring.is_zero(lhs.at(i, j) - rhs.at(i, j) * scale).zero) << a << b << c << d;
      }
    }
  }
}

TEST(MatrixUnits, WeightedStarByHand) {
  CoordRing<F> ring(RootSystem('A', 2), F(Rational(2, 3)));
  int m = ring.add_module({1, 0});
  const auto& mod = ring.module(m);
  CoordMatrix<F> r01 = build_matrix_unit(ring, m, 0, 1);
  CoordMatrix<F> r10 = build_matrix_unit(ring, m, 1, 0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CoordElem<F> s = ring.star(r01.at(j, i)) * mod.norm(j) - r10.at(i, j) * mod.norm(i);
      EXPECT_TRUE(ring.is_zero(s).zero) << i << j;
    }
  }
}

TEST(Projection, ThetaOnEntries) {
  // theta(P^i_j) = q^{(2rho, lambda_i - lambda_j)} P^i_j.
  CoordRing<F> ring(RootSystem('A', 2), F(Rational(1, 2)));
  int m = ring.add_module({1, 0});
  CoordMatrix<F> p = build_projection(ring, m);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Rational f = ring.qp(p.two_rho(i) - p.two_rho(j));
      EXPECT_TRUE(ring.is_zero(ring.theta_weight(p.at(i, j)) - p.at(i, j) * f).zero);
      EXPECT_TRUE(ring.is_zero(ring.theta_action(p.at(i, j)) - p.at(i, j) * f).zero);
    }
  }
}
