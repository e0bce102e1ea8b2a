#pragma once

#include <string>
#include <vector>

#include "qflag/repn.hpp"

namespace qflag {

/// Number of basis columns violating each defining relation of a module.
struct RelationReport {
  long weight_shift = 0;  // K_j E_i K_j^{-1} = q^{(alpha_j, alpha_i)} E_i and likewise for F
  long commutator = 0;    // [E_i, F_j] = delta_ij [mu_i]_{q_i}
  long serre = 0;         // quantum Serre relations in E and in F
  long adjoint = 0;       // (E_i)_{ab} N_a = (K_i F_i)_{ba} N_b
  long checked = 0;

  bool ok() const { return weight_shift == 0 && commutator == 0 && serre == 0 && adjoint == 0; }
  std::string text() const {
    return "weight_shift=" + std::to_string(weight_shift) + " commutator=" + std::to_string(commutator) +
           " serre=" + std::to_string(serre) + " adjoint=" + std::to_string(adjoint) + " of " + std::to_string(checked);
  }
};

/// Gaussian binomial [n choose k] in base q^d.
template <class Field>
typename Field::value_type q_binomial(const Field& f, long n, long k, long d) {
  typename Field::value_type num = f.one(), den = f.one();
  for (long t = 0; t < k; ++t) {
    num *= f.q_integer(n - t, d);
    den *= f.q_integer(t + 1, d);
  }
  return num / den;
}

template <class Field>
RelationReport verify_relations(const HWModule<Field>& m) {
  using K = typename Field::value_type;
  const RootSystem& rs = m.root_system();
  const Field& fld = m.field();
  int n = m.dim();
  int r = rs.rank();
  RelationReport rep;
  auto nonzero = [](const std::vector<K>& v) {
    for (const auto& x : v) {
      if (!is_zero(x)) return true;
    }
    return false;
  };
  auto axpy = [](std::vector<K>& acc, const K& c, const std::vector<K>& v) {
    for (std::size_t t = 0; t < v.size(); ++t) {
      if (!is_zero(v[t])) acc[t] += c * v[t];
    }
  };
  for (int b = 0; b < n; ++b) {
    std::vector<K> e_b = m.basis_vector(b);
    const std::vector<int>& mu = m.weight(b);
    for (int i = 0; i < r; ++i) {
      std::vector<int> ai = rs.root_to_weight(rs.simple_root(i));
      for (Gen g : {Gen{Gen::E, i}, Gen{Gen::F, i}}) {
        int sign = g.kind == Gen::E ? 1 : -1;
        for (const auto& [row, v] : m.matrix(g).cols[static_cast<std::size_t>(b)]) {
          ++rep.checked;
          if (is_zero(v)) continue;
          for (int k = 0; k < r; ++k) {
            if (m.weight(row)[static_cast<std::size_t>(k)] != mu[static_cast<std::size_t>(k)] + sign * ai[static_cast<std::size_t>(k)]) {
              ++rep.weight_shift;
              break;
            }
          }
        }
      }
      for (int j = 0; j < r; ++j) {
        ++rep.checked;
        std::vector<K> ef = m.act(Gen{Gen::E, i}, m.act(Gen{Gen::F, j}, e_b));
        std::vector<K> fe = m.act(Gen{Gen::F, j}, m.act(Gen{Gen::E, i}, e_b));
        axpy(ef, K(Rational(-1)), fe);
        if (i == j) ef[static_cast<std::size_t>(b)] -= fld.q_integer(mu[static_cast<std::size_t>(i)], rs.d(i));
        if (nonzero(ef)) ++rep.commutator;
        if (i == j) continue;
        long len = 1 - rs.a(i, j);
        for (Gen::Kind kind : {Gen::E, Gen::F}) {
          ++rep.checked;
          std::vector<K> acc(static_cast<std::size_t>(n), fld.zero());
          for (long k = 0; k <= len; ++k) {
            std::vector<K> v = e_b;
            for (long t = 0; t < k; ++t) v = m.act(Gen{kind, i}, v);
            v = m.act(Gen{kind, j}, v);
            for (long t = 0; t < len - k; ++t) v = m.act(Gen{kind, i}, v);
            K c = q_binomial(fld, len, k, rs.d(i));
            if (k % 2) c = -c;
            axpy(acc, c, v);
          }
          if (nonzero(acc)) ++rep.serre;
        }
      }
    }
  }
  for (int i = 0; i < r; ++i) {
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) {
        K e_ac = m.E(i).entry(a, c, fld.zero());
        K kf_ca = m.F(i).entry(c, a, fld.zero()) * fld.q_power(m.k_exponent(c, i));
        ++rep.checked;
        if (e_ac * m.norm(a) != kf_ca * m.norm(c)) ++rep.adjoint;
      }
    }
  }
  return rep;
}

}  // namespace qflag
