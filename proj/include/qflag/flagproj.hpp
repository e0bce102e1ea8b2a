#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qflag/check.hpp"
#include "qflag/coord.hpp"

namespace qflag {

/// Square matrix of coordinate-ring elements indexed by a module basis.
///
/// Orthonormal-basis identities are restated for the weighted basis through
/// the similarity X -> D^{-1/2} X D^{1/2}, D = diag(N_i), which needs no
/// square roots: the projection is Phat^i_j = N_j u^i_1 (u^j_1)^*, and more
/// generally (R^a_b)^i_j = N_j u^i_b (u^j_a)^*.
template <class Field>
struct CoordMatrix {
  using K = typename Field::value_type;
  using Elem = CoordElem<Field>;

  const CoordRing<Field>* ring = nullptr;
  int module = 0;
  std::vector<std::vector<std::shared_ptr<const Elem>>> entries;

  int size() const { return static_cast<int>(entries.size()); }
  const Elem& at(int i, int j) const { return *entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  std::shared_ptr<const Elem> ptr(int i, int j) const { return entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  /// (2 rho, lambda_i).
  long two_rho(int i) const { return ring->module(module).two_rho_exponent(i); }
  const K& norm(int i) const { return ring->module(module).norm(i); }
};

template <class Field>
CoordMatrix<Field> make_matrix(const CoordRing<Field>& ring, int m, std::vector<std::vector<CoordElem<Field>>> e) {
  CoordMatrix<Field> out;
  out.ring = &ring;
  out.module = m;
  for (auto& row : e) {
    std::vector<std::shared_ptr<const CoordElem<Field>>> r;
    for (auto& x : row) r.push_back(std::make_shared<const CoordElem<Field>>(std::move(x)));
    out.entries.push_back(std::move(r));
  }
  return out;
}

/// R^a_b with entries N_j u^i_b (u^j_a)^* (0-based a, b); R^0_0 is the projection.
template <class Field>
CoordMatrix<Field> build_matrix_unit(const CoordRing<Field>& ring, int m, int a, int b) {
  const HWModule<Field>& mod = ring.module(m);
  int n = mod.dim();
  std::vector<CoordElem<Field>> right;
  for (int j = 0; j < n; ++j) right.push_back(ring.mc(m, j, a, true));
  std::vector<std::vector<CoordElem<Field>>> e(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    CoordElem<Field> left = ring.mc(m, i, b);
    for (int j = 0; j < n; ++j) e[static_cast<std::size_t>(i)].push_back(ring.multiply(left, right[static_cast<std::size_t>(j)]) * mod.norm(j));
  }
  return make_matrix(ring, m, std::move(e));
}

/// The flag projection Phat^i_j = N_j u^i_1 (u^j_1)^* of the module m.
template <class Field>
CoordMatrix<Field> build_projection(const CoordRing<Field>& ring, int m) {
  return build_matrix_unit(ring, m, 0, 0);
}

template <class Field>
CoordMatrix<Field> matrix_product(const CoordMatrix<Field>& a, const CoordMatrix<Field>& b) {
  const CoordRing<Field>& ring = *a.ring;
  int n = a.size();
  std::vector<std::vector<CoordElem<Field>>> e(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      CoordElem<Field> s = ring.zero();
      for (int k = 0; k < n; ++k) s += ring.multiply(a.at(i, k), b.at(k, j));
      e[static_cast<std::size_t>(i)].push_back(std::move(s));
    }
  }
  return make_matrix(ring, a.module, std::move(e));
}

/// Tr_q(M) = sum_i q^{(2 rho, lambda_i)} M^i_i.
template <class Field>
CoordElem<Field> quantum_trace(const CoordMatrix<Field>& m) {
  const CoordRing<Field>& ring = *m.ring;
  CoordElem<Field> s = ring.zero();
  for (int i = 0; i < m.size(); ++i) s += m.at(i, i) * ring.qp(m.two_rho(i));
  return s;
}

/// Tr_q of the scalar identity matrix: sum_i q^{(2 rho, lambda_i)}.
template <class Field>
typename Field::value_type quantum_dimension(const CoordRing<Field>& ring, int m) {
  typename Field::value_type acc = ring.field().zero();
  for (int i = 0; i < ring.module(m).dim(); ++i) acc += ring.qp(ring.module(m).two_rho_exponent(i));
  return acc;
}

namespace detail {

// Folds per-entry zero tests into one record; the certificate is the largest
// cyclic module used.
struct EntryTally {
  long entries = 0;
  long failures = 0;
  long max_dim = 0;
  long max_gens = 0;
  std::string first_failure;

  void add(const ZeroCertificate& c, const std::string& where) {
    ++entries;
    max_dim = std::max(max_dim, c.module_dim);
    max_gens = std::max(max_gens, c.generators);
    if (!c.zero) {
      if (failures == 0) first_failure = where;
      ++failures;
    }
  }

  Check finish(std::string name, const std::string& what) const {
    Check c;
    c.name = std::move(name);
    c.status = failures == 0 ? Status::Pass : Status::Fail;
    c.lhs = what;
    c.rhs = "0";
    c.detail = std::to_string(entries - failures) + "/" + std::to_string(entries) + " entries vanish";
    if (failures) c.detail += "; first nonzero at " + first_failure;
    c.certificate = "cyclic_dim<=" + std::to_string(max_dim) + " generators<=" + std::to_string(max_gens);
    return c;
  }
};

inline std::string entry_label(int i, int j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }

}  // namespace detail

/// P^2 = P, the weighted self-adjointness N_i (P^i_j)^* = N_j P^j_i, and
/// Tr_q(P) = q^{(2 rho, rho_S)}.
template <class Field>
std::vector<Check> verify_projection_laws(const CoordMatrix<Field>& p, const std::vector<int>& rho_S) {
  const CoordRing<Field>& ring = *p.ring;
  int n = p.size();
  std::vector<Check> out;
  {
    Stopwatch sw;
    detail::EntryTally t;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        CoordElem<Field> s = ring.zero();
        for (int k = 0; k < n; ++k) s += ring.multiply(p.at(i, k), p.at(k, j));
        s -= p.at(i, j);
        t.add(ring.is_zero(s), detail::entry_label(i, j));
      }
    }
    out.push_back(t.finish("projection.idempotent", "P*P - P"));
    out.back().wall_ms = sw.ms();
  }
  {
    Stopwatch sw;
    detail::EntryTally t;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        CoordElem<Field> s = ring.star(p.at(i, j)) * p.norm(i) - p.at(j, i) * p.norm(j);
        t.add(ring.is_zero(s), detail::entry_label(i, j));
      }
    }
    out.push_back(t.finish("projection.selfadjoint", "N_i (P^i_j)^* - N_j P^j_i"));
    out.back().wall_ms = sw.ms();
  }
  {
    Stopwatch sw;
    long ex = ring.root_system().two_rho_pair(rho_S);
    CoordElem<Field> tr = quantum_trace(p);
    ZeroCertificate c = ring.is_zero(tr - ring.scalar(ring.qp(ex)));
    Check ch = make_check("projection.qtrace", c.zero, "Tr_q(P)", "q^" + std::to_string(ex));
    ch.detail = "(2rho, rho_S) = " + std::to_string(ex);
    ch.certificate = c.text();
    ch.wall_ms = sw.ms();
    out.push_back(std::move(ch));
  }
  return out;
}

inline long counit_of(Gen g) { return (g.kind == Gen::K || g.kind == Gen::Kinv) ? 1 : 0; }

/// X |> P^i_j = eps(X) P^i_j for X in {K_k : all k} and {E_k, F_k : k in S}.
/// For k outside S, F_k is reported as a control that must act non-trivially.
template <class Field>
std::vector<Check> verify_levi_invariance(const CoordMatrix<Field>& p, const std::vector<int>& S) {
  const CoordRing<Field>& ring = *p.ring;
  int n = p.size();
  int r = ring.rank();
  std::vector<Gen> gens;
  for (int k = 0; k < r; ++k) gens.push_back({Gen::K, k});
  for (int k : S) {
    gens.push_back({Gen::E, k});
    gens.push_back({Gen::F, k});
  }
  std::vector<Check> out;
  for (Gen g : gens) {
    Stopwatch sw;
    detail::EntryTally t;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        CoordElem<Field> s = ring.act_left(g, p.at(i, j));
        if (counit_of(g)) s -= p.at(i, j);
        t.add(ring.is_zero(s), detail::entry_label(i, j));
      }
    }
    out.push_back(t.finish("invariance." + g.label(), g.label() + " |> P - eps(" + g.label() + ") P"));
    out.back().wall_ms = sw.ms();
  }
  for (int k = 0; k < r; ++k) {
    if (std::find(S.begin(), S.end(), k) != S.end()) continue;
    Stopwatch sw;
    Gen g{Gen::F, k};
    long nonzero = 0;
    long max_dim = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        ZeroCertificate c = ring.is_zero(ring.act_left(g, p.at(i, j)));
        max_dim = std::max(max_dim, c.module_dim);
        if (!c.zero) ++nonzero;
      }
    }
    Check ch = make_check("invariance.control." + g.label(), nonzero > 0, g.label() + " |> P", "nonzero");
    ch.detail = std::to_string(nonzero) + " nonzero entries";
    ch.certificate = "cyclic_dim<=" + std::to_string(max_dim);
    ch.wall_ms = sw.ms();
    out.push_back(std::move(ch));
  }
  return out;
}

/// R^a_b R^c_d = delta_ad N_a R^c_b, Tr_q(R^a_b) = delta_ab N_a q^{(2 rho, lambda_a)},
/// and N_j ((R^a_b)^j_i)^* = N_i (R^b_a)^i_j, for the given index list.
template <class Field>
std::vector<Check> verify_matrix_units(const CoordRing<Field>& ring, int m, const std::vector<int>& idx) {
  using Elem = CoordElem<Field>;
  const HWModule<Field>& mod = ring.module(m);
  int n = mod.dim();
  std::map<std::pair<int, int>, CoordMatrix<Field>> units;
  for (int a : idx) {
    for (int b : idx) units.emplace(std::make_pair(a, b), build_matrix_unit(ring, m, a, b));
  }
  std::vector<Check> out;
  {
    Stopwatch sw;
    detail::EntryTally t;
    for (int a : idx) {
      for (int b : idx) {
        for (int c : idx) {
          for (int d : idx) {
            const auto& x = units.at({a, b});
            const auto& y = units.at({c, d});
            const auto& z = units.at({c, b});
            for (int i = 0; i < n; ++i) {
              for (int j = 0; j < n; ++j) {
                Elem s = ring.zero();
                for (int k = 0; k < n; ++k) s += ring.multiply(x.at(i, k), y.at(k, j));
                if (a == d) s -= z.at(i, j) * mod.norm(a);
                t.add(ring.is_zero(s), "a,b,c,d=" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "," +
                                           std::to_string(c + 1) + "," + std::to_string(d + 1) + " " +
                                           detail::entry_label(i, j));
              }
            }
          }
        }
      }
    }
    out.push_back(t.finish("matrixunit.product", "R^a_b R^c_d - delta_ad N_a R^c_b"));
    out.back().wall_ms = sw.ms();
  }
  {
    Stopwatch sw;
    detail::EntryTally t;
    for (int a : idx) {
      for (int b : idx) {
        Elem s = quantum_trace(units.at({a, b}));
        if (a == b) s -= ring.scalar(mod.norm(a) * ring.qp(mod.two_rho_exponent(a)));
        t.add(ring.is_zero(s), "a,b=" + std::to_string(a + 1) + "," + std::to_string(b + 1));
      }
    }
    out.push_back(t.finish("matrixunit.qtrace", "Tr_q(R^a_b) - delta_ab N_a q^{(2rho,lambda_a)}"));
    out.back().wall_ms = sw.ms();
  }
  {
    Stopwatch sw;
    detail::EntryTally t;
    for (int a : idx) {
      for (int b : idx) {
        const auto& x = units.at({a, b});
        const auto& y = units.at({b, a});
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            Elem s = ring.star(x.at(j, i)) * mod.norm(j) - y.at(i, j) * mod.norm(i);
            t.add(ring.is_zero(s), "a,b=" + std::to_string(a + 1) + "," + std::to_string(b + 1) + " " +
                                       detail::entry_label(i, j));
          }
        }
      }
    }
    out.push_back(t.finish("matrixunit.star", "N_j ((R^a_b)^j_i)^* - N_i (R^b_a)^i_j"));
    out.back().wall_ms = sw.ms();
  }
  return out;
}

}  // namespace qflag
