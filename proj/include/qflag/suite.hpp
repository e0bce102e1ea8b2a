#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qflag/cartan.hpp"
#include "qflag/check.hpp"
#include "qflag/classical.hpp"
#include "qflag/coord.hpp"
#include "qflag/flagproj.hpp"
#include "qflag/hochschild.hpp"
#include "qflag/qscalar.hpp"
#include "qflag/relations.hpp"
#include "qflag/repn.hpp"
#include "qflag/report.hpp"

namespace qflag {

/// Known number of positive roots of a simple type.
inline long expected_positive_roots(char type, int rank) {
  long n = rank;
  switch (type) {
    case 'A':
      return n * (n + 1) / 2;
    case 'B':
    case 'C':
      return n * n;
    case 'D':
      return n * (n - 1);
    case 'E':
      return n == 6 ? 36 : n == 7 ? 63 : 120;
    case 'F':
      return 24;
    case 'G':
      return 6;
  }
  throw std::invalid_argument("unsupported type");
}

namespace detail {

// Runs one stage; cap overruns become a skipped record and any other error a
// failed one, so later stages still run.
inline void guarded(Report& r, const std::string& stage, const std::function<void()>& body) {
  Stopwatch sw;
  try {
    body();
  } catch (const std::length_error& e) {
    Check c;
    c.name = stage;
    c.status = Status::Skipped;
    c.detail = std::string("cap exceeded: ") + e.what();
    c.wall_ms = sw.ms();
    r.add(std::move(c));
  } catch (const std::exception& e) {
    Check c;
    c.name = stage;
    c.status = Status::Fail;
    c.detail = std::string("error: ") + e.what();
    c.wall_ms = sw.ms();
    r.add(std::move(c));
  }
}

inline void add_all(Report& r, std::vector<Check> cs, const std::string& suffix) {
  for (auto& c : cs) {
    c.name += suffix;
    r.add(std::move(c));
  }
}

inline std::string weight_text(const std::vector<int>& w) {
  std::string s = "(";
  for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "," : "") + std::to_string(w[k]);
  return s + ")";
}

}  // namespace detail

inline std::vector<Check> cartan_checks(const RootSystem& rs, const ParabolicData& pd) {
  std::vector<Check> out;
  long want = expected_positive_roots(rs.type_letter(), rs.rank());
  long got = static_cast<long>(rs.positive_roots().size());
  out.push_back(make_check("cartan.positive_roots", got == want, std::to_string(got), std::to_string(want)));
  bool sym = true;
  for (int i = 0; i < rs.rank(); ++i) {
    for (int j = 0; j < rs.rank(); ++j) {
      if (rs.d(i) * rs.a(i, j) != rs.d(j) * rs.a(j, i)) sym = false;
    }
  }
  out.push_back(make_check("cartan.symmetrized", sym, "d_i a_ij", "d_j a_ji"));
  bool rho_ok = true;
  for (int i = 0; i < rs.rank(); ++i) {
    Rational p = rs.coroot_pairing(rs.simple_root(i), TaggedVec::weight(pd.rho_S));
    if (p != (pd.in_S(i) ? 0 : 1)) rho_ok = false;
  }
  out.push_back(make_check("cartan.rho_S", rho_ok, "rho_S=" + detail::weight_text(pd.rho_S), "(alpha_i^vee, rho_S) = [i not in S]"));
  long levi_pos = 0;
  for (const auto& r : pd.levi_roots) {
    bool pos = true;
    for (int x : r) pos = pos && x >= 0;
    if (pos) ++levi_pos;
  }
  long nil = static_cast<long>(pd.nilradical_pos.size());
  out.push_back(make_check("cartan.parabolic", levi_pos + nil == got, std::to_string(levi_pos) + "+" + std::to_string(nil),
                           std::to_string(got)));
  return out;
}

template <class Field>
std::vector<Check> module_checks(const HWModule<Field>& m, const ParabolicData& pd) {
  const RootSystem& rs = m.root_system();
  std::vector<Check> out;
  long w = weyl_dim(rs, m.highest_weight());
  out.push_back(make_check("repn.dimension", m.dim() == w, std::to_string(m.dim()), std::to_string(w)));
  RelationReport rel = verify_relations(m);
  Check c = make_check("repn.relations", rel.ok(), "violations", "0");
  c.detail = rel.text();
  out.push_back(std::move(c));
  bool positive = true;
  for (int b = 0; b < m.dim(); ++b) {
    if (m.field().symbolic()) {
      for (const Rational q0 : {Rational(1, 2), Rational(2, 3), Rational(3, 5)}) {
        if (sgn(m.field().value_at(m.norm(b), q0)) <= 0) positive = false;
      }
    } else if (sgn(m.field().value_at(m.norm(b), Rational(0))) <= 0) {
      positive = false;
    }
  }
  out.push_back(make_check("repn.norms.positive", positive, "N_b", "> 0"));
  for (int i : pd.subset) {
    bool zero = m.F(i).cols[0].empty();
    out.push_back(make_check("repn.levi.F" + std::to_string(i + 1), zero, zero ? "0" : "nonzero", "F_i v_1 = 0"));
  }
  return out;
}

/// theta through actions equals theta through weights, and
/// h(ab) = h(b theta(a)) on all single coefficients of module m and their stars.
template <class Field>
std::vector<Check> modular_checks(const CoordRing<Field>& ring, int m) {
  int n = ring.module(m).dim();
  std::vector<CoordElem<Field>> singles;
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) singles.push_back(ring.mc(m, i, j, c == 1));
    }
  }
  std::vector<Check> out;
  {
    Stopwatch sw;
    long bad = 0;
    for (const auto& a : singles) {
      if (!ring.is_zero(ring.theta_action(a) - ring.theta_weight(a)).zero) ++bad;
    }
    Check c = make_check("theta.agreement", bad == 0, "theta by action", "theta by weights");
    c.detail = std::to_string(singles.size() - static_cast<std::size_t>(bad)) + "/" + std::to_string(singles.size()) + " coefficients agree";
    c.wall_ms = sw.ms();
    out.push_back(std::move(c));
  }
  {
    Stopwatch sw;
    long bad = 0, total = 0;
    for (const auto& a : singles) {
      CoordElem<Field> ta = ring.theta_weight(a);
      for (const auto& b : singles) {
        ++total;
        if (ring.haar(ring.multiply(a, b)) != ring.haar(ring.multiply(b, ta))) ++bad;
      }
    }
    bool unit = ring.haar(ring.one()) == ring.field().one();
    Check c = make_check("modular.twisted_trace", bad == 0 && unit, "h(ab)", "h(b theta(a))");
    c.detail = std::to_string(total - bad) + "/" + std::to_string(total) + " pairs agree" + (unit ? "" : "; h(1) != 1");
    c.wall_ms = sw.ms();
    out.push_back(std::move(c));
  }
  return out;
}

/// Index choice for matrix-unit checks: all indices up to dimension 3,
/// otherwise the first two and the last.
inline std::vector<int> matrix_unit_indices(int dim) {
  if (dim <= 3) {
    std::vector<int> all;
    for (int i = 0; i < dim; ++i) all.push_back(i);
    return all;
  }
  return {0, 1, dim - 1};
}

inline std::vector<int> fundamental_weight(int rank, int i) {
  std::vector<int> w(static_cast<std::size_t>(rank), 0);
  w[static_cast<std::size_t>(i)] = 1;
  return w;
}

/// Everything that depends on q, run in one scalar mode.
template <class Field>
void run_quantum_block(const CaseConfig& cfg, const Field& field, const std::string& suffix, Report& r) {
  RootSystem rs(cfg.type, cfg.rank);
  ParabolicData pd = parabolic(rs, cfg.subset);
  CoordRing<Field> ring(rs, field, cfg.cyclic_cap);
  int m = -1;
  detail::guarded(r, "repn" + suffix, [&] {
    m = ring.add_module(pd.rho_S, cfg.dim_cap);
    detail::add_all(r, module_checks(ring.module(m), pd), suffix);
  });
  if (m < 0) return;
  CoordMatrix<Field> p = build_projection(ring, m);
  if (cfg.run_projection) {
    detail::guarded(r, "projection" + suffix, [&] { detail::add_all(r, verify_projection_laws(p, pd.rho_S), suffix); });
  }
  if (cfg.run_invariance) {
    detail::guarded(r, "invariance" + suffix, [&] { detail::add_all(r, verify_levi_invariance(p, pd.subset), suffix); });
  }
  int m1 = -1;
  auto fundamental = [&] {
    if (m1 >= 0) return m1;
    std::vector<int> w1 = fundamental_weight(cfg.rank, 0);
    m1 = w1 == pd.rho_S ? m : ring.add_module(w1, cfg.dim_cap);
    return m1;
  };
  if (cfg.run_matrix_units) {
    detail::guarded(r, "matrixunit" + suffix, [&] {
      int k = fundamental();
      detail::add_all(r, verify_matrix_units(ring, k, matrix_unit_indices(ring.module(k).dim())), suffix);
    });
  }
  if (cfg.run_modular) {
    detail::guarded(r, "modular" + suffix, [&] { detail::add_all(r, modular_checks(ring, fundamental()), suffix); });
  }
  Chain<Field> cp;
  bool have_cp = false;
  if (cfg.run_cycle || cfg.run_pairing) {
    detail::guarded(r, "chain" + suffix, [&] {
      cp = build_CP(p);
      have_cp = true;
    });
  }
  if (cfg.run_cycle && have_cp) {
    detail::guarded(r, "cycle" + suffix, [&] {
      detail::add_all(r, cycle_check(cp, ring), suffix);
      for (TwistMode mode : {TwistMode::Identity, TwistMode::RightPlacement}) {
        Stopwatch sw;
        ChainCertificate cert = cycle_with_twist(cp, ring, mode);
        Check c = make_check(std::string("cycle.control.") + twist_name(mode) + suffix, !cert.zero,
                             "normalize(b(C(P))) with " + std::string(twist_name(mode)) + " twist", "nonzero");
        c.certificate = cert.text();
        c.wall_ms = sw.ms();
        r.add(std::move(c));
      }
    });
  }
  if (cfg.run_pairing && have_cp) {
    detail::guarded(r, "pairing" + suffix, [&] { detail::add_all(r, pairing_check(ring, cp, pd), suffix); });
  }
  if (cfg.run_cocycle && cfg.cocycle_samples > 0) {
    detail::guarded(r, "cocycle" + suffix, [&] {
      std::vector<unsigned> seeds;
      for (int k = 0; k < cfg.cocycle_samples; ++k) seeds.push_back(cfg.seed + static_cast<unsigned>(k));
      detail::add_all(r, cocycle_check(p, seeds), suffix);
      detail::add_all(r, cocycle_control(ring, m, cfg.seed), suffix);
    });
  }
}

/// Symbolic module data evaluated at q = 1 against the q = 1 construction.
inline Check classical_limit_check(const RootSystem& rs, const std::vector<int>& lambda, long dim_cap) {
  HWModule<SymbolicField> qm(rs, lambda, SymbolicField{}, dim_cap);
  HWModule<EvaluatedField> cm(rs, lambda, classical_field(), dim_cap);
  long bad = 0, total = 0;
  Rational one(1);
  for (int b = 0; b < cm.dim(); ++b) {
    ++total;
    if (evaluate(qm.norm(b), one) != cm.norm(b)) ++bad;
  }
  for (int i = 0; i < rs.rank(); ++i) {
    for (Gen g : {Gen{Gen::E, i}, Gen{Gen::F, i}}) {
      for (int c = 0; c < cm.dim(); ++c) {
        for (int row = 0; row < cm.dim(); ++row) {
          ++total;
          if (evaluate(qm.matrix(g).entry(row, c, RatFunc()), one) != cm.matrix(g).entry(row, c, Rational(0))) ++bad;
        }
      }
    }
  }
  Check c = make_check("classical.limit", bad == 0 && qm.dim() == cm.dim(), "module data at q=1", "q=1 module");
  c.detail = std::to_string(total - bad) + "/" + std::to_string(total) + " entries agree";
  return c;
}

inline void run_classical_block(const CaseConfig& cfg, Report& r) {
  RootSystem rs(cfg.type, cfg.rank);
  ParabolicData pd = parabolic(rs, cfg.subset);
  ClassicalRing ring(rs, classical_field(), cfg.cyclic_cap);
  detail::guarded(r, "classical", [&] {
    int m = ring.add_module(pd.rho_S, cfg.dim_cap);
    const ClassicalModule& mod = ring.module(m);
    ClassicalRootVectors rv = build_root_vectors(mod, pd);
    KahlerMatrix k = kahler_matrix(ring, m, rv);
    for (auto& c : verify_kahler(rs, pd, k)) r.add(std::move(c));
    for (auto& c : verify_norm_lemma(mod, pd, rv)) r.add(std::move(c));
    Stopwatch sw;
    Chain<EvaluatedField> cp = build_CP(build_projection(ring, m));
    Check h = verify_hkr(hkr_origin_form(ring, cp, rv), k);
    h.wall_ms = sw.ms();
    r.add(std::move(h));
  });
  detail::guarded(r, "classical.limit", [&] { r.add(classical_limit_check(rs, pd.rho_S, cfg.dim_cap)); });
}

/// Runs the full case in a fixed order: root data, module, projection,
/// invariance, matrix units, modular property, cycle, pairing, cocycle,
/// classical block. Checks are sorted by name at the end.
inline Report run_suite(const CaseConfig& cfg) {
  cfg.validate();
  Report r;
  r.config = cfg;
  RootSystem rs(cfg.type, cfg.rank);
  ParabolicData pd = parabolic(rs, cfg.subset);
  for (auto& c : cartan_checks(rs, pd)) r.add(std::move(c));
  if (cfg.run_quantum && cfg.symbolic) {
    run_quantum_block(cfg, SymbolicField{}, "", r);
  } else if (cfg.run_quantum) {
    for (const auto& q : cfg.qs) run_quantum_block(cfg, EvaluatedField(q), "@q=" + to_string(q), r);
  }
  if (cfg.run_classical) run_classical_block(cfg, r);
  r.sort();
  return r;
}

}  // namespace qflag
