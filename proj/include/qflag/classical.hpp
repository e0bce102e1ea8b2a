#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qflag/cartan.hpp"
#include "qflag/check.hpp"
#include "qflag/coord.hpp"
#include "qflag/hochschild.hpp"
#include "qflag/linalg.hpp"
#include "qflag/repn.hpp"

namespace qflag {

using ClassicalRing = CoordRing<EvaluatedField>;
using ClassicalModule = HWModule<EvaluatedField>;

inline EvaluatedField classical_field() { return EvaluatedField(Rational(1)); }

/// Raw root vectors in a q = 1 module: e_alpha by iterated brackets of simple
/// E matrices, f_alpha its norm-weighted adjoint, and c_alpha with
/// [e_alpha, f_alpha] = c_alpha h_alpha, h_alpha v_mu = (mu, alpha) v_mu.
struct RootVector {
  std::vector<int> root;
  std::vector<int> path;  // simple indices, innermost first
  Matrix<Rational> e;
  Matrix<Rational> f;
  Rational c;
};

struct ClassicalRootVectors {
  std::vector<RootVector> vectors;  // in the order of nilradical_pos

  const RootVector& of(const std::vector<int>& root) const {
    for (const auto& v : vectors) {
      if (v.root == root) return v;
    }
    throw std::out_of_range("no root vector for this root");
  }
};

inline Matrix<Rational> commutator(const Matrix<Rational>& a, const Matrix<Rational>& b) {
  Matrix<Rational> ab = multiply(a, b);
  Matrix<Rational> ba = multiply(b, a);
  for (std::size_t i = 0; i < ab.size(); ++i) {
    for (std::size_t j = 0; j < ab.size(); ++j) ab[i][j] -= ba[i][j];
  }
  return ab;
}

/// (f)_{ab} = e_{ba} N_b / N_a, so that (e x, y) = (x, f y).
inline Matrix<Rational> weighted_adjoint(const ClassicalModule& m, const Matrix<Rational>& e) {
  std::size_t n = e.size();
  Matrix<Rational> f(n, std::vector<Rational>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!is_zero(e[b][a])) f[a][b] = e[b][a] * m.norm(static_cast<int>(b)) / m.norm(static_cast<int>(a));
    }
  }
  return f;
}

/// c with [e, f] = c h_alpha; throws if the commutator is not of that form.
inline Rational root_constant(const ClassicalModule& m, const std::vector<int>& alpha, const Matrix<Rational>& e,
                              const Matrix<Rational>& f) {
  const RootSystem& rs = m.root_system();
  Matrix<Rational> h = commutator(e, f);
  std::optional<Rational> c;
  int n = m.dim();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b && !is_zero(h[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])) {
        throw std::logic_error("[e_alpha, f_alpha] is not diagonal");
      }
    }
    long mu = rs.pair_weight_root(m.weight(a), alpha);
    const Rational& x = h[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)];
    if (mu == 0) {
      if (!is_zero(x)) throw std::logic_error("[e_alpha, f_alpha] is not proportional to h_alpha");
      continue;
    }
    Rational r = x / Rational(mu);
    if (c && *c != r) throw std::logic_error("[e_alpha, f_alpha] is not proportional to h_alpha");
    c = r;
  }
  if (!c) throw std::logic_error("h_alpha acts trivially; c_alpha is undetermined");
  return *c;
}

/// Root vectors for every positive root, by height: e_alpha = [E_i, e_beta]
/// with beta = alpha - alpha_i and i the smallest index giving a nonzero
/// bracket. Returns those for Delta(n_S^+).
inline ClassicalRootVectors build_root_vectors(const ClassicalModule& m, const ParabolicData& pd) {
  if (!m.field().classical()) throw std::invalid_argument("root vectors need a q = 1 module");
  const RootSystem& rs = m.root_system();
  std::map<std::vector<int>, RootVector> all;
  for (const auto& alpha : rs.positive_roots()) {
    RootVector v;
    v.root = alpha;
    int height = 0;
    for (int x : alpha) height += x;
    if (height == 1) {
      int i = static_cast<int>(std::find(alpha.begin(), alpha.end(), 1) - alpha.begin());
      v.path = {i};
      v.e = m.dense(Gen{Gen::E, i});
    } else {
      bool found = false;
      for (int i = 0; i < rs.rank() && !found; ++i) {
        std::vector<int> beta = alpha;
        beta[static_cast<std::size_t>(i)] -= 1;
        auto it = all.find(beta);
        if (it == all.end()) continue;
        Matrix<Rational> br = commutator(m.dense(Gen{Gen::E, i}), it->second.e);
        if (is_zero_matrix(br)) continue;
        v.path = it->second.path;
        v.path.push_back(i);
        v.e = std::move(br);
        found = true;
      }
      if (!found) throw std::logic_error("every bracket path to " + rs.root_label(alpha) + " vanishes");
    }
    v.f = weighted_adjoint(m, v.e);
    v.c = root_constant(m, alpha, v.e, v.f);
    all.emplace(alpha, std::move(v));
  }
  ClassicalRootVectors out;
  for (const auto& alpha : pd.nilradical_pos) out.vectors.push_back(all.at(alpha));
  return out;
}

/// D_X(a): the derivative at the identity along a Lie-algebra element X given
/// by its matrix on V. On the conjugate factor X acts by -D^{-1} X^T D.
inline Rational derivation(const ClassicalRing& ring, const Matrix<Rational>& x, const CoordElem<EvaluatedField>& a) {
  Rational acc(0);
  for (const auto& t : a.terms()) {
    if (t.word.empty()) continue;
    WordShape<EvaluatedField> sh(t.word);
    for (const auto& [key, val] : t.vector.e) {
      for (std::size_t s = 0; s < t.word.size(); ++s) {
        const FactorRep<EvaluatedField>& fr = *t.word[s];
        const ClassicalModule& mod = *fr.module;
        int d = sh.digit(key, s);
        std::uint64_t base = key - static_cast<std::uint64_t>(d) * sh.strides[s];
        for (int r = 0; r < fr.dim; ++r) {
          Rational entry;
          if (!fr.barred) {
            entry = x[static_cast<std::size_t>(r)][static_cast<std::size_t>(d)];
          } else {
            const Rational& xt = x[static_cast<std::size_t>(d)][static_cast<std::size_t>(r)];
            if (is_zero(xt)) continue;
            entry = -(mod.norm(d) / mod.norm(r)) * xt;
          }
          if (is_zero(entry)) continue;
          Rational fv = t.functional.at(base + static_cast<std::uint64_t>(r) * sh.strides[s]);
          if (!is_zero(fv)) acc += fv * entry * val;
        }
      }
    }
  }
  (void)ring;
  return acc;
}

/// Kahler data: chat_{alpha beta} = (f_beta v_1, f_alpha v_1), computed from
/// chat = -sum_i N_i D_{f_alpha}(u^i_1) D_{e_beta}((u^i_1)^*), with the
/// normalization constants alongside.
struct KahlerMatrix {
  std::vector<std::vector<int>> roots;
  std::vector<std::vector<Rational>> chat;
  std::vector<Rational> c;
};

inline KahlerMatrix kahler_matrix(const ClassicalRing& ring, int m, const ClassicalRootVectors& rv) {
  const ClassicalModule& mod = ring.module(m);
  KahlerMatrix k;
  std::size_t n = rv.vectors.size();
  for (const auto& v : rv.vectors) {
    k.roots.push_back(v.root);
    k.c.push_back(v.c);
  }
  std::vector<CoordElem<EvaluatedField>> u, ubar;
  for (int i = 0; i < mod.dim(); ++i) {
    u.push_back(ring.mc(m, i, 0));
    ubar.push_back(ring.mc(m, i, 0, true));
  }
  k.chat.assign(n, std::vector<Rational>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      Rational s(0);
      for (int i = 0; i < mod.dim(); ++i) {
        Rational x = derivation(ring, rv.vectors[a].f, u[static_cast<std::size_t>(i)]);
        if (is_zero(x)) continue;
        s -= mod.norm(i) * x * derivation(ring, rv.vectors[b].e, ubar[static_cast<std::size_t>(i)]);
      }
      k.chat[a][b] = s;
    }
  }
  return k;
}

/// (f_beta v_1, f_alpha v_1) through the Gram norms.
inline Rational gram_pairing(const ClassicalModule& m, const RootVector& alpha, const RootVector& beta) {
  Rational s(0);
  for (int i = 0; i < m.dim(); ++i) {
    s += m.norm(i) * beta.f[static_cast<std::size_t>(i)][0] * alpha.f[static_cast<std::size_t>(i)][0];
  }
  return s;
}

/// Diagonal chat/c = (rho_S, alpha) with positivity, and off-diagonal zeros.
inline std::vector<Check> verify_kahler(const RootSystem& rs, const ParabolicData& pd, const KahlerMatrix& k) {
  std::vector<Check> out;
  std::size_t n = k.roots.size();
  for (std::size_t a = 0; a < n; ++a) {
    Rational lhs = k.chat[a][a] / k.c[a];
    Rational rhs(rs.pair_weight_root(pd.rho_S, k.roots[a]));
    Check c = make_check("kahler.diag." + rs.root_label(k.roots[a]), lhs == rhs && sgn(lhs) > 0, to_string(lhs), to_string(rhs));
    c.detail = "chat=" + to_string(k.chat[a][a]) + " c=" + to_string(k.c[a]);
    out.push_back(std::move(c));
  }
  long nonzero = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && !is_zero(k.chat[a][b])) ++nonzero;
    }
  }
  Check c = make_check("kahler.offdiag", nonzero == 0, std::to_string(nonzero) + " nonzero", "0 nonzero");
  c.detail = std::to_string(n * (n > 0 ? n - 1 : 0)) + " off-diagonal entries";
  out.push_back(std::move(c));
  return out;
}

/// (f_alpha v_1, f_alpha v_1) = c_alpha (rho_S, alpha) for alpha in Delta(n_S^+),
/// and F_i v_1 = 0 for i in S.
inline std::vector<Check> verify_norm_lemma(const ClassicalModule& m, const ParabolicData& pd, const ClassicalRootVectors& rv) {
  const RootSystem& rs = m.root_system();
  std::vector<Check> out;
  for (const auto& v : rv.vectors) {
    Rational lhs = gram_pairing(m, v, v);
    Rational rhs = v.c * Rational(rs.pair_weight_root(pd.rho_S, v.root));
    out.push_back(make_check("normlemma." + rs.root_label(v.root), lhs == rhs, to_string(lhs), to_string(rhs)));
  }
  for (int i : pd.subset) {
    bool zero = m.F(i).cols[0].empty();
    out.push_back(make_check("normlemma.levi.F" + std::to_string(i + 1), zero, zero ? "0" : "nonzero", "0"));
  }
  return out;
}

/// HKR image at the origin: H(alpha, beta) = sum coeff eps(a_0)
/// [D_{f_alpha}(a_1) D_{e_beta}(a_2) - D_{e_beta}(a_1) D_{f_alpha}(a_2)].
inline std::vector<std::vector<Rational>> hkr_origin_form(const ClassicalRing& ring, const Chain<EvaluatedField>& c,
                                                          const ClassicalRootVectors& rv) {
  if (c.degree != 2) throw std::invalid_argument("HKR evaluation needs a degree-2 chain");
  using Elem = CoordElem<EvaluatedField>;
  std::size_t n = rv.vectors.size();
  std::map<std::pair<const Elem*, const Matrix<Rational>*>, Rational> memo;
  auto d = [&](const Elem* a, const Matrix<Rational>* x) -> const Rational& {
    auto key = std::make_pair(a, x);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, derivation(ring, *x, *a)).first;
    return it->second;
  };
  std::map<const Elem*, Rational> eps;
  std::vector<std::vector<Rational>> h(n, std::vector<Rational>(n));
  for (const auto& t : c.terms) {
    const Elem* a0 = t.legs[0].get();
    auto it = eps.find(a0);
    if (it == eps.end()) it = eps.emplace(a0, ring.counit(*a0)).first;
    if (is_zero(it->second)) continue;
    Rational w = t.coeff * it->second;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const auto* fa = &rv.vectors[a].f;
        const auto* eb = &rv.vectors[b].e;
        Rational x = d(t.legs[1].get(), fa) * d(t.legs[2].get(), eb) - d(t.legs[1].get(), eb) * d(t.legs[2].get(), fa);
        if (!is_zero(x)) h[a][b] += w * x;
      }
    }
  }
  return h;
}

/// hkr(C(P)) = 2 chat entrywise.
inline Check verify_hkr(const std::vector<std::vector<Rational>>& h, const KahlerMatrix& k) {
  std::size_t n = k.roots.size();
  long bad = 0;
  std::string first;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      Rational want = 2 * k.chat[a][b];
      if (h[a][b] != want) {
        if (!bad) first = "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "): " + to_string(h[a][b]) + " vs " + to_string(want);
        ++bad;
      }
    }
  }
  Check c = make_check("hkr.match", bad == 0, "hkr(C(P)) at the origin", "2 chat");
  c.detail = std::to_string(n * n - static_cast<std::size_t>(bad)) + "/" + std::to_string(n * n) + " entries agree";
  if (bad) c.detail += "; first mismatch " + first;
  return c;
}

}  // namespace qflag
