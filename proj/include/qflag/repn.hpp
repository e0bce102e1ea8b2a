#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qflag/cartan.hpp"
#include "qflag/qscalar.hpp"

namespace qflag {

/// Generator of U_q(g): E_i, F_i, K_i or K_i^{-1}.
struct Gen {
  enum Kind { E, F, K, Kinv };
  Kind kind;
  int i;

  std::string label() const {
    static const char* names[] = {"E", "F", "K", "Kinv"};
    return std::string(names[kind]) + std::to_string(i + 1);
  }
  friend bool operator==(const Gen& a, const Gen& b) { return a.kind == b.kind && a.i == b.i; }
};

/// Column-sparse square matrix: cols[c] lists (row, value) pairs.
template <class K>
struct SparseMatrix {
  std::vector<std::vector<std::pair<int, K>>> cols;

  explicit SparseMatrix(int n = 0) : cols(static_cast<std::size_t>(n)) {}
  int size() const { return static_cast<int>(cols.size()); }

  K entry(int r, int c, const K& zero) const {
    for (const auto& [row, v] : cols[static_cast<std::size_t>(c)]) {
      if (row == r) return v;
    }
    return zero;
  }

  std::vector<K> apply(const std::vector<K>& x, const K& zero) const {
    std::vector<K> out(x.size(), zero);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (is_zero(x[c])) continue;
      for (const auto& [row, v] : cols[c]) out[static_cast<std::size_t>(row)] += v * x[c];
    }
    return out;
  }
};

/// Irreducible highest-weight module V(lambda) in an orthogonal (not
/// orthonormal) weight basis w_0, ..., w_{n-1} with norms N_b = (w_b, w_b).
///
/// Conventions: K_i w = q^{(mu, alpha_i)} w, [E_i, F_i] = [mu_i]_{q_i} on weight
/// mu, E_i^* = K_i F_i and F_i^* = E_i K_i^{-1}. The highest-weight vector is
/// w_0 with N_0 = 1.
template <class Field>
class HWModule {
 public:
  using K = typename Field::value_type;

  HWModule(const RootSystem& rs, std::vector<int> lambda, Field field, long dim_cap = 4096)
      : rs_(rs), field_(std::move(field)), lambda_(std::move(lambda)) {
    if (static_cast<int>(lambda_.size()) != rs_.rank()) throw std::invalid_argument("highest weight has wrong length");
    long dim = weyl_dim(rs_, lambda_);
    if (dim > dim_cap) {
      throw std::length_error("V(lambda) has dimension " + std::to_string(dim) + ", above the cap " +
                              std::to_string(dim_cap));
    }
    build();
    if (static_cast<long>(dim_) != dim) {
      throw std::logic_error("constructed dimension " + std::to_string(dim_) + " differs from Weyl dimension " +
                             std::to_string(dim));
    }
  }

  const RootSystem& root_system() const { return rs_; }
  const Field& field() const { return field_; }
  const std::vector<int>& highest_weight() const { return lambda_; }
  int dim() const { return dim_; }
  int rank() const { return rs_.rank(); }
  const std::vector<int>& weight(int b) const { return weights_[static_cast<std::size_t>(b)]; }
  const K& norm(int b) const { return norms_[static_cast<std::size_t>(b)]; }
  const std::vector<int>& word(int b) const { return words_[static_cast<std::size_t>(b)]; }
  int level(int b) const { return levels_[static_cast<std::size_t>(b)]; }

  /// (mu_b, alpha_i), the exponent of q in K_i w_b.
  long k_exponent(int b, int i) const { return static_cast<long>(rs_.d(i)) * weight(b)[static_cast<std::size_t>(i)]; }

  /// (2 rho, mu_b).
  long two_rho_exponent(int b) const { return rs_.two_rho_pair(weight(b)); }

  const SparseMatrix<K>& E(int i) const { return e_[static_cast<std::size_t>(i)]; }
  const SparseMatrix<K>& F(int i) const { return f_[static_cast<std::size_t>(i)]; }

  const SparseMatrix<K>& matrix(Gen g) const {
    if (g.kind == Gen::E) return E(g.i);
    if (g.kind == Gen::F) return F(g.i);
    throw std::invalid_argument("K generators act diagonally; use k_exponent");
  }

  K zero() const { return field_.zero(); }

  std::vector<K> basis_vector(int b) const {
    std::vector<K> v(static_cast<std::size_t>(dim_), zero());
    v[static_cast<std::size_t>(b)] = field_.one();
    return v;
  }

  /// Image of x under a generator.
  std::vector<K> act(Gen g, const std::vector<K>& x) const {
    if (g.kind == Gen::E || g.kind == Gen::F) return matrix(g).apply(x, zero());
    std::vector<K> out = x;
    long sign = g.kind == Gen::K ? 1 : -1;
    for (int b = 0; b < dim_; ++b) {
      if (!is_zero(out[static_cast<std::size_t>(b)])) out[static_cast<std::size_t>(b)] *= field_.q_power(sign * k_exponent(b, g.i));
    }
    return out;
  }

  /// Dense matrix of a generator, entry [row][col].
  std::vector<std::vector<K>> dense(Gen g) const {
    std::vector<std::vector<K>> m(static_cast<std::size_t>(dim_), std::vector<K>(static_cast<std::size_t>(dim_), zero()));
    for (int c = 0; c < dim_; ++c) {
      std::vector<K> col = act(g, basis_vector(c));
      for (int r = 0; r < dim_; ++r) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = col[static_cast<std::size_t>(r)];
    }
    return m;
  }

  /// Text dump: weights, norms, and nonzero generator matrix entries.
  std::string dump() const {
    std::ostringstream os;
    os << "module " << rs_.name() << " lambda";
    for (int c : lambda_) os << " " << c;
    os << " dim " << dim_ << "\n";
    for (int b = 0; b < dim_; ++b) {
      os << "basis " << b + 1 << " weight";
      for (int c : weight(b)) os << " " << c;
      os << " word";
      if (word(b).empty()) os << " -";
      for (int i : word(b)) os << " F" << i + 1;
      os << " norm " << to_string(norm(b)) << "\n";
    }
    for (int i = 0; i < rank(); ++i) {
      for (Gen g : {Gen{Gen::E, i}, Gen{Gen::F, i}}) {
        for (int c = 0; c < dim_; ++c) {
          for (const auto& [r, v] : matrix(g).cols[static_cast<std::size_t>(c)]) {
            os << g.label() << " " << r + 1 << " " << c + 1 << " " << to_string(v) << "\n";
          }
        }
      }
    }
    return os.str();
  }

 private:
  struct Candidate {
    int gen;
    int src;
  };

  const std::vector<K>& fcol(int i, int b) const { return fdense_[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)]; }
  const std::vector<K>& ecol(int i, int b) const { return edense_[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)]; }

  // F_j applied to a vector supported below the current level.
  std::vector<K> apply_f(int j, const std::vector<K>& x) const {
    std::vector<K> out(weights_.size(), zero());
    for (std::size_t b = 0; b < x.size(); ++b) {
      if (is_zero(x[b])) continue;
      const auto& col = fcol(j, static_cast<int>(b));
      for (std::size_t r = 0; r < col.size(); ++r) {
        if (!is_zero(col[r])) out[r] += col[r] * x[b];
      }
    }
    return out;
  }

  // E_k F_j w_b = F_j E_k w_b + delta_kj [mu_k]_{q_k} w_b, in the basis built so far.
  std::vector<K> e_of_candidate(int k, const Candidate& c) const {
    std::vector<K> out = apply_f(c.gen, ecol(k, c.src));
    out.resize(weights_.size(), zero());
    if (k == c.gen) {
      long mu_k = weights_[static_cast<std::size_t>(c.src)][static_cast<std::size_t>(k)];
      out[static_cast<std::size_t>(c.src)] += field_.q_integer(mu_k, rs_.d(k));
    }
    return out;
  }

  void build() {
    int n = rs_.rank();
    std::size_t nn = static_cast<std::size_t>(n);
    fdense_.assign(nn, {});
    edense_.assign(nn, {});
    weights_.push_back(lambda_);
    norms_.push_back(field_.one());
    words_.push_back({});
    levels_.push_back(0);
    for (std::size_t k = 0; k < nn; ++k) edense_[k].push_back({});
    std::vector<int> frontier{0};
    int level = 0;
    while (!frontier.empty()) {
      ++level;
      // Candidates F_i w_b for b on the frontier, grouped by target weight.
      std::map<std::vector<int>, std::vector<Candidate>, std::greater<>> groups;
      for (int i = 0; i < n; ++i) {
        for (int b : frontier) {
          std::vector<int> mu = weights_[static_cast<std::size_t>(b)];
          std::vector<int> ai = rs_.root_to_weight(rs_.simple_root(i));
          for (int k = 0; k < n; ++k) mu[static_cast<std::size_t>(k)] -= ai[static_cast<std::size_t>(k)];
          groups[mu].push_back({i, b});
        }
      }
      std::vector<int> new_frontier;
      std::vector<std::pair<Candidate, std::vector<std::pair<int, K>>>> fplacements;
      std::vector<std::vector<std::vector<K>>> new_e(nn);
      std::vector<std::vector<int>> new_weights;
      std::vector<K> new_norms;
      std::vector<std::vector<int>> new_words;
      for (auto& [mu, cands] : groups) {
        std::size_t m = cands.size();
        // Gram matrix of the candidates.
        std::vector<std::vector<std::vector<K>>> ecache(m);
        for (std::size_t t = 0; t < m; ++t) {
          for (int k = 0; k < n; ++k) ecache[t].push_back(e_of_candidate(k, cands[t]));
        }
        std::vector<std::vector<K>> gram(m, std::vector<K>(m, zero()));
        for (std::size_t s = 0; s < m; ++s) {
          const Candidate& cs = cands[s];
          long pref = static_cast<long>(rs_.d(cs.gen)) * mu[static_cast<std::size_t>(cs.gen)];
          K qpow = field_.q_power(-pref);
          for (std::size_t t = 0; t < m; ++t) {
            const K& comp = ecache[t][static_cast<std::size_t>(cs.gen)][static_cast<std::size_t>(cs.src)];
            if (is_zero(comp)) continue;
            gram[s][t] = qpow * norms_[static_cast<std::size_t>(cs.src)] * comp;
          }
        }
        // Gram-Schmidt without normalization; R[s] expresses w_s in candidates.
        std::vector<std::size_t> kept;
        std::vector<std::vector<K>> rvec;
        std::vector<K> knorms;
        std::vector<std::vector<K>> overlaps(m);  // <c_s, w_t> for kept t
        for (std::size_t s = 0; s < m; ++s) {
          std::vector<K> r(m, zero());
          r[s] = field_.one();
          for (std::size_t t = 0; t < kept.size(); ++t) {
            K ov = zero();
            for (std::size_t k = 0; k < m; ++k) {
              if (!is_zero(rvec[t][k]) && !is_zero(gram[s][k])) ov += rvec[t][k] * gram[s][k];
            }
            overlaps[s].push_back(ov);
            if (is_zero(ov)) continue;
            K f = ov / knorms[t];
            for (std::size_t k = 0; k < m; ++k) {
              if (!is_zero(rvec[t][k])) r[k] -= f * rvec[t][k];
            }
          }
          K nrm = zero();
          for (std::size_t k = 0; k < m; ++k) {
            if (!is_zero(r[k]) && !is_zero(gram[s][k])) nrm += r[k] * gram[s][k];
          }
          if (is_zero(nrm)) continue;
          overlaps[s].push_back(nrm);
          kept.push_back(s);
          rvec.push_back(std::move(r));
          knorms.push_back(nrm);
        }
        int base = static_cast<int>(weights_.size() + new_weights.size());
        for (std::size_t t = 0; t < kept.size(); ++t) {
          new_frontier.push_back(base + static_cast<int>(t));
          // E on the new vector, expressed in the basis built before this level.
          for (int k = 0; k < n; ++k) {
            std::vector<K> acc(weights_.size(), zero());
            for (std::size_t c = 0; c < m; ++c) {
              if (is_zero(rvec[t][c])) continue;
              const std::vector<K>& x = ecache[c][static_cast<std::size_t>(k)];
              for (std::size_t r = 0; r < x.size(); ++r) {
                if (!is_zero(x[r])) acc[r] += rvec[t][c] * x[r];
              }
            }
            new_e[static_cast<std::size_t>(k)].push_back(std::move(acc));
          }
        }
        // F_i w_b = sum_t <c, w_t>/N_t w_t; c_s is orthogonal to every w_t kept after it.
        for (std::size_t s = 0; s < m; ++s) {
          std::vector<std::pair<int, K>> col;
          for (std::size_t t = 0; t < overlaps[s].size(); ++t) {
            if (is_zero(overlaps[s][t])) continue;
            col.push_back({base + static_cast<int>(t), overlaps[s][t] / knorms[t]});
          }
          fplacements.push_back({cands[s], std::move(col)});
        }
        for (std::size_t t = 0; t < kept.size(); ++t) {
          std::size_t s = kept[t];
          std::vector<int> w = words_[static_cast<std::size_t>(cands[s].src)];
          w.insert(w.begin(), cands[s].gen);
          new_words.push_back(std::move(w));
          new_weights.push_back(mu);
          new_norms.push_back(knorms[t]);
        }
      }
      std::size_t old = weights_.size();
      for (std::size_t v = 0; v < new_weights.size(); ++v) {
        weights_.push_back(new_weights[v]);
        norms_.push_back(new_norms[v]);
        words_.push_back(new_words[v]);
        levels_.push_back(level);
      }
      std::size_t total = weights_.size();
      // Extend every stored column to the new total size.
      for (std::size_t k = 0; k < nn; ++k) {
        for (auto& col : edense_[k]) col.resize(total, zero());
        for (auto& col : new_e[k]) {
          col.resize(total, zero());
          edense_[k].push_back(std::move(col));
        }
        for (auto& col : fdense_[k]) col.resize(total, zero());
      }
      for (std::size_t k = 0; k < nn; ++k) {
        while (fdense_[k].size() < old) fdense_[k].push_back(std::vector<K>(total, zero()));
      }
      for (auto& [cand, col] : fplacements) {
        std::vector<K>& dst = fdense_[static_cast<std::size_t>(cand.gen)][static_cast<std::size_t>(cand.src)];
        dst.assign(total, zero());
        for (auto& [row, v] : col) dst[static_cast<std::size_t>(row)] = v;
      }
      frontier = std::move(new_frontier);
    }
    dim_ = static_cast<int>(weights_.size());
    e_.assign(nn, SparseMatrix<K>(dim_));
    f_.assign(nn, SparseMatrix<K>(dim_));
    for (std::size_t k = 0; k < nn; ++k) {
      while (fdense_[k].size() < static_cast<std::size_t>(dim_)) fdense_[k].push_back({});
      for (int c = 0; c < dim_; ++c) {
        const auto& ec = edense_[k][static_cast<std::size_t>(c)];
        for (std::size_t r = 0; r < ec.size(); ++r) {
          if (!is_zero(ec[r])) e_[k].cols[static_cast<std::size_t>(c)].push_back({static_cast<int>(r), ec[r]});
        }
        const auto& fc = fdense_[k][static_cast<std::size_t>(c)];
        for (std::size_t r = 0; r < fc.size(); ++r) {
          if (!is_zero(fc[r])) f_[k].cols[static_cast<std::size_t>(c)].push_back({static_cast<int>(r), fc[r]});
        }
      }
    }
    fdense_.clear();
    edense_.clear();
  }

  RootSystem rs_;
  Field field_;
  std::vector<int> lambda_;
  int dim_ = 0;
  std::vector<std::vector<int>> weights_;
  std::vector<K> norms_;
  std::vector<std::vector<int>> words_;
  std::vector<int> levels_;
  std::vector<std::vector<std::vector<K>>> fdense_;
  std::vector<std::vector<std::vector<K>>> edense_;
  std::vector<SparseMatrix<K>> e_;
  std::vector<SparseMatrix<K>> f_;
};

template <class Field>
HWModule<Field> build_module(const RootSystem& rs, const std::vector<int>& lambda, const Field& field,
                             long dim_cap = 4096) {
  return HWModule<Field>(rs, lambda, field, dim_cap);
}

}  // namespace qflag
