#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qflag/linalg.hpp"
#include "qflag/repn.hpp"

namespace qflag {

/// Sparse vector keyed by multi-index, sorted by key, no stored zeros.
template <class K>
struct SVec {
  std::vector<std::pair<std::uint64_t, K>> e;

  bool empty() const { return e.empty(); }
  std::size_t size() const { return e.size(); }

  static SVec unit(std::uint64_t key, const K& one) {
    SVec v;
    v.e.push_back({key, one});
    return v;
  }

  static SVec from_map(std::unordered_map<std::uint64_t, K>&& m) {
    SVec v;
    v.e.reserve(m.size());
    for (auto& [k, x] : m) {
      if (!is_zero(x)) v.e.push_back({k, std::move(x)});
    }
    std::sort(v.e.begin(), v.e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  }

  K at(std::uint64_t key) const {
    auto it = std::lower_bound(e.begin(), e.end(), key, [](const auto& p, std::uint64_t k) { return p.first < k; });
    if (it != e.end() && it->first == key) return it->second;
    return K{};
  }

  void scale(const K& c) {
    if (is_zero(c)) {
      e.clear();
      return;
    }
    for (auto& p : e) p.second *= c;
  }

  friend bool operator==(const SVec& a, const SVec& b) {
    if (a.e.size() != b.e.size()) return false;
    for (std::size_t k = 0; k < a.e.size(); ++k) {
      if (a.e[k].first != b.e[k].first || a.e[k].second != b.e[k].second) return false;
    }
    return true;
  }
};

/// a + c * b.
template <class K>
SVec<K> add_scaled(const SVec<K>& a, const SVec<K>& b, const K& c) {
  SVec<K> out;
  out.e.reserve(a.e.size() + b.e.size());
  std::size_t i = 0, j = 0;
  while (i < a.e.size() || j < b.e.size()) {
    if (j == b.e.size() || (i < a.e.size() && a.e[i].first < b.e[j].first)) {
      out.e.push_back(a.e[i++]);
    } else if (i == a.e.size() || b.e[j].first < a.e[i].first) {
      K x = c * b.e[j].second;
      if (!is_zero(x)) out.e.push_back({b.e[j].first, std::move(x)});
      ++j;
    } else {
      K x = a.e[i].second + c * b.e[j].second;
      if (!is_zero(x)) out.e.push_back({a.e[i].first, std::move(x)});
      ++i;
      ++j;
    }
  }
  return out;
}

template <class K>
K dot(const SVec<K>& a, const SVec<K>& b) {
  K acc{};
  std::size_t i = 0, j = 0;
  while (i < a.e.size() && j < b.e.size()) {
    if (a.e[i].first < b.e[j].first) {
      ++i;
    } else if (b.e[j].first < a.e[i].first) {
      ++j;
    } else {
      acc += a.e[i].second * b.e[j].second;
      ++i;
      ++j;
    }
  }
  return acc;
}

/// Outer product; the key of (x, y) is x * right_dim + y.
template <class K>
SVec<K> outer(const SVec<K>& a, const SVec<K>& b, std::uint64_t right_dim) {
  SVec<K> out;
  out.e.reserve(a.e.size() * b.e.size());
  for (const auto& [ka, xa] : a.e) {
    for (const auto& [kb, xb] : b.e) out.e.push_back({ka * right_dim + kb, xa * xb});
  }
  return out;
}

/// One tensor factor: V(lambda) or its conjugate module, with generator data
/// in a weighted basis.
///
/// The conjugate module has basis bbar_j = N_j f^j, where f^j is dual to w_j,
/// and its dual basis ebar^i satisfies (u^i_j)^* = c_{ebar^i, bbar_j}. In this
/// basis X acts by [X]_{ab} = (N_b/N_a) pi(S(X))_{ba}.
template <class Field>
struct FactorRep {
  using K = typename Field::value_type;

  const HWModule<Field>* module = nullptr;
  bool barred = false;
  const FactorRep* partner = nullptr;
  int dim = 0;
  std::vector<std::vector<int>> weights;
  std::vector<std::vector<long>> kexp;
  std::vector<long> two_rho;
  std::vector<SparseMatrix<K>> e, f, et, ft;

  std::string label() const { return barred ? "Vbar" : "V"; }

  static SparseMatrix<K> transpose(const SparseMatrix<K>& m) {
    SparseMatrix<K> t(m.size());
    for (int c = 0; c < m.size(); ++c) {
      for (const auto& [r, v] : m.cols[static_cast<std::size_t>(c)]) t.cols[static_cast<std::size_t>(r)].push_back({c, v});
    }
    return t;
  }

  void build(const HWModule<Field>& m, bool bar) {
    module = &m;
    barred = bar;
    dim = m.dim();
    const Field& fld = m.field();
    int n = m.rank();
    for (int b = 0; b < dim; ++b) {
      std::vector<int> w = m.weight(b);
      std::vector<long> k(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) k[static_cast<std::size_t>(i)] = m.k_exponent(b, i);
      long tr = m.two_rho_exponent(b);
      if (bar) {
        for (auto& x : w) x = -x;
        for (auto& x : k) x = -x;
        tr = -tr;
      }
      weights.push_back(std::move(w));
      kexp.push_back(std::move(k));
      two_rho.push_back(tr);
    }
    for (int i = 0; i < n; ++i) {
      if (!bar) {
        e.push_back(m.E(i));
        f.push_back(m.F(i));
      } else {
        // Ebar_ab = -(N_b/N_a) E_ba q^{-(mu_a, alpha_i)}, Fbar_ab = -(N_b/N_a) q^{(mu_b, alpha_i)} F_ba.
        SparseMatrix<K> eb(dim), fb(dim);
        for (int c = 0; c < dim; ++c) {
          for (const auto& [r, v] : m.E(i).cols[static_cast<std::size_t>(c)]) {
            // E_{rc} contributes to Ebar_{c r}.
            K x = -(m.norm(r) / m.norm(c)) * v * fld.q_power(-m.k_exponent(c, i));
            eb.cols[static_cast<std::size_t>(r)].push_back({c, x});
          }
          for (const auto& [r, v] : m.F(i).cols[static_cast<std::size_t>(c)]) {
            K x = -(m.norm(r) / m.norm(c)) * v * fld.q_power(m.k_exponent(r, i));
            fb.cols[static_cast<std::size_t>(r)].push_back({c, x});
          }
        }
        for (auto& col : eb.cols) std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& col : fb.cols) std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        e.push_back(std::move(eb));
        f.push_back(std::move(fb));
      }
      et.push_back(transpose(e.back()));
      ft.push_back(transpose(f.back()));
    }
  }
};

template <class Field>
using Word = std::vector<const FactorRep<Field>*>;

template <class Field>
struct WordShape {
  std::vector<std::uint64_t> dims;
  std::vector<std::uint64_t> strides;
  std::uint64_t total = 1;

  explicit WordShape(const Word<Field>& w) {
    dims.resize(w.size());
    strides.resize(w.size());
    for (std::size_t t = w.size(); t-- > 0;) {
      dims[t] = static_cast<std::uint64_t>(w[t]->dim);
      strides[t] = total;
      total *= dims[t];
      if (total > (std::uint64_t{1} << 40)) throw std::length_error("tensor word too long");
    }
  }

  int digit(std::uint64_t key, std::size_t t) const { return static_cast<int>((key / strides[t]) % dims[t]); }
};

/// One matrix-coefficient term X -> F(pi_W(X) w). Scalar coefficients are
/// carried by the functional leg; the vector leg is normalized so that its
/// first entry is 1.
template <class Field>
struct Term {
  Word<Field> word;
  SVec<typename Field::value_type> functional;
  SVec<typename Field::value_type> vector;
};

template <class Field>
class CoordRing;

/// Element of C_q[U]: a formal sum of matrix-coefficient terms.
template <class Field>
class CoordElem {
 public:
  using K = typename Field::value_type;

  explicit CoordElem(const CoordRing<Field>* ring = nullptr) : ring_(ring) {}

  const CoordRing<Field>* ring() const { return ring_; }
  const std::vector<Term<Field>>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Adds a term after normalizing its vector leg and merging with an
  /// existing term of the same word and vector leg.
  void add_term(Term<Field> t) {
    if (t.functional.empty() || t.vector.empty()) return;
    K lead = t.vector.e.front().second;
    if (lead != K(Rational(1))) {
      K inv = K(Rational(1)) / lead;
      t.vector.scale(inv);
      t.functional.scale(lead);
    }
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      Term<Field>& s = terms_[k];
      if (s.word == t.word && s.vector == t.vector) {
        s.functional = add_scaled(s.functional, t.functional, K(Rational(1)));
        if (s.functional.empty()) terms_.erase(terms_.begin() + static_cast<std::ptrdiff_t>(k));
        return;
      }
    }
    terms_.push_back(std::move(t));
  }

  CoordElem& operator+=(const CoordElem& o) {
    adopt_ring(o);
    for (const auto& t : o.terms_) add_term(t);
    return *this;
  }
  CoordElem& operator-=(const CoordElem& o) {
    adopt_ring(o);
    for (auto t : o.terms_) {
      t.functional.scale(K(Rational(-1)));
      add_term(std::move(t));
    }
    return *this;
  }
  CoordElem& operator*=(const K& c) {
    if (is_zero(c)) {
      terms_.clear();
      return *this;
    }
    for (auto& t : terms_) t.functional.scale(c);
    return *this;
  }

  friend CoordElem operator+(CoordElem a, const CoordElem& b) { return a += b; }
  friend CoordElem operator-(CoordElem a, const CoordElem& b) { return a -= b; }
  friend CoordElem operator*(CoordElem a, const K& c) { return a *= c; }
  friend CoordElem operator*(const K& c, CoordElem a) { return a *= c; }
  friend CoordElem operator*(const CoordElem& a, const CoordElem& b) { return a.the_ring(b).multiply(a, b); }

 private:
  void adopt_ring(const CoordElem& o) {
    if (!ring_) ring_ = o.ring_;
  }
  const CoordRing<Field>& the_ring(const CoordElem& o) const {
    const CoordRing<Field>* r = ring_ ? ring_ : o.ring_;
    if (!r) throw std::logic_error("coordinate element without a ring");
    return *r;
  }

  const CoordRing<Field>* ring_;
  std::vector<Term<Field>> terms_;
};

/// Outcome of a certified zero test: the dimension of the cyclic module that
/// the functional legs were tested against, and the number of generators.
struct ZeroCertificate {
  bool zero = true;
  long module_dim = 0;
  long generators = 0;

  std::string text() const {
    return "cyclic_dim=" + std::to_string(module_dim) + " generators=" + std::to_string(generators);
  }
};

/// The joint cyclic module M = U.(g_1 + ... + g_m) inside W_1 + ... + W_m, for
/// registered vector legs g_p in tensor words W_p. A functional sum_p F_p kills
/// M exactly when sum_p c_{F_p, g_p} = 0 in C_q[U].
template <class Field>
class CyclicReducer {
 public:
  using K = typename Field::value_type;
  static constexpr int kBlockShift = 40;

  const std::vector<int>& generators() const { return gens_; }
  long dim() const { return static_cast<long>(rows_.size()); }

  bool covers(const std::vector<int>& needed) const {
    return std::includes(gens_.begin(), gens_.end(), needed.begin(), needed.end());
  }

  int block_of(int gen) const {
    auto it = std::lower_bound(gens_.begin(), gens_.end(), gen);
    if (it == gens_.end() || *it != gen) throw std::logic_error("generator not covered by reducer");
    return static_cast<int>(it - gens_.begin());
  }

  /// Coordinates (F(m_r))_r of a functional sum against the basis of M.
  std::vector<std::pair<int, K>> coordinates(const std::vector<std::pair<int, const SVec<K>*>>& blocks) const {
    std::unordered_map<int, K> acc;
    for (const auto& [gen, fn] : blocks) {
      std::uint64_t prefix = static_cast<std::uint64_t>(block_of(gen)) << kBlockShift;
      for (const auto& [k, x] : fn->e) {
        auto it = column_.find(prefix | k);
        if (it == column_.end()) continue;
        for (const auto& [r, v] : it->second) acc[r] += x * v;
      }
    }
    std::vector<std::pair<int, K>> out;
    for (auto& [r, x] : acc) {
      if (!is_zero(x)) out.push_back({r, std::move(x)});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  template <class Ring>
  void build(const Ring& ring, std::vector<int> gens, long cap) {
    gens_ = std::move(gens);
    std::map<std::vector<int>, std::unordered_map<std::uint64_t, K>> seeds;
    for (std::size_t p = 0; p < gens_.size(); ++p) {
      const auto& g = ring.generator(gens_[p]);
      std::uint64_t prefix = static_cast<std::uint64_t>(p) << kBlockShift;
      for (const auto& [k, x] : g.vector.e) {
        seeds[ring.weight_of(g.word, k)][prefix | k] += x;
      }
    }
    std::deque<int> queue;
    for (auto& [w, v] : seeds) insert(w, v, queue, cap);
    int rank = ring.rank();
    while (!queue.empty()) {
      int r = queue.front();
      queue.pop_front();
      const RowRef& ref = rows_[static_cast<std::size_t>(r)];
      Space& sp = *ref.space;
      const auto& row = sp.rows[static_cast<std::size_t>(ref.local)];
      std::map<int, std::vector<std::pair<std::uint64_t, K>>> blocks;
      for (const auto& [li, x] : row) {
        std::uint64_t key = sp.keys[static_cast<std::size_t>(li)];
        blocks[static_cast<int>(key >> kBlockShift)].push_back({key & ((std::uint64_t{1} << kBlockShift) - 1), x});
      }
      std::vector<int> w = ref.weight;
      for (int i = 0; i < rank; ++i) {
        for (Gen gen : {Gen{Gen::E, i}, Gen{Gen::F, i}}) {
          std::unordered_map<std::uint64_t, K> image;
          for (const auto& [p, comps] : blocks) {
            const auto& g = ring.generator(gens_[static_cast<std::size_t>(p)]);
            std::unordered_map<std::uint64_t, K> part;
            ring.apply_gen_into(g.word, gen, comps, false, part);
            std::uint64_t prefix = static_cast<std::uint64_t>(p) << kBlockShift;
            for (auto& [k, x] : part) image[prefix | k] += x;
          }
          std::vector<int> tw = w;
          std::vector<int> ai = ring.root_system().root_to_weight(ring.root_system().simple_root(i));
          for (int k = 0; k < rank; ++k) tw[static_cast<std::size_t>(k)] += (gen.kind == Gen::E ? 1 : -1) * ai[static_cast<std::size_t>(k)];
          insert(tw, image, queue, cap);
        }
      }
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const RowRef& ref = rows_[r];
      for (const auto& [li, x] : ref.space->rows[static_cast<std::size_t>(ref.local)]) {
        column_[ref.space->keys[static_cast<std::size_t>(li)]].push_back({static_cast<int>(r), x});
      }
    }
    for (auto& [w, sp] : spaces_) {
      sp.index.clear();
      sp.pivots.clear();
    }
  }

 private:
  struct Space {
    std::unordered_map<std::uint64_t, int> index;
    std::vector<std::uint64_t> keys;
    std::vector<std::vector<std::pair<int, K>>> rows;
    std::map<int, int> pivots;
  };
  struct RowRef {
    Space* space;
    int local;
    std::vector<int> weight;
  };

  void insert(const std::vector<int>& w, const std::unordered_map<std::uint64_t, K>& v, std::deque<int>& queue, long cap) {
    bool any = false;
    for (const auto& [k, x] : v) {
      if (!is_zero(x)) any = true;
    }
    if (!any) return;
    Space& sp = spaces_[w];
    for (const auto& [k, x] : v) {
      if (is_zero(x)) continue;
      if (!sp.index.count(k)) {
        sp.index[k] = static_cast<int>(sp.keys.size());
        sp.keys.push_back(k);
      }
    }
    std::vector<K> work(sp.keys.size());
    for (const auto& [k, x] : v) {
      if (!is_zero(x)) work[static_cast<std::size_t>(sp.index[k])] = x;
    }
    for (const auto& [p, r] : sp.pivots) {
      if (is_zero(work[static_cast<std::size_t>(p)])) continue;
      K f = work[static_cast<std::size_t>(p)];
      for (const auto& [li, x] : sp.rows[static_cast<std::size_t>(r)]) work[static_cast<std::size_t>(li)] -= f * x;
    }
    int pivot = -1;
    for (std::size_t li = 0; li < work.size(); ++li) {
      if (!is_zero(work[li])) {
        pivot = static_cast<int>(li);
        break;
      }
    }
    if (pivot < 0) return;
    K inv = K(Rational(1)) / work[static_cast<std::size_t>(pivot)];
    std::vector<std::pair<int, K>> row;
    for (std::size_t li = static_cast<std::size_t>(pivot); li < work.size(); ++li) {
      if (!is_zero(work[li])) row.push_back({static_cast<int>(li), work[li] * inv});
    }
    int local = static_cast<int>(sp.rows.size());
    sp.rows.push_back(std::move(row));
    sp.pivots[pivot] = local;
    rows_.push_back({&sp, local, w});
    if (static_cast<long>(rows_.size()) > cap) {
      throw std::length_error("cyclic module dimension exceeds the cap " + std::to_string(cap));
    }
    queue.push_back(static_cast<int>(rows_.size()) - 1);
  }

  std::vector<int> gens_;
  std::map<std::vector<int>, Space> spaces_;
  std::vector<RowRef> rows_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<int, K>>> column_;
};

/// Owner of the registered modules, their tensor factors, and the caches used
/// by zero testing. Elements keep a pointer to their ring, which must outlive
/// them.
template <class Field>
class CoordRing {
 public:
  using K = typename Field::value_type;
  using Elem = CoordElem<Field>;

  struct Generator {
    Word<Field> word;
    SVec<K> vector;
  };

  CoordRing(const RootSystem& rs, Field field, long cyclic_cap = 20000)
      : rs_(rs), field_(std::move(field)), cyclic_cap_(cyclic_cap) {}
  CoordRing(const CoordRing&) = delete;
  CoordRing& operator=(const CoordRing&) = delete;

  const RootSystem& root_system() const { return rs_; }
  const Field& field() const { return field_; }
  int rank() const { return rs_.rank(); }
  long cyclic_cap() const { return cyclic_cap_; }
  void set_cyclic_cap(long cap) { cyclic_cap_ = cap; }

  /// Registers V(lambda); returns its index.
  int add_module(const std::vector<int>& lambda, long dim_cap = 4096) {
    modules_.emplace_back(rs_, lambda, field_, dim_cap);
    factors_.emplace_back();
    factors_.emplace_back();
    FactorRep<Field>& v = factors_[factors_.size() - 2];
    FactorRep<Field>& vb = factors_.back();
    v.build(modules_.back(), false);
    vb.build(modules_.back(), true);
    v.partner = &vb;
    vb.partner = &v;
    return static_cast<int>(modules_.size()) - 1;
  }

  const HWModule<Field>& module(int m) const { return modules_[static_cast<std::size_t>(m)]; }
  const FactorRep<Field>* factor(int m, bool barred) const {
    return &factors_[2 * static_cast<std::size_t>(m) + (barred ? 1 : 0)];
  }

  K qp(long e) const {
    auto it = qpow_.find(e);
    if (it != qpow_.end()) return it->second;
    K v = field_.q_power(e);
    qpow_.emplace(e, v);
    return v;
  }

  Elem zero() const { return Elem(this); }
  Elem scalar(const K& c) const {
    Elem a(this);
    a.add_term({{}, SVec<K>::unit(0, c), SVec<K>::unit(0, field_.one())});
    return a;
  }
  Elem one() const { return scalar(field_.one()); }

  /// u^i_j (or (u^i_j)^* when conjugated) of module m, unit coefficient.
  Elem mc(int m, int i, int j, bool conjugated = false) const {
    const HWModule<Field>& mod = module(m);
    if (i < 0 || j < 0 || i >= mod.dim() || j >= mod.dim()) throw std::out_of_range("matrix coefficient index");
    Elem a(this);
    a.add_term({{factor(m, conjugated)},
                SVec<K>::unit(static_cast<std::uint64_t>(i), field_.one()),
                SVec<K>::unit(static_cast<std::uint64_t>(j), field_.one())});
    return a;
  }

  Elem multiply(const Elem& a, const Elem& b) const {
    Elem out(this);
    for (const auto& s : a.terms()) {
      for (const auto& t : b.terms()) {
        Word<Field> w = s.word;
        w.insert(w.end(), t.word.begin(), t.word.end());
        std::uint64_t rd = WordShape<Field>(t.word).total;
        WordShape<Field> check(w);
        (void)check;
        out.add_term({std::move(w), outer(s.functional, t.functional, rd), outer(s.vector, t.vector, rd)});
      }
    }
    return out;
  }

  Elem power(const Elem& a, int k) const {
    Elem out = one();
    for (int t = 0; t < k; ++t) out = multiply(out, a);
    return out;
  }

  /// Reverses the tensor factors of a multi-index key.
  static std::uint64_t reverse_key(const WordShape<Field>& from, const WordShape<Field>& to, std::uint64_t key) {
    std::uint64_t out = 0;
    std::size_t n = from.dims.size();
    for (std::size_t t = 0; t < n; ++t) out += static_cast<std::uint64_t>(from.digit(key, t)) * to.strides[n - 1 - t];
    return out;
  }

  /// a^*(X) = a(S(X)^*) with real scalars: reverse the word, swap V and Vbar,
  /// reverse the digits of both legs.
  Elem star(const Elem& a) const {
    Elem out(this);
    for (const auto& t : a.terms()) {
      Word<Field> w;
      for (auto it = t.word.rbegin(); it != t.word.rend(); ++it) w.push_back((*it)->partner);
      WordShape<Field> from(t.word), to(w);
      auto flip = [&](const SVec<K>& v) {
        std::unordered_map<std::uint64_t, K> m;
        for (const auto& [k, x] : v.e) m[reverse_key(from, to, k)] = x;
        return SVec<K>::from_map(std::move(m));
      };
      out.add_term({std::move(w), flip(t.functional), flip(t.vector)});
    }
    return out;
  }

  K counit(const Elem& a) const {
    K acc = field_.zero();
    for (const auto& t : a.terms()) acc += dot(t.functional, t.vector);
    return acc;
  }

  /// Weight (fundamental coordinates) of a multi-index.
  std::vector<int> weight_of(const Word<Field>& w, std::uint64_t key) const {
    std::vector<int> out(static_cast<std::size_t>(rs_.rank()), 0);
    WordShape<Field> sh(w);
    for (std::size_t t = 0; t < w.size(); ++t) {
      const auto& wt = w[t]->weights[static_cast<std::size_t>(sh.digit(key, t))];
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += wt[k];
    }
    return out;
  }

  /// Delta^{(n)}(g) applied to v (or its transpose), accumulated into out.
  /// Delta(E) = sum_t 1..1 E K..K, Delta(F) = sum_t Kinv..Kinv F 1..1.
  template <class Entries>
  void apply_gen_into(const Word<Field>& w, Gen g, const Entries& v, bool transpose,
                      std::unordered_map<std::uint64_t, K>& out) const {
    WordShape<Field> sh(w);
    std::size_t n = w.size();
    std::vector<int> dig(n);
    for (const auto& [key, x] : v) {
      for (std::size_t t = 0; t < n; ++t) dig[t] = sh.digit(key, t);
      if (g.kind == Gen::K || g.kind == Gen::Kinv) {
        long ex = 0;
        for (std::size_t t = 0; t < n; ++t) ex += w[t]->kexp[static_cast<std::size_t>(dig[t])][static_cast<std::size_t>(g.i)];
        if (g.kind == Gen::Kinv) ex = -ex;
        out[key] += x * qp(ex);
        continue;
      }
      for (std::size_t t = 0; t < n; ++t) {
        const FactorRep<Field>& fr = *w[t];
        const SparseMatrix<K>* mat;
        if (g.kind == Gen::E) {
          mat = transpose ? &fr.et[static_cast<std::size_t>(g.i)] : &fr.e[static_cast<std::size_t>(g.i)];
        } else {
          mat = transpose ? &fr.ft[static_cast<std::size_t>(g.i)] : &fr.f[static_cast<std::size_t>(g.i)];
        }
        const auto& col = mat->cols[static_cast<std::size_t>(dig[t])];
        if (col.empty()) continue;
        long ex = 0;
        if (g.kind == Gen::E) {
          for (std::size_t s = t + 1; s < n; ++s) ex += w[s]->kexp[static_cast<std::size_t>(dig[s])][static_cast<std::size_t>(g.i)];
        } else {
          for (std::size_t s = 0; s < t; ++s) ex -= w[s]->kexp[static_cast<std::size_t>(dig[s])][static_cast<std::size_t>(g.i)];
        }
        K fx = ex == 0 ? x : K(x * qp(ex));
        std::uint64_t base = key - static_cast<std::uint64_t>(dig[t]) * sh.strides[t];
        for (const auto& [r, val] : col) out[base + static_cast<std::uint64_t>(r) * sh.strides[t]] += val * fx;
      }
    }
  }

  SVec<K> apply_gen(const Word<Field>& w, Gen g, const SVec<K>& v, bool transpose) const {
    std::unordered_map<std::uint64_t, K> out;
    apply_gen_into(w, g, v.e, transpose, out);
    return SVec<K>::from_map(std::move(out));
  }

  /// (g |> a)(Y) = a(Y g): the vector legs move.
  Elem act_left(Gen g, const Elem& a) const {
    Elem out(this);
    for (const auto& t : a.terms()) out.add_term({t.word, t.functional, apply_gen(t.word, g, t.vector, false)});
    return out;
  }

  /// (a <| g)(Y) = a(g Y): the functional legs move.
  Elem act_right(const Elem& a, Gen g) const {
    Elem out(this);
    for (const auto& t : a.terms()) out.add_term({t.word, apply_gen(t.word, g, t.functional, true), t.vector});
    return out;
  }

  /// (X |> a) for X = g_1 ... g_k.
  Elem act_left(const std::vector<Gen>& x, const Elem& a) const {
    Elem out = a;
    for (auto it = x.rbegin(); it != x.rend(); ++it) out = act_left(*it, out);
    return out;
  }

  /// a(g_1 g_2 ... g_k).
  K evaluate(const Elem& a, const std::vector<Gen>& x) const {
    K acc = field_.zero();
    for (const auto& t : a.terms()) {
      SVec<K> v = t.vector;
      for (auto it = x.rbegin(); it != x.rend(); ++it) v = apply_gen(t.word, *it, v, false);
      acc += dot(t.functional, v);
    }
    return acc;
  }

  /// theta(a) = K_{2 rho} |> a <| K_{2 rho} through generator actions.
  Elem theta_action(const Elem& a) const {
    std::vector<long> n = rs_.two_rho_root();
    Elem out(this);
    for (const auto& t : a.terms()) {
      SVec<K> f = t.functional, v = t.vector;
      for (int i = 0; i < rank(); ++i) {
        for (long r = 0; r < n[static_cast<std::size_t>(i)]; ++r) {
          v = apply_gen(t.word, Gen{Gen::K, i}, v, false);
          f = apply_gen(t.word, Gen{Gen::K, i}, f, true);
        }
      }
      out.add_term({t.word, std::move(f), std::move(v)});
    }
    return out;
  }

  /// theta through weights: theta(u^i_j) = q^{(2 rho, lambda_i + lambda_j)} u^i_j.
  Elem theta_weight(const Elem& a) const {
    Elem out(this);
    for (const auto& t : a.terms()) {
      WordShape<Field> sh(t.word);
      auto exponent = [&](std::uint64_t key) {
        long ex = 0;
        for (std::size_t s = 0; s < t.word.size(); ++s) ex += t.word[s]->two_rho[static_cast<std::size_t>(sh.digit(key, s))];
        return ex;
      };
      SVec<K> f = t.functional, v = t.vector;
      for (auto& [k, x] : f.e) x *= qp(exponent(k));
      for (auto& [k, x] : v.e) x *= qp(exponent(k));
      out.add_term({t.word, std::move(f), std::move(v)});
    }
    return out;
  }

  /// Haar state: pair each functional leg with the projection of its vector
  /// leg onto the invariants W^U along the non-trivial isotypic part.
  K haar(const Elem& a) const {
    K acc = field_.zero();
    for (const auto& t : a.terms()) {
      if (t.word.empty()) {
        acc += dot(t.functional, t.vector);
        continue;
      }
      acc += dot(t.functional, invariant_projection(t.word, t.vector));
    }
    return acc;
  }

  SVec<K> invariant_projection(const Word<Field>& w, const SVec<K>& v) const {
    const HaarData& hd = haar_data(w);
    std::size_t n0 = hd.zero_keys.size();
    SVec<K> out;
    if (hd.invariants.empty()) return out;
    std::vector<K> rhs(n0);
    bool any = false;
    for (const auto& [k, x] : v.e) {
      auto it = hd.position.find(k);
      if (it == hd.position.end()) continue;
      rhs[static_cast<std::size_t>(it->second)] = x;
      any = true;
    }
    if (!any) return out;
    std::optional<std::vector<K>> sol = solve(hd.system, rhs);
    if (!sol) throw std::logic_error("invariant decomposition failed");
    std::vector<K> proj(n0);
    for (std::size_t c = 0; c < hd.invariants.size(); ++c) {
      const K& coef = (*sol)[c];
      if (qflag::is_zero(coef)) continue;
      for (std::size_t r = 0; r < n0; ++r) {
        if (!qflag::is_zero(hd.invariants[c][r])) proj[r] += coef * hd.invariants[c][r];
      }
    }
    std::unordered_map<std::uint64_t, K> m;
    for (std::size_t r = 0; r < n0; ++r) {
      if (!qflag::is_zero(proj[r])) m[hd.zero_keys[r]] = proj[r];
    }
    return SVec<K>::from_map(std::move(m));
  }

  // ---- zero testing ----

  const Generator& generator(int g) const { return generators_[static_cast<std::size_t>(g)]; }

  int generator_index(const Word<Field>& w, const SVec<K>& v) const {
    std::size_t h = std::hash<std::size_t>{}(w.size());
    for (auto* p : w) h = h * 1000003u ^ std::hash<const void*>{}(p);
    for (const auto& [k, x] : v.e) h = h * 1000003u ^ std::hash<std::uint64_t>{}(k);
    auto& bucket = generator_lookup_[h];
    for (int g : bucket) {
      const Generator& gg = generators_[static_cast<std::size_t>(g)];
      if (gg.word == w && gg.vector == v) return g;
    }
    generators_.push_back({w, v});
    int idx = static_cast<int>(generators_.size()) - 1;
    bucket.push_back(idx);
    return idx;
  }

  std::vector<int> generators_of(const Elem& a) const {
    std::vector<int> out;
    for (const auto& t : a.terms()) out.push_back(generator_index(t.word, t.vector));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// A reducer covering the given generators (cached; built on demand).
  const CyclicReducer<Field>& reducer_for(std::vector<int> gens) const {
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    for (const auto& r : reducers_) {
      if (r->covers(gens)) return *r;
    }
    auto r = std::make_unique<CyclicReducer<Field>>();
    r->build(*this, gens, cyclic_cap_);
    reducers_.push_back(std::move(r));
    return *reducers_.back();
  }

  /// Builds (and caches) a reducer for the generators of all given elements.
  void prime(const std::vector<Elem>& elems) const {
    std::vector<int> gens;
    for (const auto& e : elems) {
      std::vector<int> g = generators_of(e);
      gens.insert(gens.end(), g.begin(), g.end());
    }
    reducer_for(gens);
  }

  std::vector<std::pair<int, K>> coordinates(const CyclicReducer<Field>& red, const Elem& a) const {
    std::vector<std::pair<int, const SVec<K>*>> blocks;
    for (const auto& t : a.terms()) blocks.push_back({generator_index(t.word, t.vector), &t.functional});
    return red.coordinates(blocks);
  }

  ZeroCertificate is_zero(const Elem& a) const {
    ZeroCertificate cert;
    if (a.empty()) return cert;
    std::vector<int> gens = generators_of(a);
    const CyclicReducer<Field>& red = reducer_for(gens);
    cert.zero = coordinates(red, a).empty();
    cert.module_dim = red.dim();
    cert.generators = static_cast<long>(gens.size());
    return cert;
  }

  void clear_caches() const {
    reducers_.clear();
    haar_.clear();
  }

 private:
  struct HaarData {
    std::vector<std::uint64_t> zero_keys;
    std::unordered_map<std::uint64_t, int> position;
    std::vector<std::vector<K>> invariants;  // each of length |zero_keys|
    Matrix<K> system;                         // columns: invariants, then complement basis
  };

  const HaarData& haar_data(const Word<Field>& w) const {
    for (const auto& [word, hd] : haar_) {
      if (word == w) return *hd;
    }
    WordShape<Field> sh(w);
    if (sh.total > 200000) throw std::length_error("Haar state: tensor word too large");
    auto hd = std::make_unique<HaarData>();
    int n = rank();
    std::vector<int> zero_w(static_cast<std::size_t>(n), 0);
    std::map<std::vector<int>, std::vector<std::uint64_t>> by_weight;
    for (std::uint64_t k = 0; k < sh.total; ++k) by_weight[weight_of(w, k)].push_back(k);
    hd->zero_keys = by_weight[zero_w];
    std::size_t n0 = hd->zero_keys.size();
    for (std::size_t r = 0; r < n0; ++r) hd->position[hd->zero_keys[r]] = static_cast<int>(r);
    // Invariants: common kernel of E_i, F_i on W_0.
    Matrix<K> stacked;
    for (int i = 0; i < n; ++i) {
      for (Gen g : {Gen{Gen::E, i}, Gen{Gen::F, i}}) {
        std::map<std::uint64_t, std::vector<K>> rows;
        for (std::size_t c = 0; c < n0; ++c) {
          SVec<K> img = apply_gen(w, g, SVec<K>::unit(hd->zero_keys[c], field_.one()), false);
          for (const auto& [k, x] : img.e) {
            auto& row = rows[k];
            if (row.empty()) row.assign(n0, field_.zero());
            row[c] = x;
          }
        }
        for (auto& [k, row] : rows) stacked.push_back(std::move(row));
      }
    }
    hd->invariants = kernel(stacked, n0);
    // Complement: images of E_i on W_{-alpha_i} and F_i on W_{alpha_i}.
    Matrix<K> comp;
    for (int i = 0; i < n; ++i) {
      std::vector<int> ai = rs_.root_to_weight(rs_.simple_root(i));
      std::vector<int> minus_ai = ai;
      for (auto& x : minus_ai) x = -x;
      for (auto [g, wt] : {std::pair{Gen{Gen::E, i}, minus_ai}, std::pair{Gen{Gen::F, i}, ai}}) {
        auto it = by_weight.find(wt);
        if (it == by_weight.end()) continue;
        for (std::uint64_t k : it->second) {
          SVec<K> img = apply_gen(w, g, SVec<K>::unit(k, field_.one()), false);
          std::vector<K> col(n0, field_.zero());
          for (const auto& [kk, x] : img.e) col[static_cast<std::size_t>(hd->position.at(kk))] = x;
          comp.push_back(std::move(col));
        }
      }
    }
    std::size_t comp_rank = 0;
    Matrix<K> comp_basis;
    if (!comp.empty()) {
      Matrix<K> m = comp;
      std::vector<std::size_t> piv = rref(m);
      comp_rank = piv.size();
      for (std::size_t r = 0; r < comp_rank; ++r) comp_basis.push_back(m[r]);
    }
    if (comp_rank + hd->invariants.size() != n0) throw std::logic_error("weight-zero decomposition is not direct");
    hd->system.assign(n0, std::vector<K>(n0, field_.zero()));
    std::size_t c = 0;
    for (const auto& v : hd->invariants) {
      for (std::size_t r = 0; r < n0; ++r) hd->system[r][c] = v[r];
      ++c;
    }
    for (const auto& v : comp_basis) {
      for (std::size_t r = 0; r < n0; ++r) hd->system[r][c] = v[r];
      ++c;
    }
    haar_.push_back({w, std::move(hd)});
    return *haar_.back().second;
  }

  RootSystem rs_;
  Field field_;
  long cyclic_cap_;
  std::deque<HWModule<Field>> modules_;
  std::deque<FactorRep<Field>> factors_;
  mutable std::unordered_map<long, K> qpow_;
  mutable std::vector<Generator> generators_;
  mutable std::unordered_map<std::size_t, std::vector<int>> generator_lookup_;
  mutable std::vector<std::unique_ptr<CyclicReducer<Field>>> reducers_;
  mutable std::vector<std::pair<Word<Field>, std::unique_ptr<HaarData>>> haar_;
};

template <class Field>
std::string describe_terms(const CoordElem<Field>& a) {
  std::ostringstream os;
  os << a.term_count() << " terms";
  std::map<std::string, int> shapes;
  for (const auto& t : a.terms()) {
    std::string s;
    for (auto* f : t.word) s += (s.empty() ? "" : ".") + f->label();
    shapes[s.empty() ? "1" : s]++;
  }
  for (const auto& [s, c] : shapes) os << " " << s << "x" << c;
  return os.str();
}

}  // namespace qflag
