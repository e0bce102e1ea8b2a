#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qflag/rational.hpp"

namespace qflag {

/// Coordinate system of a vector in h^*.
enum class Coords { Weight, Root };

/// A vector of h^* together with its coordinate system: fundamental-weight
/// coordinates (Weight) or simple-root coordinates (Root).
struct TaggedVec {
  Coords coords = Coords::Weight;
  std::vector<Rational> v;

  static TaggedVec weight(std::vector<Rational> c) { return {Coords::Weight, std::move(c)}; }
  static TaggedVec root(std::vector<Rational> c) { return {Coords::Root, std::move(c)}; }
  static TaggedVec root(const std::vector<int>& c) {
    std::vector<Rational> out(c.begin(), c.end());
    return {Coords::Root, std::move(out)};
  }
  static TaggedVec weight(const std::vector<int>& c) {
    std::vector<Rational> out(c.begin(), c.end());
    return {Coords::Weight, std::move(out)};
  }
};

/// Cartan data of a simple Lie algebra in Bourbaki numbering (0-based).
///
/// Conventions: a_ij = 2(alpha_i, alpha_j)/(alpha_i, alpha_i), short roots have
/// (alpha, alpha) = 2, and (alpha_i, alpha_j) = d_i a_ij.
class RootSystem {
 public:
  RootSystem(char type_letter, int rank) : type_(type_letter), rank_(rank) {
    build_cartan();
    build_inverse();
    build_positive_roots();
  }

  char type_letter() const { return type_; }
  int rank() const { return rank_; }
  std::string name() const { return std::string(1, type_) + std::to_string(rank_); }
  const std::vector<std::vector<int>>& cartan_matrix() const { return a_; }
  const std::vector<int>& symmetrizers() const { return d_; }
  int d(int i) const { return d_[static_cast<std::size_t>(i)]; }
  int a(int i, int j) const { return a_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  const std::vector<std::vector<int>>& positive_roots() const { return pos_; }
  const std::vector<std::vector<Rational>>& inverse_cartan() const { return inv_; }

  std::vector<int> rho() const { return std::vector<int>(static_cast<std::size_t>(rank_), 1); }

  std::vector<int> simple_root(int i) const {
    std::vector<int> r(static_cast<std::size_t>(rank_), 0);
    r[static_cast<std::size_t>(i)] = 1;
    return r;
  }

  /// Fundamental-weight coordinates of a root-coordinate vector.
  std::vector<Rational> root_to_weight(const std::vector<Rational>& beta) const {
    check_len(beta);
    std::vector<Rational> out(static_cast<std::size_t>(rank_));
    for (int i = 0; i < rank_; ++i) {
      for (int j = 0; j < rank_; ++j) out[static_cast<std::size_t>(i)] += a(i, j) * beta[static_cast<std::size_t>(j)];
    }
    return out;
  }

  std::vector<int> root_to_weight(const std::vector<int>& beta) const {
    std::vector<int> out(static_cast<std::size_t>(rank_), 0);
    for (int i = 0; i < rank_; ++i) {
      for (int j = 0; j < rank_; ++j) out[static_cast<std::size_t>(i)] += a(i, j) * beta[static_cast<std::size_t>(j)];
    }
    return out;
  }

  /// Simple-root coordinates of a weight-coordinate vector (exact inverse Cartan).
  std::vector<Rational> weight_to_root(const std::vector<Rational>& lambda) const {
    check_len(lambda);
    std::vector<Rational> out(static_cast<std::size_t>(rank_));
    for (int i = 0; i < rank_; ++i) {
      for (int j = 0; j < rank_; ++j) {
        out[static_cast<std::size_t>(i)] += inv_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                                            lambda[static_cast<std::size_t>(j)];
      }
    }
    return out;
  }

  /// (lambda, beta) for lambda in weight coordinates and beta in root coordinates.
  Rational pair_weight_root(const std::vector<Rational>& lambda, const std::vector<Rational>& beta) const {
    check_len(lambda);
    check_len(beta);
    Rational acc(0);
    for (int j = 0; j < rank_; ++j) acc += lambda[static_cast<std::size_t>(j)] * d(j) * beta[static_cast<std::size_t>(j)];
    return acc;
  }

  /// Integer version of pair_weight_root.
  long pair_weight_root(const std::vector<int>& lambda, const std::vector<int>& beta) const {
    long acc = 0;
    for (int j = 0; j < rank_; ++j) {
      acc += static_cast<long>(lambda[static_cast<std::size_t>(j)]) * d(j) * beta[static_cast<std::size_t>(j)];
    }
    return acc;
  }

  /// (lambda, mu) in any combination of coordinate systems.
  Rational bilinear(const TaggedVec& x, const TaggedVec& y) const {
    check_len(x.v);
    check_len(y.v);
    if (x.coords == Coords::Weight && y.coords == Coords::Root) return pair_weight_root(x.v, y.v);
    if (x.coords == Coords::Root && y.coords == Coords::Weight) return pair_weight_root(y.v, x.v);
    if (x.coords == Coords::Root) return pair_weight_root(root_to_weight(x.v), y.v);
    return pair_weight_root(x.v, weight_to_root(y.v));
  }

  bool is_root(const std::vector<int>& beta) const {
    if (static_cast<int>(beta.size()) != rank_) return false;
    std::vector<int> neg(beta.size());
    for (std::size_t k = 0; k < beta.size(); ++k) neg[k] = -beta[k];
    return root_set_.count(beta) > 0 || root_set_.count(neg) > 0;
  }

  /// (alpha^vee, lambda) = 2(alpha, lambda)/(alpha, alpha) for a root alpha.
  Rational coroot_pairing(const std::vector<int>& alpha, const TaggedVec& lambda) const {
    if (!is_root(alpha)) throw std::invalid_argument("coroot_pairing: " + root_label(alpha) + " is not a root of " + name());
    TaggedVec a = TaggedVec::root(alpha);
    Rational out = 2 * bilinear(a, lambda) / bilinear(a, a);
    return out;
  }

  /// (2 rho) in simple-root coordinates; integral for every simple type.
  std::vector<long> two_rho_root() const {
    std::vector<Rational> w(static_cast<std::size_t>(rank_), Rational(2));
    std::vector<Rational> r = weight_to_root(w);
    std::vector<long> out;
    for (const auto& x : r) {
      if (x.get_den() != 1) throw std::logic_error("2 rho is not in the root lattice");
      out.push_back(x.get_num().get_si());
    }
    return out;
  }

  /// (2 rho, lambda) for an integral weight lambda.
  long two_rho_pair(const std::vector<int>& lambda) const {
    std::vector<long> tr = two_rho_root();
    long acc = 0;
    for (int j = 0; j < rank_; ++j) {
      acc += static_cast<long>(lambda[static_cast<std::size_t>(j)]) * d(j) * tr[static_cast<std::size_t>(j)];
    }
    return acc;
  }

  std::string root_label(const std::vector<int>& beta) const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < beta.size(); ++k) {
      int c = beta[k];
      if (c == 0) continue;
      if (c < 0) {
        os << "-";
      } else if (!first) {
        os << "+";
      }
      int m = c < 0 ? -c : c;
      if (m != 1) os << m;
      os << "a" << (k + 1);
      first = false;
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  void check_len(const std::vector<Rational>& v) const {
    if (static_cast<int>(v.size()) != rank_) {
      throw std::invalid_argument("vector of length " + std::to_string(v.size()) + " used with " + name());
    }
  }

  void set_bond(int i, int j, int aij, int aji) {
    a_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = aij;
    a_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = aji;
  }

  void build_cartan() {
    auto unsupported = [&] {
      throw std::invalid_argument("unsupported type " + std::string(1, type_) + std::to_string(rank_));
    };
    if (rank_ < 1 || rank_ > 4) unsupported();
    std::size_t n = static_cast<std::size_t>(rank_);
    a_.assign(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) a_[i][i] = 2;
    d_.assign(n, 1);
    switch (type_) {
      case 'A':
        for (int i = 0; i + 1 < rank_; ++i) set_bond(i, i + 1, -1, -1);
        break;
      case 'B':
        if (rank_ < 2) unsupported();
        for (int i = 0; i + 2 < rank_; ++i) set_bond(i, i + 1, -1, -1);
        set_bond(rank_ - 2, rank_ - 1, -1, -2);
        for (int i = 0; i + 1 < rank_; ++i) d_[static_cast<std::size_t>(i)] = 2;
        break;
      case 'C':
        if (rank_ < 2) unsupported();
        for (int i = 0; i + 2 < rank_; ++i) set_bond(i, i + 1, -1, -1);
        set_bond(rank_ - 2, rank_ - 1, -2, -1);
        d_[n - 1] = 2;
        break;
      case 'D':
        if (rank_ != 4) unsupported();
        set_bond(0, 1, -1, -1);
        set_bond(1, 2, -1, -1);
        set_bond(1, 3, -1, -1);
        break;
      case 'F':
        if (rank_ != 4) unsupported();
        set_bond(0, 1, -1, -1);
        set_bond(1, 2, -1, -2);
        set_bond(2, 3, -1, -1);
        d_ = {2, 2, 1, 1};
        break;
      case 'G':
        if (rank_ != 2) unsupported();
        set_bond(0, 1, -3, -1);
        d_ = {1, 3};
        break;
      default:
        unsupported();
    }
    for (int i = 0; i < rank_; ++i) {
      for (int j = 0; j < rank_; ++j) {
        if (d(i) * a(i, j) != d(j) * a(j, i)) throw std::logic_error("Cartan data not symmetrizable");
      }
    }
  }

  void build_inverse() {
    std::size_t n = static_cast<std::size_t>(rank_);
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m[i][j] = a_[i][j];
      m[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      while (p < n && is_zero(m[p][c])) ++p;
      if (p == n) throw std::logic_error("singular Cartan matrix");
      std::swap(m[p], m[c]);
      Rational inv = 1 / m[c][c];
      for (auto& x : m[c]) x *= inv;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || is_zero(m[r][c])) continue;
        Rational f = m[r][c];
        for (std::size_t k = 0; k < 2 * n; ++k) m[r][k] -= f * m[c][k];
      }
    }
    inv_.assign(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) inv_[i][j] = m[i][n + j];
    }
  }

  // Root strings: for beta > 0 and simple alpha_i, beta + alpha_i is a root
  // iff p = r - <beta, alpha_i^vee> > 0, where r is the length of the string
  // going down from beta.
  void build_positive_roots() {
    std::vector<std::vector<int>> current;
    for (int i = 0; i < rank_; ++i) current.push_back(simple_root(i));
    for (const auto& r : current) root_set_.insert(r);
    std::vector<std::vector<int>> all = current;
    while (!current.empty()) {
      std::set<std::vector<int>> next;
      for (const auto& beta : current) {
        std::vector<int> bw = root_to_weight(beta);
        for (int i = 0; i < rank_; ++i) {
          int r = 0;
          std::vector<int> down = beta;
          while (true) {
            down[static_cast<std::size_t>(i)] -= 1;
            if (!root_set_.count(down)) break;
            ++r;
          }
          int p = r - bw[static_cast<std::size_t>(i)];
          if (p > 0) {
            std::vector<int> up = beta;
            up[static_cast<std::size_t>(i)] += 1;
            if (!root_set_.count(up)) next.insert(up);
          }
        }
      }
      current.assign(next.begin(), next.end());
      for (const auto& r : current) {
        root_set_.insert(r);
        all.push_back(r);
      }
    }
    auto height = [](const std::vector<int>& r) {
      int h = 0;
      for (int c : r) h += c;
      return h;
    };
    std::sort(all.begin(), all.end(), [&](const std::vector<int>& x, const std::vector<int>& y) {
      int hx = height(x), hy = height(y);
      if (hx != hy) return hx < hy;
      return x > y;
    });
    pos_ = std::move(all);
  }

  char type_;
  int rank_;
  std::vector<std::vector<int>> a_;
  std::vector<int> d_;
  std::vector<std::vector<Rational>> inv_;
  std::vector<std::vector<int>> pos_;
  std::set<std::vector<int>> root_set_;
};

inline RootSystem build_root_system(char type_letter, int rank) { return RootSystem(type_letter, rank); }

/// Parabolic data for a subset S of simple roots (0-based indices).
struct ParabolicData {
  std::vector<int> subset;
  std::vector<std::vector<int>> levi_roots;
  std::vector<std::vector<int>> nilradical_pos;
  std::vector<int> rho_S;

  bool in_S(int i) const { return std::find(subset.begin(), subset.end(), i) != subset.end(); }
};

inline ParabolicData parabolic(const RootSystem& rs, std::vector<int> S) {
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  for (int i : S) {
    if (i < 0 || i >= rs.rank()) {
      throw std::out_of_range("simple root index " + std::to_string(i + 1) + " out of range for " + rs.name());
    }
  }
  ParabolicData out;
  out.subset = S;
  std::vector<int> in(static_cast<std::size_t>(rs.rank()), 0);
  for (int i : S) in[static_cast<std::size_t>(i)] = 1;
  for (const auto& beta : rs.positive_roots()) {
    bool levi = true;
    for (int k = 0; k < rs.rank(); ++k) {
      if (beta[static_cast<std::size_t>(k)] != 0 && !in[static_cast<std::size_t>(k)]) levi = false;
    }
    if (levi) {
      out.levi_roots.push_back(beta);
      std::vector<int> neg = beta;
      for (auto& c : neg) c = -c;
      out.levi_roots.push_back(neg);
    } else {
      out.nilradical_pos.push_back(beta);
    }
  }
  out.rho_S.assign(static_cast<std::size_t>(rs.rank()), 1);
  for (int i : S) out.rho_S[static_cast<std::size_t>(i)] = 0;
  return out;
}

/// Weyl dimension formula prod_{alpha>0} (lambda+rho, alpha)/(rho, alpha).
inline long weyl_dim(const RootSystem& rs, const std::vector<int>& lambda) {
  for (int c : lambda) {
    if (c < 0) throw std::invalid_argument("weyl_dim: weight is not dominant");
  }
  Rational num(1);
  std::vector<int> lr = lambda;
  for (auto& c : lr) c += 1;
  for (const auto& alpha : rs.positive_roots()) {
    Rational f(mpz_class(rs.pair_weight_root(lr, alpha)), mpz_class(rs.pair_weight_root(rs.rho(), alpha)));
    f.canonicalize();
    num *= f;
  }
  num.canonicalize();
  if (num.get_den() != 1) throw std::logic_error("weyl_dim: non-integral dimension " + num.get_str());
  return num.get_num().get_si();
}

/// Golden-file text: header with symmetrizers, then one positive root per line.
inline std::string roots_text(const RootSystem& rs) {
  std::ostringstream os;
  os << "# type " << rs.type_letter() << " rank " << rs.rank() << "\n";
  os << "# symmetrizers";
  for (int x : rs.symmetrizers()) os << " " << x;
  os << "\n";
  os << "# cartan";
  for (const auto& row : rs.cartan_matrix()) {
    os << " [";
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
    os << "]";
  }
  os << "\n";
  for (const auto& r : rs.positive_roots()) {
    for (std::size_t k = 0; k < r.size(); ++k) os << (k ? " " : "") << r[k];
    os << "\n";
  }
  return os.str();
}

}  // namespace qflag
