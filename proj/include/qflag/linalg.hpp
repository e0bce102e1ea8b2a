#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qflag/qscalar.hpp"

namespace qflag {

/// Dense row-major matrix over an exact field K (K{} is zero).
template <class K>
using Matrix = std::vector<std::vector<K>>;

/// Reduced row echelon form in place; returns the pivot columns.
template <class K>
std::vector<std::size_t> rref(Matrix<K>& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  std::size_t rows = m.size();
  std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && is_zero(m[p][c])) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    K inv = K(Rational(1)) / m[r][c];
    for (std::size_t k = c; k < cols; ++k) {
      if (!is_zero(m[r][k])) m[r][k] *= inv;
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      K f = m[i][c];
      for (std::size_t k = c; k < cols; ++k) {
        if (!is_zero(m[r][k])) m[i][k] -= f * m[r][k];
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class K>
std::size_t rank(Matrix<K> m) {
  return rref(m).size();
}

/// Basis of the null space {x : m x = 0}.
template <class K>
std::vector<std::vector<K>> kernel(Matrix<K> m, std::size_t cols) {
  std::vector<std::vector<K>> out;
  if (m.empty()) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::vector<K> e(cols);
      e[c] = K(Rational(1));
      out.push_back(std::move(e));
    }
    return out;
  }
  std::vector<std::size_t> piv = rref(m);
  std::vector<bool> is_piv(cols, false);
  for (std::size_t c : piv) is_piv[c] = true;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_piv[free]) continue;
    std::vector<K> x(cols);
    x[free] = K(Rational(1));
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -m[r][free];
    out.push_back(std::move(x));
  }
  return out;
}

/// Solves m x = b; nullopt if inconsistent.
template <class K>
std::optional<std::vector<K>> solve(const Matrix<K>& m, const std::vector<K>& b) {
  std::size_t rows = m.size();
  std::size_t cols = rows ? m[0].size() : 0;
  Matrix<K> aug(rows, std::vector<K>(cols + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) aug[r][c] = m[r][c];
    aug[r][cols] = b[r];
  }
  std::vector<std::size_t> piv = rref(aug);
  if (!piv.empty() && piv.back() == cols) return std::nullopt;
  std::vector<K> x(cols);
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][cols];
  return x;
}

template <class K>
Matrix<K> multiply(const Matrix<K>& a, const Matrix<K>& b) {
  std::size_t n = a.size();
  std::size_t m = b.empty() ? 0 : b[0].size();
  std::size_t inner = b.size();
  Matrix<K> out(n, std::vector<K>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      if (is_zero(a[i][k])) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (!is_zero(b[k][j])) out[i][j] += a[i][k] * b[k][j];
      }
    }
  }
  return out;
}

template <class K>
bool is_zero_matrix(const Matrix<K>& a) {
  for (const auto& row : a) {
    for (const auto& x : row) {
      if (!is_zero(x)) return false;
    }
  }
  return true;
}

}  // namespace qflag
