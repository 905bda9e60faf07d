#ifndef PROJUNIQ_LINALG_HPP
#define PROJUNIQ_LINALG_HPP

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "projuniq/exact/scalar.hpp"

namespace projuniq {

template <class T>
using Vec = std::vector<T>;
template <class T>
using Matrix = std::vector<std::vector<T>>;

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(const Scalar& s) { return s.is_zero(); }

namespace linalg {

/// In-place reduced row echelon form. Returns pivot columns.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && is_zero(m[p][c])) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const T inv = T(1) / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      const T f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  return pivots;
}

template <class T>
std::size_t rank(Matrix<T> m) {
  return rref(m).size();
}

/// Basis of {x : m x = 0}; `cols` is needed when m has no rows.
template <class T>
Matrix<T> kernel(Matrix<T> m, std::size_t cols) {
  if (!m.empty()) cols = m[0].size();
  auto piv = rref(m);
  std::vector<bool> is_piv(cols, false);
  for (auto c : piv) is_piv[c] = true;
  Matrix<T> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    Vec<T> v(cols, T(0));
    v[f] = T(1);
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][f];
    out.push_back(std::move(v));
  }
  return out;
}

template <class T>
T determinant(Matrix<T> m) {
  const std::size_t n = m.size();
  T det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_zero(m[p][c])) ++p;
    if (p == n) return T(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det = det * m[c][c];
    const T inv = T(1) / m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (is_zero(m[i][c])) continue;
      const T f = m[i][c] * inv;
      for (std::size_t j = c; j < n; ++j) m[i][j] = m[i][j] - f * m[c][j];
    }
  }
  return det;
}

/// Solves m x = b; returns false if inconsistent. Free variables set to 0.
template <class T>
bool solve(const Matrix<T>& m, const Vec<T>& b, Vec<T>& x) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  Matrix<T> aug(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    aug[i] = m[i];
    aug[i].push_back(b[i]);
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == cols) return false;
  x.assign(cols, T(0));
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][cols];
  return true;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
  const std::size_t n = m.size();
  Matrix<T> aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    aug[i] = m[i];
    for (std::size_t j = 0; j < n; ++j) aug[i].push_back(T(i == j ? 1 : 0));
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv.back() >= n) throw std::domain_error("singular matrix");
  Matrix<T> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].assign(aug[i].begin() + static_cast<std::ptrdiff_t>(n), aug[i].end());
  return out;
}

template <class T>
Vec<T> mul(const Matrix<T>& m, const Vec<T>& v) {
  Vec<T> out(m.size(), T(0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!is_zero(v[j])) out[i] = out[i] + m[i][j] * v[j];
  return out;
}

template <class T>
Matrix<T> mul(const Matrix<T>& a, const Matrix<T>& b) {
  const std::size_t n = a.size(), k = b.size(), p = k ? b[0].size() : 0;
  Matrix<T> out(n, Vec<T>(p, T(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (is_zero(a[i][l])) continue;
      for (std::size_t j = 0; j < p; ++j) out[i][j] = out[i][j] + a[i][l] * b[l][j];
    }
  return out;
}

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
  return s;
}

}  // namespace linalg
}  // namespace projuniq

#endif  // PROJUNIQ_LINALG_HPP
