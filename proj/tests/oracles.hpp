#pragma once

// Reference computations that share no code path with the library kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ebv/matrix.hpp"

namespace ebv::oracle {

using Grid = std::vector<std::vector<double>>;

inline Grid to_grid(const DenseMatrix& a) {
  Grid g(a.n(), std::vector<double>(a.n()));
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) g[i][j] = a(i, j);
  return g;
}

/// Textbook Gaussian elimination with partial pivoting on an augmented grid.
inline std::vector<double> gepp_solve(Grid a, std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[best][c])) best = r;
    if (a[best][c] == 0.0) throw std::runtime_error("oracle: singular");
    std::swap(a[c], a[best]);
    std::swap(b[c], b[best]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

/// Diagonal margin |a_ii| - sum_{j != i} |a_ij| for every row.
inline std::vector<double> dominance_margins(const DenseMatrix& a) {
  std::vector<double> m(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < a.n(); ++j)
      if (j != i) off += std::abs(a(i, j));
    m[i] = std::abs(a(i, i)) - off;
  }
  return m;
}

/// sum_{r=1}^{n-1} (n - r)^2 by direct summation.
inline std::uint64_t factorize_madds(std::size_t n) {
  std::uint64_t s = 0;
  for (std::size_t r = 1; r < n; ++r) s += (n - r) * (n - r);
  return s;
}

/// Number of strictly off-diagonal (i, j) positions, by enumeration.
inline std::size_t count_offdiagonal(std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c += (i != j);
  return c;
}

inline double max_abs_diff(const std::vector<double>& a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace ebv::oracle
