#include "ebv/lu.hpp"

#include <cmath>
#include <limits>

#include "ebv/error.hpp"

namespace ebv {

namespace {

// y[k] -= a * x[k] over disjoint ranges.
inline void subtract_scaled_left(double* __restrict y, const double* __restrict x, double a,
                                 std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) y[k] -= a * x[k];
}

}  // namespace

PivotPolicy PivotPolicy::for_matrix(const DenseMatrix& a) {
  return {static_cast<double>(a.n()) * std::numeric_limits<double>::epsilon() * a.norm_inf()};
}

LUFactors::LUFactors(std::size_t n, std::vector<double> packed)
    : n_(n), packed_(std::move(packed)) {
  if (n_ == 0 || packed_.size() != n_ * n_) {
    throw ParameterError("packed factors must hold n*n values");
  }
}

std::vector<double> LUFactors::unit_upper_row(std::size_t r) const {
  const double p = pivot(r);
  std::vector<double> row(n_ - r);
  row[0] = 1.0;
  for (std::size_t j = r + 1; j < n_; ++j) row[j - r] = upper(r, j) / p;
  return row;
}

DenseMatrix LUFactors::reconstruct() const {
  DenseMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      // (L U)_ij = sum_{k <= min(i, j)} l_ik u_kj with l_ii = 1.
      const std::size_t kmax = std::min(i, j);
      double s = 0.0;
      for (std::size_t k = 0; k < kmax; ++k) s += lower(i, k) * upper(k, j);
      s += (i <= j) ? upper(i, j) : lower(i, j) * upper(j, j);
      out(i, j) = s;
    }
  }
  return out;
}

LUFactors factorize_seq(const DenseMatrix& a, const PivotPolicy& policy, OpCount* count) {
  if (policy.threshold < 0.0 || std::isnan(policy.threshold)) {
    throw ParameterError("pivot threshold must be nonnegative");
  }
  const std::size_t n = a.n();
  std::vector<double> m(a.values().begin(), a.values().end());
  OpCount local;

  for (std::size_t r = 0; r + 1 < n; ++r) {
    const double* pivot_row = &m[r * n];
    const double p = pivot_row[r];
    if (!(std::abs(p) > policy.threshold)) throw SingularPivotError(r + 1, p);
    for (std::size_t i = r + 1; i < n; ++i) {
      double* row = &m[i * n];
      const double l = row[r] / p;
      row[r] = l;
      ++local.divs;
      subtract_scaled_left(row + r + 1, pivot_row + r + 1, l, n - r - 1);
      local.madds += n - r - 1;
    }
  }
  if (!(std::abs(m[n * n - 1]) > policy.threshold)) throw SingularPivotError(n, m[n * n - 1]);

  if (count) *count = local;
  return LUFactors(n, std::move(m));
}

LUFactors factorize_seq(const DenseMatrix& a) {
  return factorize_seq(a, PivotPolicy::for_matrix(a));
}

Vector forward_substitute(const LUFactors& f, const Vector& b, OpCount* count) {
  const std::size_t n = f.n();
  if (b.size() != n) throw ParameterError("dimension mismatch in forward substitution");
  std::vector<double> y(b.values().begin(), b.values().end());
  OpCount local;
  // Column k of L is applied once y_k is final.
  for (std::size_t k = 0; k < n; ++k) {
    const double yk = y[k];
    for (std::size_t i = k + 1; i < n; ++i) y[i] -= f.lower(i, k) * yk;
    local.madds += n - k - 1;
  }
  if (count) *count = local;
  return Vector(std::move(y));
}

Vector backward_substitute(const LUFactors& f, const Vector& y, OpCount* count) {
  const std::size_t n = f.n();
  if (y.size() != n) throw ParameterError("dimension mismatch in backward substitution");
  std::vector<double> x(n);
  OpCount local;
  for (std::size_t k = n; k-- > 0;) {
    const double p = f.pivot(k);
    if (p == 0.0) throw SingularPivotError(k + 1, p);
    double s = y[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= f.upper(k, j) * x[j];
    x[k] = s / p;
    local.madds += n - k - 1;
    ++local.divs;
  }
  if (count) *count = local;
  return Vector(std::move(x));
}

Vector solve_seq(const DenseMatrix& a, const Vector& b, const PivotPolicy& policy) {
  if (b.size() != a.n()) throw ParameterError("dimension mismatch in solve");
  const LUFactors f = factorize_seq(a, policy);
  return backward_substitute(f, forward_substitute(f, b));
}

Vector solve_seq(const DenseMatrix& a, const Vector& b) {
  return solve_seq(a, b, PivotPolicy::for_matrix(a));
}

}  // namespace ebv
