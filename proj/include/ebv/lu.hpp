#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ebv/matrix.hpp"

namespace ebv {

/// Absolute pivot floor. A pivot p is rejected when |p| <= threshold.
struct PivotPolicy {
  double threshold = 0.0;

  /// n * eps * ||A||_inf
  static PivotPolicy for_matrix(const DenseMatrix& a);
};

/// Packed Doolittle factors. The strict lower triangle holds the L
/// multipliers (unit diagonal implicit); the diagonal and upper triangle
/// hold U, with the pivots on the diagonal.
class LUFactors {
 public:
  LUFactors() = default;
  LUFactors(std::size_t n, std::vector<double> packed);

  std::size_t n() const noexcept { return n_; }
  std::span<const double> packed() const noexcept { return packed_; }

  /// Multiplier l_ij for i > j.
  double lower(std::size_t i, std::size_t j) const { return packed_[i * n_ + j]; }
  /// u_ij for i <= j.
  double upper(std::size_t i, std::size_t j) const { return packed_[i * n_ + j]; }
  double pivot(std::size_t r) const { return packed_[r * n_ + r]; }

  /// Row r of U divided by its pivot, i.e. the unit-diagonal upper row
  /// u_rj / u_rr for j >= r.
  std::vector<double> unit_upper_row(std::size_t r) const;

  /// Expands L * U back into a dense matrix.
  DenseMatrix reconstruct() const;

  bool operator==(const LUFactors&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> packed_;
};

/// Operation tally for a single-threaded kernel.
struct OpCount {
  std::uint64_t madds = 0;
  std::uint64_t divs = 0;
};

/// Right-looking elimination without row exchanges. For r = 0..n-2 the
/// column below the pivot is scaled to multipliers and the trailing block
/// receives the rank-1 update a_ij -= l_ir * a_rj, steps in ascending order.
LUFactors factorize_seq(const DenseMatrix& a, const PivotPolicy& policy, OpCount* count = nullptr);
LUFactors factorize_seq(const DenseMatrix& a);

/// Solves L y = b column by column.
Vector forward_substitute(const LUFactors& f, const Vector& b, OpCount* count = nullptr);
/// Solves U x = y row by row, bottom up.
Vector backward_substitute(const LUFactors& f, const Vector& y, OpCount* count = nullptr);

Vector solve_seq(const DenseMatrix& a, const Vector& b, const PivotPolicy& policy);
Vector solve_seq(const DenseMatrix& a, const Vector& b);

}  // namespace ebv
