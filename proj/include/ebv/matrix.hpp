#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ebv {

/// Dense vector of doubles. Entries are finite on construction.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0);
  explicit Vector(std::vector<double> values);
  Vector(std::initializer_list<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> values_;
};

/// Square n x n matrix, row-major doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  /// Zero matrix of dimension n (n >= 1).
  explicit DenseMatrix(std::size_t n);
  /// Takes ownership of n*n row-major values; throws ParameterError on a
  /// size mismatch or a non-finite entry.
  DenseMatrix(std::size_t n, std::vector<double> values);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * n_, n_}; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Maximum absolute row sum.
  double norm_inf() const;
  Vector multiply(const Vector& x) const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Compressed sparse row storage. Every row stores its diagonal.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Validates the CSR invariants; throws ParameterError when violated.
  SparseMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values);

  std::size_t n() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::size_t> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const std::size_t> row_cols(std::size_t i) const {
    return {col_indices_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {values_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }

  bool operator==(const SparseMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

/// Per-row factors 1/a_ii produced by normalize_unit_diagonal.
class RowScaling {
 public:
  explicit RowScaling(std::vector<double> scales);

  std::span<const double> scales() const noexcept { return scales_; }
  /// Scales a right-hand side so it matches the normalized system.
  Vector apply(const Vector& b) const;

 private:
  std::vector<double> scales_;
};

enum class MatrixKind { dense, sparse };

std::string_view to_string(MatrixKind kind);
/// Accepts "dense" or "sparse".
MatrixKind parse_matrix_kind(std::string_view text);

/// Random strictly diagonally dominant n x n matrix. Off-diagonals are
/// uniform in [-1, 1]; the diagonal is the row's absolute sum plus one.
DenseMatrix generate_dense(std::size_t n, std::uint64_t seed);

/// Sparse variant: each row holds ceil(density*(n-1)) distinct off-diagonal
/// columns drawn uniformly, plus the diagonal.
SparseMatrix generate_sparse(std::size_t n, double density, std::uint64_t seed);

using AnyMatrix = std::variant<DenseMatrix, SparseMatrix>;

/// Dispatches to generate_dense / generate_sparse. Dense requires density == 1.
AnyMatrix generate(std::size_t n, MatrixKind kind, double density, std::uint64_t seed);

/// Parses "coordinate real general" Matrix Market text. Duplicate entries
/// are summed; missing diagonal entries are stored as explicit zeros.
SparseMatrix load_matrix_market(std::istream& in);
SparseMatrix load_matrix_market(std::string_view text);
SparseMatrix load_matrix_market_file(const std::string& path);

/// Writes `m` as "coordinate real general" with 17 significant digits.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);

DenseMatrix to_dense(const SparseMatrix& m);
/// Keeps nonzero entries and every diagonal entry.
SparseMatrix sparsify(const DenseMatrix& a);

struct Normalized {
  DenseMatrix matrix;
  RowScaling scaling;
};

/// Divides each row by its diagonal entry. The result has a bitwise 1.0
/// diagonal. Throws SingularDiagonalError naming the first zero diagonal.
Normalized normalize_unit_diagonal(const DenseMatrix& a);

/// max_i |(A x - b)_i|
double residual_inf(const DenseMatrix& a, const Vector& x, const Vector& b);

double norm_inf(const Vector& v);

}  // namespace ebv
