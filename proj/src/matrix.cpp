#include "ebv/matrix.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "ebv/error.hpp"

namespace ebv {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw ParameterError(std::string(what) + " has a non-finite entry");
    }
  }
}

// Off-diagonals uniform in [-1, 1]; diagonal = sum |a_ij| + 1.
double draw_offdiagonal(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

// ---------------------------------------------------------------- Vector

Vector::Vector(std::size_t n, double fill) : values_(n, fill) {
  require_finite(values_, "vector");
}

Vector::Vector(std::vector<double> values) : values_(std::move(values)) {
  require_finite(values_, "vector");
}

Vector::Vector(std::initializer_list<double> values) : values_(values) {
  require_finite(values_, "vector");
}

double norm_inf(const Vector& v) {
  double m = 0.0;
  for (double x : v.values()) m = std::max(m, std::abs(x));
  return m;
}

// ----------------------------------------------------------- DenseMatrix

DenseMatrix::DenseMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {
  if (n == 0) throw ParameterError("matrix dimension must be at least 1");
}

DenseMatrix::DenseMatrix(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (n == 0) throw ParameterError("matrix dimension must be at least 1");
  if (values_.size() != n * n) {
    throw ParameterError("expected " + std::to_string(n * n) + " values, got " +
                         std::to_string(values_.size()));
  }
  require_finite(values_, "matrix");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()) {
  if (n_ == 0) throw ParameterError("matrix dimension must be at least 1");
  values_.reserve(n_ * n_);
  for (const auto& r : rows) {
    if (r.size() != n_) throw ParameterError("matrix rows must all have length n");
    values_.insert(values_.end(), r.begin(), r.end());
  }
  require_finite(values_, "matrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double DenseMatrix::norm_inf() const {
  double m = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (double v : row(i)) s += std::abs(v);
    m = std::max(m, s);
  }
  return m;
}

Vector DenseMatrix::multiply(const Vector& x) const {
  if (x.size() != n_) throw ParameterError("dimension mismatch in matrix-vector product");
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto r = row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return Vector(std::move(y));
}

// ---------------------------------------------------------- SparseMatrix

SparseMatrix::SparseMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values)
    : n_(n),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (n_ == 0) throw ParameterError("matrix dimension must be at least 1");
  if (row_offsets_.size() != n_ + 1) throw ParameterError("row_offsets must have n+1 entries");
  if (col_indices_.size() != values_.size()) {
    throw ParameterError("col_indices and values differ in length");
  }
  if (row_offsets_.front() != 0 || row_offsets_.back() != values_.size()) {
    throw ParameterError("row_offsets must span [0, nnz]");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (row_offsets_[i] > row_offsets_[i + 1]) {
      throw ParameterError("row_offsets must be nondecreasing");
    }
    bool has_diagonal = false;
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      if (col_indices_[p] >= n_) throw ParameterError("column index out of range");
      if (p > row_offsets_[i] && col_indices_[p] <= col_indices_[p - 1]) {
        throw ParameterError("column indices must be strictly increasing within a row");
      }
      has_diagonal |= col_indices_[p] == i;
    }
    if (!has_diagonal) {
      throw ParameterError("row " + std::to_string(i) + " does not store its diagonal");
    }
  }
  require_finite(values_, "sparse matrix");
}

// ------------------------------------------------------------ RowScaling

RowScaling::RowScaling(std::vector<double> scales) : scales_(std::move(scales)) {
  for (std::size_t i = 0; i < scales_.size(); ++i) {
    if (scales_[i] == 0.0) throw SingularDiagonalError(i);
  }
}

Vector RowScaling::apply(const Vector& b) const {
  if (b.size() != scales_.size()) throw ParameterError("dimension mismatch in row scaling");
  std::vector<double> out(b.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = b[i] * scales_[i];
  return Vector(std::move(out));
}

// ------------------------------------------------------------ generators

std::string_view to_string(MatrixKind kind) {
  return kind == MatrixKind::dense ? "dense" : "sparse";
}

MatrixKind parse_matrix_kind(std::string_view text) {
  if (text == "dense") return MatrixKind::dense;
  if (text == "sparse") return MatrixKind::sparse;
  throw ParameterError("unknown matrix kind '" + std::string(text) + "'");
}

DenseMatrix generate_dense(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("matrix dimension must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = draw_offdiagonal(rng);
      values[i * n + j] = v;
      row_sum += std::abs(v);
    }
    values[i * n + i] = row_sum + 1.0;
  }
  return DenseMatrix(n, std::move(values));
}

SparseMatrix generate_sparse(std::size_t n, double density, std::uint64_t seed) {
  if (n == 0) throw ParameterError("matrix dimension must be at least 1");
  if (!(density > 0.0 && density <= 1.0)) {
    throw ParameterError("density must lie in (0, 1]");
  }
  const auto per_row = static_cast<std::size_t>(std::ceil(density * static_cast<double>(n - 1)));

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> cols;
  std::vector<double> values;
  offsets.reserve(n + 1);
  cols.reserve(n * (per_row + 1));
  values.reserve(n * (per_row + 1));

  std::vector<std::size_t> candidates(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    // Off-diagonal columns of row i, then a partial Fisher-Yates draw.
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
    for (std::size_t& c : candidates) c += (c >= i) ? 1 : 0;
    for (std::size_t t = 0; t < per_row; ++t) {
      std::uniform_int_distribution<std::size_t> pick(t, candidates.size() - 1);
      std::swap(candidates[t], candidates[pick(rng)]);
    }
    std::vector<std::size_t> row_cols(candidates.begin(),
                                      candidates.begin() + static_cast<std::ptrdiff_t>(per_row));
    std::vector<double> row_vals(per_row);
    double row_sum = 0.0;
    for (double& v : row_vals) {
      v = draw_offdiagonal(rng);
      row_sum += std::abs(v);
    }
    row_cols.push_back(i);
    row_vals.push_back(row_sum + 1.0);

    std::vector<std::size_t> order(row_cols.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return row_cols[a] < row_cols[b]; });
    for (std::size_t o : order) {
      cols.push_back(row_cols[o]);
      values.push_back(row_vals[o]);
    }
    offsets.push_back(cols.size());
  }
  return SparseMatrix(n, std::move(offsets), std::move(cols), std::move(values));
}

AnyMatrix generate(std::size_t n, MatrixKind kind, double density, std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) {
    throw ParameterError("density must lie in (0, 1]");
  }
  if (kind == MatrixKind::dense) {
    if (density != 1.0) throw ParameterError("dense matrices require density 1");
    return generate_dense(n, seed);
  }
  return generate_sparse(n, density, seed);
}

// --------------------------------------------------------- Matrix Market

SparseMatrix load_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw ParseError(1, "empty input");
  ++line_no;
  {
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry, extra;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lowercase(object) != "matrix" ||
        lowercase(format) != "coordinate" || lowercase(field) != "real" ||
        lowercase(symmetry) != "general" || (header >> extra)) {
      throw ParseError(line_no,
                       "expected header '%%MatrixMarket matrix coordinate real general'");
    }
  }

  auto next_content_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      const auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '%') continue;
      return true;
    }
    return false;
  };

  if (!next_content_line(line)) throw ParseError(line_no + 1, "missing size line");
  std::size_t rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream sizes(line);
    std::string extra;
    if (!(sizes >> rows >> cols >> nnz) || (sizes >> extra)) {
      throw ParseError(line_no, "expected 'rows cols nnz'");
    }
    if (rows != cols) throw ParseError(line_no, "matrix is not square");
    if (rows == 0) throw ParseError(line_no, "matrix dimension must be at least 1");
  }
  const std::size_t n = rows;

  // Ordered by (row, col) so the CSR arrays come out sorted; duplicates sum.
  std::map<std::pair<std::size_t, std::size_t>, double> entries;
  for (std::size_t e = 0; e < nnz; ++e) {
    if (!next_content_line(line)) {
      throw ParseError(line_no + 1, "expected " + std::to_string(nnz) + " entries, found " +
                                        std::to_string(e));
    }
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double v = 0.0;
    std::string extra;
    if (!(entry >> i >> j >> v) || (entry >> extra)) {
      throw ParseError(line_no, "expected 'row col value'");
    }
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > n || static_cast<std::size_t>(j) > n) {
      throw ParseError(line_no, "index (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") out of range for " + std::to_string(n) + "x" +
                                    std::to_string(n) + " matrix");
    }
    if (!std::isfinite(v)) throw ParseError(line_no, "non-finite value");
    entries[{static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)}] += v;
  }
  if (next_content_line(line)) throw ParseError(line_no, "more entries than declared");

  for (std::size_t i = 0; i < n; ++i) entries.try_emplace({i, i}, 0.0);

  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> vals;
  col_idx.reserve(entries.size());
  vals.reserve(entries.size());
  for (const auto& [pos, v] : entries) {
    ++offsets[pos.first + 1];
    col_idx.push_back(pos.second);
    vals.push_back(v);
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return SparseMatrix(n, std::move(offsets), std::move(col_idx), std::move(vals));
}

SparseMatrix load_matrix_market(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_matrix_market(in);
}

SparseMatrix load_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  return load_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.n() << ' ' << m.n() << ' ' << m.nnz() << '\n';
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < m.n(); ++i) {
    const auto cols = m.row_cols(i);
    const auto vals = m.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      out << (i + 1) << ' ' << (cols[p] + 1) << ' ' << vals[p] << '\n';
    }
  }
  out.precision(old_precision);
}

// ------------------------------------------------------------ conversion

DenseMatrix to_dense(const SparseMatrix& m) {
  DenseMatrix d(m.n());
  for (std::size_t i = 0; i < m.n(); ++i) {
    const auto cols = m.row_cols(i);
    const auto vals = m.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p) d(i, cols[p]) = vals[p];
  }
  return d;
}

SparseMatrix sparsify(const DenseMatrix& a) {
  const std::size_t n = a.n();
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (a(i, j) != 0.0 || i == j) {
        cols.push_back(j);
        vals.push_back(a(i, j));
      }
    }
    offsets.push_back(cols.size());
  }
  return SparseMatrix(n, std::move(offsets), std::move(cols), std::move(vals));
}

Normalized normalize_unit_diagonal(const DenseMatrix& a) {
  const std::size_t n = a.n();
  std::vector<double> values(a.values().begin(), a.values().end());
  std::vector<double> scales(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a(i, i);
    if (d == 0.0) throw SingularDiagonalError(i);
    scales[i] = 1.0 / d;
    for (std::size_t j = 0; j < n; ++j) values[i * n + j] /= d;
    values[i * n + i] = 1.0;
  }
  return {DenseMatrix(n, std::move(values)), RowScaling(std::move(scales))};
}

double residual_inf(const DenseMatrix& a, const Vector& x, const Vector& b) {
  if (x.size() != a.n() || b.size() != a.n()) {
    throw ParameterError("dimension mismatch in residual");
  }
  const Vector ax = a.multiply(x);
  double r = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) r = std::max(r, std::abs(ax[i] - b[i]));
  return r;
}

}  // namespace ebv
