#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ebv/error.hpp"
#include "ebv/matrix.hpp"

namespace ebv::bench {

enum class Format { csv, markdown };

Format parse_format(std::string_view text);

/// Raised for an invalid or infeasible configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct BenchConfig {
  std::vector<std::size_t> sizes{256, 512, 1024, 2048};
  MatrixKind kind = MatrixKind::dense;
  double density = 1.0;
  std::vector<std::uint64_t> seeds{42};
  std::vector<std::size_t> workers{4};
  std::size_t repetitions = 5;
  Format format = Format::csv;
  bool check = false;
  /// Matrix Market input replacing the generator; sizes and seeds are ignored.
  std::optional<std::string> matrix_path;
  /// Refuse configurations whose estimated footprint exceeds this.
  std::uint64_t memory_limit_bytes = default_memory_limit();

  /// Throws ConfigError when sizes < 2, repetitions < 1, workers < 1 or the
  /// density does not fit the kind.
  void validate() const;

  static std::uint64_t default_memory_limit();
};

/// Bytes needed to benchmark one n x n system.
std::uint64_t required_bytes(std::size_t n);

struct BenchRow {
  std::size_t size = 0;
  std::string kind;
  std::size_t workers = 0;
  double t_seq = 0.0;
  double t_par = 0.0;
  double speedup = 0.0;
  double residual = 0.0;
  std::uint64_t madds = 0;
  /// Set when a solver failed for this row.
  std::optional<std::string> error;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::size_t hardware_workers = 0;
  std::string timestamp;

  bool has_errors() const;
};

/// Generates (or loads) each system, times solve_seq against the EbV
/// solver for every worker count, and records one row per (size, workers).
/// Timings are medians over repetitions and then over seeds.
BenchReport run_bench(const BenchConfig& cfg);

/// Residual bound used by `check`: 1e-9 * n * ||A||_inf.
double residual_bound(std::size_t n, double norm_a);

inline constexpr std::string_view kCsvHeader =
    "size,kind,workers,t_seq_s,t_par_s,speedup,residual,madds";

/// CSV or markdown table, rows sorted by size then workers. Numbers use six
/// significant digits.
std::string emit_report(const BenchReport& report, Format format);

/// Parses emitted CSV back into rows. Throws ParseError on malformed input.
std::vector<BenchRow> parse_csv(std::string_view text);

}  // namespace ebv::bench
