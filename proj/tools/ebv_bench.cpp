// ebv-bench: sequential vs. equal bi-vectorized LU timing sweeps.
//
// Exit codes: 0 success, 1 some row failed, 2 configuration error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ebv/bench.hpp"
#include "ebv/error.hpp"

namespace {

template <class T>
std::vector<T> split_csv(const std::string& text, const char* what) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(item, &used);
      if (used != item.size() || item.empty() || item[0] == '-') throw std::invalid_argument(item);
      out.push_back(static_cast<T>(v));
    } catch (const std::exception&) {
      throw ebv::bench::ConfigError(std::string("invalid ") + what + " entry '" + item + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark sequential LU against the equal bi-vectorized parallel solver"};

  std::string sizes = "256,512,1024,2048";
  std::string kind = "dense";
  double density = 1.0;
  std::string seeds = "42";
  std::string workers = "4";
  std::size_t reps = 5;
  std::string format = "csv";
  bool check = false;
  std::string out_path;
  std::string matrix_path;

  app.add_option("--sizes", sizes, "Comma-separated matrix dimensions")->capture_default_str();
  app.add_option("--kind", kind, "dense or sparse")->capture_default_str();
  app.add_option("--density", density, "Off-diagonal fill fraction for sparse matrices")
      ->capture_default_str();
  app.add_option("--seeds", seeds, "Comma-separated generator seeds")->capture_default_str();
  app.add_option("--workers", workers, "Comma-separated worker counts")->capture_default_str();
  app.add_option("--reps", reps, "Repetitions per timing (median is reported)")
      ->capture_default_str();
  app.add_option("--format", format, "csv or md")->capture_default_str();
  app.add_flag("--check", check, "Fail rows whose residual exceeds 1e-9*n*||A||_inf");
  app.add_option("--out", out_path, "Output file (default: stdout)");
  app.add_option("--matrix", matrix_path, "Matrix Market file to use instead of the generator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ebv::bench::BenchConfig cfg;
  ebv::bench::BenchReport report;
  try {
    cfg.sizes = split_csv<std::size_t>(sizes, "size");
    cfg.kind = ebv::parse_matrix_kind(kind);
    cfg.density = density;
    cfg.seeds = split_csv<std::uint64_t>(seeds, "seed");
    cfg.workers = split_csv<std::size_t>(workers, "worker");
    cfg.repetitions = reps;
    cfg.format = ebv::bench::parse_format(format);
    cfg.check = check;
    if (!matrix_path.empty()) cfg.matrix_path = matrix_path;
    report = ebv::bench::run_bench(cfg);
  } catch (const ebv::Error& e) {
    std::cerr << "ebv-bench: " << e.what() << '\n';
    return 2;
  }

  const std::string text = ebv::bench::emit_report(report, cfg.format);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!(out << text)) {
      std::cerr << "ebv-bench: cannot write '" << out_path << "'\n";
      return 2;
    }
  }
  std::cerr << "ebv-bench: " << report.rows.size() << " rows, " << report.hardware_workers
            << " hardware workers, " << report.timestamp << '\n';
  for (const auto& row : report.rows) {
    if (row.error) {
      std::cerr << "ebv-bench: n=" << row.size << " workers=" << row.workers << ": " << *row.error
                << '\n';
    }
  }
  return report.has_errors() ? 1 : 0;
}
