#include "ebv/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <sstream>
#include <thread>
#include <tuple>

#include "ebv/lu.hpp"
#include "ebv/parallel.hpp"

namespace ebv::bench {

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double seconds(F&& f) {
  const auto start = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string six_digits(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct System {
  DenseMatrix a;
  std::string kind;
};

struct Cell {
  std::vector<double> t_seq;
  std::vector<double> t_par;
  std::vector<std::uint64_t> madds;
  double residual = 0.0;
  std::optional<std::string> error;
};

// Times both solvers on one system and folds the result into cells[w].
void measure(const System& sys, const BenchConfig& cfg, std::vector<Cell>& cells) {
  const std::size_t n = sys.a.n();
  const Vector b = sys.a.multiply(Vector(n, 1.0));
  const double bound = residual_bound(n, sys.a.norm_inf());

  std::vector<double> seq_times;
  try {
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
      seq_times.push_back(seconds([&] { (void)solve_seq(sys.a, b); }));
    }
  } catch (const std::exception& e) {
    for (Cell& c : cells) c.error = std::string("sequential: ") + e.what();
    return;
  }
  const double t_seq = median(seq_times);

  for (std::size_t wi = 0; wi < cfg.workers.size(); ++wi) {
    Cell& cell = cells[wi];
    ExecConfig exec;
    exec.workers = cfg.workers[wi];
    exec.zero_skip = sys.kind == "sparse";
    try {
      std::vector<double> par_times;
      EbvSolve result;
      for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
        par_times.push_back(seconds([&] { result = solve_ebv(sys.a, b, exec); }));
      }
      const double residual = residual_inf(sys.a, result.x, b);
      if (cfg.check && !(residual <= bound)) {
        cell.error = "residual " + shortest(residual) + " exceeds bound " + shortest(bound);
      }
      cell.t_seq.push_back(t_seq);
      cell.t_par.push_back(median(par_times));
      cell.madds.push_back(result.factorize.total_madds() + result.solve.total_madds());
      cell.residual = std::max(cell.residual, residual);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  }
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::csv;
  if (text == "md" || text == "markdown") return Format::markdown;
  throw ConfigError("unknown format '" + std::string(text) + "'");
}

std::uint64_t BenchConfig::default_memory_limit() {
  const long pages = sysconf(_SC_PHYS_PAGES);
  const long page_size = sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page_size <= 0) return std::uint64_t{8} << 30;
  return static_cast<std::uint64_t>(pages) * static_cast<std::uint64_t>(page_size) / 2;
}

void BenchConfig::validate() const {
  if (!matrix_path) {
    if (sizes.empty()) throw ConfigError("no sizes given");
    for (std::size_t n : sizes) {
      if (n < 2) throw ConfigError("sizes must be at least 2");
    }
    if (seeds.empty()) throw ConfigError("no seeds given");
  }
  if (workers.empty()) throw ConfigError("no worker counts given");
  for (std::size_t w : workers) {
    if (w < 1) throw ConfigError("worker counts must be at least 1");
  }
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (!(density > 0.0 && density <= 1.0)) throw ConfigError("density must lie in (0, 1]");
  if (kind == MatrixKind::dense && density != 1.0) {
    throw ConfigError("dense matrices require density 1");
  }
}

std::uint64_t required_bytes(std::size_t n) {
  // Upper bound on n*n buffers alive at once during a measurement.
  return std::uint64_t{5} * sizeof(double) * n * n;
}

double residual_bound(std::size_t n, double norm_a) {
  return 1e-9 * static_cast<double>(n) * norm_a;
}

bool BenchReport::has_errors() const {
  return std::any_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.error.has_value(); });
}

BenchReport run_bench(const BenchConfig& cfg) {
  cfg.validate();

  std::optional<System> loaded;
  std::vector<std::size_t> sizes = cfg.sizes;
  if (cfg.matrix_path) {
    try {
      loaded = System{to_dense(load_matrix_market_file(*cfg.matrix_path)), "file"};
    } catch (const Error& e) {
      throw ConfigError(*cfg.matrix_path + ": " + e.what());
    }
    sizes = {loaded->a.n()};
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  std::vector<std::size_t> workers = cfg.workers;
  std::sort(workers.begin(), workers.end());
  workers.erase(std::unique(workers.begin(), workers.end()), workers.end());

  for (std::size_t n : sizes) {
    if (required_bytes(n) > cfg.memory_limit_bytes) {
      throw ConfigError("size " + std::to_string(n) + " requires " +
                        std::to_string(required_bytes(n)) + " bytes, limit is " +
                        std::to_string(cfg.memory_limit_bytes));
    }
  }

  BenchConfig effective = cfg;
  effective.workers = workers;

  BenchReport report;
  report.hardware_workers = std::max(1u, std::thread::hardware_concurrency());
  report.timestamp = utc_timestamp();

  for (std::size_t n : sizes) {
    std::vector<Cell> cells(workers.size());
    if (loaded) {
      measure(*loaded, effective, cells);
    } else {
      for (std::uint64_t seed : cfg.seeds) {
        System sys{cfg.kind == MatrixKind::dense ? generate_dense(n, seed)
                                                 : to_dense(generate_sparse(n, cfg.density, seed)),
                   std::string(to_string(cfg.kind))};
        measure(sys, effective, cells);
      }
    }
    for (std::size_t wi = 0; wi < workers.size(); ++wi) {
      Cell& c = cells[wi];
      BenchRow row;
      row.size = n;
      row.kind = loaded ? "file" : std::string(to_string(cfg.kind));
      row.workers = workers[wi];
      row.error = c.error;
      if (!c.t_par.empty()) {
        row.t_seq = median(c.t_seq);
        row.t_par = median(c.t_par);
        row.speedup = row.t_seq / row.t_par;
        row.residual = c.residual;
        // Lower median keeps the count integral; seeds usually agree anyway.
        std::sort(c.madds.begin(), c.madds.end());
        row.madds = c.madds[(c.madds.size() - 1) / 2];
      } else if (!row.error) {
        row.error = "no measurement";
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string emit_report(const BenchReport& report, Format format) {
  std::vector<BenchRow> rows = report.rows;
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.size, a.workers) < std::tie(b.size, b.workers);
  });

  const auto fields = [](const BenchRow& r) {
    std::vector<std::string> f{std::to_string(r.size), r.kind, std::to_string(r.workers)};
    if (r.error) {
      f.push_back(r.t_seq > 0.0 ? six_digits(r.t_seq) : "error");
      f.insert(f.end(), {"error", "error", "error", "error"});
    } else {
      f.insert(f.end(), {six_digits(r.t_seq), six_digits(r.t_par), six_digits(r.speedup),
                         shortest(r.residual), std::to_string(r.madds)});
    }
    return f;
  };

  std::ostringstream out;
  if (format == Format::csv) {
    out << kCsvHeader << '\n';
    for (const BenchRow& r : rows) {
      const auto f = fields(r);
      for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
      out << '\n';
    }
  } else {
    out << "| size | kind | workers | t_seq_s | t_par_s | speedup | residual | madds |\n";
    out << "|---:|:---|---:|---:|---:|---:|---:|---:|\n";
    for (const BenchRow& r : rows) {
      out << '|';
      for (const auto& s : fields(r)) out << ' ' << s << " |";
      out << '\n';
    }
  }
  return out.str();
}

namespace {

template <class T>
T parse_number(std::string_view s, std::size_t line) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ParseError(line, "invalid number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<BenchRow> parse_csv(std::string_view text) {
  std::vector<BenchRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool seen_header = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != kCsvHeader) throw ParseError(line_no, "unexpected CSV header");
      seen_header = true;
      continue;
    }
    std::vector<std::string_view> f;
    for (std::size_t start = 0;;) {
      const std::size_t comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 8) throw ParseError(line_no, "expected 8 fields");
    BenchRow r;
    r.size = parse_number<std::size_t>(f[0], line_no);
    r.kind = std::string(f[1]);
    r.workers = parse_number<std::size_t>(f[2], line_no);
    if (f[4] == "error") {
      r.error = "error";
      if (f[3] != "error") r.t_seq = parse_number<double>(f[3], line_no);
    } else {
      r.t_seq = parse_number<double>(f[3], line_no);
      r.t_par = parse_number<double>(f[4], line_no);
      r.speedup = parse_number<double>(f[5], line_no);
      r.residual = parse_number<double>(f[6], line_no);
      r.madds = parse_number<std::uint64_t>(f[7], line_no);
    }
    rows.push_back(std::move(r));
  }
  if (!seen_header) throw ParseError(1, "missing CSV header");
  return rows;
}

}  // namespace ebv::bench
