#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ebv/lu.hpp"
#include "ebv/matrix.hpp"
#include "ebv/plan.hpp"

namespace ebv {

struct WorkCounters {
  std::vector<std::uint64_t> madds;  // per worker
  std::vector<std::uint64_t> divs;   // per worker
  std::uint64_t barriers = 0;
  /// Factorization only: multiply-adds of elimination step r+1, all workers.
  std::vector<std::uint64_t> step_madds;

  WorkCounters() = default;
  explicit WorkCounters(std::size_t workers) : madds(workers, 0), divs(workers, 0) {}

  std::uint64_t total_madds() const;
  std::uint64_t total_divs() const;

  WorkCounters& operator+=(const WorkCounters& other);
};

/// CSV with header "worker,madds,divs" and one line per worker.
void write_counters_csv(std::ostream& out, const WorkCounters& counters);
std::string counters_csv(const WorkCounters& counters);

struct ExecConfig {
  /// Worker count used when a plan is built from this config.
  std::size_t workers = default_workers();
  /// Defaults to PivotPolicy::for_matrix of the input.
  std::optional<PivotPolicy> pivot;
  /// Skip updates whose multiplier is exactly 0.0.
  bool zero_skip = false;

  static std::size_t default_workers();
};

struct ParFactorization {
  LUFactors factors;
  WorkCounters counters;
};

/// Step-synchronous factorization following the plan's ownership. Runs
/// min(plan.workers(), n - 1) threads; the calling thread is worker 0.
/// The packed result is bitwise identical to factorize_seq.
ParFactorization factorize_par(const DenseMatrix& a, const EbvPlan& plan, const ExecConfig& cfg);

struct ParSolve {
  Vector x;
  WorkCounters counters;  // forward + backward
  WorkCounters forward;
  WorkCounters backward;
};

/// Forward and backward substitution, one plan vector per step, each
/// vector processed by its owner. Bitwise identical to the sequential
/// substitutions.
ParSolve solve_par(const LUFactors& f, const Vector& b, const EbvPlan& plan, const ExecConfig& cfg);

struct EbvSolve {
  Vector x;
  WorkCounters factorize;
  WorkCounters solve;
};

/// Builds a plan from cfg.workers, factorizes and solves. n == 1 is solved
/// directly.
EbvSolve solve_ebv(const DenseMatrix& a, const Vector& b, const ExecConfig& cfg);

}  // namespace ebv
