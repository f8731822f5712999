#include "ebv/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "ebv/error.hpp"

namespace ebv {

std::uint64_t WorkCounters::total_madds() const {
  return std::accumulate(madds.begin(), madds.end(), std::uint64_t{0});
}

std::uint64_t WorkCounters::total_divs() const {
  return std::accumulate(divs.begin(), divs.end(), std::uint64_t{0});
}

WorkCounters& WorkCounters::operator+=(const WorkCounters& other) {
  if (madds.size() < other.madds.size()) {
    madds.resize(other.madds.size(), 0);
    divs.resize(other.divs.size(), 0);
  }
  for (std::size_t w = 0; w < other.madds.size(); ++w) {
    madds[w] += other.madds[w];
    divs[w] += other.divs[w];
  }
  barriers += other.barriers;
  if (step_madds.size() < other.step_madds.size()) step_madds.resize(other.step_madds.size(), 0);
  for (std::size_t r = 0; r < other.step_madds.size(); ++r) step_madds[r] += other.step_madds[r];
  return *this;
}

void write_counters_csv(std::ostream& out, const WorkCounters& counters) {
  out << "worker,madds,divs\n";
  for (std::size_t w = 0; w < counters.madds.size(); ++w) {
    out << w << ',' << counters.madds[w] << ',' << counters.divs[w] << '\n';
  }
}

std::string counters_csv(const WorkCounters& counters) {
  std::ostringstream out;
  write_counters_csv(out, counters);
  return out.str();
}

std::size_t ExecConfig::default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Highest owner id in use, plus one. Workers past it own nothing.
std::size_t active_threads(const EbvPlan& plan) {
  return *std::max_element(plan.owner().begin(), plan.owner().end()) + 1;
}

// Runs body(w) on `threads` workers; worker 0 is the calling thread.
template <class Body>
void run_workers(std::size_t threads, Body&& body) {
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (std::size_t w = 1; w < threads; ++w) pool.emplace_back([&body, w] { body(w); });
  body(0);
}

// Per-worker slices of the plan, 0-based matrix indices, ascending.
struct Ownership {
  std::vector<std::size_t> lower_cols;  // strict-lower column j (L(j+1))
  std::vector<std::size_t> upper_rows;  // strict-upper row i (U(i+1))
  std::vector<std::size_t> diagonal;    // diagonal entries (i, i)
};

std::vector<Ownership> split_ownership(const EbvPlan& plan, std::size_t threads) {
  const std::size_t n = plan.n();
  std::vector<Ownership> own(threads);
  for (std::size_t k = 1; k < n; ++k) {
    own[plan.owner_of(Triangle::lower, k)].lower_cols.push_back(k - 1);
    own[plan.owner_of(Triangle::upper, k)].upper_rows.push_back(k - 1);
  }
  for (std::size_t i = 0; i < n; ++i) own[plan.owner_of_position(i, i)].diagonal.push_back(i);
  return own;
}

// y[k] -= x[k] * a. Callers pass disjoint ranges.
inline void subtract_scaled(double* __restrict y, const double* __restrict x, double a,
                            std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) y[k] -= x[k] * a;
}

// y[k] -= a * x[k]
inline void subtract_scaled_left(double* __restrict y, const double* __restrict x, double a,
                                 std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) y[k] -= a * x[k];
}

// One worker owns the whole trailing block, so phase 2 is a single
// row-major sweep over the same per-entry updates.
ParFactorization factorize_single(const DenseMatrix& a, const PivotPolicy& policy,
                                  std::size_t workers, bool zero_skip) {
  const std::size_t n = a.n();
  std::vector<double> m(a.values().begin(), a.values().end());
  WorkCounters counters(workers);
  counters.step_madds.assign(n - 1, 0);
  std::uint64_t madds = 0;
  std::uint64_t divs = 0;
  for (std::size_t r = 0; r + 1 < n; ++r) {
    const double* row_r = &m[r * n];
    const double p = row_r[r];
    ++counters.barriers;
    if (!(std::abs(p) > policy.threshold)) throw SingularPivotError(r + 1, p);
    for (std::size_t i = r + 1; i < n; ++i) m[i * n + r] = m[i * n + r] / p;
    divs += n - r - 1;
    const std::uint64_t before = madds;
    for (std::size_t i = r + 1; i < n; ++i) {
      const double l = m[i * n + r];
      if (zero_skip && l == 0.0) continue;
      subtract_scaled_left(&m[i * n + r + 1], row_r + r + 1, l, n - r - 1);
      madds += n - r - 1;
    }
    counters.step_madds[r] = madds - before;
    ++counters.barriers;
  }
  const double last = m[n * n - 1];
  if (!(std::abs(last) > policy.threshold)) throw SingularPivotError(n, last);
  counters.madds[0] = madds;
  counters.divs[0] = divs;
  return {LUFactors(n, std::move(m)), std::move(counters)};
}

// First element of a sorted list greater than `r`.
auto after(const std::vector<std::size_t>& sorted, std::size_t r) {
  return std::upper_bound(sorted.begin(), sorted.end(), r);
}

}  // namespace

ParFactorization factorize_par(const DenseMatrix& a, const EbvPlan& plan, const ExecConfig& cfg) {
  const std::size_t n = a.n();
  if (plan.n() != n) {
    throw ParameterError("plan dimension " + std::to_string(plan.n()) +
                         " does not match matrix dimension " + std::to_string(n));
  }
  const PivotPolicy policy = cfg.pivot.value_or(PivotPolicy::for_matrix(a));
  if (policy.threshold < 0.0 || std::isnan(policy.threshold)) {
    throw ParameterError("pivot threshold must be nonnegative");
  }
  const std::size_t threads = active_threads(plan);
  if (threads == 1) return factorize_single(a, policy, plan.workers(), cfg.zero_skip);

  // Strict lower triangle packed by column, diagonal and upper packed by
  // row, so that an owned L column and an owned U row are both contiguous.
  // col(j)[i] is l_ij for i > j; row(i)[j] is u_ij for j >= i.
  // One leading pad slot keeps col(0, 0) inside the buffer.
  std::vector<double> store(n * n + 1);
  const std::size_t lower_size = n * (n - 1) / 2 + 1;
  std::vector<std::size_t> col_base(n), row_base(n);
  for (std::size_t k = 0; k < n; ++k) {
    col_base[k] = k * n - k * (k + 1) / 2 - k;
    row_base[k] = lower_size + k * n - k * (k - 1) / 2 - k;
  }
  double* const base = store.data();
  const auto col = [&](std::size_t j, std::size_t i) { return base + (col_base[j] + i); };
  const auto row = [&](std::size_t i, std::size_t j) { return base + (row_base[i] + j); };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) *col(j, i) = a(i, j);
    const double* a_row = a.values().data() + i * n;
    std::copy(a_row + i, a_row + n, row(i, i));
  }

  const std::vector<Ownership> own = split_ownership(plan, threads);
  WorkCounters counters(plan.workers());

  std::barrier sync(static_cast<std::ptrdiff_t>(threads));
  std::atomic<bool> failed{false};
  std::size_t failed_step = 0;
  double failed_pivot = 0.0;
  std::vector<std::size_t> active;  // rows with a nonzero multiplier (zero_skip)
  active.reserve(n);
  std::uint64_t barriers = 0;
  std::vector<std::vector<std::uint64_t>> step_madds(threads, std::vector<std::uint64_t>(n - 1, 0));

  run_workers(threads, [&](std::size_t w) {
    const Ownership& mine = own[w];
    std::uint64_t madds = 0;
    std::uint64_t divs = 0;

    for (std::size_t r = 0; r + 1 < n; ++r) {
      double* const col_r = col(r, 0);
      const double* const row_r = row(r, 0);

      // Phase 1: the owner of L(r+1) turns column r into multipliers.
      if (plan.owner_of(Triangle::lower, r + 1) == w) {
        const double p = row_r[r];
        if (!(std::abs(p) > policy.threshold)) {
          failed_step = r + 1;
          failed_pivot = p;
          failed.store(true, std::memory_order_relaxed);
        } else {
          for (std::size_t i = r + 1; i < n; ++i) col_r[i] = col_r[i] / p;
          if (cfg.zero_skip) {
            active.clear();
            for (std::size_t i = r + 1; i < n; ++i)
              if (col_r[i] != 0.0) active.push_back(i);
          }
          divs += n - r - 1;
        }
      }
      sync.arrive_and_wait();
      if (w == 0) ++barriers;
      if (failed.load(std::memory_order_relaxed)) break;

      // Phase 2: rank-1 update of the trailing block, owned entries only.
      const std::uint64_t before = madds;
      if (cfg.zero_skip) {
        for (auto it = after(mine.lower_cols, r); it != mine.lower_cols.end(); ++it) {
          const std::size_t j = *it;
          double* col_j = col(j, 0);
          const double u = row_r[j];
          for (auto a_it = after(active, j); a_it != active.end(); ++a_it) {
            col_j[*a_it] -= col_r[*a_it] * u;
            ++madds;
          }
        }
        for (auto it = after(mine.upper_rows, r); it != mine.upper_rows.end(); ++it) {
          const std::size_t i = *it;
          const double l = col_r[i];
          if (l == 0.0) continue;
          subtract_scaled_left(row(i, i + 1), row_r + i + 1, l, n - i - 1);
          madds += n - i - 1;
        }
        for (auto it = after(mine.diagonal, r); it != mine.diagonal.end(); ++it) {
          const double l = col_r[*it];
          if (l == 0.0) continue;
          *row(*it, *it) -= l * row_r[*it];
          ++madds;
        }
      } else {
        for (auto it = after(mine.lower_cols, r); it != mine.lower_cols.end(); ++it) {
          const std::size_t j = *it;
          subtract_scaled(col(j, j + 1), col_r + j + 1, row_r[j], n - j - 1);
          madds += n - j - 1;
        }
        for (auto it = after(mine.upper_rows, r); it != mine.upper_rows.end(); ++it) {
          const std::size_t i = *it;
          subtract_scaled_left(row(i, i + 1), row_r + i + 1, col_r[i], n - i - 1);
          madds += n - i - 1;
        }
        for (auto it = after(mine.diagonal, r); it != mine.diagonal.end(); ++it) {
          *row(*it, *it) -= col_r[*it] * row_r[*it];
          ++madds;
        }
      }
      step_madds[w][r] = madds - before;
      sync.arrive_and_wait();
      if (w == 0) ++barriers;
    }
    counters.madds[w] = madds;
    counters.divs[w] = divs;
  });

  counters.barriers = barriers;
  counters.step_madds.assign(n - 1, 0);
  for (const auto& per_worker : step_madds)
    for (std::size_t r = 0; r + 1 < n; ++r) counters.step_madds[r] += per_worker[r];
  if (failed.load()) throw SingularPivotError(failed_step, failed_pivot);
  const double last = *row(n - 1, n - 1);
  if (!(std::abs(last) > policy.threshold)) throw SingularPivotError(n, last);

  std::vector<double> packed(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) packed[i * n + j] = *col(j, i);
    std::copy(row(i, i), row(i, i) + (n - i), &packed[i * n + i]);
  }
  return {LUFactors(n, std::move(packed)), std::move(counters)};
}

ParSolve solve_par(const LUFactors& f, const Vector& b, const EbvPlan& plan, const ExecConfig& cfg) {
  const std::size_t n = f.n();
  if (b.size() != n) throw ParameterError("dimension mismatch in solve");
  if (plan.n() != n) throw ParameterError("plan dimension does not match factors");
  for (std::size_t k = 0; k < n; ++k) {
    if (f.pivot(k) == 0.0) throw SingularPivotError(k + 1, 0.0);
  }

  const std::size_t threads = active_threads(plan);
  std::vector<double> y(b.values().begin(), b.values().end());
  std::vector<double> x(n, 0.0);
  WorkCounters forward(plan.workers());
  WorkCounters backward(plan.workers());
  std::barrier sync(static_cast<std::ptrdiff_t>(threads));
  const bool skip = cfg.zero_skip;

  run_workers(threads, [&](std::size_t w) {
    std::uint64_t fwd_madds = 0;
    std::uint64_t bwd_madds = 0;
    std::uint64_t bwd_divs = 0;

    // Forward: once y_k is final, the owner of L(k+1) applies column k.
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (plan.owner_of(Triangle::lower, k + 1) == w) {
        const double yk = y[k];
        for (std::size_t i = k + 1; i < n; ++i) {
          const double l = f.lower(i, k);
          if (skip && l == 0.0) continue;
          y[i] -= l * yk;
          ++fwd_madds;
        }
      }
      sync.arrive_and_wait();
    }

    // Backward: the owner of U(k+1) reduces row k; x_{n-1} goes to U(n-1)'s owner.
    for (std::size_t k = n; k-- > 0;) {
      if (plan.owner_of(Triangle::upper, std::min(k + 1, n - 1)) == w) {
        double s = y[k];
        for (std::size_t j = k + 1; j < n; ++j) {
          const double u = f.upper(k, j);
          if (skip && u == 0.0) continue;
          s -= u * x[j];
          ++bwd_madds;
        }
        x[k] = s / f.pivot(k);
        ++bwd_divs;
      }
      sync.arrive_and_wait();
    }
    forward.madds[w] = fwd_madds;
    backward.madds[w] = bwd_madds;
    backward.divs[w] = bwd_divs;
  });

  forward.barriers = n - 1;
  backward.barriers = n;
  WorkCounters total = forward;
  total += backward;
  return {Vector(std::move(x)), std::move(total), std::move(forward), std::move(backward)};
}

EbvSolve solve_ebv(const DenseMatrix& a, const Vector& b, const ExecConfig& cfg) {
  if (b.size() != a.n()) throw ParameterError("dimension mismatch in solve");
  if (cfg.workers < 1) throw ParameterError("worker count must be at least 1");
  if (a.n() == 1) {
    const PivotPolicy policy = cfg.pivot.value_or(PivotPolicy::for_matrix(a));
    const LUFactors f = factorize_seq(a, policy);
    WorkCounters solve_counts(1);
    solve_counts.divs[0] = 1;
    return {backward_substitute(f, b), WorkCounters(1), std::move(solve_counts)};
  }
  const EbvPlan plan = make_plan(a.n(), cfg.workers);
  ParFactorization fac = factorize_par(a, plan, cfg);
  ParSolve sol = solve_par(fac.factors, b, plan, cfg);
  return {std::move(sol.x), std::move(fac.counters), std::move(sol.counters)};
}

}  // namespace ebv
