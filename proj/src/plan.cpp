#include "ebv/plan.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>

#include "ebv/error.hpp"

namespace ebv {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

char triangle_letter(Triangle t) { return t == Triangle::lower ? 'L' : 'U'; }

PairedUnit make_unit(std::initializer_list<VectorDescriptor> members) {
  PairedUnit u{members, 0};
  for (const auto& d : u.members) u.total_length += d.length;
  return u;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> positions(const VectorDescriptor& d,
                                                           std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(d.length);
  const std::size_t k0 = d.k - 1;
  for (std::size_t t = d.k; t < n; ++t) {
    out.emplace_back(d.triangle == Triangle::lower ? std::pair{t, k0} : std::pair{k0, t});
  }
  return out;
}

std::vector<VectorDescriptor> bivectorize(std::size_t n) {
  if (n < 2) throw ParameterError("bivectorize requires n >= 2");
  std::vector<VectorDescriptor> out;
  out.reserve(2 * (n - 1));
  for (Triangle t : {Triangle::lower, Triangle::upper}) {
    for (std::size_t k = 1; k < n; ++k) out.push_back({t, k, n - k});
  }
  return out;
}

std::vector<PairedUnit> equalize(const std::vector<VectorDescriptor>& descriptors, std::size_t n) {
  if (n < 2 || descriptors != bivectorize(n)) {
    throw ParameterError("descriptor list does not match bivectorize(" + std::to_string(n) + ")");
  }
  const auto at = [&](Triangle t, std::size_t k) -> const VectorDescriptor& {
    return descriptors[(t == Triangle::lower ? 0 : n - 1) + (k - 1)];
  };

  std::vector<PairedUnit> units;
  units.reserve(n - 1);
  for (Triangle t : {Triangle::lower, Triangle::upper}) {
    for (std::size_t k = 1; k <= (n - 1) / 2; ++k) {
      units.push_back(make_unit({at(t, k), at(t, n - k)}));
    }
  }
  if (n % 2 == 0) {
    units.push_back(make_unit({at(Triangle::lower, n / 2), at(Triangle::upper, n / 2)}));
  }
  return units;
}

EbvPlan::EbvPlan(std::size_t n, std::vector<PairedUnit> units, std::vector<std::size_t> owner,
                 std::size_t workers)
    : n_(n),
      workers_(workers),
      units_(std::move(units)),
      owner_(std::move(owner)),
      lower_unit_(n > 0 ? n - 1 : 0, kUnassigned),
      upper_unit_(n > 0 ? n - 1 : 0, kUnassigned) {
  if (n_ < 2) throw ParameterError("plan requires n >= 2");
  if (workers_ < 1) throw ParameterError("plan requires at least one worker");
  if (owner_.size() != units_.size()) throw ParameterError("one owner per unit required");
  for (std::size_t u = 0; u < units_.size(); ++u) {
    if (owner_[u] >= workers_) throw ParameterError("owner out of range");
    std::size_t total = 0;
    for (const auto& d : units_[u].members) {
      if (d.k < 1 || d.k >= n_ || d.length != n_ - d.k) {
        throw ParameterError("descriptor inconsistent with n");
      }
      auto& slot = (d.triangle == Triangle::lower ? lower_unit_ : upper_unit_)[d.k - 1];
      if (slot != kUnassigned) throw ParameterError("descriptor appears in two units");
      slot = u;
      total += d.length;
    }
    if (total != units_[u].total_length) throw ParameterError("unit length mismatch");
  }
  for (std::size_t k = 0; k + 1 < n_; ++k) {
    if (lower_unit_[k] == kUnassigned || upper_unit_[k] == kUnassigned) {
      throw ParameterError("plan does not cover every descriptor");
    }
  }
}

std::size_t EbvPlan::unit_of(Triangle t, std::size_t k) const {
  return (t == Triangle::lower ? lower_unit_ : upper_unit_).at(k - 1);
}

std::size_t EbvPlan::owner_of_position(std::size_t i, std::size_t j) const {
  if (i > j) return owner_of(Triangle::lower, j + 1);
  if (i < j) return owner_of(Triangle::upper, i + 1);
  return owner_of(Triangle::lower, std::min(j + 1, n_ - 1));
}

EbvPlan assign(std::vector<PairedUnit> units, std::size_t workers) {
  if (workers < 1) throw ParameterError("worker count must be at least 1");
  if (units.empty()) throw ParameterError("no units to assign");
  std::vector<std::size_t> owner(units.size());
  for (std::size_t u = 0; u < units.size(); ++u) owner[u] = u % workers;
  const std::size_t n = units.size() + 1;
  return EbvPlan(n, std::move(units), std::move(owner), workers);
}

EbvPlan make_plan(std::size_t n, std::size_t workers) {
  if (workers < 1) throw ParameterError("worker count must be at least 1");
  return assign(equalize(bivectorize(n), n), std::min(workers, n - 1));
}

WorkSummary plan_stats(const EbvPlan& plan) {
  WorkSummary s{std::vector<std::size_t>(plan.workers(), 0),
                std::vector<std::size_t>(plan.workers(), 0)};
  for (std::size_t u = 0; u < plan.units().size(); ++u) {
    s.per_worker_length[plan.owner()[u]] += plan.units()[u].total_length;
    ++s.per_worker_units[plan.owner()[u]];
  }
  return s;
}

void dump_plan(std::ostream& out, const EbvPlan& plan) {
  for (std::size_t u = 0; u < plan.units().size(); ++u) {
    out << "unit " << u << ":";
    const auto& members = plan.units()[u].members;
    for (std::size_t m = 0; m < members.size(); ++m) {
      out << (m == 0 ? " " : " + ") << triangle_letter(members[m].triangle) << members[m].k
          << '[' << members[m].length << ']';
    }
    out << " -> worker " << plan.owner()[u] << '\n';
  }
}

std::string dump_plan(const EbvPlan& plan) {
  std::ostringstream out;
  dump_plan(out, plan);
  return out.str();
}

}  // namespace ebv
