#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ebv {

enum class Triangle : std::uint8_t { lower, upper };

/// One per-step vector of a triangular factor. Steps are 1-based:
/// L(k) is column k below the diagonal (rows k+1..n), U(k) is row k right
/// of the diagonal (columns k+1..n). Both have n - k entries.
struct VectorDescriptor {
  Triangle triangle = Triangle::lower;
  std::size_t k = 1;
  std::size_t length = 0;

  bool operator==(const VectorDescriptor&) const = default;
};

/// Matrix positions (0-based row, column) covered by a descriptor.
std::vector<std::pair<std::size_t, std::size_t>> positions(const VectorDescriptor& d,
                                                           std::size_t n);

/// A work unit of one or two descriptors.
struct PairedUnit {
  std::vector<VectorDescriptor> members;
  std::size_t total_length = 0;

  bool operator==(const PairedUnit&) const = default;
};

/// Paired units together with their worker assignment. Also keeps the
/// position -> owner lookups the executors need.
class EbvPlan {
 public:
  EbvPlan(std::size_t n, std::vector<PairedUnit> units, std::vector<std::size_t> owner,
          std::size_t workers);

  std::size_t n() const noexcept { return n_; }
  std::size_t workers() const noexcept { return workers_; }
  const std::vector<PairedUnit>& units() const noexcept { return units_; }
  const std::vector<std::size_t>& owner() const noexcept { return owner_; }

  /// Unit index holding L(k) / U(k), k in [1, n-1].
  std::size_t unit_of(Triangle t, std::size_t k) const;
  /// Worker owning L(k) / U(k).
  std::size_t owner_of(Triangle t, std::size_t k) const { return owner_[unit_of(t, k)]; }

  /// Owner of an off-diagonal position (0-based). The diagonal entry (j, j)
  /// is assigned to the owner of L(min(j + 1, n - 1)).
  std::size_t owner_of_position(std::size_t i, std::size_t j) const;

 private:
  std::size_t n_;
  std::size_t workers_;
  std::vector<PairedUnit> units_;
  std::vector<std::size_t> owner_;
  std::vector<std::size_t> lower_unit_;  // index k - 1
  std::vector<std::size_t> upper_unit_;
};

struct WorkSummary {
  std::vector<std::size_t> per_worker_length;
  std::vector<std::size_t> per_worker_units;
};

/// 2(n-1) descriptors: L(1..n-1) then U(1..n-1). Requires n >= 2.
std::vector<VectorDescriptor> bivectorize(std::size_t n);

/// Pairs L(k) with L(n-k) and U(k) with U(n-k) for k = 1..floor((n-1)/2).
/// For even n the two middle descriptors L(n/2), U(n/2) are merged into a
/// single cross-triangle unit. Every unit has total length n; there are
/// exactly n - 1 units, ordered L pairs, U pairs, then the merged unit.
std::vector<PairedUnit> equalize(const std::vector<VectorDescriptor>& descriptors, std::size_t n);

/// Round-robin assignment in unit order.
EbvPlan assign(std::vector<PairedUnit> units, std::size_t workers);

/// bivectorize -> equalize -> assign, with the worker count clamped to n - 1.
EbvPlan make_plan(std::size_t n, std::size_t workers);

WorkSummary plan_stats(const EbvPlan& plan);

/// One line per unit:
///   unit <id>: <T><k>[len] + <T><k>[len] -> worker <w>
void dump_plan(std::ostream& out, const EbvPlan& plan);
std::string dump_plan(const EbvPlan& plan);

}  // namespace ebv
