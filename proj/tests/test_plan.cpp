#include <algorithm>
#include <set>

#include "doctest.h"
#include "ebv/error.hpp"
#include "ebv/plan.hpp"
#include "oracles.hpp"

using namespace ebv;

namespace {

std::vector<std::size_t> lengths(const std::vector<VectorDescriptor>& ds, Triangle t) {
  std::vector<std::size_t> out;
  for (const auto& d : ds)
    if (d.triangle == t) out.push_back(d.length);
  return out;
}

VectorDescriptor L(std::size_t k, std::size_t n) { return {Triangle::lower, k, n - k}; }
VectorDescriptor U(std::size_t k, std::size_t n) { return {Triangle::upper, k, n - k}; }

}  // namespace

TEST_CASE("bivectorize") {
  const auto two = bivectorize(2);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == L(1, 2));
  CHECK(two[1] == U(1, 2));

  const auto five = bivectorize(5);
  CHECK(five.size() == 8);
  CHECK(lengths(five, Triangle::lower) == std::vector<std::size_t>{4, 3, 2, 1});
  CHECK(lengths(five, Triangle::upper) == std::vector<std::size_t>{4, 3, 2, 1});

  for (std::size_t n = 2; n <= 40; ++n) {
    std::size_t total = 0;
    for (const auto& d : bivectorize(n)) total += d.length;
    CHECK(total == oracle::count_offdiagonal(n));
  }
  CHECK_THROWS_AS(bivectorize(1), ParameterError);
  CHECK_THROWS_AS(bivectorize(0), ParameterError);
}

TEST_CASE("equalize: n = 5 pairs (1,4),(2,3) in each triangle") {
  const auto units = equalize(bivectorize(5), 5);
  REQUIRE(units.size() == 4);
  CHECK(units[0].members == std::vector{L(1, 5), L(4, 5)});
  CHECK(units[1].members == std::vector{L(2, 5), L(3, 5)});
  CHECK(units[2].members == std::vector{U(1, 5), U(4, 5)});
  CHECK(units[3].members == std::vector{U(2, 5), U(3, 5)});
  for (const auto& u : units) CHECK(u.total_length == 5);
}

TEST_CASE("equalize: n = 4 merges the middle descriptors") {
  const auto units = equalize(bivectorize(4), 4);
  REQUIRE(units.size() == 3);
  CHECK(units[0].members == std::vector{L(1, 4), L(3, 4)});
  CHECK(units[1].members == std::vector{U(1, 4), U(3, 4)});
  CHECK(units[2].members == std::vector{L(2, 4), U(2, 4)});
  for (const auto& u : units) CHECK(u.total_length == 4);
}

TEST_CASE("equalize: n = 2 is a single merged unit") {
  const auto units = equalize(bivectorize(2), 2);
  REQUIRE(units.size() == 1);
  CHECK(units[0].members == std::vector{L(1, 2), U(1, 2)});
  CHECK(units[0].total_length == 2);
}

TEST_CASE("equalize: inconsistent descriptors are rejected") {
  CHECK_THROWS_AS(equalize(bivectorize(5), 6), ParameterError);
  auto ds = bivectorize(5);
  ds.pop_back();
  CHECK_THROWS_AS(equalize(ds, 5), ParameterError);
  ds = bivectorize(5);
  std::swap(ds[0], ds[1]);
  CHECK_THROWS_AS(equalize(ds, 5), ParameterError);
}

TEST_CASE("equal lengths and n-1 units for n in [2, 512]") {
  for (std::size_t n = 2; n <= 512; ++n) {
    const auto units = equalize(bivectorize(n), n);
    CHECK(units.size() == n - 1);
    CHECK(std::all_of(units.begin(), units.end(),
                      [n](const PairedUnit& u) { return u.total_length == n; }));
  }
}

TEST_CASE("naive split is unbalanced by n-1, equalized split by exactly 1") {
  for (std::size_t n : {3u, 10u, 64u, 257u}) {
    const auto ds = bivectorize(n);
    const auto [lo, hi] = std::minmax_element(
        ds.begin(), ds.end(), [](const auto& a, const auto& b) { return a.length < b.length; });
    CHECK(hi->length / lo->length == n - 1);
    const auto units = equalize(ds, n);
    const auto [ulo, uhi] = std::minmax_element(
        units.begin(), units.end(),
        [](const auto& a, const auto& b) { return a.total_length < b.total_length; });
    CHECK(uhi->total_length == ulo->total_length);
  }
}

TEST_CASE("disjoint cover of both strict triangles, exhaustive for n <= 64") {
  for (std::size_t n = 2; n <= 64; ++n) {
    std::vector<int> hits(n * n, 0);
    for (const auto& u : equalize(bivectorize(n), n))
      for (const auto& d : u.members)
        for (auto [i, j] : positions(d, n)) {
          CHECK(((d.triangle == Triangle::lower) ? i > j : i < j));
          ++hits[i * n + j];
        }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(hits[i * n + j] == (i == j ? 0 : 1));
  }
}

TEST_CASE("assign: round-robin") {
  const auto plan2 = assign(equalize(bivectorize(5), 5), 2);
  CHECK(plan2.owner() == std::vector<std::size_t>{0, 1, 0, 1});
  const auto plan1 = assign(equalize(bivectorize(5), 5), 1);
  CHECK(plan1.owner() == std::vector<std::size_t>{0, 0, 0, 0});

  const auto s9 = plan_stats(assign(equalize(bivectorize(9), 9), 3));
  CHECK(s9.per_worker_units == std::vector<std::size_t>{3, 3, 2});
  CHECK(s9.per_worker_length == std::vector<std::size_t>{27, 27, 18});

  CHECK_THROWS_AS(assign(equalize(bivectorize(5), 5), 0), ParameterError);
}

TEST_CASE("plan_stats examples") {
  CHECK(plan_stats(assign(equalize(bivectorize(5), 5), 4)).per_worker_length ==
        std::vector<std::size_t>{5, 5, 5, 5});
  CHECK(plan_stats(assign(equalize(bivectorize(5), 5), 2)).per_worker_length ==
        std::vector<std::size_t>{10, 10});
  CHECK(plan_stats(assign(equalize(bivectorize(4), 4), 2)).per_worker_length ==
        std::vector<std::size_t>{8, 4});
}

TEST_CASE("assignment balance for every W <= n-1") {
  for (std::size_t n = 2; n <= 130; ++n) {
    for (std::size_t w = 1; w < n; ++w) {
      const auto s = plan_stats(assign(equalize(bivectorize(n), n), w));
      const auto [lo, hi] = std::minmax_element(s.per_worker_length.begin(), s.per_worker_length.end());
      CHECK(*hi - *lo <= n);
      const auto [ulo, uhi] = std::minmax_element(s.per_worker_units.begin(), s.per_worker_units.end());
      CHECK(*ulo == (n - 1) / w);
      CHECK(*uhi == (n - 1 + w - 1) / w);
    }
  }
}

TEST_CASE("make_plan clamps workers to n-1") {
  const auto p = make_plan(3, 8);
  CHECK(p.workers() == 2);
  CHECK(p.units().size() == 2);
}

TEST_CASE("owner lookups agree with the unit expansion") {
  const std::size_t n = 11;
  const auto plan = assign(equalize(bivectorize(n), n), 3);
  for (std::size_t u = 0; u < plan.units().size(); ++u)
    for (const auto& d : plan.units()[u].members) {
      CHECK(plan.unit_of(d.triangle, d.k) == u);
      for (auto [i, j] : positions(d, n)) CHECK(plan.owner_of_position(i, j) == plan.owner()[u]);
    }
  CHECK(plan.owner_of_position(n - 1, n - 1) == plan.owner_of(Triangle::lower, n - 1));
  CHECK(plan.owner_of_position(0, 0) == plan.owner_of(Triangle::lower, 1));
}

TEST_CASE("EbvPlan rejects inconsistent construction") {
  auto units = equalize(bivectorize(4), 4);
  CHECK_THROWS_AS(EbvPlan(4, units, {0, 0}, 1), ParameterError);
  CHECK_THROWS_AS(EbvPlan(4, units, {0, 0, 2}, 2), ParameterError);
  units.pop_back();
  CHECK_THROWS_AS(EbvPlan(4, units, {0, 0}, 1), ParameterError);
}

TEST_CASE("dump_plan format") {
  CHECK(dump_plan(assign(equalize(bivectorize(4), 4), 2)) ==
        "unit 0: L1[3] + L3[1] -> worker 0\n"
        "unit 1: U1[3] + U3[1] -> worker 1\n"
        "unit 2: L2[2] + U2[2] -> worker 0\n");
}
