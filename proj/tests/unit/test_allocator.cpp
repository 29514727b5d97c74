#include <doctest.h>

#include "../support/fixtures.hpp"
#include "bikefleet/allocator.hpp"
#include "bikefleet/error.hpp"

using namespace bikefleet;
using fixtures::kDay;

namespace {

std::vector<DemandProfile> profiles_for(PlaceId place, const std::vector<std::int64_t>& values) {
  std::vector<DemandProfile> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    DemandProfile p;
    p.day = kDay.plus_days(static_cast<std::int32_t>(i));
    if (values[i] > 0) p.demand[place] = values[i];
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("rolling maximum over the window") {
  const auto h = profiles_for(9, {3, 5, 4, 4, 2, 6, 5});
  const AllocationPlan plan = rolling_max_allocation(h, 7, kDay.plus_days(7));
  CHECK(plan.at(9) == 6);
  CHECK(plan.window_u == 7);
  CHECK(plan.source_days.size() == 7);
  CHECK(plan.source_days.front() == kDay);
  CHECK(plan.total() == 6);
}

TEST_CASE("u = 1 repeats the previous day exactly") {
  auto h = profiles_for(9, {4, 2});
  h[1].demand[3] = 7;
  const AllocationPlan plan = rolling_max_allocation(h, 1, kDay.plus_days(2));
  CHECK(plan.allocation == PlaceCountMap(h[1].demand.begin(), h[1].demand.end()));
}

TEST_CASE("a place seen on one day only keeps its demand") {
  const auto h = profiles_for(2, {0, 0, 2, 0});
  CHECK(rolling_max_allocation(h, 4, kDay.plus_days(4)).at(2) == 2);
}

TEST_CASE("missing history days are named") {
  auto h = profiles_for(1, {1, 1, 1, 1});
  h.erase(h.begin() + 1);
  try {
    rolling_max_allocation(h, 4, kDay.plus_days(4));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(kDay.plus_days(1).to_string()) != std::string::npos);
  }
  CHECK_THROWS_AS(rolling_max_allocation(h, 0, kDay), Error);
}

TEST_CASE("allocation is monotone in the window and covers every source day") {
  Rng rng(41);
  for (int round = 0; round < 50; ++round) {
    std::vector<DemandProfile> h(10);
    for (std::size_t d = 0; d < h.size(); ++d) {
      h[d].day = kDay.plus_days(static_cast<std::int32_t>(d));
      for (int p = 0; p < 8; ++p) {
        if (rng.below(3)) h[d].demand[p] = static_cast<std::int64_t>(rng.below(9));
      }
    }
    const CivilDate target = kDay.plus_days(10);
    for (std::size_t u = 1; u < 10; ++u) {
      const AllocationPlan small = rolling_max_allocation(h, u, target);
      const AllocationPlan big = rolling_max_allocation(h, u + 1, target);
      for (const auto& [p, v] : small.allocation) CHECK(big.at(p) >= v);
      for (const CivilDate& d : small.source_days) {
        for (const auto& [p, v] : h[d.days_since_epoch() - kDay.days_since_epoch()].demand) CHECK(small.at(p) >= v);
      }
    }
  }
}

TEST_CASE("final distribution applies flows and conserves bikes") {
  AllocationPlan plan;
  plan.for_day = kDay;
  plan.allocation = {{1, 3}, {2, 0}};
  CHECK(compute_final_distribution(plan, {}).at_end == plan.allocation);
  const PlaceCounts f = compute_final_distribution(plan, PlaceFlows{{{2, 1}}, {{1, 1}}});
  CHECK(f.at_end.at(1) == 2);
  CHECK(f.at_end.at(2) == 1);
  CHECK(f.total() == plan.total());
  CHECK_THROWS_AS(compute_final_distribution(plan, PlaceFlows{{}, {{2, 1}}}), Error);
}

TEST_CASE("rebalancing move-ins") {
  PlaceCounts final_today{kDay, {{1, 2}, {2, 0}}};
  AllocationPlan plan;
  plan.for_day = kDay.plus_days(1);
  plan.allocation = {{1, 1}, {2, 3}};
  const RebalancingPlan rb = compute_rebalancing(final_today, plan);
  CHECK(rb.move_in.at(1) == 0);
  CHECK(rb.move_in.at(2) == 3);
  CHECK(rb.total_moves == 3);

  plan.allocation = {{1, 2}};
  CHECK(compute_rebalancing(final_today, plan).total_moves == 0);
}

TEST_CASE("rebalancing feasibility on random instances") {
  Rng rng(42);
  for (int round = 0; round < 500; ++round) {
    PlaceCounts f{kDay, {}};
    AllocationPlan plan;
    for (int p = 0; p < 12; ++p) {
      if (rng.below(4)) f.at_end[p] = static_cast<std::int64_t>(rng.below(10));
      if (rng.below(4)) plan.allocation[p] = static_cast<std::int64_t>(rng.below(10));
    }
    const RebalancingPlan rb = compute_rebalancing(f, plan);
    std::int64_t sum = 0;
    for (const auto& [p, want] : plan.allocation) {
      const std::int64_t have = f.at_end.count(p) ? f.at_end.at(p) : 0;
      CHECK(rb.move_in.at(p) >= 0);
      CHECK(want <= have + rb.move_in.at(p));
      sum += std::max<std::int64_t>(0, want - have);
    }
    CHECK(rb.total_moves == sum);
  }
}
