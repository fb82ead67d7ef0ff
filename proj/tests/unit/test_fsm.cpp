#include <doctest.h>

#include "fleetmix/fsm.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace fleetmix;
using testing::make_day;
using testing::make_request;
using testing::make_type;

namespace {

HeuristicBudget quick_budget(int iterations = 1000) {
  HeuristicBudget b;
  b.max_lns_iterations = iterations;
  b.max_seconds = 2.0;
  return b;
}

}  // namespace

TEST_SUITE("fsm") {
  TEST_CASE("one request, one compatible type") {
    auto day = make_day(0, {make_request(0, 3, 4, {1}, {0, 1000}, 0, {1})});
    std::vector<VehicleType> types{make_type(0, 0, {10}), make_type(1, 0, {10}, 2.0)};
    auto p = PricedFleetProblem::unpriced(day, types);
    auto h = solve_heuristic(p, quick_budget(), 1);
    auto e = solve_exact(p);
    REQUIRE(h);
    REQUIRE(e);
    CHECK(h->fleet == FleetVector(std::vector<int>{0, 1}));
    CHECK(h->routing_cost == doctest::Approx(20.0));
    CHECK(e->routing_cost == doctest::Approx(20.0));
    CHECK(check_option(*h, p).empty());
  }

  TEST_CASE("pinned bounds force the fleet") {
    auto inst = testing::tiny_instance(4, 1, 6, 6, 2);
    auto p = PricedFleetProblem::unpriced(inst.days[0], inst.vehicle_types);
    p.lower = {2, 1};
    p.upper = {2, 1};
    auto e = solve_exact(p);
    auto h = solve_heuristic(p, quick_budget(), 3);
    if (e) {
      CHECK(e->fleet == FleetVector(std::vector<int>{2, 1}));
      REQUIRE(h);
      CHECK(h->fleet == FleetVector(std::vector<int>{2, 1}));
      CHECK(check_option(*h, p).empty());
    }
  }

  TEST_CASE("heuristic is never below and usually equal to the exact optimum") {
    auto inst = testing::tiny_instance(21, 1, 6, 6, 2);
    auto p = PricedFleetProblem::priced(inst.days[0], inst.vehicle_types, {10.0, 3.0});
    auto e = solve_exact(p);
    REQUIRE(e);
    auto usage = oracle::usage_costs(inst.days[0], inst.vehicle_types);
    auto ref = oracle::fsm(usage, {10.0, 3.0});
    REQUIRE(ref);
    CHECK(e->priced_cost == doctest::Approx(ref->second).epsilon(1e-9));
    CHECK(e->fleet == ref->first);
    int equal = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      auto h = solve_heuristic(p, quick_budget(300), seed);
      REQUIRE(h);
      CHECK(h->priced_cost >= e->priced_cost - 1e-6);
      if (h->priced_cost <= e->priced_cost + 1e-6) ++equal;
    }
    CHECK(equal >= 90);
  }

  TEST_CASE("exact solver against the reverse-order enumerator") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto inst = testing::tiny_instance(seed, 1, 5, 5, 2);
      auto usage = oracle::usage_costs(inst.days[0], inst.vehicle_types);
      for (std::vector<double> prices : {std::vector<double>{0, 0}, {5, 1}, {1, 30}, {1e9, 1e9}}) {
        auto e = solve_exact(PricedFleetProblem::priced(inst.days[0], inst.vehicle_types, prices));
        auto ref = oracle::fsm(usage, prices);
        REQUIRE(e.has_value() == ref.has_value());
        if (!e) continue;
        CHECK(e->priced_cost == doctest::Approx(ref->second).epsilon(1e-9));
        CHECK(e->fleet == ref->first);
      }
    }
  }

  TEST_CASE("zero prices give the cheapest routing, huge prices the smallest fleet") {
    auto inst = testing::tiny_instance(8, 1, 5, 5, 2);
    ExactFsmSolver solver(inst.days[0], inst.vehicle_types);
    auto all = solver.all_options();
    REQUIRE_FALSE(all.empty());
    double min_r = 1e300;
    int min_n = 1000;
    for (const auto& o : all) {
      min_r = std::min(min_r, o.routing_cost);
      min_n = std::min(min_n, o.fleet.total());
    }
    auto zero = solve_exact(PricedFleetProblem::unpriced(inst.days[0], inst.vehicle_types));
    REQUIRE(zero);
    CHECK(zero->routing_cost == doctest::Approx(min_r));
    auto huge = solve_exact(PricedFleetProblem::priced(inst.days[0], inst.vehicle_types, {1e9, 1e9}));
    REQUIRE(huge);
    CHECK(huge->fleet.total() == min_n);

    FsmConfig exact;
    exact.mode = PricingMode::kExact;
    auto r0 = best_routing_option(inst.days[0], inst.vehicle_types, exact, 1);
    REQUIRE(r0);
    for (const auto& o : all) CHECK(r0->routing_cost <= o.routing_cost + 1e-9);
    FsmConfig heur;
    heur.budget = quick_budget(300);
    for (std::uint64_t s : {1u, 2u}) {
      auto h = best_routing_option(inst.days[0], inst.vehicle_types, heur, s);
      REQUIRE(h);
      CHECK(h->routing_cost >= r0->routing_cost - 1e-9);
    }
  }

  TEST_CASE("no idle vehicles and monotone incumbent") {
    auto inst = testing::tiny_instance(30, 1, 12, 12, 3);
    auto p = PricedFleetProblem::priced(inst.days[0], inst.vehicle_types, {40, 20, 5});
    HeuristicStats st;
    auto h = solve_heuristic(p, quick_budget(500), 9, &st);
    REQUIRE(h);
    CHECK(check_option(*h, p).empty());
    FleetVector counted(p.num_types());
    for (const auto& r : h->routes) ++counted[static_cast<std::size_t>(r.vehicle_type)];
    CHECK(counted == h->fleet);
    for (std::size_t k = 1; k < st.best_trace.size(); ++k) CHECK(st.best_trace[k] <= st.best_trace[k - 1] + 1e-9);
  }

  TEST_CASE("same seed, same answer") {
    auto inst = testing::tiny_instance(31, 1, 12, 12, 3);
    auto p = PricedFleetProblem::priced(inst.days[0], inst.vehicle_types, {7, 3, 1});
    auto a = solve_heuristic(p, quick_budget(400), 5);
    auto b = solve_heuristic(p, quick_budget(400), 5);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->priced_cost == b->priced_cost);
    CHECK(a->fleet == b->fleet);
  }

  TEST_CASE("solution cap stops early") {
    auto inst = testing::tiny_instance(32, 1, 12, 12, 3);
    auto p = PricedFleetProblem::priced(inst.days[0], inst.vehicle_types, {50, 20, 5});
    auto b = quick_budget(500);
    b.max_solutions = 1;
    HeuristicStats st;
    auto h = solve_heuristic(p, b, 1, &st);
    REQUIRE(h);
    CHECK(st.improvements <= 1);
  }

  TEST_CASE("invalid problems are rejected") {
    auto inst = testing::tiny_instance(1, 1, 3, 3, 2);
    auto p = PricedFleetProblem::unpriced(inst.days[0], inst.vehicle_types);
    p.prices = {-1.0, 0.0};
    CHECK_THROWS_AS(p.check(), std::invalid_argument);
    p = PricedFleetProblem::unpriced(inst.days[0], inst.vehicle_types);
    p.lower = {3, 0};
    p.upper = {2, kUnbounded};
    CHECK_THROWS_AS(p.check(), std::invalid_argument);
  }

  TEST_CASE("derived seeds differ") {
    CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  }
}
