#include <doctest.h>

#include "fleetmix/colgen.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace fleetmix;
using testing::make_day;
using testing::make_request;
using testing::make_type;

namespace {

CgConfig exact_config() {
  CgConfig cfg;
  cfg.fsm.mode = PricingMode::kExact;
  cfg.parallelism = 2;
  cfg.budget.gap_eps = 0;
  cfg.budget.stagnation_limit = 0;
  cfg.budget.max_iterations = 10000;
  cfg.budget.max_seconds = 1e9;
  return cfg;
}

}  // namespace

TEST_SUITE("colgen") {
  TEST_CASE("score examples") {
    DayScoreRecord rec;
    rec.q = {{0, 0}};
    rec.fleets = {FleetVector(std::vector<int>{2, 2})};
    Duals d;
    d.p = {0};
    d.q = {{1, 1}};
    CHECK(score_day(0, d, rec) == doctest::Approx(1.0));
    d.q = {{0, 0}};
    CHECK(score_day(0, d, rec) == -1.0);
    rec.q = {{1, 3}, {1, 3}};
    rec.fleets = {FleetVector(std::vector<int>{1, 0}), FleetVector(std::vector<int>{0, 2})};
    d.q = {{1, 3}};
    CHECK(score_day(0, d, rec) == doctest::Approx(0.0));
  }

  TEST_CASE("selection") {
    CHECK(select_subproblems({0.0, -1.0, 0.0}, 2).empty());
    CHECK(select_subproblems({1.0, 2.0, 0.5}, 2) == std::vector<int>{1, 0});
    CHECK(select_subproblems({0.0, 1.0, 0.0, 1.0}, 1) == std::vector<int>{1});
    CHECK(select_subproblems({3.0, 1.0}, 5) == std::vector<int>{0, 1});
  }

  TEST_CASE("covering examples") {
    auto two = solve_covering({{20}, {5}}, {3, 1}, {23});
    REQUIRE(two.feasible);
    CHECK(two.value == doctest::Approx(4.0));
    CHECK(two.fleet == FleetVector(std::vector<int>{1, 1}));
    auto one = solve_covering({{10}}, {2}, {25});
    REQUIRE(one.feasible);
    CHECK(one.value == doctest::Approx(6.0));
    CHECK(one.fleet[0] == 3);
    std::vector<int> cap{0, 2};
    CHECK_FALSE(solve_covering({{20}, {5}}, {3, 1}, {23}, &cap).feasible);
    // Multi-commodity: each row must be covered on its own.
    auto mc = solve_covering({{10, 0}, {0, 10}, {6, 6}}, {5, 5, 4}, {12, 12});
    REQUIRE(mc.feasible);
    CHECK(mc.value == doctest::Approx(8.0));
  }

  TEST_CASE("covering bound on a day") {
    auto inst = testing::make_horizon({make_type(0, 0, {20}), make_type(1, 0, {5})},
                                      {make_day(0, {make_request(0, 1, 0, {13}), make_request(1, 0, 1, {10})})});
    Duals d;
    d.p = {10};
    d.q = {{3, 1}};
    CHECK(covering_bound(inst, 0, d, 7.0) == doctest::Approx(7 + 4 - 10));
    d.q = {{0, 0}};
    d.p = {5};
    CHECK(covering_bound(inst, 0, d, 7.0) == 0.0);
    d.p = {9};
    CHECK(covering_bound(inst, 0, d, 7.0) == doctest::Approx(-2.0));
  }

  TEST_CASE("lagrangian bound") {
    CHECK(lagrangian_bound(100, {0, 0, 0}) == 100.0);
    CHECK(lagrangian_bound(100, {0, -5, 0}) == 95.0);
    CHECK(lagrangian_bound(100, {2, -5}) == 95.0);
  }

  TEST_CASE("initialization") {
    auto inst = testing::tiny_instance(3, 3, 3, 5, 2);
    CgContext ctx(inst, exact_config());
    ctx.initialize();
    REQUIRE(ctx.store().size() == 3);
    double r = 0;
    FleetVector f(inst.num_types());
    for (const auto& c : ctx.store().columns()) {
      CHECK(c.origin == ColumnOrigin::kInit);
      r += c.routing_cost;
      f = f.max_with(c.fleet);
    }
    for (std::size_t t = 0; t < inst.num_types(); ++t) r += inst.vehicle_types[t].fixed_cost * f[t];
    auto mi = solve_master_integer(inst, ctx.store(), FleetBounds::unbounded(inst.num_types()));
    REQUIRE(mi.feasible);
    CHECK(mi.value == doctest::Approx(r));
    auto m = build_restricted(inst, ctx.store(), FleetBounds::unbounded(inst.num_types()));
    auto sol = lp::solve_lp(m.lp);
    auto duals = extract_duals(m, sol);
    for (const auto& c : ctx.store().columns()) CHECK(reduced_cost(c, duals) >= -1e-6);
  }

  TEST_CASE("unservable day is an instance error") {
    // The only request needs both windows at once from the depot.
    auto inst = testing::make_horizon({make_type(0, 1, {10})},
                                      {make_day(0, {make_request(0, 500, 0, {1}, {0, 10})}, {0, 100})});
    CgContext ctx(inst, exact_config());
    CHECK_THROWS_AS(ctx.initialize(), InstanceError);
  }

  TEST_CASE("exact CG reaches the full enumeration LP") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      auto inst = testing::tiny_instance(seed, 2, 4, 4, 2);
      CgContext ctx(inst, exact_config());
      ctx.initialize();
      auto st = run_cg(ctx, FleetBounds::unbounded(inst.num_types()), exact_config().budget);
      CHECK(st.stop == CgStop::kConverged);
      CHECK(st.z_rmp == doctest::Approx(oracle::full_master_lp(inst)).epsilon(1e-9));
      CHECK(st.z_increases == 0);
      for (std::size_t k = 1; k < st.z_trace.size(); ++k) CHECK(st.z_trace[k] <= st.z_trace[k - 1] + 1e-6);
      auto opt = oracle::lhfsm(inst);
      REQUIRE(opt);
      for (const auto& h : st.history) CHECK(h.bound <= opt->value + 1e-6);
      // Exhausted pricing: every exact option has a nonnegative reduced cost.
      for (std::size_t i = 0; i < inst.num_days(); ++i) {
        ExactFsmSolver solver(inst.days[i], inst.vehicle_types);
        for (const auto& o : solver.all_options()) {
          auto c = make_column(static_cast<int>(i), o, ColumnOrigin::kPricing, {});
          CHECK(reduced_cost(c, st.duals) >= -1e-6);
        }
      }
    }
  }

  TEST_CASE("single day RMH equals the single-day FSM with true fixed costs") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto inst = testing::tiny_instance(seed, 1, 5, 5, 2);
      RmhConfig cfg;
      cfg.cg = exact_config();
      auto plan = run_rmh(inst, cfg);
      std::vector<double> b;
      for (const auto& t : inst.vehicle_types) b.push_back(t.fixed_cost);
      auto ref = oracle::fsm(oracle::usage_costs(inst.days[0], inst.vehicle_types), b);
      REQUIRE(ref);
      CHECK(plan.total_cost == doctest::Approx(ref->second).epsilon(1e-9));
      CHECK(check_plan(plan, inst).empty());
    }
  }

  TEST_CASE("heuristic RMH is valid and reproducible") {
    auto inst = testing::tiny_instance(12, 4, 8, 12, 3);
    RmhConfig cfg;
    cfg.cg.parallelism = 2;
    cfg.cg.fsm.budget.max_lns_iterations = 200;
    cfg.cg.budget.max_iterations = 20;
    CgState st;
    auto a = run_rmh(inst, cfg, &st);
    auto b = run_rmh(inst, cfg);
    CHECK(check_plan(a, inst).empty());
    CHECK(plan_to_json(a) == plan_to_json(b));
    CHECK(st.z_increases == 0);
    CHECK(a.total_cost >= st.z_rmp - 1e-6);
  }

  TEST_CASE("evaluate_fleet respects the fleet") {
    auto inst = testing::tiny_instance(13, 3, 4, 6, 2);
    FsmConfig fsm;
    fsm.budget.max_lns_iterations = 200;
    auto big = evaluate_fleet(inst, FleetVector(std::vector<int>{6, 6}), fsm, 1, 1);
    REQUIRE(big);
    for (const auto& o : *big) CHECK(FleetVector(std::vector<int>{6, 6}).dominates(o.fleet));
    CHECK_FALSE(evaluate_fleet(inst, FleetVector(std::vector<int>{0, 0}), fsm, 1, 1));
  }
}
