#include <doctest.h>

#include <cmath>

#include "fleetmix/plan.hpp"
#include "fleetmix/runner.hpp"
#include "helpers.hpp"
#include "json.hpp"

using namespace fleetmix;

TEST_SUITE("plan") {
  TEST_CASE("aggregate statistics") {
    std::vector<FleetPlan> plans(5);
    const double costs[] = {10, 12, 14, 16, 18};
    for (int k = 0; k < 5; ++k) {
      plans[k].total_cost = costs[k];
      plans[k].fixed_cost = 4;
      plans[k].operational_cost = costs[k] - 4;
      plans[k].fleet = FleetVector(std::vector<int>{1, 2});
      plans[k].idle_per_day = {k, 0};
    }
    auto agg = aggregate(plans);
    CHECK(agg.runs == 5);
    CHECK(agg.mean_cost == doctest::Approx(14.0));
    // Sample standard deviation: sqrt(40 / 4).
    CHECK(agg.stddev_cost == doctest::Approx(std::sqrt(10.0)));
    CHECK(agg.mean_vehicles == doctest::Approx(3.0));
    CHECK(agg.mean_idle == doctest::Approx(1.0));
    auto doc = nlohmann::json::parse(aggregate_to_json(agg));
    CHECK(doc["runs"] == 5);
  }

  TEST_CASE("plan checks and serialization") {
    auto inst = testing::tiny_instance(7, 2, 4, 6, 2);
    SolveSettings s;
    s.parallelism = 1;
    s.lns_iterations = 200;
    s.cg_iterations = 10;
    auto plan = solve(Method::kRMH, inst, s, 3);
    CHECK(check_plan(plan, inst).empty());
    auto doc = nlohmann::json::parse(plan_to_json(plan, {true, false}));
    CHECK(doc["method"] == "RMH");
    CHECK(doc["per_day"].size() == 2);

    auto broken = plan;
    broken.fleet = FleetVector(inst.num_types());
    CHECK_FALSE(check_plan(broken, inst).empty());
    broken = plan;
    broken.total_cost += 1;
    CHECK_FALSE(check_plan(broken, inst).empty());

    auto csv = plan_to_csv(plan);
    CHECK(csv.rfind("day_id,option_cost,idle", 0) == 0);
    auto inf = infeasible_plan(Method::kSA, inst, 1);
    CHECK(std::isinf(inf.total_cost));
    CHECK(nlohmann::json::parse(plan_to_json(inf))["infeasible"] == true);
  }

  TEST_CASE("method names") {
    CHECK(parse_method("bap") == Method::kBAP);
    CHECK_FALSE(parse_method("xyz"));
    CHECK(to_string(Method::kUF) == "UF");
  }
}
