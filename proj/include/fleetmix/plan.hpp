#ifndef FLEETMIX_PLAN_HPP
#define FLEETMIX_PLAN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fleetmix/model.hpp"
#include "fleetmix/routing.hpp"

namespace fleetmix {

enum class Method { kUF, kSA, kRMH, kBAP, kLB };

std::string to_string(Method method);

/// The option serving one day in a plan.
struct DayChoice {
  int day_id = 0;
  FleetVector fleet;
  double routing_cost = 0.0;
  std::vector<Route> routes;
};

struct FleetPlan {
  Method method = Method::kRMH;
  FleetVector fleet;
  std::vector<DayChoice> per_day;
  double fixed_cost = 0.0;
  double operational_cost = 0.0;
  double total_cost = 0.0;
  std::vector<int> idle_per_day;
  std::optional<double> gap;  // percent
  double wall_time = 0.0;
  std::uint64_t seed = 0;
  bool infeasible = false;

  double mean_idle() const;
  int vehicles() const { return fleet.total(); }
};

/// Fills the cost breakdown and idle counts from `fleet` and `per_day`.
FleetPlan make_plan(Method method, const HorizonInstance& instance, FleetVector fleet,
                    std::vector<DayChoice> per_day, std::uint64_t seed);

/// Plan with infinite cost, used when a method could not cover every day.
FleetPlan infeasible_plan(Method method, const HorizonInstance& instance, std::uint64_t seed);

/// Verifies the plan against the instance: routes rebuilt from scratch, the
/// fleet covers each day, costs add up. Empty when valid.
std::string check_plan(const FleetPlan& plan, const HorizonInstance& instance);

struct PlanJsonOptions {
  bool include_routes = false;
  bool include_wall_time = false;  // off by default so repeated runs are byte-identical
};

std::string plan_to_json(const FleetPlan& plan, const PlanJsonOptions& options = {});
/// One row per day: day_id,option_cost,idle
std::string plan_to_csv(const FleetPlan& plan);

/// Means over repeated runs, plus the standard deviation of the total cost.
struct PlanAggregate {
  int runs = 0;
  double mean_cost = 0.0;
  double stddev_cost = 0.0;
  double mean_operational = 0.0;
  double mean_fixed = 0.0;
  double mean_vehicles = 0.0;
  double mean_idle = 0.0;
  std::optional<double> mean_gap;
  int infeasible_runs = 0;
};

PlanAggregate aggregate(const std::vector<FleetPlan>& plans);
std::string aggregate_to_json(const PlanAggregate& agg);

}  // namespace fleetmix

#endif  // FLEETMIX_PLAN_HPP
