#ifndef FLEETMIX_BASELINES_HPP
#define FLEETMIX_BASELINES_HPP

#include <cstdint>
#include <vector>

#include "fleetmix/colgen.hpp"
#include "fleetmix/fsm.hpp"
#include "fleetmix/model.hpp"
#include "fleetmix/plan.hpp"

namespace fleetmix {

/// Union fleet: each day alone with fixed costs b_t / |I|, fleet = componentwise max.
FleetPlan run_uf(const HorizonInstance& instance, const FsmConfig& fsm, std::uint64_t seed,
                 int parallelism = 0);

/// Day indices by decreasing total load; ties keep the smaller index first.
std::vector<int> rank_days_by_load(const HorizonInstance& instance);

/// Adds the fewest vehicles so that every request of `day` has a compatible,
/// capable type in the fleet. Never removes vehicles.
FleetVector adjust_for_compatibilities(FleetVector fleet, const HorizonInstance& instance,
                                       const DayInstance& day);

struct SaConfig {
  int m = 1;
  RmhConfig rmh;         // joint solve over the m largest days
  FsmConfig day_fsm;     // remaining days, routed within the fixed fleet
  int max_reruns = 3;
};

/// Subset algorithm. Infeasible after the reruns gives an infinite-cost plan.
FleetPlan run_sa(const HorizonInstance& instance, const SaConfig& config, std::uint64_t seed);

struct LowerBound {
  double operational = 0.0;
  double fixed = 0.0;
  double total = 0.0;
  std::vector<double> per_day;  // best routing cost per day
  FleetVector covering_fleet;
};

/// Per-day best routing (fleet may change daily) plus the covering bound on
/// the fixed part over every day's per-commodity demand. Days small enough for
/// the enumeration oracle are solved exactly.
LowerBound approximate_lower_bound(const HorizonInstance& instance, const FsmConfig& fsm, int runs,
                                   std::uint64_t seed, int parallelism = 0);

/// Fixed part of the bound only.
double fixed_cost_lower_bound(const HorizonInstance& instance, FleetVector* fleet = nullptr);

/// (cost - lb) / lb in percent. Throws std::invalid_argument for lb <= 0.
double compute_gap(double plan_cost, double total_lb);

}  // namespace fleetmix

#endif  // FLEETMIX_BASELINES_HPP
