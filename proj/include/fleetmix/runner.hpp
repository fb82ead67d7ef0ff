#ifndef FLEETMIX_RUNNER_HPP
#define FLEETMIX_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "fleetmix/bap.hpp"
#include "fleetmix/baselines.hpp"

namespace fleetmix {

/// One knob set shared by every method so that budgets can be equalized.
/// Iteration budgets bind first on desk-sized instances; the time limit is a
/// ceiling, and runs are reproducible as long as it does not bind.
struct SolveSettings {
  double time_limit = 60.0;  // seconds per method run
  PricingMode pricing = PricingMode::kHeuristic;
  int parallelism = 0;       // 0: hardware concurrency
  int lns_iterations = 1000;
  int max_solutions = 0;
  double subproblem_seconds = 5.0;
  int cg_iterations = 300;
  int stagnation_limit = 3;
  double gap_eps = 1e-3;
  int sa_m = 3;
  int bap_node_iterations = 30;
  int bap_max_nodes = 1000;
  int lb_runs = 5;
};

FsmConfig make_fsm_config(const SolveSettings& settings);
RmhConfig make_rmh_config(const SolveSettings& settings, std::uint64_t seed);
BapConfig make_bap_config(const SolveSettings& settings, std::uint64_t seed);

/// Runs one method; wall_time is filled in, gap is left empty.
FleetPlan solve(Method method, const HorizonInstance& instance, const SolveSettings& settings,
                std::uint64_t seed, BapStats* bap_stats = nullptr);

LowerBound lower_bound(const HorizonInstance& instance, const SolveSettings& settings,
                       std::uint64_t seed);

std::optional<Method> parse_method(const std::string& name);

}  // namespace fleetmix

#endif  // FLEETMIX_RUNNER_HPP
