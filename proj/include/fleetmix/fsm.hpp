#ifndef FLEETMIX_FSM_HPP
#define FLEETMIX_FSM_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "fleetmix/model.hpp"
#include "fleetmix/routing.hpp"

namespace fleetmix {

inline constexpr int kUnbounded = std::numeric_limits<int>::max();

/// Single-day fleet size and mix problem where vehicles of type t cost
/// prices[t] each (the master's q_ti in pricing, b_t/|I| in the baselines).
struct PricedFleetProblem {
  const DayInstance* day = nullptr;
  const std::vector<VehicleType>* types = nullptr;
  std::vector<double> prices;
  std::vector<int> lower;  // m_t
  std::vector<int> upper;  // M_t, kUnbounded when free

  static PricedFleetProblem unpriced(const DayInstance& day, const std::vector<VehicleType>& types);
  static PricedFleetProblem priced(const DayInstance& day, const std::vector<VehicleType>& types,
                                   std::vector<double> prices);

  std::size_t num_types() const { return types->size(); }
  /// Throws std::invalid_argument when an invariant is violated.
  void check() const;
  bool within_bounds(const FleetVector& fleet) const;
};

/// A day's fleet plus the routes operating it. Every counted vehicle runs a route.
struct FleetOption {
  int day_id = 0;
  FleetVector fleet;
  std::vector<Route> routes;
  double routing_cost = 0.0;  // r_ij
  double priced_cost = 0.0;   // r_ij + sum_t prices[t] * fleet[t]
};

/// Builds an option whose fleet and costs are derived from `routes`.
FleetOption make_option(const PricedFleetProblem& problem, std::vector<Route> routes);

/// Re-validates an option from scratch (schedules, coverage, no idle vehicle,
/// bounds). Returns an error description, empty when valid.
std::string check_option(const FleetOption& option, const PricedFleetProblem& problem);

struct HeuristicBudget {
  double max_seconds = 1.0;
  int max_lns_iterations = 1000;
  int max_solutions = 0;          // stop at the k-th improving solution; 0 = no cap
  int restart_after = 200;        // non-improving iterations before a restart
  double destroy_share = 0.3;     // random removal takes up to this share of requests
};

struct HeuristicStats {
  int iterations = 0;
  int improvements = 0;
  int restarts = 0;
  std::vector<double> best_trace;  // best search objective after each iteration
};

/// Construction by cheapest insertion, then LNS (random / route removal,
/// regret-2 repair). Deterministic for a fixed seed while the time limit does
/// not bind. Routes of every accepted solution are appended to `route_sink`,
/// and every accepted complete solution to `option_sink`.
std::optional<FleetOption> solve_heuristic(const PricedFleetProblem& problem,
                                           const HeuristicBudget& budget, std::uint64_t seed,
                                           HeuristicStats* stats = nullptr,
                                           std::vector<Route>* route_sink = nullptr,
                                           std::vector<FleetOption>* option_sink = nullptr);

inline constexpr int kExactFsmMaxRequests = 8;

/// Exact FSM by enumeration of fleet vectors. The per-fleet routing optimum
/// does not depend on prices, so it is computed once per day and reused.
class ExactFsmSolver {
 public:
  ExactFsmSolver(const DayInstance& day, const std::vector<VehicleType>& types);

  /// Minimum priced cost; ties go to the lexicographically smallest fleet.
  std::optional<FleetOption> solve(const PricedFleetProblem& problem) const;
  /// Every option of the day (one per feasible fleet vector, no idle vehicles).
  std::vector<FleetOption> all_options() const;
  const RouteTable& table() const { return table_; }

 private:
  const DayInstance* day_;
  const std::vector<VehicleType>* types_;
  RouteTable table_;
  std::map<FleetVector, DaySolution> by_fleet_;  // feasible fleets only, lexicographic order
};

/// Throws ExactSizeError above 8 requests.
std::optional<FleetOption> solve_exact(const PricedFleetProblem& problem);

enum class PricingMode { kHeuristic, kExact };

struct FsmConfig {
  PricingMode mode = PricingMode::kHeuristic;
  HeuristicBudget budget;
};

/// The day's cheapest routing with free, unlimited vehicles; option 0 of the
/// day (cost r_i0).
std::optional<FleetOption> best_routing_option(const DayInstance& day,
                                               const std::vector<VehicleType>& types,
                                               const FsmConfig& config, std::uint64_t seed);

/// Mixes (base, a, b) into a seed; used to derive independent worker seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace fleetmix

#endif  // FLEETMIX_FSM_HPP
