#ifndef FLEETMIX_ROUTING_HPP
#define FLEETMIX_ROUTING_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fleetmix/model.hpp"

namespace fleetmix {

/// One vehicle's day. Stops are indices into DayInstance::requests.
struct Route {
  int vehicle_type = 0;
  std::vector<int> stops;
  std::vector<double> arrival;        // per stop
  std::vector<double> start_service;  // per stop
  double departure = 0.0;             // depot departure time
  double return_time = 0.0;           // depot return time
  double distance = 0.0;
  double duration = 0.0;              // departure to return, waiting included
  double cost = 0.0;                  // route_cost, cached by build_schedule
};

enum class Infeasibility { kCompatibility, kCapacity, kWindow, kShift };

std::string to_string(Infeasibility reason);

struct ScheduleFailure {
  Infeasibility reason;
  int stop_position = -1;  // position in the stop list, -1 when route-wide
};

using ScheduleResult = std::variant<Route, ScheduleFailure>;

/// Operational cost excluding fixed cost.
double route_cost(const Route& route, const VehicleType& type);

/// Earliest-start schedule; departure is postponed as far as possible without
/// delaying the return, which removes avoidable waiting. Never partial.
ScheduleResult build_schedule(std::span<const int> stops, const VehicleType& type,
                              const DayInstance& day);

/// Cost of the schedule build_schedule would produce, without materializing
/// the route. Used by the search heuristics in their inner loops.
std::optional<double> sequence_cost(std::span<const int> stops, const VehicleType& type,
                                    const DayInstance& day);

/// Convenience wrapper returning nullopt on infeasibility.
std::optional<Route> try_route(std::span<const int> stops, const VehicleType& type,
                               const DayInstance& day);

struct DaySolution {
  int day_id = 0;
  std::vector<Route> routes;
  FleetVector fleet_used;
  double operational_cost = 0.0;
};

/// Recomputes fleet_used and operational_cost from the routes.
DaySolution make_day_solution(const DayInstance& day, std::size_t num_types,
                              std::vector<Route> routes);

/// Checks coverage, schedule feasibility and cost additivity from scratch.
/// Returns an error description, empty when the solution is valid.
std::string check_day_solution(const DaySolution& solution, const DayInstance& day,
                               const std::vector<VehicleType>& types);

class ExactSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kExactVrpMaxRequests = 9;

/// Best ordering of every (request subset, vehicle type). Built once per day
/// and shared by the exact VRP and exact FSM oracles.
class RouteTable {
 public:
  RouteTable(const DayInstance& day, const std::vector<VehicleType>& types);

  int num_requests() const { return n_; }
  std::size_t num_types() const { return types_->size(); }
  /// Best route for the subset `mask` on `type`, or nullopt when infeasible.
  const std::optional<Route>& best(std::uint32_t mask, int type) const {
    return table_[static_cast<std::size_t>(mask) * types_->size() + static_cast<std::size_t>(type)];
  }
  const DayInstance& day() const { return *day_; }
  const std::vector<VehicleType>& types() const { return *types_; }

 private:
  const DayInstance* day_;
  const std::vector<VehicleType>* types_;
  int n_;
  std::vector<std::optional<Route>> table_;
};

enum class VehicleUse {
  kAtMost,   // use at most fleet[t] routes of type t
  kExactly,  // use exactly fleet[t] routes of type t (no idle vehicle)
};

/// Minimum operational cost partition of the day's requests into routes that
/// fit `fleet`. nullopt when infeasible.
std::optional<DaySolution> exact_vrp(const RouteTable& table, const FleetVector& fleet,
                                     VehicleUse use = VehicleUse::kAtMost);

/// Builds a RouteTable on the fly. Throws ExactSizeError above 9 requests.
std::optional<DaySolution> exact_vrp(const DayInstance& day, const std::vector<VehicleType>& types,
                                     const FleetVector& fleet,
                                     VehicleUse use = VehicleUse::kAtMost);

}  // namespace fleetmix

#endif  // FLEETMIX_ROUTING_HPP
