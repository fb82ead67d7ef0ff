#include "fleetmix/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fleetmix {

std::string to_string(Infeasibility reason) {
  switch (reason) {
    case Infeasibility::kCompatibility: return "compatibility";
    case Infeasibility::kCapacity: return "capacity";
    case Infeasibility::kWindow: return "window";
    case Infeasibility::kShift: return "shift";
  }
  return "unknown";
}

double route_cost(const Route& route, const VehicleType& type) {
  return type.cost_per_distance * route.distance + type.cost_per_time * route.duration;
}

namespace {

struct ForwardPass {
  std::vector<double> arrival;
  std::vector<double> start;
  double return_time = 0.0;
  double distance = 0.0;
};

// Forward earliest-start pass from `departure`. Returns the first violated
// window position, or -1.
int forward(std::span<const int> stops, const VehicleType& type, const DayInstance& day,
            double departure, ForwardPass& out) {
  out.arrival.resize(stops.size());
  out.start.resize(stops.size());
  out.distance = 0.0;
  double time = departure;
  Point here = day.depot;
  for (std::size_t k = 0; k < stops.size(); ++k) {
    const Request& r = day.requests[static_cast<std::size_t>(stops[k])];
    const double leg = distance(here, r.location);
    out.distance += leg;
    const double arrival = time + leg / type.speed;
    if (arrival > r.tw.latest + kEps) return static_cast<int>(k);
    out.arrival[k] = arrival;
    out.start[k] = std::max(arrival, static_cast<double>(r.tw.earliest));
    time = out.start[k] + r.service_time;
    here = r.location;
  }
  const double back = distance(here, day.depot);
  out.distance += back;
  out.return_time = time + back / type.speed;
  return -1;
}

}  // namespace

ScheduleResult build_schedule(std::span<const int> stops, const VehicleType& type,
                              const DayInstance& day) {
  const std::size_t nc = type.capacity.size();
  std::vector<double> load(nc, 0.0);
  for (std::size_t k = 0; k < stops.size(); ++k) {
    const Request& r = day.requests.at(static_cast<std::size_t>(stops[k]));
    if (!r.allows(type.id)) return ScheduleFailure{Infeasibility::kCompatibility, static_cast<int>(k)};
    for (std::size_t c = 0; c < nc; ++c) load[c] += r.demand[c];
  }
  for (std::size_t c = 0; c < nc; ++c)
    if (load[c] > type.capacity[c] + kEps) return ScheduleFailure{Infeasibility::kCapacity, -1};

  ForwardPass pass;
  const double shift_start = day.shift.earliest;
  if (int bad = forward(stops, type, day, shift_start, pass); bad >= 0)
    return ScheduleFailure{Infeasibility::kWindow, bad};
  if (pass.return_time > day.shift.latest + kEps) return ScheduleFailure{Infeasibility::kShift, -1};

  // Largest departure delay that neither breaks a window nor delays the return.
  double cumulative_wait = 0.0;
  double slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < stops.size(); ++k) {
    const Request& r = day.requests[static_cast<std::size_t>(stops[k])];
    cumulative_wait += pass.start[k] - pass.arrival[k];
    slack = std::min(slack, cumulative_wait + r.tw.latest - pass.start[k]);
  }
  double delay = std::max(0.0, std::min(cumulative_wait, slack));
  if (delay > 0.0) {
    ForwardPass shifted;
    if (forward(stops, type, day, shift_start + delay, shifted) < 0 &&
        shifted.return_time <= pass.return_time + kEps)
      pass = std::move(shifted);
    else
      delay = 0.0;  // rounding pushed a window; keep the earliest schedule
  }

  Route route;
  route.vehicle_type = type.id;
  route.stops.assign(stops.begin(), stops.end());
  route.arrival = std::move(pass.arrival);
  route.start_service = std::move(pass.start);
  route.departure = shift_start + delay;
  route.return_time = pass.return_time;
  route.distance = pass.distance;
  route.duration = route.return_time - route.departure;
  route.cost = route_cost(route, type);
  return route;
}

std::optional<double> sequence_cost(std::span<const int> stops, const VehicleType& type,
                                    const DayInstance& day) {
  const std::size_t nc = type.capacity.size();
  thread_local std::vector<double> load;
  load.assign(nc, 0.0);
  for (int s : stops) {
    const Request& r = day.requests[static_cast<std::size_t>(s)];
    if (!r.allows(type.id)) return std::nullopt;
    for (std::size_t c = 0; c < nc; ++c) load[c] += r.demand[c];
  }
  for (std::size_t c = 0; c < nc; ++c)
    if (load[c] > type.capacity[c] + kEps) return std::nullopt;

  thread_local ForwardPass pass;
  const double shift_start = day.shift.earliest;
  if (forward(stops, type, day, shift_start, pass) >= 0) return std::nullopt;
  if (pass.return_time > day.shift.latest + kEps) return std::nullopt;
  double cumulative_wait = 0.0;
  double slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < stops.size(); ++k) {
    const Request& r = day.requests[static_cast<std::size_t>(stops[k])];
    cumulative_wait += pass.start[k] - pass.arrival[k];
    slack = std::min(slack, cumulative_wait + r.tw.latest - pass.start[k]);
  }
  const double delay = std::max(0.0, std::min(cumulative_wait, slack));
  // Postponing by `delay` keeps the return time (see build_schedule).
  const double duration = pass.return_time - shift_start - delay;
  return type.cost_per_distance * pass.distance + type.cost_per_time * duration;
}

std::optional<Route> try_route(std::span<const int> stops, const VehicleType& type,
                               const DayInstance& day) {
  ScheduleResult result = build_schedule(stops, type, day);
  if (auto* route = std::get_if<Route>(&result)) return std::move(*route);
  return std::nullopt;
}

DaySolution make_day_solution(const DayInstance& day, std::size_t num_types,
                              std::vector<Route> routes) {
  DaySolution sol;
  sol.day_id = day.id;
  sol.fleet_used = FleetVector(num_types);
  for (const auto& r : routes) {
    sol.fleet_used[static_cast<std::size_t>(r.vehicle_type)] += 1;
    sol.operational_cost += r.cost;
  }
  sol.routes = std::move(routes);
  return sol;
}

std::string check_day_solution(const DaySolution& solution, const DayInstance& day,
                               const std::vector<VehicleType>& types) {
  std::ostringstream err;
  std::vector<int> seen(day.requests.size(), 0);
  FleetVector used(types.size());
  double total = 0.0;
  for (const auto& route : solution.routes) {
    if (route.stops.empty()) return "empty route";
    if (route.vehicle_type < 0 || route.vehicle_type >= static_cast<int>(types.size()))
      return "route with unknown vehicle type";
    for (int s : route.stops) {
      if (s < 0 || s >= static_cast<int>(day.requests.size())) return "stop out of range";
      ++seen[static_cast<std::size_t>(s)];
    }
    const VehicleType& type = types[static_cast<std::size_t>(route.vehicle_type)];
    ScheduleResult rebuilt = build_schedule(route.stops, type, day);
    if (auto* failure = std::get_if<ScheduleFailure>(&rebuilt)) {
      err << "route infeasible: " << to_string(failure->reason);
      return err.str();
    }
    const double cost = route_cost(std::get<Route>(rebuilt), type);
    if (std::abs(cost - route.cost) > kEps * (1.0 + std::abs(cost))) {
      err << "route cost " << route.cost << " differs from recomputed " << cost;
      return err.str();
    }
    used[static_cast<std::size_t>(route.vehicle_type)] += 1;
    total += route.cost;
  }
  for (std::size_t r = 0; r < seen.size(); ++r)
    if (seen[r] != 1) {
      err << "request " << day.requests[r].id << " served " << seen[r] << " times";
      return err.str();
    }
  if (used != solution.fleet_used) return "fleet_used does not match the routes";
  if (std::abs(total - solution.operational_cost) > kEps * (1.0 + std::abs(total)))
    return "operational cost is not the sum of route costs";
  return {};
}

// ----- exact oracle -----

RouteTable::RouteTable(const DayInstance& day, const std::vector<VehicleType>& types)
    : day_(&day), types_(&types), n_(static_cast<int>(day.requests.size())) {
  if (n_ > kExactVrpMaxRequests)
    throw ExactSizeError("exact VRP supports at most " + std::to_string(kExactVrpMaxRequests) +
                         " requests, day " + std::to_string(day.id) + " has " +
                         std::to_string(n_));
  const std::size_t num_masks = std::size_t{1} << n_;
  table_.assign(num_masks * types.size(), std::nullopt);
  std::vector<int> stops;
  for (std::uint32_t mask = 1; mask < num_masks; ++mask) {
    for (const auto& type : types) {
      stops.clear();
      for (int i = 0; i < n_; ++i)
        if (mask & (1u << i)) stops.push_back(i);
      // Compatibility and capacity do not depend on the order.
      ScheduleResult probe = build_schedule(stops, type, day);
      if (auto* f = std::get_if<ScheduleFailure>(&probe);
          f && (f->reason == Infeasibility::kCompatibility || f->reason == Infeasibility::kCapacity))
        continue;
      std::optional<Route> best;
      do {
        std::optional<Route> r = try_route(stops, type, day);
        if (r && (!best || r->cost < best->cost - 1e-12)) best = std::move(r);
      } while (std::next_permutation(stops.begin(), stops.end()));
      table_[mask * types.size() + static_cast<std::size_t>(type.id)] = std::move(best);
    }
  }
}

namespace {

class PartitionSolver {
 public:
  PartitionSolver(const RouteTable& table, const FleetVector& fleet, VehicleUse use)
      : table_(table), use_(use), n_(table.num_requests()), types_(table.num_types()) {
    cap_.resize(types_);
    radix_.resize(types_);
    std::size_t states = 1;
    for (std::size_t t = 0; t < types_; ++t) {
      cap_[t] = use == VehicleUse::kAtMost ? std::min(fleet[t], n_) : fleet[t];
      radix_[t] = states;
      states *= static_cast<std::size_t>(cap_[t] + 1);
    }
    fleet_states_ = states;
    const std::size_t masks = std::size_t{1} << n_;
    memo_.assign(masks * fleet_states_, kUnknown);
    choice_.assign(masks * fleet_states_, -1);
  }

  std::optional<DaySolution> solve() {
    std::size_t full_code = 0;
    for (std::size_t t = 0; t < types_; ++t) full_code += radix_[t] * static_cast<std::size_t>(cap_[t]);
    const std::uint32_t all = n_ == 0 ? 0u : static_cast<std::uint32_t>((std::size_t{1} << n_) - 1);
    const double best = value(all, full_code);
    if (!std::isfinite(best)) return std::nullopt;

    std::vector<Route> routes;
    std::uint32_t mask = all;
    std::size_t code = full_code;
    while (mask != 0) {
      const int packed = choice_[index(mask, code)];
      const std::uint32_t sub = static_cast<std::uint32_t>(packed) >> 4;
      const int t = packed & 15;
      routes.push_back(*table_.best(sub, t));
      mask &= ~sub;
      code -= radix_[static_cast<std::size_t>(t)];
    }
    return make_day_solution(table_.day(), types_, std::move(routes));
  }

 private:
  static constexpr double kUnknown = -1.0;

  std::size_t index(std::uint32_t mask, std::size_t code) const {
    return static_cast<std::size_t>(mask) * fleet_states_ + code;
  }

  int remaining(std::size_t code, std::size_t t) const {
    return static_cast<int>((code / radix_[t]) % static_cast<std::size_t>(cap_[t] + 1));
  }

  double value(std::uint32_t mask, std::size_t code) {
    const double inf = std::numeric_limits<double>::infinity();
    if (mask == 0) {
      if (use_ == VehicleUse::kAtMost || code == 0) return 0.0;
      return inf;  // vehicles left over but nothing to serve
    }
    double& slot = memo_[index(mask, code)];
    if (slot != kUnknown) return slot;
    double best = inf;
    int best_choice = -1;
    const std::uint32_t low = mask & (~mask + 1);
    const std::uint32_t rest = mask & ~low;
    // Every submask of `rest`, each joined with the lowest request.
    for (std::uint32_t s = rest;; s = (s - 1) & rest) {
      const std::uint32_t sub = s | low;
      for (std::size_t t = 0; t < types_; ++t) {
        if (remaining(code, t) == 0) continue;
        const auto& route = table_.best(sub, static_cast<int>(t));
        if (!route) continue;
        const double tail = value(mask & ~sub, code - radix_[t]);
        const double total = route->cost + tail;
        if (total < best - 1e-12) {
          best = total;
          best_choice = static_cast<int>(sub << 4) | static_cast<int>(t);
        }
      }
      if (s == 0) break;
    }
    slot = best;
    choice_[index(mask, code)] = best_choice;
    return best;
  }

  const RouteTable& table_;
  VehicleUse use_;
  int n_;
  std::size_t types_;
  std::vector<int> cap_;
  std::vector<std::size_t> radix_;
  std::size_t fleet_states_ = 1;
  std::vector<double> memo_;
  std::vector<int> choice_;
};

}  // namespace

std::optional<DaySolution> exact_vrp(const RouteTable& table, const FleetVector& fleet,
                                     VehicleUse use) {
  if (fleet.size() != table.num_types()) throw std::invalid_argument("fleet size mismatch");
  if (table.num_types() > 15) throw ExactSizeError("exact VRP supports at most 15 vehicle types");
  if (use == VehicleUse::kExactly && fleet.total() > table.num_requests()) return std::nullopt;
  for (std::size_t t = 0; t < fleet.size(); ++t)
    if (fleet[t] < 0) throw std::invalid_argument("negative fleet entry");
  PartitionSolver solver(table, fleet, use);
  return solver.solve();
}

std::optional<DaySolution> exact_vrp(const DayInstance& day, const std::vector<VehicleType>& types,
                                     const FleetVector& fleet, VehicleUse use) {
  RouteTable table(day, types);
  return exact_vrp(table, fleet, use);
}

}  // namespace fleetmix
