#include "fleetmix/plan.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace fleetmix {

std::string to_string(Method method) {
  switch (method) {
    case Method::kUF: return "UF";
    case Method::kSA: return "SA";
    case Method::kRMH: return "RMH";
    case Method::kBAP: return "BAP";
    case Method::kLB: return "LB";
  }
  return "unknown";
}

double FleetPlan::mean_idle() const {
  if (idle_per_day.empty()) return 0.0;
  double s = 0.0;
  for (int v : idle_per_day) s += v;
  return s / static_cast<double>(idle_per_day.size());
}

FleetPlan make_plan(Method method, const HorizonInstance& instance, FleetVector fleet,
                    std::vector<DayChoice> per_day, std::uint64_t seed) {
  FleetPlan plan;
  plan.method = method;
  plan.seed = seed;
  plan.fleet = std::move(fleet);
  plan.per_day = std::move(per_day);
  for (std::size_t t = 0; t < instance.num_types(); ++t)
    plan.fixed_cost += instance.vehicle_types[t].fixed_cost * plan.fleet[t];
  for (const auto& d : plan.per_day) {
    plan.operational_cost += d.routing_cost;
    int idle = 0;
    for (std::size_t t = 0; t < plan.fleet.size(); ++t) idle += plan.fleet[t] - d.fleet[t];
    plan.idle_per_day.push_back(idle);
  }
  plan.total_cost = plan.fixed_cost + plan.operational_cost;
  return plan;
}

FleetPlan infeasible_plan(Method method, const HorizonInstance& instance, std::uint64_t seed) {
  FleetPlan plan;
  plan.method = method;
  plan.seed = seed;
  plan.fleet = FleetVector(instance.num_types());
  plan.infeasible = true;
  plan.fixed_cost = plan.operational_cost = plan.total_cost = std::numeric_limits<double>::infinity();
  return plan;
}

std::string check_plan(const FleetPlan& plan, const HorizonInstance& instance) {
  if (plan.infeasible) return {};
  if (plan.per_day.size() != instance.num_days()) return "plan does not cover every day";
  if (plan.fleet.size() != instance.num_types()) return "fleet has the wrong dimension";
  double fixed = 0.0, op = 0.0;
  for (std::size_t t = 0; t < instance.num_types(); ++t) fixed += instance.vehicle_types[t].fixed_cost * plan.fleet[t];
  for (std::size_t i = 0; i < instance.num_days(); ++i) {
    const DayChoice& c = plan.per_day[i];
    const DayInstance& day = instance.days[i];
    if (c.day_id != day.id) return "day order mismatch at position " + std::to_string(i);
    DaySolution sol{c.day_id, c.routes, c.fleet, c.routing_cost};
    std::string err = check_day_solution(sol, day, instance.vehicle_types);
    if (!err.empty()) return "day " + std::to_string(day.id) + ": " + err;
    if (!plan.fleet.dominates(c.fleet)) return "day " + std::to_string(day.id) + " needs more vehicles than the fleet";
    int idle = 0;
    for (std::size_t t = 0; t < plan.fleet.size(); ++t) idle += plan.fleet[t] - c.fleet[t];
    if (i >= plan.idle_per_day.size() || plan.idle_per_day[i] != idle) return "idle count mismatch";
    op += c.routing_cost;
  }
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-6 * (1.0 + std::abs(b)); };
  if (!close(plan.fixed_cost, fixed)) return "fixed cost mismatch";
  if (!close(plan.operational_cost, op)) return "operational cost mismatch";
  if (!close(plan.total_cost, plan.fixed_cost + plan.operational_cost)) return "total cost mismatch";
  return {};
}

namespace {

nlohmann::json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::ordered_json route_json(const Route& r) {
  return {{"vehicle_type", r.vehicle_type},
          {"stops", r.stops},
          {"distance", r.distance},
          {"duration", r.duration},
          {"cost", r.cost}};
}

}  // namespace

std::string plan_to_json(const FleetPlan& plan, const PlanJsonOptions& options) {
  nlohmann::ordered_json j;
  j["method"] = to_string(plan.method);
  j["seed"] = plan.seed;
  j["infeasible"] = plan.infeasible;
  j["fleet"] = plan.fleet.counts();
  j["vehicles"] = plan.vehicles();
  j["fixed_cost"] = number_or_null(plan.fixed_cost);
  j["operational_cost"] = number_or_null(plan.operational_cost);
  j["total_cost"] = number_or_null(plan.total_cost);
  j["mean_idle"] = plan.mean_idle();
  j["idle_per_day"] = plan.idle_per_day;
  j["gap"] = plan.gap ? nlohmann::ordered_json(*plan.gap) : nlohmann::ordered_json(nullptr);
  if (options.include_wall_time) j["wall_time"] = plan.wall_time;
  auto days = nlohmann::ordered_json::array();
  for (const auto& d : plan.per_day) {
    nlohmann::ordered_json e;
    e["day_id"] = d.day_id;
    e["fleet"] = d.fleet.counts();
    e["option_cost"] = d.routing_cost;
    if (options.include_routes) {
      auto rs = nlohmann::ordered_json::array();
      for (const auto& r : d.routes) rs.push_back(route_json(r));
      e["routes"] = rs;
    }
    days.push_back(e);
  }
  j["per_day"] = days;
  return j.dump(2);
}

std::string plan_to_csv(const FleetPlan& plan) {
  std::ostringstream os;
  os.precision(12);
  os << "day_id,option_cost,idle\n";
  for (std::size_t i = 0; i < plan.per_day.size(); ++i)
    os << plan.per_day[i].day_id << ',' << plan.per_day[i].routing_cost << ','
       << (i < plan.idle_per_day.size() ? plan.idle_per_day[i] : 0) << '\n';
  return os.str();
}

PlanAggregate aggregate(const std::vector<FleetPlan>& plans) {
  PlanAggregate a;
  a.runs = static_cast<int>(plans.size());
  std::vector<double> costs;
  double gap_sum = 0.0;
  int gaps = 0;
  for (const auto& p : plans) {
    if (p.infeasible) {
      ++a.infeasible_runs;
      continue;
    }
    costs.push_back(p.total_cost);
    a.mean_operational += p.operational_cost;
    a.mean_fixed += p.fixed_cost;
    a.mean_vehicles += p.vehicles();
    a.mean_idle += p.mean_idle();
    if (p.gap) {
      gap_sum += *p.gap;
      ++gaps;
    }
  }
  const double n = static_cast<double>(costs.size());
  if (costs.empty()) {
    a.mean_cost = std::numeric_limits<double>::infinity();
    return a;
  }
  for (double c : costs) a.mean_cost += c;
  a.mean_cost /= n;
  a.mean_operational /= n;
  a.mean_fixed /= n;
  a.mean_vehicles /= n;
  a.mean_idle /= n;
  if (costs.size() > 1) {
    double ss = 0.0;
    for (double c : costs) ss += (c - a.mean_cost) * (c - a.mean_cost);
    a.stddev_cost = std::sqrt(ss / (n - 1.0));
  }
  if (gaps > 0) a.mean_gap = gap_sum / gaps;
  return a;
}

std::string aggregate_to_json(const PlanAggregate& agg) {
  nlohmann::ordered_json j;
  j["runs"] = agg.runs;
  j["infeasible_runs"] = agg.infeasible_runs;
  j["mean_cost"] = number_or_null(agg.mean_cost);
  j["stddev_cost"] = agg.stddev_cost;
  j["mean_operational"] = agg.mean_operational;
  j["mean_fixed"] = agg.mean_fixed;
  j["mean_vehicles"] = agg.mean_vehicles;
  j["mean_idle"] = agg.mean_idle;
  j["mean_gap"] = agg.mean_gap ? nlohmann::ordered_json(*agg.mean_gap) : nlohmann::ordered_json(nullptr);
  return j.dump(2);
}

}  // namespace fleetmix
