#include "fleetmix/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "fleetmix/log.hpp"
#include "parallel.hpp"

namespace fleetmix {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int workers(int parallelism) { return parallelism > 0 ? parallelism : detail::default_parallelism(); }

bool capable(const VehicleType& type, const Request& r) {
  for (std::size_t c = 0; c < r.demand.size(); ++c)
    if (r.demand[c] > 0.0 && type.capacity[c] <= 0.0) return false;
  return true;
}

}  // namespace

FleetPlan run_uf(const HorizonInstance& instance, const FsmConfig& fsm, std::uint64_t seed,
                 int parallelism) {
  const auto start = std::chrono::steady_clock::now();
  const int nd = static_cast<int>(instance.num_days());
  std::vector<double> prices;
  for (const auto& t : instance.vehicle_types) prices.push_back(t.fixed_cost / nd);
  std::vector<std::optional<FleetOption>> found(static_cast<std::size_t>(nd));
  detail::parallel_for(nd, workers(parallelism), [&](int i) {
    const auto ii = static_cast<std::size_t>(i);
    auto problem = PricedFleetProblem::priced(instance.days[ii], instance.vehicle_types, prices);
    if (fsm.mode == PricingMode::kExact) found[ii] = solve_exact(problem);
    else found[ii] = solve_heuristic(problem, fsm.budget, derive_seed(seed, 0x0f, ii));
  });
  FleetVector fleet(instance.num_types());
  std::vector<DayChoice> per_day;
  for (int i = 0; i < nd; ++i) {
    auto& f = found[static_cast<std::size_t>(i)];
    if (!f) return infeasible_plan(Method::kUF, instance, seed);
    fleet = fleet.max_with(f->fleet);
    per_day.push_back(DayChoice{instance.days[static_cast<std::size_t>(i)].id, f->fleet, f->routing_cost,
                                std::move(f->routes)});
  }
  FleetPlan plan = make_plan(Method::kUF, instance, std::move(fleet), std::move(per_day), seed);
  plan.wall_time = seconds_since(start);
  return plan;
}

std::vector<int> rank_days_by_load(const HorizonInstance& instance) {
  std::vector<int> order(instance.num_days());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::vector<double> load;
  for (const auto& d : instance.days) load.push_back(total_load(d));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return load[static_cast<std::size_t>(a)] > load[static_cast<std::size_t>(b)];
  });
  return order;
}

FleetVector adjust_for_compatibilities(FleetVector fleet, const HorizonInstance& instance,
                                       const DayInstance& day) {
  const auto& types = instance.vehicle_types;
  for (const auto& r : day.requests) {
    bool served = false;
    for (std::size_t t = 0; t < types.size() && !served; ++t)
      served = fleet[t] > 0 && r.allows(static_cast<int>(t)) && capable(types[t], r);
    if (served) continue;
    std::size_t dominant = 0;
    for (std::size_t c = 1; c < r.demand.size(); ++c)
      if (r.demand[c] > r.demand[dominant]) dominant = c;
    int pick = -1;
    for (std::size_t t = 0; t < types.size(); ++t) {
      if (!r.allows(static_cast<int>(t)) || !capable(types[t], r)) continue;
      if (pick < 0 || types[t].capacity[dominant] > types[static_cast<std::size_t>(pick)].capacity[dominant])
        pick = static_cast<int>(t);
    }
    if (pick >= 0) fleet[static_cast<std::size_t>(pick)] += 1;
  }
  return fleet;
}

FleetPlan run_sa(const HorizonInstance& instance, const SaConfig& config, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const int nd = static_cast<int>(instance.num_days());
  if (config.m < 1 || config.m > nd) throw std::invalid_argument("SA needs 1 <= m <= |I|");
  const std::vector<int> ranking = rank_days_by_load(instance);
  std::vector<int> joint(ranking.begin(), ranking.begin() + config.m);
  std::sort(joint.begin(), joint.end());
  std::vector<char> in_joint(static_cast<std::size_t>(nd), 0);
  for (int i : joint) in_joint[static_cast<std::size_t>(i)] = 1;

  HorizonInstance sub = select_days(instance, joint);
  const double scale = static_cast<double>(config.m) / nd;
  for (auto& t : sub.vehicle_types) t.fixed_cost *= scale;

  for (int attempt = 0; attempt <= config.max_reruns; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, 0x5a, static_cast<std::uint64_t>(attempt));
    RmhConfig rmh = config.rmh;
    rmh.cg.seed = s;
    FleetPlan joint_plan = run_rmh(sub, rmh);
    if (joint_plan.infeasible) continue;

    FleetVector fleet = joint_plan.fleet;
    std::vector<int> rest;
    for (int i = 0; i < nd; ++i)
      if (!in_joint[static_cast<std::size_t>(i)]) {
        rest.push_back(i);
        fleet = adjust_for_compatibilities(std::move(fleet), instance, instance.days[static_cast<std::size_t>(i)]);
      }

    HorizonInstance rest_inst = select_days(instance, rest);
    std::optional<std::vector<FleetOption>> routed;
    if (!rest.empty()) {
      routed = evaluate_fleet(rest_inst, fleet, config.day_fsm, s, config.rmh.cg.parallelism);
      if (!routed) {
        FLEET_INFO("sa attempt " << attempt << ": fleet " << fleet.to_string() << " cannot serve every day");
        continue;
      }
    }
    std::vector<DayChoice> per_day(static_cast<std::size_t>(nd));
    for (std::size_t k = 0; k < joint.size(); ++k)
      per_day[static_cast<std::size_t>(joint[k])] = joint_plan.per_day[k];
    for (std::size_t k = 0; k < rest.size(); ++k) {
      auto& o = (*routed)[k];
      per_day[static_cast<std::size_t>(rest[k])] =
          DayChoice{o.day_id, o.fleet, o.routing_cost, std::move(o.routes)};
    }
    FleetPlan plan = make_plan(Method::kSA, instance, std::move(fleet), std::move(per_day), seed);
    plan.wall_time = seconds_since(start);
    return plan;
  }
  FleetPlan plan = infeasible_plan(Method::kSA, instance, seed);
  plan.wall_time = seconds_since(start);
  return plan;
}

double fixed_cost_lower_bound(const HorizonInstance& instance, FleetVector* fleet) {
  std::vector<std::vector<double>> cap;
  std::vector<double> cost;
  for (const auto& t : instance.vehicle_types) {
    cap.push_back(t.capacity);
    cost.push_back(t.fixed_cost);
  }
  std::vector<double> demand(instance.commodities.size(), 0.0);
  for (const auto& d : instance.days)
    for (std::size_t c = 0; c < demand.size(); ++c)
      demand[c] = std::max(demand[c], total_demand(d, static_cast<int>(c)));
  auto res = solve_covering(cap, cost, demand);
  if (!res.feasible) throw std::logic_error("covering relaxation infeasible on a validated instance");
  if (fleet) *fleet = res.fleet;
  return res.value;
}

LowerBound approximate_lower_bound(const HorizonInstance& instance, const FsmConfig& fsm, int runs,
                                   std::uint64_t seed, int parallelism) {
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  LowerBound lb;
  const int nd = static_cast<int>(instance.num_days());
  lb.per_day.assign(static_cast<std::size_t>(nd), std::numeric_limits<double>::infinity());
  detail::parallel_for(nd, workers(parallelism), [&](int i) {
    const auto ii = static_cast<std::size_t>(i);
    const DayInstance& day = instance.days[ii];
    const bool exact = fsm.mode == PricingMode::kExact ||
                       static_cast<int>(day.requests.size()) <= kExactFsmMaxRequests;
    if (exact) {
      FsmConfig e = fsm;
      e.mode = PricingMode::kExact;
      if (auto o = best_routing_option(day, instance.vehicle_types, e, 0)) lb.per_day[ii] = o->routing_cost;
      return;
    }
    for (int r = 0; r < runs; ++r)
      if (auto o = best_routing_option(day, instance.vehicle_types, fsm,
                                       derive_seed(seed, 0x1b, ii * 131 + static_cast<std::uint64_t>(r))))
        lb.per_day[ii] = std::min(lb.per_day[ii], o->routing_cost);
  });
  for (double v : lb.per_day) lb.operational += v;
  lb.fixed = fixed_cost_lower_bound(instance, &lb.covering_fleet);
  lb.total = lb.operational + lb.fixed;
  return lb;
}

double compute_gap(double plan_cost, double total_lb) {
  if (!(total_lb > 0.0)) throw std::invalid_argument("gap needs a positive lower bound");
  return 100.0 * (plan_cost - total_lb) / total_lb;
}

}  // namespace fleetmix
