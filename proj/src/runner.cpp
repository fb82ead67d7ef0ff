#include "fleetmix/runner.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>

namespace fleetmix {

FsmConfig make_fsm_config(const SolveSettings& s) {
  FsmConfig fsm;
  fsm.mode = s.pricing;
  fsm.budget.max_lns_iterations = s.lns_iterations;
  fsm.budget.max_solutions = s.max_solutions;
  fsm.budget.max_seconds = std::min(s.subproblem_seconds, std::max(0.01, s.time_limit));
  return fsm;
}

RmhConfig make_rmh_config(const SolveSettings& s, std::uint64_t seed) {
  RmhConfig c;
  c.cg.fsm = make_fsm_config(s);
  c.cg.parallelism = s.parallelism;
  c.cg.seed = seed;
  c.cg.budget.max_seconds = s.time_limit;
  c.cg.budget.max_iterations = s.cg_iterations;
  c.cg.budget.stagnation_limit = s.stagnation_limit;
  c.cg.budget.gap_eps = s.gap_eps;
  return c;
}

BapConfig make_bap_config(const SolveSettings& s, std::uint64_t seed) {
  BapConfig c;
  // The root is exactly the RMH run; the tree gets what is left of the limit.
  c.cg = make_rmh_config(s, seed).cg;
  c.node_budget = c.cg.budget;
  c.node_budget.max_iterations = s.bap_node_iterations;
  c.max_seconds = s.time_limit;
  c.max_total_seconds = s.time_limit;
  c.max_nodes = s.bap_max_nodes;
  return c;
}

FleetPlan solve(Method method, const HorizonInstance& instance, const SolveSettings& settings,
                std::uint64_t seed, BapStats* bap_stats) {
  const auto start = std::chrono::steady_clock::now();
  FleetPlan plan;
  switch (method) {
    case Method::kUF:
      plan = run_uf(instance, make_fsm_config(settings), seed, settings.parallelism);
      break;
    case Method::kSA: {
      SaConfig c;
      c.m = std::clamp(settings.sa_m, 1, static_cast<int>(instance.num_days()));
      c.rmh = make_rmh_config(settings, seed);
      c.day_fsm = make_fsm_config(settings);
      plan = run_sa(instance, c, seed);
      break;
    }
    case Method::kRMH:
      plan = run_rmh(instance, make_rmh_config(settings, seed));
      break;
    case Method::kBAP:
      plan = run_bap(instance, make_bap_config(settings, seed), bap_stats);
      break;
    case Method::kLB:
      throw std::invalid_argument("the lower bound is not a plan; use lower_bound()");
  }
  plan.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return plan;
}

LowerBound lower_bound(const HorizonInstance& instance, const SolveSettings& settings,
                       std::uint64_t seed) {
  return approximate_lower_bound(instance, make_fsm_config(settings), settings.lb_runs, seed,
                                 settings.parallelism);
}

std::optional<Method> parse_method(const std::string& name) {
  std::string n = name;
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  if (n == "uf") return Method::kUF;
  if (n == "sa") return Method::kSA;
  if (n == "rmh") return Method::kRMH;
  if (n == "bap") return Method::kBAP;
  return std::nullopt;
}

}  // namespace fleetmix
