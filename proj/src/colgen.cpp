#include "fleetmix/colgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "fleetmix/log.hpp"
#include "parallel.hpp"

namespace fleetmix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRcTol = 1e-6;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string to_string(CgStop stop) {
  switch (stop) {
    case CgStop::kConverged: return "converged";
    case CgStop::kStagnation: return "stagnation";
    case CgStop::kGap: return "gap";
    case CgStop::kIterations: return "iterations";
    case CgStop::kTime: return "time";
    case CgStop::kInfeasible: return "infeasible";
  }
  return "unknown";
}

bool CgState::fleet_integral(double tol) const {
  for (double v : fleet_lp)
    if (std::abs(v - std::round(v)) > tol) return false;
  return true;
}

// ----- selection -----

std::vector<DayScoreRecord> build_score_records(const ColumnStore& store) {
  std::vector<DayScoreRecord> records(store.num_days());
  for (const auto& c : store.columns()) {
    auto& r = records[static_cast<std::size_t>(c.day)];
    r.q.push_back(c.duals_at_creation.empty() ? std::vector<double>(c.fleet.size(), 0.0)
                                              : c.duals_at_creation);
    r.fleets.push_back(c.fleet);
  }
  return records;
}

double score_day(int day, const Duals& duals, const DayScoreRecord& record) {
  if (duals.all_zero(day)) return -1.0;
  const auto& q = duals.q[static_cast<std::size_t>(day)];
  const int n = record.num_options();
  if (n == 0) return -1.0;
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto& fleet = record.fleets[static_cast<std::size_t>(j)];
    const auto& qj = record.q[static_cast<std::size_t>(j)];
    const double size = fleet.total();
    if (size <= 0) continue;
    for (std::size_t t = 0; t < q.size(); ++t) {
      const double diff = q[t] - qj[t];
      s += diff * diff * fleet[t] / size;
    }
  }
  return s / n;
}

std::vector<int> select_subproblems(const std::vector<double>& scores, int k) {
  std::vector<int> days;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] > 0.0) days.push_back(static_cast<int>(i));
  std::stable_sort(days.begin(), days.end(), [&](int a, int b) {
    return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
  });
  if (static_cast<int>(days.size()) > k) days.resize(static_cast<std::size_t>(std::max(0, k)));
  return days;
}

// ----- covering -----

namespace {

class CoveringSearch {
 public:
  CoveringSearch(const std::vector<std::vector<double>>& capacity, const std::vector<double>& cost,
                 const std::vector<double>& demand, std::vector<int> limit)
      : cap_(capacity), cost_(cost), limit_(std::move(limit)), nt_(cost.size()), nc_(demand.size()) {
    current_ = FleetVector(nt_);
    deficit_ = demand;
  }

  CoveringResult run() {
    dfs(0, 0.0);
    CoveringResult r;
    r.feasible = found_;
    r.value = best_;
    r.fleet = best_fleet_;
    return r;
  }

 private:
  bool covered() const {
    for (double d : deficit_)
      if (d > 1e-9) return false;
    return true;
  }

  // Cheapest possible completion, commodity by commodity.
  double completion_bound(std::size_t t0) const {
    double lb = 0.0;
    for (std::size_t c = 0; c < nc_; ++c) {
      if (deficit_[c] <= 1e-9) continue;
      double best_ratio = kInf;
      double reach = 0.0;
      for (std::size_t t = t0; t < nt_; ++t) {
        if (cap_[t][c] <= 0.0 || limit_[t] <= 0) continue;
        best_ratio = std::min(best_ratio, cost_[t] / cap_[t][c]);
        reach += cap_[t][c] * limit_[t];
      }
      if (reach < deficit_[c] - 1e-9) return kInf;
      lb = std::max(lb, deficit_[c] * best_ratio);
    }
    return lb;
  }

  void dfs(std::size_t t, double cost) {
    if (covered()) {
      if (cost < best_ - 1e-12) {
        best_ = cost;
        best_fleet_ = current_;
        found_ = true;
      }
      return;
    }
    if (t == nt_) return;
    const double lb = completion_bound(t);
    if (!std::isfinite(lb) || cost + lb >= best_ - 1e-12) return;
    // Needed count of type t to close every deficit it can touch.
    int need = 0;
    for (std::size_t c = 0; c < nc_; ++c)
      if (cap_[t][c] > 0.0 && deficit_[c] > 1e-9)
        need = std::max(need, static_cast<int>(std::ceil(deficit_[c] / cap_[t][c] - 1e-9)));
    const int top = std::min(need, limit_[t]);
    for (int k = top; k >= 0; --k) {
      current_[t] = k;
      for (std::size_t c = 0; c < nc_; ++c) deficit_[c] -= cap_[t][c] * k;
      dfs(t + 1, cost + cost_[t] * k);
      for (std::size_t c = 0; c < nc_; ++c) deficit_[c] += cap_[t][c] * k;
    }
    current_[t] = 0;
  }

  const std::vector<std::vector<double>>& cap_;
  const std::vector<double>& cost_;
  std::vector<int> limit_;
  std::size_t nt_;
  std::size_t nc_;
  FleetVector current_;
  std::vector<double> deficit_;
  double best_ = kInf;
  FleetVector best_fleet_;
  bool found_ = false;
};

}  // namespace

CoveringResult solve_covering(const std::vector<std::vector<double>>& capacity,
                              const std::vector<double>& cost, const std::vector<double>& demand,
                              const std::vector<int>* upper) {
  const std::size_t nt = cost.size();
  if (capacity.size() != nt) throw std::invalid_argument("one capacity row per type expected");
  std::vector<int> limit(nt, 0);
  for (std::size_t t = 0; t < nt; ++t) {
    if (capacity[t].size() != demand.size()) throw std::invalid_argument("capacity/demand size mismatch");
    int u = 0;
    for (std::size_t c = 0; c < demand.size(); ++c)
      if (capacity[t][c] > 0.0 && demand[c] > 0.0)
        u = std::max(u, static_cast<int>(std::ceil(demand[c] / capacity[t][c] - 1e-9)));
    if (upper) u = std::min(u, (*upper)[t]);
    limit[t] = u;
  }
  CoveringSearch search(capacity, cost, demand, std::move(limit));
  return search.run();
}

double covering_bound(const HorizonInstance& instance, int day, const Duals& duals, double r0,
                      const FleetBounds* bounds) {
  const auto i = static_cast<std::size_t>(day);
  // Zero prices: 0 whenever the init column is priced in (p_i <= r_i0 then);
  // at a node that masks it p_i can exceed r_i0.
  if (duals.all_zero(day)) return std::min(0.0, r0 - duals.p[i]);
  const DayInstance& d = instance.days[i];
  std::vector<std::vector<double>> cap;
  for (const auto& vt : instance.vehicle_types) cap.push_back(vt.capacity);
  std::vector<double> td(instance.commodities.size());
  for (std::size_t c = 0; c < td.size(); ++c) td[c] = total_demand(d, static_cast<int>(c));
  auto res = solve_covering(cap, duals.q[i], td, bounds ? &bounds->upper : nullptr);
  if (!res.feasible) return kInf;
  return r0 + res.value - duals.p[i];
}

double lagrangian_bound(double z_rmp, const std::vector<double>& day_bounds) {
  double b = z_rmp;
  for (double v : day_bounds) b += std::min(0.0, v);
  return b;
}

// ----- context -----

CgContext::CgContext(const HorizonInstance& instance, CgConfig config)
    : instance_(&instance),
      config_(std::move(config)),
      store_(instance.num_days(), instance.num_types()),
      r0_(instance.num_days(), 0.0) {}

CgContext::~CgContext() = default;

int CgContext::parallelism() const {
  return config_.parallelism > 0 ? config_.parallelism : detail::default_parallelism();
}

void CgContext::initialize() {
  const int nd = static_cast<int>(instance_->num_days());
  const bool exact = config_.fsm.mode == PricingMode::kExact;
  if (exact) exact_.resize(static_cast<std::size_t>(nd));
  std::vector<std::optional<FleetOption>> found(static_cast<std::size_t>(nd));
  std::vector<std::vector<Route>> sinks(static_cast<std::size_t>(nd));
  detail::parallel_for(nd, parallelism(), [&](int i) {
    const auto ii = static_cast<std::size_t>(i);
    const DayInstance& day = instance_->days[ii];
    auto problem = PricedFleetProblem::unpriced(day, instance_->vehicle_types);
    if (exact) {
      exact_[ii] = std::make_unique<ExactFsmSolver>(day, instance_->vehicle_types);
      found[ii] = exact_[ii]->solve(problem);
    } else {
      found[ii] = solve_heuristic(problem, config_.fsm.budget, derive_seed(config_.seed, 0x1417, ii),
                                  nullptr, &sinks[ii]);
    }
  });
  for (int i = 0; i < nd; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    if (!found[ii])
      throw InstanceError("day " + std::to_string(instance_->days[ii].id) +
                          " cannot be served even with an unlimited fleet");
    r0_[ii] = found[ii]->routing_cost;
    store_.add_routes(i, sinks[ii]);
    store_.add_or_replace(make_column(i, *found[ii], ColumnOrigin::kInit,
                                      std::vector<double>(instance_->num_types(), 0.0)));
  }
  FLEET_INFO("initialized " << nd << " days, sum r0 = " << std::accumulate(r0_.begin(), r0_.end(), 0.0));
}

std::optional<FleetOption> CgContext::price_day(int day, const std::vector<double>& prices,
                                                const FleetBounds& bounds, std::uint64_t seed,
                                                std::vector<Route>* route_sink,
                                                std::vector<FleetOption>* option_sink) {
  const auto i = static_cast<std::size_t>(day);
  auto problem = PricedFleetProblem::priced(instance_->days[i], instance_->vehicle_types, prices);
  problem.upper = bounds.upper;
  if (config_.fsm.mode == PricingMode::kExact) {
    if (exact_.size() <= i || !exact_[i])
      throw std::logic_error("exact pricing requested before initialize()");
    return exact_[i]->solve(problem);
  }
  return solve_heuristic(problem, config_.fsm.budget, seed, nullptr, route_sink, option_sink);
}

// ----- column generation -----

namespace {

bool has_column(const ColumnStore& store, const FleetBounds& bounds, int day) {
  for (const auto& c : store.columns())
    if (c.day == day && bounds.admits_column(c.fleet)) return true;
  return false;
}

}  // namespace

CgState run_cg(CgContext& ctx, const FleetBounds& bounds, const CgBudget& budget) {
  const auto start = std::chrono::steady_clock::now();
  const HorizonInstance& inst = ctx.instance();
  const CgConfig& cfg = ctx.config();
  ColumnStore& store = ctx.store();
  const int nd = static_cast<int>(inst.num_days());
  const std::size_t nt = inst.num_types();
  const int k = ctx.parallelism();
  const bool exact = cfg.fsm.mode == PricingMode::kExact;

  CgState st;
  st.day_bounds.assign(static_cast<std::size_t>(nd), 0.0);

  // Days without an admitted column get one priced at zero cost first.
  for (int i = 0; i < nd; ++i) {
    if (has_column(store, bounds, i)) continue;
    std::vector<Route> sink;
    auto opt = ctx.price_day(i, std::vector<double>(nt, 0.0), bounds,
                             derive_seed(cfg.seed, ctx.next_round(), static_cast<std::uint64_t>(i)), &sink);
    store.add_routes(i, sink);
    if (!opt) {
      st.infeasible = true;
      st.stop = CgStop::kInfeasible;
      st.elapsed = seconds_since(start);
      return st;
    }
    store.add_or_replace(make_column(i, *opt, ColumnOrigin::kRepair, std::vector<double>(nt, 0.0)));
  }

  std::vector<char> priced(static_cast<std::size_t>(nd), 0);
  std::vector<char> quick_tried(static_cast<std::size_t>(nd), 0);
  std::vector<double> rc_star(static_cast<std::size_t>(nd), 0.0);
  bool need_solve = true;
  long zbar_version = -1;

  auto solve_master = [&]() -> bool {
    RestrictedMaster m = build_restricted(inst, store, bounds, false);
    lp::Solution sol = lp::solve_lp(m.lp);
    if (sol.status != lp::Status::kOptimal) return false;
    Duals duals = extract_duals(m, sol);
    if (cfg.solve_dual_directly) {
      if (auto direct = solve_restricted_dual(inst, store, bounds)) duals = std::move(direct->first);
    }
    if (!st.z_trace.empty() && sol.objective > st.z_trace.back() + 1e-6 * (1.0 + std::abs(st.z_trace.back())))
      ++st.z_increases;
    st.z_trace.push_back(sol.objective);
    st.z_rmp = sol.objective;
    st.duals = std::move(duals);
    st.fleet_lp.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) st.fleet_lp[t] = sol.primal[static_cast<std::size_t>(m.fleet_var[t])];
    if (ctx.observer()) ctx.observer()(MasterSnapshot{m, sol, st.duals, store, bounds, st.iteration});
    std::fill(priced.begin(), priced.end(), 0);
    std::fill(quick_tried.begin(), quick_tried.end(), 0);
    return true;
  };

  for (;;) {
    if (need_solve) {
      if (!solve_master()) {
        st.infeasible = true;
        st.stop = CgStop::kInfeasible;
        break;
      }
      need_solve = false;
    }
    if (st.iteration >= budget.max_iterations) {
      st.stop = CgStop::kIterations;
      break;
    }
    if (seconds_since(start) >= budget.max_seconds) {
      st.stop = CgStop::kTime;
      break;
    }
    ++st.iteration;
    IterationRecord rec;
    rec.iteration = st.iteration;
    rec.z_rmp = st.z_rmp;
    const Duals duals = st.duals;

    auto insert = [&](Column col) {
      const double rc = reduced_cost(col, duals);
      const InsertResult r = store.add_or_replace(std::move(col));
      if (r == InsertResult::kDiscarded) return;
      ++rec.added;
      if (rc < -kRcTol) ++rec.negative;
    };

    // Recombine pooled routes first.
    if (cfg.quick_cg) {
      for (int i = 0; i < nd; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        if (quick_tried[ii] || duals.all_zero(i)) continue;
        quick_tried[ii] = 1;
        auto q = quick_cg(inst, i, store.pool(), duals, bounds, cfg.quick_cg_node_limit);
        if (q.infeasible) ++st.quick_cg_infeasible;
        if (q.column) {
          ++rec.quick_cg_columns;
          insert(std::move(*q.column));
        }
      }
    }

    // Sub-problem selection.
    auto records = build_score_records(store);
    std::vector<double> scores(static_cast<std::size_t>(nd), -1.0);
    for (int i = 0; i < nd; ++i)
      if (!priced[static_cast<std::size_t>(i)]) scores[static_cast<std::size_t>(i)] = score_day(i, duals, records[static_cast<std::size_t>(i)]);
    std::vector<int> chosen = select_subproblems(scores, k);
    // Days the score skips can still hold improving columns: with zero prices
    // when the cheapest routing is masked, and in exact mode whenever the
    // covering bound does not rule it out.
    for (int i = 0; i < nd && static_cast<int>(chosen.size()) < k; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      if (priced[ii] || scores[ii] > 0.0) continue;
      bool open;
      if (duals.all_zero(i)) open = duals.p[ii] > ctx.r0(i) + kRcTol;
      else open = exact && covering_bound(inst, i, duals, ctx.r0(i), &bounds) < -kRcTol;
      if (open) chosen.push_back(i);
    }

    if (chosen.empty() && rec.added == 0) {
      st.stop = CgStop::kConverged;
      st.history.push_back(rec);
      break;
    }

    // Pricing, in parallel; results are applied in day order.
    std::sort(chosen.begin(), chosen.end());
    const std::uint64_t round = ctx.next_round();
    std::vector<std::optional<FleetOption>> results(chosen.size());
    std::vector<std::vector<Route>> sinks(chosen.size());
    std::vector<std::vector<FleetOption>> extras(chosen.size());
    detail::parallel_for(static_cast<int>(chosen.size()), k, [&](int s) {
      const auto ss = static_cast<std::size_t>(s);
      const int i = chosen[ss];
      results[ss] = ctx.price_day(i, duals.q[static_cast<std::size_t>(i)], bounds,
                                  derive_seed(cfg.seed, round, static_cast<std::uint64_t>(i)),
                                  &sinks[ss], cfg.multiple_columns ? &extras[ss] : nullptr);
    });
    std::vector<char> in_s(static_cast<std::size_t>(nd), 0);
    rec.min_reduced_cost = kInf;
    for (std::size_t s = 0; s < chosen.size(); ++s) {
      const int i = chosen[s];
      const auto ii = static_cast<std::size_t>(i);
      priced[ii] = 1;
      store.add_routes(i, sinks[s]);
      if (!results[s]) {
        if (exact) {
          // No option at all within the bounds: the node admits no solution.
          st.infeasible = true;
        }
        ++st.pricing_failures;
        continue;
      }
      in_s[ii] = 1;
      rec.priced_days.push_back(i);
      const double rc = results[s]->priced_cost - duals.p[ii];
      rc_star[ii] = rc;
      rec.min_reduced_cost = std::min(rec.min_reduced_cost, rc);
      insert(make_column(i, *results[s], ColumnOrigin::kPricing, duals.q[ii]));
      for (const auto& o : extras[s])
        if (o.priced_cost - duals.p[ii] < -kRcTol)
          insert(make_column(i, o, ColumnOrigin::kPricing, duals.q[ii]));
    }
    if (rec.priced_days.empty()) rec.min_reduced_cost = 0.0;
    if (st.infeasible) {
      st.stop = CgStop::kInfeasible;
      st.history.push_back(rec);
      break;
    }

    // Lagrangian bound.
    st.priced.clear();
    for (int i = 0; i < nd; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      double cov;
      if (duals.all_zero(i)) cov = std::min(0.0, ctx.r0(i) - duals.p[ii]);
      else cov = covering_bound(inst, i, duals, ctx.r0(i), &bounds);
      if (in_s[ii]) {
        st.priced.push_back(i);
        st.day_bounds[ii] = exact ? rc_star[ii] : std::max(rc_star[ii], cov);
      } else {
        st.day_bounds[ii] = cov;
      }
    }
    rec.bound = lagrangian_bound(st.z_rmp, st.day_bounds);
    st.best_bound = std::max(st.best_bound, rec.bound);
    st.history.push_back(rec);
    FLEET_DEBUG("cg it " << st.iteration << " z=" << st.z_rmp << " bound=" << rec.bound
                         << " added=" << rec.added << " negative=" << rec.negative
                         << " quick=" << rec.quick_cg_columns << " columns=" << store.size());

    if (rec.negative > 0) st.stagnation = 0;
    else ++st.stagnation;
    if (rec.added > 0) need_solve = true;

    // Early termination on the Lagrangian gap; the integer value is only
    // computed once the LP value itself is close enough.
    if (budget.gap_eps > 0.0) {
      const double scale = std::max(1.0, std::abs(st.best_bound));
      if ((st.z_rmp - st.best_bound) / scale < budget.gap_eps) {
        if (zbar_version != store.version()) {
          auto mi = solve_master_integer(inst, store, bounds);
          st.z_bar = mi.feasible ? std::optional<double>(mi.value) : std::nullopt;
          zbar_version = store.version();
        }
        if (st.z_bar && (*st.z_bar - st.best_bound) / scale < budget.gap_eps) {
          st.stop = CgStop::kGap;
          break;
        }
      }
    }
    if (budget.stagnation_limit > 0 && st.stagnation >= budget.stagnation_limit) {
      st.stop = CgStop::kStagnation;
      break;
    }
  }
  // Leave the state consistent with the final store.
  if (need_solve && !st.infeasible) solve_master();
  st.elapsed = seconds_since(start);
  FLEET_INFO("cg stop=" << to_string(st.stop) << " iterations=" << st.iteration << " z=" << st.z_rmp
                        << " bound=" << st.best_bound << " columns=" << store.size());
  return st;
}

std::optional<std::vector<FleetOption>> evaluate_fleet(const HorizonInstance& instance,
                                                       const FleetVector& fleet,
                                                       const FsmConfig& fsm, std::uint64_t seed,
                                                       int parallelism) {
  const int nd = static_cast<int>(instance.num_days());
  std::vector<std::optional<FleetOption>> found(static_cast<std::size_t>(nd));
  detail::parallel_for(nd, parallelism > 0 ? parallelism : detail::default_parallelism(), [&](int i) {
    const auto ii = static_cast<std::size_t>(i);
    auto problem = PricedFleetProblem::unpriced(instance.days[ii], instance.vehicle_types);
    for (std::size_t t = 0; t < fleet.size(); ++t) problem.upper[t] = fleet[t];
    if (fsm.mode == PricingMode::kExact) found[ii] = solve_exact(problem);
    else found[ii] = solve_heuristic(problem, fsm.budget, derive_seed(seed, 0xf1ee7, ii));
  });
  std::vector<FleetOption> out;
  for (auto& f : found) {
    if (!f) return std::nullopt;
    out.push_back(std::move(*f));
  }
  return out;
}

FleetPlan plan_from_master(Method method, const HorizonInstance& instance, const ColumnStore& store,
                           const MasterIntegerResult& result, std::uint64_t seed) {
  if (!result.feasible) return infeasible_plan(method, instance, seed);
  std::vector<DayChoice> per_day;
  for (std::size_t i = 0; i < instance.num_days(); ++i) {
    const Column& c = store.columns()[static_cast<std::size_t>(result.chosen[i])];
    per_day.push_back(DayChoice{instance.days[i].id, c.fleet, c.routing_cost, c.routes});
  }
  return make_plan(method, instance, result.fleet, std::move(per_day), seed);
}

FleetPlan run_rmh(const HorizonInstance& instance, const RmhConfig& config, CgState* state_out,
                  const MasterObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  CgContext ctx(instance, config.cg);
  if (observer) ctx.set_observer(observer);
  ctx.initialize();
  const auto root = FleetBounds::unbounded(instance.num_types());
  CgState st = run_cg(ctx, root, config.cg.budget);
  auto mi = solve_master_integer(instance, ctx.store(), root, config.mip);
  FleetPlan plan = plan_from_master(Method::kRMH, instance, ctx.store(), mi, config.cg.seed);
  plan.wall_time = seconds_since(start);
  if (state_out) *state_out = std::move(st);
  return plan;
}

}  // namespace fleetmix
