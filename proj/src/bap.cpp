#include "fleetmix/bap.hpp"

#include <chrono>
#include <cmath>

#include "fleetmix/log.hpp"

namespace fleetmix {

std::string to_string(NodeStatus status) {
  switch (status) {
    case NodeStatus::kOpen: return "open";
    case NodeStatus::kSolved: return "solved";
    case NodeStatus::kInfeasible: return "infeasible";
    case NodeStatus::kTerminated: return "terminated";
    case NodeStatus::kPruned: return "pruned";
  }
  return "unknown";
}

std::pair<BapNode, BapNode> branch(const BapNode& node, int type, double value, int first_id) {
  const auto t = static_cast<std::size_t>(type);
  if (std::abs(value - std::round(value)) <= 1e-6)
    throw std::invalid_argument("cannot branch on integral value " + std::to_string(value));
  const int fl = static_cast<int>(std::floor(value));
  BapNode left, right;
  left.id = first_id;
  right.id = first_id + 1;
  left.parent = right.parent = node.id;
  left.bounds = right.bounds = node.bounds;
  left.bounds.upper[t] = std::min(left.bounds.upper[t], fl);
  right.bounds.lower[t] = std::max(right.bounds.lower[t], fl + 1);
  left.lower = right.lower = node.z;
  return {std::move(left), std::move(right)};
}

std::optional<std::size_t> select_node(const std::vector<BapNode>& open,
                                       const std::optional<FleetVector>& incumbent) {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < open.size(); ++k) {
    const BapNode& n = open[k];
    if (incumbent && n.bounds.contains(*incumbent)) continue;
    if (!best || n.z_bar < open[*best].z_bar ||
        (n.z_bar == open[*best].z_bar && n.id < open[*best].id))
      best = k;
  }
  return best;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

class BranchAndPrice {
 public:
  BranchAndPrice(const HorizonInstance& instance, const BapConfig& config, BapStats& stats)
      : inst_(instance), cfg_(config), stats_(stats), ctx_(instance, config.cg) {}

  FleetPlan run(const MasterObserver& observer) {
    const auto start = std::chrono::steady_clock::now();
    if (observer) ctx_.set_observer(observer);
    ctx_.initialize();

    BapNode root;
    root.id = next_id_++;
    root.bounds = FleetBounds::unbounded(inst_.num_types());
    CgState st = run_cg(ctx_, root.bounds, cfg_.cg.budget);
    stats_.root_z = st.z_rmp;
    auto first = solve_master_integer(inst_, ctx_.store(), root.bounds, cfg_.mip);
    offer(first);
    stats_.root_integer = first.value;
    stats_.root_plan = plan_from_master(Method::kRMH, inst_, ctx_.store(), first, cfg_.cg.seed);
    stats_.root_plan->wall_time = seconds_since(start);
    const auto tree_start = std::chrono::steady_clock::now();
    process(root, st);

    while (!open_.empty()) {
      if (stats_.nodes_solved >= cfg_.max_nodes || seconds_since(tree_start) >= cfg_.max_seconds) break;
      if (cfg_.max_total_seconds > 0 && seconds_since(start) >= cfg_.max_total_seconds) break;
      prune_open();
      if (open_.empty()) break;
      std::optional<FleetVector> inc;
      if (best_.feasible) inc = best_.fleet;
      auto pick = select_node(open_, inc);
      if (!pick) {
        // Every open box still contains the incumbent fleet; keep refining
        // the one with the weakest bound so the search stays exact.
        ++stats_.refinements;
        pick = 0;
        for (std::size_t k = 1; k < open_.size(); ++k)
          if (open_[k].lower < open_[*pick].lower ||
              (open_[k].lower == open_[*pick].lower && open_[k].id < open_[*pick].id))
            pick = k;
        FLEET_DEBUG("bap: no open node forbids the incumbent, refining node " << open_[*pick].id);
      }
      BapNode node = std::move(open_[*pick]);
      open_.erase(open_.begin() + static_cast<std::ptrdiff_t>(*pick));
      CgState ns = run_cg(ctx_, node.bounds, cfg_.node_budget);
      process(node, ns);
    }
    prune_open();
    stats_.exhausted = open_.empty();

    FleetPlan plan = plan_from_master(Method::kBAP, inst_, ctx_.store(), best_, cfg_.cg.seed);
    plan.wall_time = seconds_since(start);
    FLEET_INFO("bap nodes=" << stats_.nodes_solved << " incumbent=" << best_.value
                            << " exhausted=" << stats_.exhausted);
    return plan;
  }

 private:
  bool beats_incumbent(double v) const {
    return !best_.feasible || v < best_.value - 1e-6 * std::max(1.0, std::abs(best_.value));
  }

  void offer(const MasterIntegerResult& r) {
    if (!r.feasible || !beats_incumbent(r.value)) return;
    if (!stats_.incumbent_trace.empty() && r.value > stats_.incumbent_trace.back()) ++stats_.incumbent_increases;
    best_ = r;
    stats_.incumbent_trace.push_back(r.value);
  }

  void prune_open() {
    std::vector<BapNode> keep;
    for (auto& n : open_) {
      if (beats_incumbent(n.lower)) keep.push_back(std::move(n));
      else ++stats_.nodes_pruned;
    }
    open_ = std::move(keep);
  }

  double estimate(const FleetBounds& box) {
    MasterMipOptions opt;
    opt.node_limit = cfg_.child_estimate_nodes;
    auto r = solve_master_integer(inst_, ctx_.store(), box, opt);
    offer(r);
    return r.feasible ? r.value : std::numeric_limits<double>::infinity();
  }

  void push_child(BapNode child) {
    child.z_bar = estimate(child.bounds);
    open_.push_back(std::move(child));
  }

  void process(BapNode& node, const CgState& st) {
    ++stats_.nodes_solved;
    stats_.z_increases += st.z_increases;
    if (st.infeasible) {
      node.status = NodeStatus::kInfeasible;
      ++stats_.nodes_infeasible;
      return;
    }
    stats_.node_bounds.emplace_back(node.bounds, st.best_bound);
    node.z = st.z_rmp;
    node.fleet_lp = st.fleet_lp;
    MasterMipOptions opt = cfg_.mip;
    auto mi = solve_master_integer(inst_, ctx_.store(), node.bounds, opt);
    offer(mi);
    node.z_bar = mi.feasible ? mi.value : std::numeric_limits<double>::infinity();
    if (!beats_incumbent(node.z)) {
      node.status = NodeStatus::kPruned;
      ++stats_.nodes_pruned;
      return;
    }
    node.status = st.stop == CgStop::kGap ? NodeStatus::kTerminated : NodeStatus::kSolved;

    int type = -1;
    double most = 1e-6;
    for (std::size_t t = 0; t < st.fleet_lp.size(); ++t) {
      const double frac = std::abs(st.fleet_lp[t] - std::round(st.fleet_lp[t]));
      if (frac > most) {
        most = frac;
        type = static_cast<int>(t);
      }
    }
    if (type >= 0) {
      auto [left, right] = branch(node, type, st.fleet_lp[static_cast<std::size_t>(type)], next_id_);
      next_id_ += 2;
      push_child(std::move(left));
      push_child(std::move(right));
      return;
    }

    // Integral fleet with fractional days: resolve the point itself by
    // routing each day within it, then search the rest of the box.
    ++stats_.integral_nodes;
    FleetVector point(inst_.num_types());
    for (std::size_t t = 0; t < point.size(); ++t) point[t] = static_cast<int>(std::lround(st.fleet_lp[t]));
    resolve_point(point);
    if (!beats_incumbent(node.z)) return;
    for (auto& box : exclude_point(node.bounds, point)) {
      BapNode child;
      child.id = next_id_++;
      child.parent = node.id;
      child.bounds = std::move(box);
      child.lower = node.z;
      push_child(std::move(child));
    }
  }

  void resolve_point(const FleetVector& point) {
    FleetBounds box;
    box.lower.assign(point.size(), 0);
    box.upper = point.counts();
    const std::size_t nd = inst_.num_days();
    const std::uint64_t round = ctx_.next_round();
    std::vector<double> zero(point.size(), 0.0);
    for (std::size_t i = 0; i < nd; ++i) {
      std::vector<Route> sink;
      auto opt = ctx_.price_day(static_cast<int>(i), zero, box, derive_seed(cfg_.cg.seed, round, i), &sink);
      ctx_.store().add_routes(static_cast<int>(i), sink);
      if (opt)
        ctx_.store().add_or_replace(make_column(static_cast<int>(i), *opt, ColumnOrigin::kRepair, zero));
    }
    offer(evaluate_fleet_in_store(inst_, ctx_.store(), point));
  }

  const HorizonInstance& inst_;
  const BapConfig& cfg_;
  BapStats& stats_;
  CgContext ctx_;
  std::vector<BapNode> open_;
  MasterIntegerResult best_;
  int next_id_ = 0;
};

}  // namespace

FleetPlan run_bap(const HorizonInstance& instance, const BapConfig& config, BapStats* stats,
                  const MasterObserver& observer) {
  BapStats local;
  BapStats& s = stats ? *stats : local;
  s = BapStats{};
  BranchAndPrice bp(instance, config, s);
  return bp.run(observer);
}

}  // namespace fleetmix
