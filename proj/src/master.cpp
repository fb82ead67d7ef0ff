#include "fleetmix/master.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <sstream>

#include "json.hpp"

namespace fleetmix {

std::string to_string(ColumnOrigin origin) {
  switch (origin) {
    case ColumnOrigin::kInit: return "init";
    case ColumnOrigin::kPricing: return "pricing";
    case ColumnOrigin::kQuickCg: return "quick_cg";
    case ColumnOrigin::kRepair: return "repair";
  }
  return "unknown";
}

std::string to_string(InsertResult result) {
  switch (result) {
    case InsertResult::kAdded: return "added";
    case InsertResult::kReplaced: return "replaced";
    case InsertResult::kDiscarded: return "discarded";
  }
  return "unknown";
}

Column make_column(int day, const FleetOption& option, ColumnOrigin origin,
                   std::vector<double> duals_at_creation) {
  Column c;
  c.day = day;
  c.fleet = option.fleet;
  c.routing_cost = option.routing_cost;
  c.routes = option.routes;
  c.origin = origin;
  c.duals_at_creation = std::move(duals_at_creation);
  return c;
}

bool Duals::all_zero(int day, double tol) const {
  for (double v : q[static_cast<std::size_t>(day)])
    if (v > tol) return false;
  return true;
}

double reduced_cost(const Column& column, const Duals& duals) {
  const auto i = static_cast<std::size_t>(column.day);
  double rc = column.routing_cost - duals.p[i];
  for (std::size_t t = 0; t < column.fleet.size(); ++t) rc += column.fleet[t] * duals.q[i][t];
  return rc;
}

// ----- bounds -----

FleetBounds FleetBounds::unbounded(std::size_t num_types) {
  return FleetBounds{std::vector<int>(num_types, 0), std::vector<int>(num_types, kUnbounded)};
}

bool FleetBounds::contains(const FleetVector& fleet) const {
  for (std::size_t t = 0; t < fleet.size(); ++t)
    if (fleet[t] < lower[t] || fleet[t] > upper[t]) return false;
  return true;
}

bool FleetBounds::admits_column(const FleetVector& fleet) const {
  for (std::size_t t = 0; t < fleet.size(); ++t)
    if (fleet[t] > upper[t]) return false;
  return true;
}

bool FleetBounds::consistent() const {
  if (lower.size() != upper.size()) return false;
  for (std::size_t t = 0; t < lower.size(); ++t)
    if (lower[t] < 0 || lower[t] > upper[t]) return false;
  return true;
}

std::string FleetBounds::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t t = 0; t < lower.size(); ++t) {
    if (t) os << ", ";
    os << lower[t] << "..";
    if (upper[t] == kUnbounded) os << "inf";
    else os << upper[t];
  }
  os << ']';
  return os.str();
}

// ----- route pool -----

bool RoutePool::add(int day, const Route& route) {
  auto stops = route.stops;
  std::sort(stops.begin(), stops.end());
  auto& m = by_day_.at(static_cast<std::size_t>(day));
  Key key{route.vehicle_type, std::move(stops)};
  auto it = m.find(key);
  if (it == m.end()) {
    m.emplace(std::move(key), route);
    return true;
  }
  if (route.cost < it->second.cost - 1e-6) {
    it->second = route;
    return true;
  }
  return false;
}

std::vector<const Route*> RoutePool::routes(int day) const {
  std::vector<const Route*> out;
  const auto& m = by_day_.at(static_cast<std::size_t>(day));
  out.reserve(m.size());
  for (const auto& [key, r] : m) out.push_back(&r);
  return out;
}

std::size_t RoutePool::total_size() const {
  std::size_t n = 0;
  for (const auto& m : by_day_) n += m.size();
  return n;
}

// ----- column store -----

ColumnStore::ColumnStore(std::size_t num_days, std::size_t num_types)
    : num_days_(num_days), num_types_(num_types), pool_(num_days) {}

InsertResult ColumnStore::add_or_replace(Column column) {
  std::lock_guard lock(mutex_);
  if (column.day < 0 || static_cast<std::size_t>(column.day) >= num_days_ ||
      column.fleet.size() != num_types_)
    throw MasterError("column dimensions do not match the store");
  for (const auto& r : column.routes) pool_.add(column.day, r);
  auto key = std::make_pair(column.day, column.fleet);
  auto it = index_.find(key);
  if (it == index_.end()) {
    index_.emplace(std::move(key), static_cast<int>(columns_.size()));
    columns_.push_back(std::move(column));
    ++version_;
    return InsertResult::kAdded;
  }
  Column& existing = columns_[static_cast<std::size_t>(it->second)];
  if (column.routing_cost < existing.routing_cost - 1e-9) {
    existing = std::move(column);
    ++version_;
    return InsertResult::kReplaced;
  }
  return InsertResult::kDiscarded;
}

void ColumnStore::add_routes(int day, const std::vector<Route>& routes) {
  std::lock_guard lock(mutex_);
  for (const auto& r : routes) pool_.add(day, r);
}

std::vector<int> ColumnStore::columns_of_day(int day) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < columns_.size(); ++k)
    if (columns_[k].day == day) out.push_back(static_cast<int>(k));
  return out;
}

std::string ColumnStore::dump_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : columns_)
    arr.push_back({{"day", c.day},
                   {"fleet", c.fleet.counts()},
                   {"r", c.routing_cost},
                   {"origin", to_string(c.origin)}});
  return arr.dump(1);
}

// ----- restricted master -----

RestrictedMaster build_restricted(const HorizonInstance& instance, const ColumnStore& store,
                                  const FleetBounds& bounds, bool integer) {
  const int nd = static_cast<int>(instance.num_days());
  const int nt = static_cast<int>(instance.num_types());
  if (static_cast<int>(bounds.lower.size()) != nt || !bounds.consistent())
    throw MasterError("inconsistent fleet bounds " + bounds.to_string());
  RestrictedMaster m;
  m.convexity_row.resize(static_cast<std::size_t>(nd));
  m.linking_row.assign(static_cast<std::size_t>(nd), std::vector<int>(static_cast<std::size_t>(nt)));
  for (int i = 0; i < nd; ++i) {
    m.convexity_row[static_cast<std::size_t>(i)] = m.lp.add_row(lp::RowSense::kEq, 1.0);
    for (int t = 0; t < nt; ++t)
      m.linking_row[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
          m.lp.add_row(lp::RowSense::kLe, 0.0);
  }
  for (int t = 0; t < nt; ++t) {
    const auto tt = static_cast<std::size_t>(t);
    const double up = bounds.upper[tt] == kUnbounded ? lp::kInfinity : bounds.upper[tt];
    int v = m.lp.add_variable(instance.vehicle_types[tt].fixed_cost, bounds.lower[tt], up, integer,
                              "F" + std::to_string(t));
    m.fleet_var.push_back(v);
    m.column_of_var.push_back(-1);
    for (int i = 0; i < nd; ++i) m.lp.set_coefficient(m.linking_row[static_cast<std::size_t>(i)][tt], v, -1.0);
  }
  std::vector<int> per_day(static_cast<std::size_t>(nd), 0);
  const auto& cols = store.columns();
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const Column& c = cols[k];
    if (!bounds.admits_column(c.fleet)) continue;
    // d <= 1 is implied by the convexity row in the relaxation.
    int v = m.lp.add_variable(c.routing_cost, 0.0, integer ? 1.0 : lp::kInfinity, integer);
    m.column_of_var.push_back(static_cast<int>(k));
    const auto i = static_cast<std::size_t>(c.day);
    m.lp.set_coefficient(m.convexity_row[i], v, 1.0);
    for (int t = 0; t < nt; ++t)
      if (c.fleet[static_cast<std::size_t>(t)] != 0)
        m.lp.set_coefficient(m.linking_row[i][static_cast<std::size_t>(t)], v,
                             c.fleet[static_cast<std::size_t>(t)]);
    ++per_day[i];
  }
  for (int i = 0; i < nd; ++i)
    if (per_day[static_cast<std::size_t>(i)] == 0)
      throw MasterError("day " + std::to_string(instance.days[static_cast<std::size_t>(i)].id) +
                        " has no column within bounds " + bounds.to_string());
  return m;
}

Duals extract_duals(const RestrictedMaster& master, const lp::Solution& solution) {
  Duals d;
  const std::size_t nd = master.convexity_row.size();
  d.p.resize(nd);
  d.q.resize(nd);
  for (std::size_t i = 0; i < nd; ++i) {
    d.p[i] = solution.dual[static_cast<std::size_t>(master.convexity_row[i])];
    d.q[i].resize(master.linking_row[i].size());
    for (std::size_t t = 0; t < master.linking_row[i].size(); ++t) {
      const double y = solution.dual[static_cast<std::size_t>(master.linking_row[i][t])];
      d.q[i][t] = std::max(0.0, -y);
    }
  }
  return d;
}

std::optional<std::pair<Duals, double>> solve_restricted_dual(const HorizonInstance& instance,
                                                              const ColumnStore& store,
                                                              const FleetBounds& bounds) {
  const std::size_t nd = instance.num_days();
  const std::size_t nt = instance.num_types();
  // Variables: p_i (free), q_ti >= 0, alpha_t >= 0 (m_t > 0), beta_t >= 0 (M_t finite).
  lp::LinearProgram lp;
  std::vector<int> p(nd);
  std::vector<std::vector<int>> q(nd, std::vector<int>(nt));
  for (std::size_t i = 0; i < nd; ++i) p[i] = lp.add_variable(-1.0, -lp::kInfinity, lp::kInfinity);
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t t = 0; t < nt; ++t) q[i][t] = lp.add_variable(0.0, 0.0, lp::kInfinity);
  for (std::size_t t = 0; t < nt; ++t) {
    int row = lp.add_row(lp::RowSense::kLe, instance.vehicle_types[t].fixed_cost);
    for (std::size_t i = 0; i < nd; ++i) lp.set_coefficient(row, q[i][t], 1.0);
    if (bounds.lower[t] > 0) {
      int a = lp.add_variable(-static_cast<double>(bounds.lower[t]), 0.0, lp::kInfinity);
      lp.set_coefficient(row, a, 1.0);
    }
    if (bounds.upper[t] != kUnbounded) {
      int b = lp.add_variable(static_cast<double>(bounds.upper[t]), 0.0, lp::kInfinity);
      lp.set_coefficient(row, b, -1.0);
    }
  }
  std::vector<int> covered(nd, 0);
  for (const auto& c : store.columns()) {
    if (!bounds.admits_column(c.fleet)) continue;
    const auto i = static_cast<std::size_t>(c.day);
    covered[i] = 1;
    int row = lp.add_row(lp::RowSense::kLe, c.routing_cost);
    lp.set_coefficient(row, p[i], 1.0);
    for (std::size_t t = 0; t < nt; ++t)
      if (c.fleet[t] != 0) lp.set_coefficient(row, q[i][t], -static_cast<double>(c.fleet[t]));
  }
  if (std::find(covered.begin(), covered.end(), 0) != covered.end()) return std::nullopt;
  auto sol = lp::solve_lp(lp);
  if (sol.status != lp::Status::kOptimal) return std::nullopt;
  Duals d;
  d.p.resize(nd);
  d.q.assign(nd, std::vector<double>(nt, 0.0));
  for (std::size_t i = 0; i < nd; ++i) {
    d.p[i] = sol.primal[static_cast<std::size_t>(p[i])];
    for (std::size_t t = 0; t < nt; ++t) d.q[i][t] = std::max(0.0, sol.primal[static_cast<std::size_t>(q[i][t])]);
  }
  return std::make_pair(std::move(d), -sol.objective);
}

double dual_violation(const HorizonInstance& instance, const ColumnStore& store,
                      const FleetBounds& bounds, const Duals& duals) {
  double worst = 0.0;
  for (const auto& c : store.columns())
    if (bounds.admits_column(c.fleet)) worst = std::max(worst, -reduced_cost(c, duals));
  // Vehicle rows only bind on types whose F_t is not held at a finite upper bound.
  for (std::size_t t = 0; t < instance.num_types(); ++t) {
    if (bounds.upper[t] != kUnbounded) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < instance.num_days(); ++i) s += duals.q[i][t];
    worst = std::max(worst, s - instance.vehicle_types[t].fixed_cost);
  }
  return worst;
}

// ----- quick column generation -----

QuickCgResult quick_cg(const HorizonInstance& instance, int day, const RoutePool& pool,
                       const Duals& duals, const FleetBounds& bounds, int node_limit) {
  QuickCgResult result;
  const auto i = static_cast<std::size_t>(day);
  const DayInstance& d = instance.days[i];
  const std::size_t n = d.requests.size();
  const std::size_t nt = instance.num_types();

  std::vector<const Route*> routes;
  for (const Route* r : pool.routes(day))
    if (bounds.upper[static_cast<std::size_t>(r->vehicle_type)] > 0) routes.push_back(r);

  std::vector<int> cover_count(n, 0);
  for (const Route* r : routes)
    for (int s : r->stops) ++cover_count[static_cast<std::size_t>(s)];
  if (routes.empty() || std::find(cover_count.begin(), cover_count.end(), 0) != cover_count.end()) {
    result.infeasible = true;
    return result;
  }

  // Root relaxation. x <= 1 is implied by the partitioning rows, so every
  // nonbasic column sits at zero with a nonnegative reduced cost and
  // cost(x) >= z_lp + sum of reduced costs over the chosen routes.
  lp::LinearProgram lp;
  for (std::size_t c = 0; c < n; ++c) lp.add_row(lp::RowSense::kEq, 1.0);
  std::vector<int> type_row(nt, -1);
  for (std::size_t t = 0; t < nt; ++t)
    if (bounds.upper[t] != kUnbounded) type_row[t] = lp.add_row(lp::RowSense::kLe, bounds.upper[t]);
  std::vector<double> cost(routes.size());
  for (std::size_t k = 0; k < routes.size(); ++k) {
    const Route* r = routes[k];
    const auto t = static_cast<std::size_t>(r->vehicle_type);
    cost[k] = r->cost + duals.q[i][t];
    int v = lp.add_variable(cost[k], 0.0, lp::kInfinity);
    for (int s : r->stops) lp.set_coefficient(s, v, 1.0);
    if (type_row[t] >= 0) lp.set_coefficient(type_row[t], v, 1.0);
  }
  auto root = lp::solve_lp(lp);
  result.nodes = 1;
  if (root.status != lp::Status::kOptimal) return result;
  double best_value = duals.p[i] - 1e-6;
  if (root.objective >= best_value - 1e-9) {
    result.objective = root.objective;
    return result;
  }

  // Reduced-cost fixing, then depth-first search over the surviving routes.
  std::vector<double> rc(routes.size());
  std::vector<std::vector<int>> by_request(n);
  for (std::size_t k = 0; k < routes.size(); ++k) {
    rc[k] = std::max(0.0, root.reduced_cost[k]);
    if (root.objective + rc[k] >= best_value - 1e-9) continue;
    for (int s : routes[k]->stops) by_request[static_cast<std::size_t>(s)].push_back(static_cast<int>(k));
  }
  for (auto& list : by_request)
    std::sort(list.begin(), list.end(), [&](int a, int b) { return rc[a] < rc[b] || (rc[a] == rc[b] && a < b); });

  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> masks(routes.size() * words, 0);
  for (std::size_t k = 0; k < routes.size(); ++k)
    for (int s : routes[k]->stops)
      masks[k * words + static_cast<std::size_t>(s) / 64] |= std::uint64_t{1} << (s % 64);
  std::vector<std::uint64_t> covered(words, 0);
  std::vector<int> used(nt, 0);
  std::vector<int> stack, best_set;
  int nodes = 0;
  auto fits = [&](int k) {
    const auto kk = static_cast<std::size_t>(k);
    const auto t = static_cast<std::size_t>(routes[kk]->vehicle_type);
    if (used[t] + 1 > bounds.upper[t]) return false;
    for (std::size_t w = 0; w < words; ++w)
      if (masks[kk * words + w] & covered[w]) return false;
    return true;
  };
  auto toggle = [&](int k) {
    for (std::size_t w = 0; w < words; ++w) covered[w] ^= masks[static_cast<std::size_t>(k) * words + w];
  };
  auto dfs = [&](auto&& self, double bound, double value) -> void {
    if (++nodes > node_limit) return;
    int pick = -1;
    std::size_t fewest = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (covered[c / 64] >> (c % 64) & 1) continue;
      std::size_t options = 0;
      for (int k : by_request[c]) {
        if (bound + rc[static_cast<std::size_t>(k)] >= best_value - 1e-9) break;
        if (fits(k)) ++options;
      }
      if (options == 0) return;
      if (pick < 0 || options < fewest) {
        pick = static_cast<int>(c);
        fewest = options;
      }
    }
    if (pick < 0) {
      if (value < best_value) {
        best_value = value;
        best_set = stack;
      }
      return;
    }
    for (int k : by_request[static_cast<std::size_t>(pick)]) {
      if (bound + rc[static_cast<std::size_t>(k)] >= best_value - 1e-9) break;
      if (!fits(k)) continue;
      const auto t = static_cast<std::size_t>(routes[static_cast<std::size_t>(k)]->vehicle_type);
      toggle(k);
      ++used[t];
      stack.push_back(k);
      self(self, bound + rc[static_cast<std::size_t>(k)], value + cost[static_cast<std::size_t>(k)]);
      stack.pop_back();
      --used[t];
      toggle(k);
      if (nodes > node_limit) return;
    }
  };
  dfs(dfs, root.objective, 0.0);
  result.nodes = nodes;
  if (best_set.empty()) {
    result.objective = root.objective;
    return result;
  }
  result.objective = best_value;

  std::vector<Route> chosen;
  for (int k : best_set) chosen.push_back(*routes[static_cast<std::size_t>(k)]);
  auto problem = PricedFleetProblem::priced(d, instance.vehicle_types, duals.q[i]);
  FleetOption option = make_option(problem, std::move(chosen));
  result.column = make_column(day, option, ColumnOrigin::kQuickCg, duals.q[i]);
  return result;
}

// ----- integer master -----

MasterIntegerResult evaluate_fleet_in_store(const HorizonInstance& instance,
                                            const ColumnStore& store, const FleetVector& fleet,
                                            const std::vector<int>* lower) {
  MasterIntegerResult res;
  const std::size_t nd = instance.num_days();
  const std::size_t nt = instance.num_types();
  res.chosen.assign(nd, -1);
  std::vector<double> best(nd, std::numeric_limits<double>::infinity());
  const auto& cols = store.columns();
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const Column& c = cols[k];
    if (!fleet.dominates(c.fleet)) continue;
    const auto i = static_cast<std::size_t>(c.day);
    if (c.routing_cost < best[i] - 1e-9) {
      best[i] = c.routing_cost;
      res.chosen[i] = static_cast<int>(k);
    }
  }
  res.fleet = FleetVector(nt);
  if (lower) for (std::size_t t = 0; t < nt; ++t) res.fleet[t] = (*lower)[t];
  double value = 0.0;
  for (std::size_t i = 0; i < nd; ++i) {
    if (res.chosen[i] < 0) {
      res.chosen.clear();
      res.fleet = FleetVector();
      return res;
    }
    value += best[i];
    res.fleet = res.fleet.max_with(cols[static_cast<std::size_t>(res.chosen[i])].fleet);
  }
  for (std::size_t t = 0; t < nt; ++t) value += instance.vehicle_types[t].fixed_cost * res.fleet[t];
  res.feasible = true;
  res.value = value;
  return res;
}

std::vector<FleetBounds> exclude_point(const FleetBounds& bounds, const FleetVector& point) {
  std::vector<FleetBounds> out;
  FleetBounds rest = bounds;
  for (std::size_t t = 0; t < point.size(); ++t) {
    const int v = point[t];
    if (v < rest.lower[t] || v > rest.upper[t]) {
      out.push_back(rest);  // the point is not in the box: nothing to cut
      return out;
    }
    if (v - 1 >= rest.lower[t]) {
      FleetBounds b = rest;
      b.upper[t] = v - 1;
      out.push_back(std::move(b));
    }
    if (rest.upper[t] == kUnbounded || v + 1 <= rest.upper[t]) {
      FleetBounds b = rest;
      b.lower[t] = v + 1;
      out.push_back(std::move(b));
    }
    rest.lower[t] = v;
    rest.upper[t] = v;
  }
  return out;
}

namespace {

struct MipBox {
  double bound;
  int id;
  FleetBounds box;
};

struct MipBoxOrder {
  bool operator()(const MipBox& a, const MipBox& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

MasterIntegerResult solve_master_integer(const HorizonInstance& instance, const ColumnStore& store,
                                         const FleetBounds& bounds, const MasterMipOptions& options) {
  MasterIntegerResult best;
  double incumbent = options.cutoff.value_or(std::numeric_limits<double>::infinity());
  auto improves = [&](double v) {
    return !std::isfinite(incumbent) || v < incumbent - 1e-9 * std::max(1.0, std::abs(incumbent));
  };
  auto consider = [&](const FleetVector& fleet, const FleetBounds& box) {
    auto r = evaluate_fleet_in_store(instance, store, fleet, &box.lower);
    if (r.feasible && improves(r.value) && bounds.contains(r.fleet)) {
      incumbent = r.value;
      int nodes = best.nodes;
      best = std::move(r);
      best.nodes = nodes;
    }
  };

  // Start from the cheapest admitted column of every day.
  {
    FleetVector all(instance.num_types());
    for (const auto& c : store.columns())
      if (bounds.admits_column(c.fleet)) all = all.max_with(c.fleet);
    for (std::size_t t = 0; t < all.size(); ++t) all[t] = std::max(all[t], bounds.lower[t]);
    consider(all, bounds);
  }

  std::priority_queue<MipBox, std::vector<MipBox>, MipBoxOrder> open;
  open.push(MipBox{-lp::kInfinity, 0, bounds});
  int next_id = 1;
  const std::size_t nt = instance.num_types();
  while (!open.empty()) {
    if (best.nodes >= options.node_limit) {
      best.node_limit_hit = true;
      break;
    }
    MipBox node = open.top();
    open.pop();
    if (!improves(node.bound)) continue;
    ++best.nodes;
    RestrictedMaster m;
    try {
      m = build_restricted(instance, store, node.box, false);
    } catch (const MasterError&) {
      continue;  // some day has no column in this box
    }
    auto sol = lp::solve_lp(m.lp);
    if (sol.status != lp::Status::kOptimal) continue;
    if (!improves(sol.objective)) continue;

    FleetVector f(nt), up(nt);
    int branch = -1;
    double most = 1e-6;
    for (std::size_t t = 0; t < nt; ++t) {
      const double v = sol.primal[static_cast<std::size_t>(m.fleet_var[t])];
      f[t] = static_cast<int>(std::lround(v));
      up[t] = static_cast<int>(std::ceil(v - 1e-6));
      const double frac = std::abs(v - std::round(v));
      if (frac > most) {
        most = frac;
        branch = static_cast<int>(t);
      }
    }
    consider(up, node.box);
    if (branch >= 0) {
      const auto b = static_cast<std::size_t>(branch);
      const double v = sol.primal[static_cast<std::size_t>(m.fleet_var[b])];
      MipBox left{sol.objective, next_id++, node.box};
      left.box.upper[b] = static_cast<int>(std::floor(v));
      MipBox right{sol.objective, next_id++, node.box};
      right.box.lower[b] = static_cast<int>(std::floor(v)) + 1;
      open.push(std::move(left));
      open.push(std::move(right));
      continue;
    }
    // F is integral: its integer optimum decomposes by day and is now known.
    consider(f, node.box);
    if (!improves(sol.objective)) continue;
    for (auto& box : exclude_point(node.box, f)) open.push(MipBox{sol.objective, next_id++, std::move(box)});
  }
  return best;
}

}  // namespace fleetmix
