#include "fleetmix/fsm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fleetmix {

PricedFleetProblem PricedFleetProblem::unpriced(const DayInstance& day,
                                                const std::vector<VehicleType>& types) {
  return priced(day, types, std::vector<double>(types.size(), 0.0));
}

PricedFleetProblem PricedFleetProblem::priced(const DayInstance& day,
                                              const std::vector<VehicleType>& types,
                                              std::vector<double> prices) {
  PricedFleetProblem p;
  p.day = &day;
  p.types = &types;
  p.prices = std::move(prices);
  p.lower.assign(types.size(), 0);
  p.upper.assign(types.size(), kUnbounded);
  return p;
}

void PricedFleetProblem::check() const {
  if (day == nullptr || types == nullptr) throw std::invalid_argument("problem without day/types");
  const std::size_t nt = types->size();
  if (prices.size() != nt || lower.size() != nt || upper.size() != nt)
    throw std::invalid_argument("problem vectors must have one entry per vehicle type");
  for (std::size_t t = 0; t < nt; ++t) {
    if (prices[t] < -1e-9 || !std::isfinite(prices[t]))
      throw std::invalid_argument("prices must be finite and >= 0");
    if (lower[t] < 0 || lower[t] > upper[t]) throw std::invalid_argument("need 0 <= m_t <= M_t");
  }
}

bool PricedFleetProblem::within_bounds(const FleetVector& fleet) const {
  for (std::size_t t = 0; t < fleet.size(); ++t)
    if (fleet[t] < lower[t] || fleet[t] > upper[t]) return false;
  return true;
}

FleetOption make_option(const PricedFleetProblem& problem, std::vector<Route> routes) {
  FleetOption opt;
  opt.day_id = problem.day->id;
  opt.fleet = FleetVector(problem.num_types());
  for (const auto& r : routes) {
    opt.fleet[static_cast<std::size_t>(r.vehicle_type)] += 1;
    opt.routing_cost += r.cost;
  }
  opt.priced_cost = opt.routing_cost;
  for (std::size_t t = 0; t < problem.num_types(); ++t)
    opt.priced_cost += problem.prices[t] * opt.fleet[t];
  opt.routes = std::move(routes);
  return opt;
}

std::string check_option(const FleetOption& option, const PricedFleetProblem& problem) {
  DaySolution sol;
  sol.day_id = option.day_id;
  sol.routes = option.routes;
  sol.fleet_used = option.fleet;
  sol.operational_cost = option.routing_cost;
  std::string err = check_day_solution(sol, *problem.day, *problem.types);
  if (!err.empty()) return err;
  if (!problem.within_bounds(option.fleet)) return "fleet " + option.fleet.to_string() + " violates bounds";
  double priced = option.routing_cost;
  for (std::size_t t = 0; t < problem.num_types(); ++t) priced += problem.prices[t] * option.fleet[t];
  if (std::abs(priced - option.priced_cost) > kEps * (1.0 + std::abs(priced)))
    return "priced cost mismatch";
  return {};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ (b * 0x2545f4914f6cdd1dULL));
}

// ----- large neighbourhood search -----

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SearchRoute {
  int type = 0;
  std::vector<int> stops;
  double cost = 0.0;
};

struct SearchState {
  std::vector<SearchRoute> routes;
  std::vector<int> unassigned;
  std::vector<int> count;  // non-empty routes per type
  double routing = 0.0;
};

struct Insertion {
  double delta = kInf;
  int pos = -1;
};

class Lns {
 public:
  Lns(const PricedFleetProblem& problem, const HeuristicBudget& budget, std::uint64_t seed)
      : p_(problem),
        day_(*problem.day),
        types_(*problem.types),
        budget_(budget),
        rng_(seed),
        n_(static_cast<int>(problem.day->requests.size())),
        nt_(static_cast<int>(problem.types->size())) {
    single_.assign(static_cast<std::size_t>(n_) * nt_, kInf);
    double big = 1.0;
    for (int r = 0; r < n_; ++r) {
      double worst = 0.0;
      for (int t = 0; t < nt_; ++t) {
        const int stop[1] = {r};
        if (auto c = sequence_cost(stop, types_[static_cast<std::size_t>(t)], day_)) {
          single_[idx(r, t)] = *c;
          worst = std::max(worst, *c);
        }
      }
      big += worst;
    }
    double max_price = 0.0;
    for (double q : p_.prices) max_price = std::max(max_price, q);
    big += max_price * (n_ + 1);
    bound_penalty_ = 10.0 * big;
    unassigned_penalty_ = 100.0 * big;
    noise_scale_ = 0.1 * big / std::max(1, n_);
  }

  std::optional<FleetOption> run(HeuristicStats* stats, std::vector<Route>* sink,
                                 std::vector<FleetOption>* option_sink) {
    option_sink_ = option_sink;
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::duration<double>(budget_.max_seconds);

    SearchState current = construct(false);
    SearchState best = current;
    int solutions = feasible(best) ? 1 : 0;
    int improvements = solutions;
    int restarts = 0;
    int iterations = 0;
    emit(current, sink);
    auto capped = [&] { return budget_.max_solutions > 0 && solutions >= budget_.max_solutions; };

    int idle = 0;
    while (!capped() && iterations < budget_.max_lns_iterations && n_ > 0) {
      if (clock::now() > deadline) break;
      ++iterations;
      SearchState candidate = current;
      destroy(candidate);
      repair(candidate, /*regret=*/true, /*noise=*/false);
      polish(candidate);
      if (objective(candidate) < objective(current) - 1e-9) {
        current = std::move(candidate);
        idle = 0;
        emit(current, sink);
        if (objective(current) < objective(best) - 1e-9) {
          best = current;
          if (feasible(best)) {
            ++solutions;
            ++improvements;
          }
        }
      } else if (++idle >= budget_.restart_after) {
        current = construct(true);
        ++restarts;
        idle = 0;
        emit(current, sink);
        if (objective(current) < objective(best) - 1e-9) {
          best = current;
          if (feasible(best)) {
            ++solutions;
            ++improvements;
          }
        }
      }
      if (stats) stats->best_trace.push_back(objective(best));
    }
    if (stats) {
      stats->iterations = iterations;
      stats->improvements = improvements;
      stats->restarts = restarts;
    }
    if (!feasible(best)) return std::nullopt;

    std::vector<Route> routes;
    for (const auto& sr : best.routes) {
      if (sr.stops.empty()) continue;
      auto rebuilt = try_route(sr.stops, types_[static_cast<std::size_t>(sr.type)], day_);
      if (!rebuilt) return std::nullopt;
      routes.push_back(std::move(*rebuilt));
    }
    return make_option(p_, std::move(routes));
  }

 private:
  std::size_t idx(int r, int t) const { return static_cast<std::size_t>(r) * nt_ + t; }

  double objective(const SearchState& s) const {
    double obj = s.routing + unassigned_penalty_ * static_cast<double>(s.unassigned.size());
    for (int t = 0; t < nt_; ++t) {
      obj += p_.prices[static_cast<std::size_t>(t)] * s.count[static_cast<std::size_t>(t)];
      obj += bound_penalty_ * std::max(0, p_.lower[static_cast<std::size_t>(t)] -
                                              s.count[static_cast<std::size_t>(t)]);
    }
    return obj;
  }

  bool feasible(const SearchState& s) const {
    if (!s.unassigned.empty()) return false;
    for (int t = 0; t < nt_; ++t)
      if (s.count[static_cast<std::size_t>(t)] < p_.lower[static_cast<std::size_t>(t)]) return false;
    return true;
  }

  void emit(const SearchState& s, std::vector<Route>* sink) const {
    if (sink == nullptr && option_sink_ == nullptr) return;
    std::vector<Route> routes;
    bool complete = true;
    for (const auto& sr : s.routes) {
      if (sr.stops.empty()) continue;
      auto r = try_route(sr.stops, types_[static_cast<std::size_t>(sr.type)], day_);
      if (!r) {
        complete = false;
        continue;
      }
      routes.push_back(std::move(*r));
    }
    if (sink) sink->insert(sink->end(), routes.begin(), routes.end());
    if (option_sink_ && complete && feasible(s)) option_sink_->push_back(make_option(p_, std::move(routes)));
  }

  Insertion best_insertion(const SearchRoute& route, int request) {
    Insertion best;
    const Request& req = day_.requests[static_cast<std::size_t>(request)];
    if (!req.allows(route.type)) return best;
    scratch_.resize(route.stops.size() + 1);
    for (std::size_t pos = 0; pos <= route.stops.size(); ++pos) {
      std::copy(route.stops.begin(), route.stops.begin() + static_cast<std::ptrdiff_t>(pos),
                scratch_.begin());
      scratch_[pos] = request;
      std::copy(route.stops.begin() + static_cast<std::ptrdiff_t>(pos), route.stops.end(),
                scratch_.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
      auto c = sequence_cost(scratch_, types_[static_cast<std::size_t>(route.type)], day_);
      if (c && *c - route.cost < best.delta) {
        best.delta = *c - route.cost;
        best.pos = static_cast<int>(pos);
      }
    }
    return best;
  }

  // Delta of opening a fresh vehicle of type t for the request alone.
  double open_delta(const SearchState& s, int request, int t) const {
    const auto tt = static_cast<std::size_t>(t);
    if (s.count[tt] >= p_.upper[tt]) return kInf;
    const double c = single_[idx(request, t)];
    if (!std::isfinite(c)) return kInf;
    return c + p_.prices[tt] - (s.count[tt] < p_.lower[tt] ? bound_penalty_ : 0.0);
  }

  // Fleet-mix moves the insertion operators cannot make: give a route a
  // different vehicle type, or merge two routes onto one vehicle.
  double count_term(int t, int count) const {
    return p_.prices[static_cast<std::size_t>(t)] * count +
           bound_penalty_ * std::max(0, p_.lower[static_cast<std::size_t>(t)] - count);
  }

  bool type_fits(const std::vector<double>& load, const std::vector<int>& stops, int t) const {
    const VehicleType& vt = types_[static_cast<std::size_t>(t)];
    for (std::size_t c = 0; c < load.size(); ++c)
      if (load[c] > vt.capacity[c] + kEps) return false;
    for (int r : stops)
      if (!day_.requests[static_cast<std::size_t>(r)].allows(t)) return false;
    return true;
  }

  std::vector<double> load_of(const std::vector<int>& stops) const {
    std::vector<double> load(day_.requests.empty() ? 0 : day_.requests[0].demand.size(), 0.0);
    for (int r : stops)
      for (std::size_t c = 0; c < load.size(); ++c) load[c] += day_.requests[static_cast<std::size_t>(r)].demand[c];
    return load;
  }

  void polish(SearchState& s) {
    if (!s.unassigned.empty()) return;
    auto& cnt = s.count;
    auto room = [&](int t) { return cnt[static_cast<std::size_t>(t)] < p_.upper[static_cast<std::size_t>(t)]; };
    bool improved = true;
    while (improved) {
      improved = false;
      // Type change.
      for (auto& route : s.routes) {
        const auto load = load_of(route.stops);
        const int from = route.type;
        double best = 0.0;
        int best_t = -1;
        double best_cost = 0.0;
        for (int t = 0; t < nt_; ++t) {
          if (t == from || !room(t) || !type_fits(load, route.stops, t)) continue;
          auto c = sequence_cost(route.stops, types_[static_cast<std::size_t>(t)], day_);
          if (!c) continue;
          const auto f = static_cast<std::size_t>(from), tt = static_cast<std::size_t>(t);
          const double delta = *c - route.cost + count_term(from, cnt[f] - 1) - count_term(from, cnt[f]) +
                               count_term(t, cnt[tt] + 1) - count_term(t, cnt[tt]);
          if (delta < best - 1e-9) {
            best = delta;
            best_t = t;
            best_cost = *c;
          }
        }
        if (best_t >= 0) {
          --cnt[static_cast<std::size_t>(from)];
          ++cnt[static_cast<std::size_t>(best_t)];
          s.routing += best_cost - route.cost;
          route.type = best_t;
          route.cost = best_cost;
          improved = true;
        }
      }
      // Merge two routes.
      double best = 0.0;
      std::size_t best_a = 0, best_b = 0;
      SearchRoute merged;
      for (std::size_t a = 0; a < s.routes.size(); ++a) {
        for (std::size_t b = a + 1; b < s.routes.size(); ++b) {
          const SearchRoute& ra = s.routes[a];
          const SearchRoute& rb = s.routes[b];
          std::vector<int> all = ra.stops;
          all.insert(all.end(), rb.stops.begin(), rb.stops.end());
          const auto load = load_of(all);
          for (int t = 0; t < nt_; ++t) {
            if (!type_fits(load, all, t)) continue;
            std::vector<int> c1(cnt);
            --c1[static_cast<std::size_t>(ra.type)];
            --c1[static_cast<std::size_t>(rb.type)];
            if (c1[static_cast<std::size_t>(t)] + 1 > p_.upper[static_cast<std::size_t>(t)]) continue;
            double fleet_delta = 0.0;
            for (int u = 0; u < nt_; ++u) {
              const auto uu = static_cast<std::size_t>(u);
              fleet_delta += count_term(u, c1[uu] + (u == t ? 1 : 0)) - count_term(u, cnt[uu]);
            }
            const double old_cost = ra.cost + rb.cost;
            // Cheapest of the two concatenations, then insertion of b into a.
            std::optional<double> cost;
            std::vector<int> seq;
            auto offer = [&](std::vector<int> cand) {
              auto c = sequence_cost(cand, types_[static_cast<std::size_t>(t)], day_);
              if (c && (!cost || *c < *cost)) {
                cost = c;
                seq = std::move(cand);
              }
            };
            offer(all);
            std::vector<int> ba = rb.stops;
            ba.insert(ba.end(), ra.stops.begin(), ra.stops.end());
            offer(std::move(ba));
            if (!cost) {
              std::vector<int> cur = ra.stops;
              bool ok = true;
              for (int r : rb.stops) {
                std::optional<double> bc;
                std::size_t bp = 0;
                for (std::size_t pos = 0; pos <= cur.size(); ++pos) {
                  cur.insert(cur.begin() + static_cast<std::ptrdiff_t>(pos), r);
                  auto c = sequence_cost(cur, types_[static_cast<std::size_t>(t)], day_);
                  if (c && (!bc || *c < *bc)) {
                    bc = c;
                    bp = pos;
                  }
                  cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(pos));
                }
                if (!bc) {
                  ok = false;
                  break;
                }
                cur.insert(cur.begin() + static_cast<std::ptrdiff_t>(bp), r);
              }
              if (ok) offer(std::move(cur));
            }
            if (!cost) continue;
            const double delta = *cost - old_cost + fleet_delta;
            if (delta < best - 1e-9) {
              best = delta;
              best_a = a;
              best_b = b;
              merged.type = t;
              merged.stops = seq;
              merged.cost = *cost;
            }
          }
        }
      }
      if (best < -1e-9) {
        s.routing += merged.cost - s.routes[best_a].cost - s.routes[best_b].cost;
        --cnt[static_cast<std::size_t>(s.routes[best_a].type)];
        --cnt[static_cast<std::size_t>(s.routes[best_b].type)];
        ++cnt[static_cast<std::size_t>(merged.type)];
        s.routes[best_a] = std::move(merged);
        s.routes.erase(s.routes.begin() + static_cast<std::ptrdiff_t>(best_b));
        improved = true;
      }
    }
  }

  SearchState construct(bool noise) {
    SearchState s;
    s.count.assign(static_cast<std::size_t>(nt_), 0);
    for (int r = 0; r < n_; ++r) s.unassigned.push_back(r);
    repair(s, /*regret=*/false, noise);
    polish(s);
    return s;
  }

  void repair(SearchState& s, bool regret, bool noise) {
    if (s.unassigned.empty()) return;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // cache[u][k]: best insertion of unassigned request u into route k.
    std::vector<std::vector<Insertion>> cache(s.unassigned.size());
    for (std::size_t u = 0; u < s.unassigned.size(); ++u)
      for (const auto& route : s.routes) cache[u].push_back(best_insertion(route, s.unassigned[u]));
    std::vector<double> jitter(s.unassigned.size(), 0.0);
    if (noise)
      for (double& j : jitter) j = noise_scale_ * unit(rng_);

    std::vector<char> done(s.unassigned.size(), 0);
    for (;;) {
      int pick = -1;
      double pick_key = kInf;
      double pick_delta = kInf;
      int pick_route = -1;  // >= 0: existing route; < 0: open type (-1 - t)
      for (std::size_t u = 0; u < s.unassigned.size(); ++u) {
        if (done[u]) continue;
        double best1 = kInf, best2 = kInf;
        int where = 0;
        bool any = false;
        auto consider = [&](double delta, int target) {
          if (!std::isfinite(delta)) return;
          delta += jitter[u];
          if (delta < best1) {
            best2 = best1;
            best1 = delta;
            where = target;
          } else if (delta < best2) {
            best2 = delta;
          }
          any = true;
        };
        for (std::size_t k = 0; k < s.routes.size(); ++k) consider(cache[u][k].delta, static_cast<int>(k));
        for (int t = 0; t < nt_; ++t) consider(open_delta(s, s.unassigned[u], t), -1 - t);
        if (!any) continue;
        // Regret: prefer the request that loses most if not placed now.
        const double key = regret ? -(std::isfinite(best2) ? best2 - best1 : 1e18 - best1) : best1;
        if (key < pick_key - 1e-12) {
          pick_key = key;
          pick = static_cast<int>(u);
          pick_delta = best1;
          pick_route = where;
        }
      }
      if (pick < 0) break;
      (void)pick_delta;
      const auto u = static_cast<std::size_t>(pick);
      const int request = s.unassigned[u];
      done[u] = 1;
      std::size_t touched;
      if (pick_route >= 0) {
        touched = static_cast<std::size_t>(pick_route);
        SearchRoute& route = s.routes[touched];
        const int pos = cache[u][touched].pos;
        route.stops.insert(route.stops.begin() + pos, request);
        const double old = route.cost;
        route.cost = sequence_cost(route.stops, types_[static_cast<std::size_t>(route.type)], day_).value();
        s.routing += route.cost - old;
      } else {
        const int t = -1 - pick_route;
        SearchRoute route;
        route.type = t;
        route.stops = {request};
        route.cost = single_[idx(request, t)];
        s.routing += route.cost;
        s.count[static_cast<std::size_t>(t)] += 1;
        s.routes.push_back(std::move(route));
        touched = s.routes.size() - 1;
        for (auto& row : cache) row.emplace_back();
      }
      for (std::size_t v = 0; v < s.unassigned.size(); ++v)
        if (!done[v]) cache[v][touched] = best_insertion(s.routes[touched], s.unassigned[v]);
    }
    std::vector<int> left;
    for (std::size_t u = 0; u < s.unassigned.size(); ++u)
      if (!done[u]) left.push_back(s.unassigned[u]);
    s.unassigned = std::move(left);
  }

  void destroy(SearchState& s) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> removed;
    const bool whole_route = !s.routes.empty() && unit(rng_) < 0.5;
    if (whole_route) {
      std::uniform_int_distribution<std::size_t> pick(0, s.routes.size() - 1);
      SearchRoute& route = s.routes[pick(rng_)];
      removed = route.stops;
      route.stops.clear();
    } else {
      std::vector<std::pair<std::size_t, std::size_t>> assigned;  // (route, position)
      for (std::size_t k = 0; k < s.routes.size(); ++k)
        for (std::size_t pos = 0; pos < s.routes[k].stops.size(); ++pos) assigned.emplace_back(k, pos);
      if (assigned.empty()) return;
      const int cap = std::max(2, static_cast<int>(std::floor(budget_.destroy_share * n_)));
      std::uniform_int_distribution<int> howmany(2, cap);
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(howmany(rng_)), assigned.size());
      std::shuffle(assigned.begin(), assigned.end(), rng_);
      assigned.resize(k);
      // Remove from the back of each route so positions stay valid.
      std::sort(assigned.begin(), assigned.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second > b.second;
      });
      for (const auto& [route, pos] : assigned) {
        auto& stops = s.routes[route].stops;
        removed.push_back(stops[pos]);
        stops.erase(stops.begin() + static_cast<std::ptrdiff_t>(pos));
      }
    }
    std::vector<SearchRoute> kept;
    s.routing = 0.0;
    std::fill(s.count.begin(), s.count.end(), 0);
    for (auto& route : s.routes) {
      if (route.stops.empty()) continue;
      auto c = sequence_cost(route.stops, types_[static_cast<std::size_t>(route.type)], day_);
      if (!c) {
        removed.insert(removed.end(), route.stops.begin(), route.stops.end());
        continue;
      }
      route.cost = *c;
      s.routing += route.cost;
      s.count[static_cast<std::size_t>(route.type)] += 1;
      kept.push_back(std::move(route));
    }
    s.routes = std::move(kept);
    std::sort(removed.begin(), removed.end());
    s.unassigned.insert(s.unassigned.end(), removed.begin(), removed.end());
  }

  const PricedFleetProblem& p_;
  const DayInstance& day_;
  const std::vector<VehicleType>& types_;
  HeuristicBudget budget_;
  std::mt19937_64 rng_;
  int n_;
  int nt_;
  std::vector<double> single_;
  std::vector<int> scratch_;
  double bound_penalty_ = 0.0;
  double unassigned_penalty_ = 0.0;
  double noise_scale_ = 0.0;
  std::vector<FleetOption>* option_sink_ = nullptr;
};

}  // namespace

std::optional<FleetOption> solve_heuristic(const PricedFleetProblem& problem,
                                           const HeuristicBudget& budget, std::uint64_t seed,
                                           HeuristicStats* stats, std::vector<Route>* route_sink,
                                           std::vector<FleetOption>* option_sink) {
  problem.check();
  if (!(budget.max_seconds > 0) || budget.max_lns_iterations < 0 || budget.max_solutions < 0 ||
      budget.restart_after < 1)
    throw std::invalid_argument("heuristic budget must be positive");
  Lns lns(problem, budget, seed);
  return lns.run(stats, route_sink, option_sink);
}

// ----- exact FSM -----

namespace {

void enumerate_fleets(std::size_t t, int remaining, FleetVector& current,
                      std::vector<FleetVector>& out) {
  if (t == current.size()) {
    out.push_back(current);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    current[t] = k;
    enumerate_fleets(t + 1, remaining - k, current, out);
  }
  current[t] = 0;
}

}  // namespace

ExactFsmSolver::ExactFsmSolver(const DayInstance& day, const std::vector<VehicleType>& types)
    : day_(&day), types_(&types), table_(day, types) {
  const int n = static_cast<int>(day.requests.size());
  if (n > kExactFsmMaxRequests)
    throw ExactSizeError("exact FSM supports at most " + std::to_string(kExactFsmMaxRequests) +
                         " requests, day " + std::to_string(day.id) + " has " + std::to_string(n));
  std::vector<FleetVector> fleets;
  FleetVector current(types.size());
  enumerate_fleets(0, n, current, fleets);
  for (const auto& fleet : fleets)
    if (auto sol = exact_vrp(table_, fleet, VehicleUse::kExactly)) by_fleet_.emplace(fleet, std::move(*sol));
}

std::optional<FleetOption> ExactFsmSolver::solve(const PricedFleetProblem& problem) const {
  problem.check();
  const DaySolution* best = nullptr;
  double best_value = kInf;
  for (const auto& [fleet, sol] : by_fleet_) {
    if (!problem.within_bounds(fleet)) continue;
    double value = sol.operational_cost;
    for (std::size_t t = 0; t < fleet.size(); ++t) value += problem.prices[t] * fleet[t];
    if (value < best_value - 1e-9) {
      best_value = value;
      best = &sol;
    }
  }
  if (best == nullptr) return std::nullopt;
  return make_option(problem, best->routes);
}

std::vector<FleetOption> ExactFsmSolver::all_options() const {
  auto problem = PricedFleetProblem::unpriced(*day_, *types_);
  std::vector<FleetOption> out;
  for (const auto& [fleet, sol] : by_fleet_) out.push_back(make_option(problem, sol.routes));
  return out;
}

std::optional<FleetOption> solve_exact(const PricedFleetProblem& problem) {
  problem.check();
  ExactFsmSolver solver(*problem.day, *problem.types);
  return solver.solve(problem);
}

std::optional<FleetOption> best_routing_option(const DayInstance& day,
                                               const std::vector<VehicleType>& types,
                                               const FsmConfig& config, std::uint64_t seed) {
  auto problem = PricedFleetProblem::unpriced(day, types);
  if (config.mode == PricingMode::kExact) return solve_exact(problem);
  return solve_heuristic(problem, config.budget, seed);
}

}  // namespace fleetmix
