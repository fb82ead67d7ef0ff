// Acceptance checks. Each criterion prints one PASS/FAIL line. Long phases are
// cached as JSON next to the binary's working directory so that the per-
// criterion ctest entries do not repeat them; a cache written with different
// settings is ignored.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "CLI11.hpp"
#include "fleetmix/bap.hpp"
#include "fleetmix/baselines.hpp"
#include "fleetmix/runner.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace fleetmix;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ----- pinned tolerances -----
constexpr double kValueTol = 1e-6;      // criteria 1, 2: absolute
constexpr double kDualTol = 1e-6;       // criterion 3
constexpr double kBoundTol = 1e-6;      // criterion 4
constexpr double kImprovement = 0.02;   // criterion 5: RMH vs min(UF, SA)
constexpr double kIdleRatio = 0.6;      // criterion 6
constexpr double kCapGap = 0.10;        // criterion 7: i=1 over i=6
constexpr double kDayVariation = 0.15;  // criterion 8

// ----- suite definitions -----
RandomInstanceConfig suite_instance_config(int days) {
  RandomInstanceConfig rc;
  rc.num_days = days;
  rc.min_requests = 8;
  rc.max_requests = 16;
  rc.num_types = 4;
  rc.day_variety = 0.8;
  return rc;
}

SolveSettings suite_settings() {
  SolveSettings s;
  s.time_limit = 60.0;
  s.parallelism = 4;
  s.lns_iterations = 500;
  s.cg_iterations = 100;
  s.stagnation_limit = 10;
  s.sa_m = 3;
  return s;
}

constexpr int kSuiteInstances = 10;
constexpr int kSuiteSeeds = 5;
constexpr std::uint64_t kSuiteBase = 1000;
constexpr std::uint64_t kScalingSeed = 2000;

HorizonInstance oracle_instance_c1(int k) {
  RandomInstanceConfig rc;
  rc.num_days = 2 + k % 3;
  rc.min_requests = 3;
  rc.max_requests = 6;
  rc.num_types = 2 + k % 2;
  rc.restricted_share = 0.3;
  return make_random_instance(rc, 500 + static_cast<std::uint64_t>(k));
}

HorizonInstance oracle_instance_c2(int k) {
  RandomInstanceConfig rc;
  rc.num_days = 2 + k % 2;
  rc.min_requests = 3;
  rc.max_requests = 5;
  rc.num_types = 2 + k % 2;
  rc.restricted_share = 0.3;
  return make_random_instance(rc, 700 + static_cast<std::uint64_t>(k));
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// ----- brute force over fleets, reused for boxes -----
class BruteForce {
 public:
  explicit BruteForce(const HorizonInstance& inst) : inst_(inst) {
    for (const auto& d : inst.days) {
      usage_.push_back(oracle::usage_costs(d, inst.vehicle_types));
      max_req_ = std::max(max_req_, static_cast<int>(d.requests.size()));
    }
  }

  /// Minimum of the long-horizon objective over fleets in `box`.
  std::optional<double> optimum(const FleetBounds* box = nullptr) const {
    const std::size_t nt = inst_.num_types();
    std::vector<int> lo(nt, 0), hi(nt, max_req_);
    if (box)
      for (std::size_t t = 0; t < nt; ++t) {
        lo[t] = std::max(0, box->lower[t]);
        hi[t] = std::min(max_req_, box->upper[t]);
        if (lo[t] > hi[t]) return std::nullopt;
      }
    std::optional<double> best;
    std::vector<int> f = lo;
    while (true) {
      FleetVector fv(f);
      double v = 0;
      for (std::size_t t = 0; t < nt; ++t) v += inst_.vehicle_types[t].fixed_cost * f[t];
      bool ok = true;
      for (const auto& u : usage_) {
        auto r = oracle::vrp_at_most(u, fv);
        if (!r) {
          ok = false;
          break;
        }
        v += *r;
      }
      if (ok && (!best || v < *best)) best = v;
      std::size_t t = 0;
      while (t < nt && ++f[t] > hi[t]) f[t] = lo[t], ++t;
      if (t == nt) break;
    }
    return best;
  }

 private:
  const HorizonInstance& inst_;
  std::vector<std::map<FleetVector, double>> usage_;
  int max_req_ = 0;
};

// ----- per-master-solve audit -----
struct Audit {
  long solves = 0;
  long duality = 0;      // primal vs dual objective
  long dual_rows = 0;    // [D] rows over stored columns
  long slackness = 0;    // q > 0 on a slack linking row
  long store_up = 0;     // stored cost went up for a key
  long covering = 0;     // covering bound above the exact minimum reduced cost
  long covering_checks = 0;
  double worst_duality = 0.0;

  json to_json() const {
    return {{"solves", solves}, {"duality", duality}, {"dual_rows", dual_rows}, {"slackness", slackness},
            {"store_up", store_up}, {"covering", covering}, {"covering_checks", covering_checks},
            {"worst_duality", worst_duality}};
  }
  void add(const json& j) {
    solves += j["solves"].get<long>();
    duality += j["duality"].get<long>();
    dual_rows += j["dual_rows"].get<long>();
    slackness += j["slackness"].get<long>();
    store_up += j["store_up"].get<long>();
    covering += j["covering"].get<long>();
    covering_checks += j["covering_checks"].get<long>();
    worst_duality = std::max(worst_duality, j["worst_duality"].get<double>());
  }
};

/// Observer that checks duality and monotonicity; with `options` also the
/// covering bound against the exact per-day minimum reduced cost.
MasterObserver make_observer(const HorizonInstance& inst, Audit& audit, bool full,
                             const std::vector<std::vector<FleetOption>>* options = nullptr) {
  auto last = std::make_shared<std::map<std::pair<int, FleetVector>, double>>();
  std::vector<double> r0;
  if (options)
    for (const auto& day : *options) {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& o : day) m = std::min(m, o.routing_cost);
      r0.push_back(m);
    }
  return [&inst, &audit, full, options, last, r0](const MasterSnapshot& s) {
    ++audit.solves;
    for (const auto& c : s.store.columns()) {
      auto key = std::make_pair(c.day, c.fleet);
      auto it = last->find(key);
      if (it != last->end() && c.routing_cost > it->second + 1e-9) ++audit.store_up;
      (*last)[key] = c.routing_cost;
    }
    if (!full) return;
    const double obj = s.solution.objective;
    const double gap = std::abs(obj - s.solution.dual_objective);
    audit.worst_duality = std::max(audit.worst_duality, gap);
    if (gap > kDualTol * (1.0 + std::abs(obj))) ++audit.duality;
    if (dual_violation(inst, s.store, s.bounds, s.duals) > kDualTol) ++audit.dual_rows;

    const auto& lp = s.master.lp;
    std::vector<double> act(static_cast<std::size_t>(lp.num_rows()), 0.0);
    for (int j = 0; j < lp.num_cols(); ++j)
      for (auto [row, v] : lp.column(j)) act[static_cast<std::size_t>(row)] += v * s.solution.primal[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < s.master.linking_row.size(); ++i)
      for (std::size_t t = 0; t < s.master.linking_row[i].size(); ++t) {
        const int row = s.master.linking_row[i][t];
        if (row < 0) continue;
        const double slack = -act[static_cast<std::size_t>(row)];
        if (slack > kDualTol && s.duals.q[i][t] > kDualTol) ++audit.slackness;
      }

    if (!options) return;
    for (std::size_t i = 0; i < options->size(); ++i) {
      double min_rc = std::numeric_limits<double>::infinity();
      for (const auto& o : (*options)[i]) {
        if (!s.bounds.admits_column(o.fleet)) continue;
        double rc = o.routing_cost - s.duals.p[i];
        for (std::size_t t = 0; t < o.fleet.size(); ++t) rc += o.fleet[t] * s.duals.q[i][t];
        min_rc = std::min(min_rc, rc);
      }
      const double cb = covering_bound(inst, static_cast<int>(i), s.duals, r0[i], &s.bounds);
      ++audit.covering_checks;
      if (cb > min_rc + kBoundTol) ++audit.covering;
    }
  };
}

std::vector<std::vector<FleetOption>> all_options(const HorizonInstance& inst) {
  std::vector<std::vector<FleetOption>> out;
  for (const auto& d : inst.days) out.push_back(ExactFsmSolver(d, inst.vehicle_types).all_options());
  return out;
}

CgBudget unlimited_budget() {
  CgBudget b;
  b.max_seconds = 1e9;
  b.max_iterations = 1000000;
  b.gap_eps = 0.0;
  b.stagnation_limit = 0;
  return b;
}

// ----- cache -----
struct Cache {
  fs::path dir;

  std::optional<json> load(const std::string& phase, const json& key) const {
    std::ifstream in(dir / (phase + ".json"));
    if (!in) return std::nullopt;
    try {
      json j;
      in >> j;
      if (j.value("key", json()) == key) return j["data"];
    } catch (const json::exception&) {
    }
    return std::nullopt;
  }
  void store(const std::string& phase, const json& key, const json& data) const {
    fs::create_directories(dir);
    std::ofstream(dir / (phase + ".json")) << json{{"key", key}, {"data", data}}.dump(1);
  }
};

json settings_key(const SolveSettings& s) {
  return {{"time_limit", s.time_limit}, {"parallelism", s.parallelism}, {"lns", s.lns_iterations},
          {"cg", s.cg_iterations},      {"stagnation", s.stagnation_limit}, {"m", s.sa_m},
          {"max_solutions", s.max_solutions}, {"version", 3}};
}

// ----- phase: oracle runs (criteria 1 to 4) -----
json phase_oracle(int n1, int n2) {
  json out;
  const auto t0 = std::chrono::steady_clock::now();
  json c1 = json::array();
  for (int k = 0; k < n1; ++k) {
    auto inst = oracle_instance_c1(k);
    BruteForce brute(inst);
    auto opts = all_options(inst);
    Audit audit;
    BapConfig bc;
    bc.cg.fsm.mode = PricingMode::kExact;
    bc.cg.parallelism = 2;
    bc.cg.budget = unlimited_budget();
    bc.node_budget = unlimited_budget();
    bc.max_nodes = 1000000;
    bc.max_seconds = 1e9;
    BapStats st;
    auto plan = run_bap(inst, bc, &st, make_observer(inst, audit, true, &opts));
    const double opt = brute.optimum().value();
    int bound_bad = 0;
    double worst_bound = -1e300;
    for (const auto& [box, bound] : st.node_bounds) {
      auto boxed = brute.optimum(&box);
      if (!boxed) continue;
      // The root box is the whole space, so this includes the global check.
      worst_bound = std::max(worst_bound, bound - *boxed);
      if (bound > *boxed + kBoundTol) ++bound_bad;
    }
    c1.push_back({{"instance", k}, {"days", inst.num_days()}, {"types", inst.num_types()},
                  {"bap", plan.total_cost}, {"opt", opt}, {"valid", check_plan(plan, inst).empty()},
                  {"exhausted", st.exhausted}, {"nodes", st.nodes_solved}, {"bound_bad", bound_bad},
                  {"bounds", st.node_bounds.size()}, {"worst_bound", worst_bound},
                  {"z_up", st.z_increases}, {"incumbent_up", st.incumbent_increases},
                  {"audit", audit.to_json()}});
  }
  out["c1"] = c1;
  out["c1_seconds"] = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  json c2 = json::array();
  for (int k = 0; k < n2; ++k) {
    auto inst = oracle_instance_c2(k);
    BruteForce brute(inst);
    auto opts = all_options(inst);
    Audit audit;
    CgConfig cfg;
    cfg.fsm.mode = PricingMode::kExact;
    cfg.parallelism = 2;
    cfg.budget = unlimited_budget();
    CgContext ctx(inst, cfg);
    ctx.set_observer(make_observer(inst, audit, true, &opts));
    ctx.initialize();
    auto st = run_cg(ctx, FleetBounds::unbounded(inst.num_types()), cfg.budget);
    const double lm = oracle::full_master_lp(inst);
    const double opt = brute.optimum().value();
    int bound_bad = 0;
    for (const auto& h : st.history)
      if (h.bound > opt + kBoundTol) ++bound_bad;
    c2.push_back({{"instance", k}, {"z_rmp", st.z_rmp}, {"full_lp", lm}, {"stop", to_string(st.stop)},
                  {"iterations", st.iteration}, {"opt", opt}, {"bound_bad", bound_bad},
                  {"bounds", st.history.size()}, {"z_up", st.z_increases}, {"audit", audit.to_json()}});
  }
  out["c2"] = c2;
  out["c2_seconds"] = seconds_since(t1);
  return out;
}

// ----- phase: method suite (criteria 5, 6) -----
json plan_summary(const FleetPlan& p, const HorizonInstance& inst) {
  return {{"cost", p.infeasible ? -1.0 : p.total_cost}, {"fixed", p.fixed_cost}, {"operational", p.operational_cost},
          {"idle", p.mean_idle()}, {"infeasible", p.infeasible}, {"seconds", p.wall_time},
          {"valid", p.infeasible || check_plan(p, inst).empty()}};
}

json phase_suite(const SolveSettings& s) {
  json runs = json::array();
  for (int i = 0; i < kSuiteInstances; ++i) {
    auto inst = make_random_instance(suite_instance_config(25), kSuiteBase + static_cast<std::uint64_t>(i));
    for (int seed = 1; seed <= kSuiteSeeds; ++seed) {
      const auto t = std::chrono::steady_clock::now();
      auto uf = solve(Method::kUF, inst, s, static_cast<std::uint64_t>(seed));
      auto sa = solve(Method::kSA, inst, s, static_cast<std::uint64_t>(seed));
      Audit audit;
      BapStats st;
      auto bap = run_bap(inst, make_bap_config(s, static_cast<std::uint64_t>(seed)), &st,
                         make_observer(inst, audit, false));
      const FleetPlan& rmh = *st.root_plan;
      runs.push_back({{"instance", i}, {"seed", seed}, {"UF", plan_summary(uf, inst)}, {"SA", plan_summary(sa, inst)},
                      {"RMH", plan_summary(rmh, inst)}, {"BAP", plan_summary(bap, inst)},
                      {"bap_nodes", st.nodes_solved}, {"z_up", st.z_increases},
                      {"incumbent_up", st.incumbent_increases}, {"audit", audit.to_json()},
                      {"seconds", seconds_since(t)}});
      std::fprintf(stderr, "suite i=%d seed=%d UF=%.0f SA=%.0f RMH=%.0f BAP=%.0f (%.1fs)\n", i, seed, uf.total_cost,
                   sa.total_cost, rmh.total_cost, bap.total_cost, seconds_since(t));
    }
  }
  return runs;
}

// ----- phase: pricing caps (criterion 7) -----
json phase_pricing(const SolveSettings& base) {
  json out = json::object();
  for (int cap : {1, 3, 6}) {
    SolveSettings s = base;
    s.max_solutions = cap;
    json runs = json::array();
    for (int i = 0; i < kSuiteInstances; ++i) {
      auto inst = make_random_instance(suite_instance_config(25), kSuiteBase + static_cast<std::uint64_t>(i));
      for (int seed = 1; seed <= kSuiteSeeds; ++seed) {
        Audit audit;
        CgState st;
        auto plan = run_rmh(inst, make_rmh_config(s, static_cast<std::uint64_t>(seed)), &st,
                            make_observer(inst, audit, false));
        runs.push_back({{"instance", i}, {"seed", seed}, {"plan", plan_summary(plan, inst)},
                        {"z_up", st.z_increases}, {"audit", audit.to_json()}});
        std::fprintf(stderr, "pricing cap=%d i=%d seed=%d fixed=%.0f total=%.0f\n", cap, i, seed, plan.fixed_cost,
                     plan.total_cost);
      }
    }
    out[std::to_string(cap)] = runs;
  }
  return out;
}

// ----- phase: day scaling (criterion 8) -----
json phase_scaling(const SolveSettings& s) {
  auto full = make_random_instance(suite_instance_config(50), kScalingSeed);
  json rows = json::array();
  for (int d = 5; d <= 50; d += 5) {
    auto sub = horizon_prefix(full, d, true);
    auto uf = solve(Method::kUF, sub, s, 1);
    Audit audit;
    CgState st;
    auto rmh = run_rmh(sub, make_rmh_config(s, 1), &st, make_observer(sub, audit, false));
    rows.push_back({{"d", d}, {"UF", plan_summary(uf, sub)}, {"RMH", plan_summary(rmh, sub)},
                    {"z_up", st.z_increases}, {"audit", audit.to_json()}});
    std::fprintf(stderr, "scaling d=%d UF=%.0f RMH=%.0f\n", d, uf.total_cost, rmh.total_cost);
  }
  return rows;
}

// ----- reporting -----
struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome criterion1(const json& o) {
  int bad = 0, invalid = 0, unexhausted = 0;
  double worst = 0;
  for (const auto& r : o["c1"]) {
    const double diff = std::abs(r["bap"].get<double>() - r["opt"].get<double>());
    worst = std::max(worst, diff);
    if (diff > kValueTol) ++bad;
    if (!r["valid"].get<bool>()) ++invalid;
    if (!r["exhausted"].get<bool>()) ++unexhausted;
  }
  const int n = static_cast<int>(o["c1"].size());
  const double secs = o["c1_seconds"].get<double>();
  return {n >= 50 && bad == 0 && invalid == 0 && secs < 600,
          fmt("%d instances, %d mismatches, max |BAP-opt|=%.2e, %d invalid plans, %d trees not exhausted, %.0fs", n,
              bad, worst, invalid, unexhausted, secs)};
}

Outcome criterion2(const json& o) {
  int bad = 0;
  double worst = 0;
  for (const auto& r : o["c2"]) {
    const double diff = std::abs(r["z_rmp"].get<double>() - r["full_lp"].get<double>());
    worst = std::max(worst, diff);
    if (diff > kValueTol) ++bad;
  }
  const int n = static_cast<int>(o["c2"].size());
  const double secs = o["c2_seconds"].get<double>();
  return {n >= 20 && bad == 0 && secs < 300,
          fmt("%d instances, %d mismatches, max |z_RMP-LM|=%.2e, %.0fs", n, bad, worst, secs)};
}

Outcome criterion3(const json& o) {
  Audit a;
  for (const auto& r : o["c1"]) a.add(r["audit"]);
  for (const auto& r : o["c2"]) a.add(r["audit"]);
  const bool ok = a.solves > 0 && a.duality == 0 && a.dual_rows == 0 && a.slackness == 0;
  return {ok, fmt("%ld master solves, duality gaps %ld (worst %.1e), dual row violations %ld, slackness violations %ld",
                  a.solves, a.duality, a.worst_duality, a.dual_rows, a.slackness)};
}

Outcome criterion4(const json& o) {
  long bound_bad = 0, bounds = 0;
  Audit a;
  for (const auto& r : o["c1"]) {
    bound_bad += r["bound_bad"].get<long>();
    bounds += r["bounds"].get<long>();
    a.add(r["audit"]);
  }
  for (const auto& r : o["c2"]) {
    bound_bad += r["bound_bad"].get<long>();
    bounds += r["bounds"].get<long>();
    a.add(r["audit"]);
  }
  const bool ok = bound_bad == 0 && a.covering == 0 && bounds > 0 && a.covering_checks > 0;
  return {ok, fmt("%ld Lagrangian bounds, %ld above the optimum; %ld covering bounds, %ld above the exact minimum",
                  bounds, bound_bad, a.covering_checks, a.covering)};
}

struct SuiteMeans {
  int runs = 0, used = 0, sa_infeasible = 0, invalid = 0;
  double uf = 0, sa = 0, rmh = 0, bap = 0, improvement = 0;
  double idle_uf = 0, idle_rmh = 0;
  double improvement_all = 0;  // infeasible SA runs compared against UF alone
};

SuiteMeans suite_means(const json& runs) {
  SuiteMeans m;
  for (const auto& r : runs) {
    ++m.runs;
    for (const char* k : {"UF", "SA", "RMH", "BAP"})
      if (!r[k]["valid"].get<bool>()) ++m.invalid;
    m.idle_uf += r["UF"]["idle"].get<double>();
    m.idle_rmh += r["RMH"]["idle"].get<double>();
    {
      const double uf = r["UF"]["cost"];
      const double best = r["SA"]["infeasible"].get<bool>() ? uf : std::min(uf, r["SA"]["cost"].get<double>());
      m.improvement_all += (best - r["RMH"]["cost"].get<double>()) / best;
    }
    if (r["SA"]["infeasible"].get<bool>()) {
      ++m.sa_infeasible;
      continue;
    }
    ++m.used;
    const double uf = r["UF"]["cost"], sa = r["SA"]["cost"], rmh = r["RMH"]["cost"], bap = r["BAP"]["cost"];
    m.uf += uf;
    m.sa += sa;
    m.rmh += rmh;
    m.bap += bap;
    m.improvement += (std::min(uf, sa) - rmh) / std::min(uf, sa);
  }
  if (m.used) {
    m.uf /= m.used;
    m.sa /= m.used;
    m.rmh /= m.used;
    m.bap /= m.used;
    m.improvement /= m.used;
  }
  if (m.runs) {
    m.idle_uf /= m.runs;
    m.idle_rmh /= m.runs;
    m.improvement_all /= m.runs;
  }
  return m;
}

Outcome criterion5(const json& runs, double seconds) {
  auto m = suite_means(runs);
  const bool order = m.bap <= m.rmh + 1e-9 && m.rmh <= m.sa && m.rmh <= m.uf;
  const bool ok = m.used > 0 && order && m.improvement >= kImprovement && m.invalid == 0 && seconds < 5400;
  return {ok, fmt("means over %d of %d runs (SA infeasible in %d): UF=%.1f SA=%.1f RMH=%.1f BAP=%.1f; "
                  "RMH vs min(UF,SA) %+.2f%% (need >= %.0f%%), %+.2f%% over all runs; %d invalid plans; %.0fs",
                  m.used, m.runs, m.sa_infeasible, m.uf, m.sa, m.rmh, m.bap, 100 * m.improvement,
                  100 * kImprovement, 100 * m.improvement_all, m.invalid, seconds)};
}

Outcome criterion6(const json& runs) {
  auto m = suite_means(runs);
  return {m.runs > 0 && m.idle_rmh <= kIdleRatio * m.idle_uf,
          fmt("mean idle per day over %d runs: RMH=%.3f UF=%.3f (ratio %.3f, need <= %.2f)", m.runs, m.idle_rmh,
              m.idle_uf, m.idle_uf > 0 ? m.idle_rmh / m.idle_uf : 0.0, kIdleRatio)};
}

Outcome criterion7(const json& caps) {
  std::map<int, double> fixed;
  int invalid = 0;
  for (int cap : {1, 3, 6}) {
    const auto& runs = caps[std::to_string(cap)];
    double sum = 0;
    for (const auto& r : runs) {
      sum += r["plan"]["fixed"].get<double>();
      if (!r["plan"]["valid"].get<bool>()) ++invalid;
    }
    fixed[cap] = sum / static_cast<double>(runs.size());
  }
  const bool mono = fixed[1] >= fixed[3] && fixed[3] >= fixed[6];
  const double rel = (fixed[1] - fixed[6]) / fixed[6];
  return {mono && rel >= kCapGap && invalid == 0,
          fmt("mean RMH fixed cost: cap1=%.1f cap3=%.1f cap6=%.1f; cap1 over cap6 %+.1f%% (need >= %.0f%%)",
              fixed[1], fixed[3], fixed[6], 100 * rel, 100 * kCapGap)};
}

Outcome criterion8(const json& rows) {
  double lo = 1e300, hi = -1e300, uf5 = 0, uf50 = 0;
  int invalid = 0;
  for (const auto& r : rows) {
    const int d = r["d"];
    const double per_day = r["RMH"]["cost"].get<double>() / d;
    lo = std::min(lo, per_day);
    hi = std::max(hi, per_day);
    if (d == 5) uf5 = r["UF"]["fixed"].get<double>() / d;
    if (d == 50) uf50 = r["UF"]["fixed"].get<double>() / d;
    if (!r["RMH"]["valid"].get<bool>() || !r["UF"]["valid"].get<bool>()) ++invalid;
  }
  const double var = (hi - lo) / lo;
  return {var <= kDayVariation && uf50 > uf5 && invalid == 0,
          fmt("RMH cost per day in [%.1f, %.1f], spread %.1f%% (need <= %.0f%%); UF fixed per day d=5 %.1f, d=50 %.1f",
              lo, hi, 100 * var, 100 * kDayVariation, uf5, uf50)};
}

Outcome criterion9(const json& oracle, const json& suite, const json& pricing, const json& scaling) {
  long z_up = 0, store_up = 0, inc_up = 0, solves = 0;
  auto take = [&](const json& r) {
    z_up += r["z_up"].get<long>();
    store_up += r["audit"]["store_up"].get<long>();
    solves += r["audit"]["solves"].get<long>();
    if (r.contains("incumbent_up")) inc_up += r["incumbent_up"].get<long>();
  };
  for (const auto& r : oracle["c1"]) take(r);
  for (const auto& r : oracle["c2"]) take(r);
  for (const auto& r : suite) take(r);
  for (const auto& [cap, runs] : pricing.items())
    for (const auto& r : runs) take(r);
  for (const auto& r : scaling) take(r);
  return {z_up == 0 && store_up == 0 && inc_up == 0 && solves > 0,
          fmt("%ld master solves audited: z_RMP increases %ld, stored cost increases %ld, BAP incumbent increases %ld",
              solves, z_up, store_up, inc_up)};
}

std::string run_capture(const std::string& cmd, int& code) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    code = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int st = pclose(p);
  code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

Outcome criterion10(const std::string& cli, const fs::path& scratch) {
  SolveSettings s = suite_settings();
  s.bap_max_nodes = 5;
  s.cg_iterations = 30;
  auto inst = make_random_instance(suite_instance_config(10), kSuiteBase);
  std::vector<std::string> diffs;
  int compared = 0;
  for (Method m : {Method::kUF, Method::kSA, Method::kRMH, Method::kBAP}) {
    PlanJsonOptions o;
    o.include_routes = true;
    const auto a = plan_to_json(solve(m, inst, s, 7), o);
    const auto b = plan_to_json(solve(m, inst, s, 7), o);
    ++compared;
    if (a != b) diffs.push_back(to_string(m));
  }
  if (!cli.empty()) {
    fs::create_directories(scratch);
    const auto file = (scratch / "determinism.json").string();
    save_instance_file(inst, file);
    const std::vector<std::string> commands = {
        "solve --method rmh --seed 3 --repeat 2 --routes --lns-iterations 300 --cg-iterations 30 --instance " + file,
        "solve --method bap --seed 3 --node-iterations 5 --lns-iterations 300 --cg-iterations 30 --instance " + file,
        "solve --method sa --seed 5 --m 2 --instance " + file,
        "lb --runs 2 --instance " + file,
        "generate --base " + file + " --days 12 --seed 4 --drop 0.2 --dup 0.1 --scale 0.8,1.2 --out /dev/stdout",
    };
    for (const auto& c : commands) {
      int ca = 0, cb = 0;
      const auto a = run_capture(cli + " " + c + " 2>/dev/null", ca);
      const auto b = run_capture(cli + " " + c + " 2>/dev/null", cb);
      ++compared;
      if (ca != 0 || cb != 0 || a != b || a.empty()) diffs.push_back("cli " + c.substr(0, c.find(' ', 6)));
    }
  }
  std::string list;
  for (const auto& d : diffs) list += (list.empty() ? "" : ", ") + d;
  return {diffs.empty(), fmt("%d repeated runs compared byte for byte, %d differ%s%s", compared,
                             static_cast<int>(diffs.size()), diffs.empty() ? "" : ": ", list.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> which;
  std::string cache_dir = "acceptance_cache";
  std::string cli;
  int n1 = 50, n2 = 20;
  app.add_option("--criterion", which, "criteria to evaluate (default: all)")->check(CLI::Range(1, 10));
  app.add_option("--cache-dir", cache_dir, "where phase results are kept");
  app.add_option("--cli", cli, "fleetmix executable for the determinism check");
  app.add_option("--oracle-instances", n1, "criterion 1 instance count")->check(CLI::PositiveNumber);
  app.add_option("--cg-instances", n2, "criterion 2 instance count")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  Cache cache{cache_dir};
  const SolveSettings settings = suite_settings();
  std::map<std::string, json> phases;
  auto phase = [&](const std::string& name) -> const json& {
    if (auto it = phases.find(name); it != phases.end()) return it->second;
    json key;
    std::function<json()> compute;
    if (name == "oracle") {
      key = {{"n1", n1}, {"n2", n2}, {"version", 3}};
      compute = [&] { return phase_oracle(n1, n2); };
    } else if (name == "suite") {
      key = settings_key(settings);
      compute = [&] {
        const auto t = std::chrono::steady_clock::now();
        json runs = phase_suite(settings);
        return json{{"runs", runs}, {"seconds", seconds_since(t)}};
      };
    } else if (name == "pricing") {
      key = settings_key(settings);
      compute = [&] { return phase_pricing(settings); };
    } else {
      key = settings_key(settings);
      compute = [&] { return phase_scaling(settings); };
    }
    if (auto hit = cache.load(name, key)) return phases[name] = *hit;
    json data = compute();
    cache.store(name, key, data);
    return phases[name] = data;
  };

  bool all_ok = true;
  for (int c : which) {
    Outcome o;
    try {
      switch (c) {
        case 1: o = criterion1(phase("oracle")); break;
        case 2: o = criterion2(phase("oracle")); break;
        case 3: o = criterion3(phase("oracle")); break;
        case 4: o = criterion4(phase("oracle")); break;
        case 5: o = criterion5(phase("suite")["runs"], phase("suite")["seconds"].get<double>()); break;
        case 6: o = criterion6(phase("suite")["runs"]); break;
        case 7: o = criterion7(phase("pricing")); break;
        case 8: o = criterion8(phase("scaling")); break;
        case 9:
          o = criterion9(phase("oracle"), phase("suite")["runs"], phase("pricing"), phase("scaling"));
          break;
        case 10: o = criterion10(cli, fs::path(cache_dir) / "scratch"); break;
      }
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::cout << "criterion " << c << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")" << std::endl;
    all_ok = all_ok && o.pass;
  }
  return all_ok ? 0 : 1;
}
