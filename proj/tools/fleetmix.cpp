// fleetmix command line: generate | random | solve | lb | sweep
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fleetmix/log.hpp"
#include "fleetmix/runner.hpp"

using namespace fleetmix;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 2, kGeneration = 3, kInstance = 4, kInternal = 5 };

struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

struct SolveFlags {
  std::string method = "rmh";
  std::string instance;
  double time_limit = 60.0;
  std::uint64_t seed = 1;
  int m = 3;
  std::string pricing = "heuristic";
  int parallel = 0;
  int repeat = 1;
  std::string gap_against;
  std::string out;
  std::string csv;
  int lns_iterations = 1000;
  int cg_iterations = 300;
  int stagnation = 3;
  int max_solutions = 0;
  int node_iterations = 30;
  bool routes = false;
  bool timing = false;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f, bool with_method) {
  if (with_method)
    cmd->add_option("--method", f.method, "uf | sa | rmh | bap")
        ->check(CLI::IsMember({"uf", "sa", "rmh", "bap"}, CLI::ignore_case));
  cmd->add_option("--instance", f.instance, "instance JSON")->required();
  cmd->add_option("--time-limit", f.time_limit, "seconds per method run")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--m", f.m, "SA: number of days solved jointly")->check(CLI::PositiveNumber);
  cmd->add_option("--pricing", f.pricing, "heuristic | exact")
      ->check(CLI::IsMember({"heuristic", "exact"}, CLI::ignore_case));
  cmd->add_option("--parallel", f.parallel, "workers and sub-problems per iteration (0: all cores)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--repeat", f.repeat, "runs with seeds S..S+R-1")->check(CLI::PositiveNumber);
  cmd->add_option("--gap-against", f.gap_against, "lower-bound JSON written by `lb`");
  cmd->add_option("--lns-iterations", f.lns_iterations, "LNS iterations per sub-problem")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--cg-iterations", f.cg_iterations, "column generation iterations")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--stagnation", f.stagnation, "CG iterations without improving column (0: off)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-solutions", f.max_solutions, "stop each LNS at the k-th solution (0: off)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--node-iterations", f.node_iterations, "BAP: CG iterations per node")
      ->check(CLI::PositiveNumber);
}

SolveSettings settings_from(const SolveFlags& f) {
  SolveSettings s;
  s.time_limit = f.time_limit;
  s.pricing = f.pricing == "exact" ? PricingMode::kExact : PricingMode::kHeuristic;
  s.parallelism = f.parallel;
  s.lns_iterations = f.lns_iterations;
  s.max_solutions = f.max_solutions;
  s.cg_iterations = f.cg_iterations;
  s.stagnation_limit = f.stagnation;
  s.sa_m = f.m;
  s.bap_node_iterations = f.node_iterations;
  return s;
}

HorizonInstance load_or_throw(const std::string& path) { return load_instance_file(path); }

double read_lb(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot read lower bound file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InstanceError("lower bound file: " + std::string(e.what()));
  }
  if (!j.contains("total_lb") || !j["total_lb"].is_number())
    throw InstanceError("lower bound file has no numeric total_lb");
  return j["total_lb"].get<double>();
}

std::vector<FleetPlan> run_repeated(Method method, const HorizonInstance& inst, const SolveSettings& s,
                                    std::uint64_t seed, int repeat) {
  std::vector<FleetPlan> plans;
  for (int r = 0; r < repeat; ++r) {
    FleetPlan p = solve(method, inst, s, seed + static_cast<std::uint64_t>(r));
    std::string err = check_plan(p, inst);
    if (!err.empty()) throw InvariantError(to_string(method) + " produced an invalid plan: " + err);
    plans.push_back(std::move(p));
  }
  return plans;
}

int cmd_solve(const SolveFlags& f) {
  HorizonInstance inst = load_or_throw(f.instance);
  const auto method = parse_method(f.method);
  const SolveSettings s = settings_from(f);
  std::optional<double> lb;
  if (!f.gap_against.empty()) lb = read_lb(f.gap_against);
  auto plans = run_repeated(*method, inst, s, f.seed, f.repeat);
  if (lb)
    for (auto& p : plans)
      if (!p.infeasible) p.gap = compute_gap(p.total_cost, *lb);

  PlanJsonOptions opt;
  opt.include_routes = f.routes;
  opt.include_wall_time = f.timing;
  ojson doc;
  doc["instance"] = inst.name;
  doc["method"] = to_string(*method);
  auto arr = ojson::array();
  for (const auto& p : plans) arr.push_back(ojson::parse(plan_to_json(p, opt)));
  doc["plans"] = arr;
  doc["aggregate"] = ojson::parse(aggregate_to_json(aggregate(plans)));
  write_text(f.out, doc.dump(2));

  if (!f.csv.empty()) {
    std::string text;
    if (plans.size() == 1) {
      text = plan_to_csv(plans[0]);
    } else {
      std::ostringstream os;
      os << "seed,day_id,option_cost,idle\n";
      for (const auto& p : plans) {
        std::istringstream rows(plan_to_csv(p));
        std::string line;
        std::getline(rows, line);  // header
        while (std::getline(rows, line)) os << p.seed << ',' << line << '\n';
      }
      text = os.str();
    }
    write_text(f.csv, text);
  }
  return kOk;
}

int cmd_lb(const std::string& instance, int runs, double time_limit, std::uint64_t seed, int parallel,
           int lns, const std::string& out) {
  HorizonInstance inst = load_or_throw(instance);
  SolveSettings s;
  s.lb_runs = runs;
  s.time_limit = time_limit;
  s.parallelism = parallel;
  s.lns_iterations = lns;
  LowerBound lb = lower_bound(inst, s, seed);
  ojson j;
  j["instance"] = inst.name;
  j["runs"] = runs;
  j["operational_lb"] = lb.operational;
  j["fixed_lb"] = lb.fixed;
  j["total_lb"] = lb.total;
  j["covering_fleet"] = lb.covering_fleet.counts();
  j["per_day"] = lb.per_day;
  write_text(out, j.dump(2));
  return kOk;
}

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto m = parse_method(item);
    if (!m) throw CLI::ValidationError("--methods", "unknown method " + item);
    out.push_back(*m);
  }
  return out;
}

int cmd_sweep(const std::string& kind, const SolveFlags& f, const std::string& methods, int step, int max_removed) {
  HorizonInstance inst = load_or_throw(f.instance);
  const SolveSettings s = settings_from(f);
  const auto ms = parse_methods(methods);
  std::ostringstream os;
  os.precision(10);
  if (kind == "days") {
    os << "d,method,cost_per_day,fixed_per_day,operational_per_day,idle,infeasible_runs\n";
    const int nd = static_cast<int>(inst.num_days());
    for (int d = step; d <= nd; d += step) {
      HorizonInstance sub = horizon_prefix(inst, d, true);
      for (Method m : ms) {
        auto agg = aggregate(run_repeated(m, sub, s, f.seed, f.repeat));
        os << d << ',' << to_string(m) << ',' << agg.mean_cost / d << ',' << agg.mean_fixed / d << ','
           << agg.mean_operational / d << ',' << agg.mean_idle << ',' << agg.infeasible_runs << '\n';
      }
    }
  } else {
    os << "types,method,idle,fixed,operational,total,status\n";
    const int nt = static_cast<int>(inst.num_types());
    for (int k = 0; k <= std::min(max_removed, nt - 1); ++k) {
      HorizonInstance sub = without_last_types(inst, k);
      const int types = nt - k;
      try {
        validate(sub);
      } catch (const ValidationError& e) {
        for (Method m : ms) os << types << ',' << to_string(m) << ",,,,,\"invalid: " << e.what() << "\"\n";
        continue;
      }
      for (Method m : ms) {
        auto agg = aggregate(run_repeated(m, sub, s, f.seed, f.repeat));
        os << types << ',' << to_string(m) << ',' << agg.mean_idle << ',' << agg.mean_fixed << ','
           << agg.mean_operational << ',' << agg.mean_cost << ','
           << (agg.infeasible_runs == agg.runs ? "infeasible" : "ok") << '\n';
      }
    }
  }
  write_text(f.out, os.str());
  return kOk;
}

std::string summary_csv(const HorizonInstance& inst, const std::vector<GeneratedDayStats>& stats) {
  std::ostringstream os;
  os.precision(10);
  os << "day_id,requests";
  for (const auto& c : inst.commodities) os << ",demand_" << c;
  os << '\n';
  for (const auto& st : stats) {
    os << st.day_id << ',' << st.num_requests;
    for (double v : st.total_demand) os << ',' << v;
    os << '\n';
  }
  return os.str();
}

std::vector<GeneratedDayStats> stats_of(const HorizonInstance& inst) {
  std::vector<GeneratedDayStats> out;
  for (const auto& d : inst.days) {
    GeneratedDayStats st;
    st.day_id = d.id;
    st.num_requests = static_cast<int>(d.requests.size());
    for (std::size_t c = 0; c < inst.commodities.size(); ++c)
      st.total_demand.push_back(total_demand(d, static_cast<int>(c)));
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-horizon fleet size and mix: column generation, branch and price, baselines"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "perturb base day(s) into a multi-day instance");
  std::string base, gen_out;
  int days = 1;
  std::uint64_t gen_seed = 1;
  double drop = 0.0, dup = 0.0;
  std::vector<double> scale{1.0, 1.0};
  gen->add_option("--base", base, "instance JSON whose days serve as templates")->required();
  gen->add_option("--days", days, "number of days")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--out", gen_out, "output instance file")->required();
  gen->add_option("--drop", drop, "request drop probability")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--dup", dup, "request duplication probability")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--scale", scale, "demand scale range lo,hi")->delimiter(',')->expected(2);

  // random
  auto* rnd = app.add_subcommand("random", "random instance with mixed windows and compatibilities");
  RandomInstanceConfig rc;
  std::string rnd_out;
  std::uint64_t rnd_seed = 1;
  std::vector<int> requests{rc.min_requests, rc.max_requests};
  rnd->add_option("--days", rc.num_days, "number of days")->check(CLI::PositiveNumber);
  rnd->add_option("--types", rc.num_types, "vehicle types")->check(CLI::PositiveNumber);
  rnd->add_option("--commodities", rc.num_commodities, "commodities")->check(CLI::PositiveNumber);
  rnd->add_option("--requests", requests, "requests per day lo,hi")->delimiter(',')->expected(2);
  rnd->add_option("--variety", rc.day_variety, "probability a request follows its day profile (0: iid days)")
      ->check(CLI::Range(0.0, 1.0));
  rnd->add_option("--seed", rnd_seed, "seed");
  rnd->add_option("--out", rnd_out, "output instance file")->required();

  // solve
  auto* sol = app.add_subcommand("solve", "run one method and print plan JSON");
  SolveFlags sf;
  add_solve_flags(sol, sf, true);
  sol->add_option("--out", sf.out, "plan JSON file (default stdout)");
  sol->add_option("--csv", sf.csv, "per-day CSV file");
  sol->add_flag("--routes", sf.routes, "include routes in the plan JSON");
  sol->add_flag("--emit-timing", sf.timing, "include wall_time in the plan JSON");

  // lb
  auto* lbc = app.add_subcommand("lb", "approximate lower bound");
  std::string lb_instance, lb_out;
  int lb_runs = 5, lb_parallel = 0, lb_lns = 1000;
  double lb_time = 60.0;
  std::uint64_t lb_seed = 1;
  lbc->add_option("--instance", lb_instance, "instance JSON")->required();
  lbc->add_option("--runs", lb_runs, "seeded solves per day")->check(CLI::PositiveNumber);
  lbc->add_option("--time-limit", lb_time, "seconds")->check(CLI::PositiveNumber);
  lbc->add_option("--seed", lb_seed, "seed");
  lbc->add_option("--parallel", lb_parallel, "workers")->check(CLI::NonNegativeNumber);
  lbc->add_option("--lns-iterations", lb_lns, "LNS iterations per solve")->check(CLI::NonNegativeNumber);
  lbc->add_option("--out", lb_out, "output file (default stdout)");

  // sweep
  auto* swp = app.add_subcommand("sweep", "day-prefix or vehicle-type sweep, CSV output");
  SolveFlags wf;
  std::string kind = "days", methods = "uf,sa,rmh";
  int step = 1, max_removed = 3;
  swp->add_option("--sweep", kind, "days | types")->required()->check(CLI::IsMember({"days", "types"}));
  add_solve_flags(swp, wf, false);
  swp->add_option("--methods", methods, "comma-separated methods");
  swp->add_option("--step", step, "days sweep: prefix length increment")->check(CLI::PositiveNumber);
  swp->add_option("--max-removed", max_removed, "types sweep: most types removed")->check(CLI::NonNegativeNumber);
  swp->add_option("--out", wf.out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      if (scale.size() != 2 || scale[0] > scale[1] || scale[0] <= 0) {
        std::cerr << "--scale needs 0 < lo <= hi\n";
        return kUsage;
      }
      HorizonInstance b;
      try {
        b = load_instance_file(base);
      } catch (const InstanceError& e) {
        std::cerr << "base instance: " << e.what() << '\n';
        return kGeneration;
      }
      PerturbationConfig pc;
      pc.scale_lo = scale[0];
      pc.scale_hi = scale[1];
      pc.drop_prob = drop;
      pc.dup_prob = dup;
      try {
        GeneratedHorizon g = generate_synthetic(b, days, pc, gen_seed);
        save_instance_file(g.instance, gen_out);
        std::cout << summary_csv(g.instance, g.stats);
      } catch (const std::exception& e) {
        std::cerr << "generation failed: " << e.what() << '\n';
        return kGeneration;
      }
      return kOk;
    }
    if (*rnd) {
      if (requests.size() != 2) return kUsage;
      rc.min_requests = requests[0];
      rc.max_requests = requests[1];
      HorizonInstance inst = make_random_instance(rc, rnd_seed);
      save_instance_file(inst, rnd_out);
      std::cout << summary_csv(inst, stats_of(inst));
      return kOk;
    }
    if (*sol) return cmd_solve(sf);
    if (*lbc) return cmd_lb(lb_instance, lb_runs, lb_time, lb_seed, lb_parallel, lb_lns, lb_out);
    if (*swp) return cmd_sweep(kind, wf, methods, step, max_removed);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const GenerationError& e) {
    std::cerr << "generation failed: " << e.what() << '\n';
    return kGeneration;
  } catch (const InstanceError& e) {
    std::cerr << "instance error: " << e.what() << '\n';
    return kInstance;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
