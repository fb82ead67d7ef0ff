#ifndef FLEETMIX_COLGEN_HPP
#define FLEETMIX_COLGEN_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "fleetmix/fsm.hpp"
#include "fleetmix/master.hpp"
#include "fleetmix/model.hpp"
#include "fleetmix/plan.hpp"

namespace fleetmix {

// ----- sub-problem selection -----

/// Options found so far for one day, with the duals each was priced under.
struct DayScoreRecord {
  std::vector<std::vector<double>> q;  // q^j per option
  std::vector<FleetVector> fleets;     // F_ij per option

  int num_options() const { return static_cast<int>(fleets.size()); }
};

std::vector<DayScoreRecord> build_score_records(const ColumnStore& store);

/// Weighted dual variation; -1 when every q_ti is zero.
double score_day(int day, const Duals& duals, const DayScoreRecord& record);

/// Up to k days with positive score, best first, ties by smaller day index.
std::vector<int> select_subproblems(const std::vector<double>& scores, int k);

// ----- covering relaxation -----

struct CoveringResult {
  bool feasible = false;
  double value = 0.0;
  FleetVector fleet;
};

/// min sum_t cost_t F_t  s.t.  sum_t capacity[t][c] F_t >= demand[c] for all c,
/// F_t integer in [0, upper_t]. Depth-first branch and bound.
CoveringResult solve_covering(const std::vector<std::vector<double>>& capacity,
                              const std::vector<double>& cost, const std::vector<double>& demand,
                              const std::vector<int>* upper = nullptr);

/// r_i0 + covering minimum under prices q_i - p_i; 0 when q_i is all zero.
/// `bounds` caps the vehicle counts when given.
double covering_bound(const HorizonInstance& instance, int day, const Duals& duals, double r0,
                      const FleetBounds* bounds = nullptr);

/// z_RMP plus the non-positive part of every day's reduced-cost bound.
double lagrangian_bound(double z_rmp, const std::vector<double>& day_bounds);

// ----- column generation -----

struct CgBudget {
  double max_seconds = 60.0;
  int max_iterations = 200;
  double gap_eps = 1e-3;
  int stagnation_limit = 3;  // 0: never stop on stagnation
};

struct CgConfig {
  FsmConfig fsm;
  int parallelism = 0;  // 0: hardware concurrency
  std::uint64_t seed = 1;
  bool quick_cg = true;
  int quick_cg_node_limit = 5000;
  /// Heuristic pricing also inserts the other improving solutions it visited.
  bool multiple_columns = true;
  bool solve_dual_directly = false;
  CgBudget budget;
};

enum class CgStop { kConverged, kStagnation, kGap, kIterations, kTime, kInfeasible };

std::string to_string(CgStop stop);

struct IterationRecord {
  int iteration = 0;
  double z_rmp = 0.0;
  double bound = 0.0;          // this iteration's Lagrangian value
  int added = 0;               // added or replaced columns
  int negative = 0;            // of which with reduced cost below -1e-6
  int quick_cg_columns = 0;
  std::vector<int> priced_days;
  double min_reduced_cost = 0.0;  // over priced days
};

struct CgState {
  int iteration = 0;
  Duals duals;
  double z_rmp = 0.0;
  std::optional<double> z_bar;
  double best_bound = -std::numeric_limits<double>::infinity();
  std::vector<int> priced;         // S of the last pricing round
  std::vector<double> day_bounds;  // rc*_i or covering rc_i of the last round
  int stagnation = 0;
  double elapsed = 0.0;
  CgStop stop = CgStop::kIterations;
  bool infeasible = false;
  std::vector<double> fleet_lp;    // F_t of the final restricted LP
  std::vector<IterationRecord> history;
  std::vector<double> z_trace;     // z_RMP after every master solve
  int z_increases = 0;             // monotonicity audit, expected 0
  int pricing_failures = 0;
  int quick_cg_infeasible = 0;

  bool fleet_integral(double tol = 1e-6) const;
};

/// Passed to the observer after every restricted master solve.
struct MasterSnapshot {
  const RestrictedMaster& master;
  const lp::Solution& solution;
  const Duals& duals;
  const ColumnStore& store;
  const FleetBounds& bounds;
  int iteration;
};

using MasterObserver = std::function<void(const MasterSnapshot&)>;

/// Shared state of one solve: instance, column store, init costs r_i0 and,
/// in exact mode, the per-day enumeration oracles.
class CgContext {
 public:
  CgContext(const HorizonInstance& instance, CgConfig config);
  ~CgContext();
  CgContext(const CgContext&) = delete;
  CgContext& operator=(const CgContext&) = delete;

  /// One best-routing option per day, computed in parallel. Throws
  /// InstanceError when some day cannot be served.
  void initialize();

  const HorizonInstance& instance() const { return *instance_; }
  const CgConfig& config() const { return config_; }
  ColumnStore& store() { return store_; }
  const ColumnStore& store() const { return store_; }
  double r0(int day) const { return r0_[static_cast<std::size_t>(day)]; }
  int parallelism() const;

  void set_observer(MasterObserver observer) { observer_ = std::move(observer); }
  const MasterObserver& observer() const { return observer_; }

  /// Solves one day's pricing problem under the given prices and bounds.
  std::optional<FleetOption> price_day(int day, const std::vector<double>& prices,
                                       const FleetBounds& bounds, std::uint64_t seed,
                                       std::vector<Route>* route_sink,
                                       std::vector<FleetOption>* option_sink = nullptr);

  /// Counter used to derive distinct, reproducible pricing seeds.
  std::uint64_t next_round() { return round_++; }

 private:
  const HorizonInstance* instance_;
  CgConfig config_;
  ColumnStore store_;
  std::vector<double> r0_;
  std::vector<std::unique_ptr<ExactFsmSolver>> exact_;
  MasterObserver observer_;
  std::uint64_t round_ = 0;
};

/// Column generation at one node. Columns violating M_t are masked; a day left
/// without any column is first priced with zero prices.
CgState run_cg(CgContext& context, const FleetBounds& bounds, const CgBudget& budget);

/// Per-day FSM with the fleet as availability bound and zero prices. nullopt
/// when some day cannot be served.
std::optional<std::vector<FleetOption>> evaluate_fleet(const HorizonInstance& instance,
                                                       const FleetVector& fleet,
                                                       const FsmConfig& fsm, std::uint64_t seed,
                                                       int parallelism);

struct RmhConfig {
  CgConfig cg;
  MasterMipOptions mip;
};

/// CG at the root, then the integer restricted master over generated columns.
FleetPlan run_rmh(const HorizonInstance& instance, const RmhConfig& config,
                  CgState* state_out = nullptr, const MasterObserver& observer = {});

/// Builds a plan from an integer master solution.
FleetPlan plan_from_master(Method method, const HorizonInstance& instance, const ColumnStore& store,
                           const MasterIntegerResult& result, std::uint64_t seed);

}  // namespace fleetmix

#endif  // FLEETMIX_COLGEN_HPP
