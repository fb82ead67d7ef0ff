#ifndef FLEETMIX_MASTER_HPP
#define FLEETMIX_MASTER_HPP

#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fleetmix/fsm.hpp"
#include "fleetmix/lp.hpp"
#include "fleetmix/model.hpp"
#include "fleetmix/routing.hpp"

namespace fleetmix {

class MasterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ColumnOrigin { kInit, kPricing, kQuickCg, kRepair };

std::string to_string(ColumnOrigin origin);

/// One option j of day i. `day` is the position in HorizonInstance::days.
struct Column {
  int day = 0;
  FleetVector fleet;
  double routing_cost = 0.0;
  std::vector<Route> routes;
  ColumnOrigin origin = ColumnOrigin::kPricing;
  std::vector<double> duals_at_creation;  // q_ti used when the column was found
};

Column make_column(int day, const FleetOption& option, ColumnOrigin origin,
                   std::vector<double> duals_at_creation);

struct Duals {
  std::vector<double> p;               // per day
  std::vector<std::vector<double>> q;  // [day][type], >= 0

  bool all_zero(int day, double tol = 1e-9) const;
};

double reduced_cost(const Column& column, const Duals& duals);

/// Per-type fleet bounds (m_t, M_t) of a branch-and-price node.
struct FleetBounds {
  std::vector<int> lower;
  std::vector<int> upper;  // kUnbounded when free

  static FleetBounds unbounded(std::size_t num_types);
  bool contains(const FleetVector& fleet) const;
  /// Columns are kept unless they need more vehicles than M_t allows.
  bool admits_column(const FleetVector& fleet) const;
  bool consistent() const;
  std::string to_string() const;
  bool operator==(const FleetBounds&) const = default;
};

/// Deduplicated routes per (day, type, stop set). The cheaper ordering wins.
class RoutePool {
 public:
  explicit RoutePool(std::size_t num_days = 0) : by_day_(num_days) {}

  /// Returns true when the pool changed.
  bool add(int day, const Route& route);
  std::vector<const Route*> routes(int day) const;
  std::size_t size(int day) const { return by_day_[static_cast<std::size_t>(day)].size(); }
  std::size_t total_size() const;

 private:
  using Key = std::pair<int, std::vector<int>>;  // (type, sorted stops)
  std::vector<std::map<Key, Route>> by_day_;
};

enum class InsertResult { kAdded, kReplaced, kDiscarded };

std::string to_string(InsertResult result);

/// Columns keyed by (day, fleet), shared by every node of a search. Insertions
/// are serialized; readers must not overlap with writers.
class ColumnStore {
 public:
  ColumnStore(std::size_t num_days, std::size_t num_types);

  InsertResult add_or_replace(Column column);
  /// Merges routes only.
  void add_routes(int day, const std::vector<Route>& routes);

  const std::vector<Column>& columns() const { return columns_; }
  std::vector<int> columns_of_day(int day) const;
  const RoutePool& pool() const { return pool_; }
  std::size_t num_days() const { return num_days_; }
  std::size_t num_types() const { return num_types_; }
  std::size_t size() const { return columns_.size(); }
  /// Incremented on every added or replaced column.
  long version() const { return version_; }

  std::string dump_json() const;

 private:
  std::size_t num_days_;
  std::size_t num_types_;
  std::vector<Column> columns_;
  std::map<std::pair<int, FleetVector>, int> index_;
  RoutePool pool_;
  long version_ = 0;
  mutable std::mutex mutex_;
};

/// The restricted [LM] (or [M]) over the unmasked columns.
struct RestrictedMaster {
  lp::LinearProgram lp;
  std::vector<int> column_of_var;  // store index for each d variable, -1 for F_t
  std::vector<int> fleet_var;      // LP variable of F_t
  std::vector<int> convexity_row;  // per day
  std::vector<std::vector<int>> linking_row;  // [day][type]
};

/// Variables d_ij, F_t in [m_t, M_t]; rows sum_j d_ij = 1 and
/// sum_j F_ij^t d_ij - F_t <= 0. Throws MasterError when a day has no column.
RestrictedMaster build_restricted(const HorizonInstance& instance, const ColumnStore& store,
                                  const FleetBounds& bounds, bool integer = false);

/// p from the convexity rows, q = -(linking duals) clamped at 0.
Duals extract_duals(const RestrictedMaster& master, const lp::Solution& solution);

/// Solves the restricted dual [D] directly (maximize sum p). Returns the duals
/// and the dual objective; nullopt when [D] is not optimal.
std::optional<std::pair<Duals, double>> solve_restricted_dual(const HorizonInstance& instance,
                                                              const ColumnStore& store,
                                                              const FleetBounds& bounds);

/// Largest violation of [D]'s rows by `duals` over the admitted columns.
double dual_violation(const HorizonInstance& instance, const ColumnStore& store,
                      const FleetBounds& bounds, const Duals& duals);

struct QuickCgResult {
  std::optional<Column> column;
  bool infeasible = false;  // pool cannot cover the day
  double objective = 0.0;
  int nodes = 0;
};

/// Set partitioning over the pooled routes with costs c_r + q_ti; a column is
/// returned when the optimum is below p_i - 1e-6. Root LP plus reduced-cost
/// fixing, then a depth-first search capped at `node_limit` nodes (exact when
/// the cap is not hit).
QuickCgResult quick_cg(const HorizonInstance& instance, int day, const RoutePool& pool,
                       const Duals& duals, const FleetBounds& bounds, int node_limit = 5000);

/// Integer solution of a restricted [M].
struct MasterIntegerResult {
  bool feasible = false;
  double value = std::numeric_limits<double>::infinity();
  FleetVector fleet;
  std::vector<int> chosen;  // store index per day
  int nodes = 0;
  bool node_limit_hit = false;
};

/// Optimal choice of one column per day for a fixed fleet: per day the
/// cheapest column that fits. The fleet is tightened to the usage but kept
/// at or above `lower` when given.
MasterIntegerResult evaluate_fleet_in_store(const HorizonInstance& instance,
                                            const ColumnStore& store, const FleetVector& fleet,
                                            const std::vector<int>* lower = nullptr);

/// Splits `bounds` into disjoint boxes covering every fleet of `bounds`
/// except `point`. Each box tightens one type relative to the chain before it.
std::vector<FleetBounds> exclude_point(const FleetBounds& bounds, const FleetVector& point);

struct MasterMipOptions {
  int node_limit = 5000;
  std::optional<double> cutoff;  // only solutions strictly below are of interest
};

/// Exact integer solve of the restricted [M] within `bounds` by branch and
/// bound on the fleet variables (see README for the box-splitting rule).
MasterIntegerResult solve_master_integer(const HorizonInstance& instance, const ColumnStore& store,
                                         const FleetBounds& bounds,
                                         const MasterMipOptions& options = {});

}  // namespace fleetmix

#endif  // FLEETMIX_MASTER_HPP
