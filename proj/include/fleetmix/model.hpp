#ifndef FLEETMIX_MODEL_HPP
#define FLEETMIX_MODEL_HPP

#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fleetmix {

inline constexpr double kEps = 1e-6;

// ----- errors -----

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};

class SchemaError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};

class ValidationError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ----- domain types -----

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(const Point& a, const Point& b);

/// Closed interval of integer minutes.
struct TimeWindow {
  int earliest = 0;
  int latest = 0;
  bool operator==(const TimeWindow&) const = default;
};

struct VehicleType {
  int id = 0;
  double fixed_cost = 0.0;         // per horizon
  std::vector<double> capacity;    // indexed by commodity
  double cost_per_distance = 0.0;
  double cost_per_time = 0.0;
  double speed = 1.0;
  bool operator==(const VehicleType&) const = default;
};

struct Request {
  int id = 0;
  Point location;
  std::vector<double> demand;      // indexed by commodity
  TimeWindow tw;
  int service_time = 0;
  std::vector<int> allowed_types;  // empty: every type allowed

  bool allows(int type_id) const;
  bool operator==(const Request&) const = default;
};

struct DayInstance {
  int id = 0;
  std::vector<Request> requests;
  Point depot;
  TimeWindow shift;
  bool operator==(const DayInstance&) const = default;
};

struct HorizonInstance {
  std::string name;
  std::vector<std::string> commodities;
  std::vector<VehicleType> vehicle_types;
  std::vector<DayInstance> days;

  std::size_t num_types() const { return vehicle_types.size(); }
  std::size_t num_days() const { return days.size(); }
  int commodity_index(std::string_view name) const;  // -1 when unknown
  bool operator==(const HorizonInstance&) const = default;
};

/// Per-type vehicle counts, either an overall fleet or the fleet of one option.
class FleetVector {
 public:
  FleetVector() = default;
  explicit FleetVector(std::size_t num_types) : counts_(num_types, 0) {}
  explicit FleetVector(std::vector<int> counts) : counts_(std::move(counts)) {}

  std::size_t size() const { return counts_.size(); }
  int& operator[](std::size_t t) { return counts_[t]; }
  int operator[](std::size_t t) const { return counts_[t]; }
  const std::vector<int>& counts() const { return counts_; }
  int total() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }

  /// True when every component is >= the other's.
  bool dominates(const FleetVector& other) const;
  /// Componentwise maximum.
  FleetVector max_with(const FleetVector& other) const;

  std::string to_string() const;

  auto operator<=>(const FleetVector&) const = default;

 private:
  std::vector<int> counts_;
};

// ----- instance I/O -----

/// Parses and fully validates an instance document.
HorizonInstance load_instance(std::string_view json_text);
HorizonInstance load_instance_file(const std::string& path);
std::string save_instance(const HorizonInstance& instance);
void save_instance_file(const HorizonInstance& instance, const std::string& path);

/// Throws ValidationError naming the offending day/request.
void validate(const HorizonInstance& instance);

// ----- demand -----

double total_demand(const DayInstance& day, int commodity);
double total_demand(const HorizonInstance& instance, const DayInstance& day,
                    std::string_view commodity);
/// Sum of every commodity's total demand; used for load ranking.
double total_load(const DayInstance& day);

// ----- synthetic data -----

struct PerturbationConfig {
  double scale_lo = 1.0;
  double scale_hi = 1.0;
  double drop_prob = 0.0;
  double dup_prob = 0.0;
  /// Duplicated requests are moved by up to this distance in x and y.
  double dup_jitter = 2.0;
};

struct GeneratedDayStats {
  int day_id = 0;
  int num_requests = 0;
  std::vector<double> total_demand;  // per commodity, recorded while generating
};

struct GeneratedHorizon {
  HorizonInstance instance;
  std::vector<GeneratedDayStats> stats;
};

/// Builds `n_days` days by perturbing the base days cyclically (generated day k
/// perturbs base.days[k % |base.days|]). Vehicle types and commodities are kept.
GeneratedHorizon generate_synthetic(const HorizonInstance& base, int n_days,
                                    const PerturbationConfig& config, std::uint64_t seed);

/// Convenience overload: a single base day in the context of `base`'s fleet data.
GeneratedHorizon generate_synthetic(const HorizonInstance& base, const DayInstance& base_day,
                                    int n_days, const PerturbationConfig& config,
                                    std::uint64_t seed);

struct RandomInstanceConfig {
  int num_days = 1;
  int min_requests = 5;
  int max_requests = 10;
  int num_types = 3;
  int num_commodities = 1;
  double area = 50.0;               // requests in [-area, area]^2
  double restricted_share = 0.2;    // share of requests with a restricted type set
  double window_share = 0.5;        // share of requests with a morning/afternoon window
  int shift_length = 600;
  /// Vehicle-type archetypes are scaled so that mid-size days need a few vehicles.
  double demand_lo = 2.0;
  double demand_hi = 10.0;
  double fixed_cost_scale = 1.0;
  /// 0: days are i.i.d. Above 0 every day gets a profile (dominant commodity,
  /// preferred compatibility block, demand level) that a request follows with
  /// this probability.
  double day_variety = 0.0;
};

/// Random instances with morning / afternoon / whole-day windows and mixed
/// compatibilities. Always valid.
HorizonInstance make_random_instance(const RandomInstanceConfig& config, std::uint64_t seed);

/// Keeps days [0, d); fixed costs are scaled by d/|I| when `scale_fixed` is set.
HorizonInstance horizon_prefix(const HorizonInstance& instance, int d, bool scale_fixed);
/// Drops the last `k` vehicle types and every reference to them. Not validated.
HorizonInstance without_last_types(const HorizonInstance& instance, int k);
/// Keeps only the listed days (in the given order).
HorizonInstance select_days(const HorizonInstance& instance, const std::vector<int>& day_indices);

}  // namespace fleetmix

#endif  // FLEETMIX_MODEL_HPP
