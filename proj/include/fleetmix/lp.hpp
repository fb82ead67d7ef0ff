#ifndef FLEETMIX_LP_HPP
#define FLEETMIX_LP_HPP

#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fleetmix::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { kLe, kGe, kEq };

enum class Status {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,  // simplex iterations or, for a MIP, node limit without incumbent
};

std::string to_string(Status status);

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Minimization problem  min c'x  s.t.  rows (<=, >=, =),  lower <= x <= upper.
/// Columns are stored sparsely; each (row, column) pair may be set once.
class LinearProgram {
 public:
  int add_variable(double cost, double lower, double upper, bool integer = false,
                   std::string name = {});
  int add_row(RowSense sense, double rhs, std::string name = {});
  void set_coefficient(int row, int col, double value);

  int num_rows() const { return static_cast<int>(rhs_.size()); }
  int num_cols() const { return static_cast<int>(cost_.size()); }

  double cost(int j) const { return cost_[static_cast<std::size_t>(j)]; }
  double lower(int j) const { return lower_[static_cast<std::size_t>(j)]; }
  double upper(int j) const { return upper_[static_cast<std::size_t>(j)]; }
  bool is_integer(int j) const { return integer_[static_cast<std::size_t>(j)] != 0; }
  const std::string& col_name(int j) const { return col_names_[static_cast<std::size_t>(j)]; }
  const std::vector<std::pair<int, double>>& column(int j) const {
    return columns_[static_cast<std::size_t>(j)];
  }

  RowSense sense(int i) const { return sense_[static_cast<std::size_t>(i)]; }
  double rhs(int i) const { return rhs_[static_cast<std::size_t>(i)]; }
  const std::string& row_name(int i) const { return row_names_[static_cast<std::size_t>(i)]; }

  void set_bounds(int j, double lower, double upper);
  void set_integer(int j, bool integer);
  void set_cost(int j, double cost);

  /// Throws DimensionError / std::invalid_argument on inconsistent data.
  void check() const;

 private:
  std::vector<double> cost_, lower_, upper_;
  std::vector<char> integer_;
  std::vector<std::string> col_names_;
  std::vector<std::vector<std::pair<int, double>>> columns_;
  std::vector<RowSense> sense_;
  std::vector<double> rhs_;
  std::vector<std::string> row_names_;
};

struct Solution {
  Status status = Status::kInfeasible;
  std::vector<double> primal;
  /// Row duals in the minimization convention: y >= 0 on >= rows, y <= 0 on <= rows.
  std::vector<double> dual;
  std::vector<double> reduced_cost;
  double objective = 0.0;
  double dual_objective = 0.0;
  int iterations = 0;
  // Branch-and-bound only.
  double bound = 0.0;
  bool node_limit_hit = false;
  int nodes = 0;
};

struct Options {
  int max_iterations = 200000;
  int bland_after = 1000;       // consecutive degenerate pivots before Bland's rule
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  int refactor_every = 100;
};

/// Bounded-variable revised simplex (two phases). Integrality flags are ignored.
Solution solve_lp(const LinearProgram& lp, const Options& options = {});

struct MipOptions {
  int node_limit = 20000;
  double integrality_tol = 1e-6;
  /// Known feasible objective value; nodes that cannot beat it are pruned.
  std::optional<double> incumbent_value;
  std::vector<double> incumbent;
  Options lp;
};

/// Best-bound branch and bound, branching on the most fractional variable.
Solution solve_mip(const LinearProgram& lp, const MipOptions& options = {});

/// Fixed-format MPS dump for external verification.
void write_mps(const LinearProgram& lp, std::ostream& out, const std::string& name = "FLEETMIX");

/// Max violation of rows and bounds by `x`.
double primal_infeasibility(const LinearProgram& lp, const std::vector<double>& x);

}  // namespace fleetmix::lp

#endif  // FLEETMIX_LP_HPP
