#include "fleetmix/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <queue>
#include <sstream>

namespace fleetmix::lp {

std::string to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

// ----- LinearProgram -----

int LinearProgram::add_variable(double cost, double lower, double upper, bool integer,
                                std::string name) {
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  integer_.push_back(integer ? 1 : 0);
  col_names_.push_back(std::move(name));
  columns_.emplace_back();
  return num_cols() - 1;
}

int LinearProgram::add_row(RowSense sense, double rhs, std::string name) {
  sense_.push_back(sense);
  rhs_.push_back(rhs);
  row_names_.push_back(std::move(name));
  return num_rows() - 1;
}

void LinearProgram::set_coefficient(int row, int col, double value) {
  if (row < 0 || row >= num_rows() || col < 0 || col >= num_cols())
    throw DimensionError("coefficient (" + std::to_string(row) + ", " + std::to_string(col) +
                         ") outside a " + std::to_string(num_rows()) + "x" +
                         std::to_string(num_cols()) + " program");
  if (value == 0.0) return;
  columns_[static_cast<std::size_t>(col)].emplace_back(row, value);
}

void LinearProgram::set_bounds(int j, double lower, double upper) {
  lower_.at(static_cast<std::size_t>(j)) = lower;
  upper_.at(static_cast<std::size_t>(j)) = upper;
}

void LinearProgram::set_integer(int j, bool integer) {
  integer_.at(static_cast<std::size_t>(j)) = integer ? 1 : 0;
}

void LinearProgram::set_cost(int j, double cost) { cost_.at(static_cast<std::size_t>(j)) = cost; }

void LinearProgram::check() const {
  for (int j = 0; j < num_cols(); ++j) {
    if (!std::isfinite(cost(j))) throw std::invalid_argument("non-finite objective coefficient");
    if (lower(j) > upper(j)) throw std::invalid_argument("variable with lower > upper");
    if (lower(j) == kInfinity || upper(j) == -kInfinity)
      throw std::invalid_argument("variable bounds out of range");
    for (const auto& [i, v] : column(j)) {
      if (i < 0 || i >= num_rows()) throw DimensionError("row index out of range");
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite coefficient");
    }
  }
  for (int i = 0; i < num_rows(); ++i)
    if (!std::isfinite(rhs(i))) throw std::invalid_argument("non-finite right-hand side");
}

double primal_infeasibility(const LinearProgram& lp, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != lp.num_cols()) throw DimensionError("primal vector size mismatch");
  std::vector<double> activity(static_cast<std::size_t>(lp.num_rows()), 0.0);
  double worst = 0.0;
  for (int j = 0; j < lp.num_cols(); ++j) {
    const double v = x[static_cast<std::size_t>(j)];
    worst = std::max({worst, lp.lower(j) - v, v - lp.upper(j)});
    for (const auto& [i, a] : lp.column(j)) activity[static_cast<std::size_t>(i)] += a * v;
  }
  for (int i = 0; i < lp.num_rows(); ++i) {
    const double gap = activity[static_cast<std::size_t>(i)] - lp.rhs(i);
    switch (lp.sense(i)) {
      case RowSense::kLe: worst = std::max(worst, gap); break;
      case RowSense::kGe: worst = std::max(worst, -gap); break;
      case RowSense::kEq: worst = std::max(worst, std::abs(gap)); break;
    }
  }
  return worst;
}

// ----- simplex -----

namespace {

enum class VarState : char { kBasic, kLower, kUpper, kZero };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const std::vector<double>& lower,
          const std::vector<double>& upper, const Options& options)
      : lp_(lp), opt_(options), n_(lp.num_cols()), m_(lp.num_rows()) {
    lo_ = lower;
    up_ = upper;
    for (int i = 0; i < m_; ++i) {
      switch (lp.sense(i)) {
        case RowSense::kLe: lo_.push_back(0.0); up_.push_back(kInfinity); break;
        case RowSense::kGe: lo_.push_back(-kInfinity); up_.push_back(0.0); break;
        case RowSense::kEq: lo_.push_back(0.0); up_.push_back(0.0); break;
      }
    }
  }

  Solution run() {
    Solution sol;
    setup_phase1();
    Status s = Status::kOptimal;
    if (!art_row_.empty()) {
      s = iterate();
      if (s == Status::kIterationLimit) return finish(sol, s);
      double infeasibility = 0.0;
      for (std::size_t a = 0; a < art_row_.size(); ++a)
        infeasibility += x_[static_cast<std::size_t>(n_ + m_) + a];
      if (infeasibility > opt_.feasibility_tol * std::max(1.0, rhs_scale_)) {
        sol.status = Status::kInfeasible;
        sol.iterations = iterations_;
        return sol;
      }
      // Artificials stay in the problem, pinned at zero.
      for (std::size_t a = 0; a < art_row_.size(); ++a) {
        const auto j = static_cast<std::size_t>(n_ + m_) + a;
        up_[j] = 0.0;
        if (state_[j] != VarState::kBasic) {
          state_[j] = VarState::kLower;
          x_[j] = 0.0;
        }
      }
    }
    cost_.assign(static_cast<std::size_t>(total()), 0.0);
    for (int j = 0; j < n_; ++j) cost_[static_cast<std::size_t>(j)] = lp_.cost(j);
    refactor();
    s = iterate();
    return finish(sol, s);
  }

 private:
  int total() const { return n_ + m_ + static_cast<int>(art_row_.size()); }

  template <class F>
  void for_each_entry(int j, F&& f) const {
    if (j < n_) {
      for (const auto& [i, v] : lp_.column(j)) f(i, v);
    } else if (j < n_ + m_) {
      f(j - n_, 1.0);
    } else {
      const auto a = static_cast<std::size_t>(j - n_ - m_);
      f(art_row_[a], art_sign_[a]);
    }
  }

  void setup_phase1() {
    const auto nm = static_cast<std::size_t>(n_ + m_);
    state_.assign(nm, VarState::kLower);
    x_.assign(nm, 0.0);
    for (int j = 0; j < n_; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      if (std::isfinite(lo_[jj])) {
        state_[jj] = VarState::kLower;
        x_[jj] = lo_[jj];
      } else if (std::isfinite(up_[jj])) {
        state_[jj] = VarState::kUpper;
        x_[jj] = up_[jj];
      } else {
        state_[jj] = VarState::kZero;
        x_[jj] = 0.0;
      }
    }
    std::vector<double> residual(static_cast<std::size_t>(m_));
    rhs_scale_ = 1.0;
    for (int i = 0; i < m_; ++i) {
      residual[static_cast<std::size_t>(i)] = lp_.rhs(i);
      rhs_scale_ = std::max(rhs_scale_, std::abs(lp_.rhs(i)));
    }
    for (int j = 0; j < n_; ++j)
      if (x_[static_cast<std::size_t>(j)] != 0.0)
        for (const auto& [i, v] : lp_.column(j))
          residual[static_cast<std::size_t>(i)] -= v * x_[static_cast<std::size_t>(j)];

    basis_.assign(static_cast<std::size_t>(m_), -1);
    for (int i = 0; i < m_; ++i) {
      const auto s = static_cast<std::size_t>(n_ + i);
      const double r = residual[static_cast<std::size_t>(i)];
      if (r >= lo_[s] - opt_.feasibility_tol && r <= up_[s] + opt_.feasibility_tol) {
        state_[s] = VarState::kBasic;
        x_[s] = r;
        basis_[static_cast<std::size_t>(i)] = n_ + i;
        continue;
      }
      // Slack parks at the violated bound; an artificial absorbs the rest.
      const double bound = r < lo_[s] ? lo_[s] : up_[s];
      state_[s] = r < lo_[s] ? VarState::kLower : VarState::kUpper;
      x_[s] = bound;
      const double rest = r - bound;
      art_row_.push_back(i);
      art_sign_.push_back(rest > 0 ? 1.0 : -1.0);
      lo_.push_back(0.0);
      up_.push_back(kInfinity);
      state_.push_back(VarState::kBasic);
      x_.push_back(std::abs(rest));
      basis_[static_cast<std::size_t>(i)] = total() - 1;
    }
    cost_.assign(static_cast<std::size_t>(total()), 0.0);
    for (std::size_t a = 0; a < art_row_.size(); ++a) cost_[nm + a] = 1.0;
    refactor();
  }

  // Rebuilds the explicit inverse and recomputes basic values.
  void refactor() {
    const auto m = static_cast<std::size_t>(m_);
    std::vector<double> b(m * m, 0.0);
    for (std::size_t k = 0; k < m; ++k)
      for_each_entry(basis_[k], [&](int i, double v) { b[static_cast<std::size_t>(i) * m + k] = v; });
    binv_.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) binv_[i * m + i] = 1.0;

    // Gauss-Jordan: column k of B is pivoted onto some unused row.
    std::vector<char> row_used(m, 0);
    std::vector<int> new_basis(m, -1);
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t pivot_row = m;
      double best = 1e-11;
      for (std::size_t i = 0; i < m; ++i)
        if (!row_used[i] && std::abs(b[i * m + k]) > best) {
          best = std::abs(b[i * m + k]);
          pivot_row = i;
        }
      if (pivot_row == m) continue;  // dependent column, repaired below
      eliminate(b, k, pivot_row);
      row_used[pivot_row] = 1;
      new_basis[pivot_row] = basis_[k];
    }
    // Replace dependent columns with slacks of the uncovered rows.
    std::vector<int> placed(m, 0);
    for (std::size_t i = 0; i < m; ++i)
      if (new_basis[i] >= 0) placed[i] = 1;
    bool repaired = false;
    for (std::size_t k = 0; k < m; ++k) {
      const int var = basis_[k];
      if (std::find(new_basis.begin(), new_basis.end(), var) != new_basis.end()) continue;
      const auto v = static_cast<std::size_t>(var);
      state_[v] = std::isfinite(lo_[v]) ? VarState::kLower
                                        : (std::isfinite(up_[v]) ? VarState::kUpper : VarState::kZero);
      x_[v] = state_[v] == VarState::kLower ? lo_[v] : (state_[v] == VarState::kUpper ? up_[v] : 0.0);
      repaired = true;
    }
    for (std::size_t i = 0; i < m; ++i)
      if (new_basis[i] < 0) {
        new_basis[i] = n_ + static_cast<int>(i);
        state_[static_cast<std::size_t>(n_) + i] = VarState::kBasic;
        repaired = true;
      }
    basis_ = new_basis;
    if (repaired) {
      // Start over from the cleaned basis.
      refactor();
      return;
    }
    // binv_ now maps B to a row permutation of I; basis_ is ordered by pivot row,
    // which makes binv_ the inverse of the reordered basis.
    recompute_basic_values();
  }

  void eliminate(std::vector<double>& b, std::size_t col, std::size_t pivot_row) {
    const auto m = static_cast<std::size_t>(m_);
    const double inv = 1.0 / b[pivot_row * m + col];
    for (std::size_t c = 0; c < m; ++c) {
      b[pivot_row * m + c] *= inv;
      binv_[pivot_row * m + c] *= inv;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (i == pivot_row) continue;
      const double f = b[i * m + col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < m; ++c) {
        b[i * m + c] -= f * b[pivot_row * m + c];
        binv_[i * m + c] -= f * binv_[pivot_row * m + c];
      }
    }
  }

  void recompute_basic_values() {
    const auto m = static_cast<std::size_t>(m_);
    std::vector<double> r(m);
    for (int i = 0; i < m_; ++i) r[static_cast<std::size_t>(i)] = lp_.rhs(i);
    for (int j = 0; j < total(); ++j) {
      const auto jj = static_cast<std::size_t>(j);
      if (state_[jj] == VarState::kBasic || x_[jj] == 0.0) continue;
      for_each_entry(j, [&](int i, double v) { r[static_cast<std::size_t>(i)] -= v * x_[jj]; });
    }
    for (std::size_t k = 0; k < m; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += binv_[k * m + i] * r[i];
      x_[static_cast<std::size_t>(basis_[k])] = s;
    }
  }

  void compute_duals(std::vector<double>& y) const {
    const auto m = static_cast<std::size_t>(m_);
    y.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      const double cb = cost_[static_cast<std::size_t>(basis_[k])];
      if (cb == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i) y[i] += cb * binv_[k * m + i];
    }
  }

  double reduced_cost(int j, const std::vector<double>& y) const {
    double d = cost_[static_cast<std::size_t>(j)];
    for_each_entry(j, [&](int i, double v) { d -= y[static_cast<std::size_t>(i)] * v; });
    return d;
  }

  Status iterate() {
    const auto m = static_cast<std::size_t>(m_);
    std::vector<double> y, alpha(m);
    int degenerate = 0;
    int since_refactor = 0;
    for (;;) {
      if (iterations_ >= opt_.max_iterations) return Status::kIterationLimit;
      const bool bland = degenerate >= opt_.bland_after;
      compute_duals(y);

      // Pricing.
      int entering = -1;
      double best = 0.0;
      double entering_d = 0.0;
      for (int j = 0; j < total(); ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const VarState st = state_[jj];
        if (st == VarState::kBasic || lo_[jj] == up_[jj]) continue;
        const double d = reduced_cost(j, y);
        double score = 0.0;
        if (st == VarState::kLower && d < -opt_.optimality_tol) score = -d;
        else if (st == VarState::kUpper && d > opt_.optimality_tol) score = d;
        else if (st == VarState::kZero && std::abs(d) > opt_.optimality_tol) score = std::abs(d);
        if (score <= 0.0) continue;
        if (bland) {
          entering = j;
          entering_d = d;
          break;
        }
        if (score > best) {
          best = score;
          entering = j;
          entering_d = d;
        }
      }
      if (entering < 0) return Status::kOptimal;

      // alpha = B^{-1} a_q
      std::fill(alpha.begin(), alpha.end(), 0.0);
      for_each_entry(entering, [&](int i, double v) {
        for (std::size_t k = 0; k < m; ++k) alpha[k] += binv_[k * m + static_cast<std::size_t>(i)] * v;
      });
      const double dir = entering_d < 0 ? 1.0 : -1.0;
      const auto q = static_cast<std::size_t>(entering);

      // Ratio test.
      double theta = up_[q] - lo_[q];  // bound flip distance (inf when unbounded)
      int leave = -1;
      double leave_pivot = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double rate = dir * alpha[k];
        if (std::abs(rate) < 1e-9) continue;
        const auto b = static_cast<std::size_t>(basis_[k]);
        double limit;
        if (rate > 0) {
          if (!std::isfinite(lo_[b])) continue;
          limit = std::max(0.0, (x_[b] - lo_[b]) / rate);
        } else {
          if (!std::isfinite(up_[b])) continue;
          limit = std::max(0.0, (up_[b] - x_[b]) / -rate);
        }
        const bool better =
            limit < theta - 1e-12 ||
            (leave >= 0 && limit <= theta + 1e-12 &&
             (bland ? basis_[k] < basis_[static_cast<std::size_t>(leave)]
                    : std::abs(alpha[k]) > std::abs(leave_pivot)));
        if (better) {
          theta = std::min(theta, limit);
          leave = static_cast<int>(k);
          leave_pivot = alpha[k];
        }
      }
      if (!std::isfinite(theta)) return Status::kUnbounded;
      ++iterations_;
      degenerate = theta < 1e-12 ? degenerate + 1 : 0;

      // Step.
      x_[q] += dir * theta;
      for (std::size_t k = 0; k < m; ++k)
        if (alpha[k] != 0.0) x_[static_cast<std::size_t>(basis_[k])] -= dir * theta * alpha[k];

      if (leave < 0) {
        state_[q] = state_[q] == VarState::kUpper ? VarState::kLower : VarState::kUpper;
        x_[q] = state_[q] == VarState::kLower ? lo_[q] : up_[q];
        continue;
      }
      const auto r = static_cast<std::size_t>(leave);
      const auto out = static_cast<std::size_t>(basis_[r]);
      const double rate = dir * alpha[r];
      state_[out] = rate > 0 ? VarState::kLower : VarState::kUpper;
      x_[out] = rate > 0 ? lo_[out] : up_[out];
      state_[q] = VarState::kBasic;
      basis_[r] = entering;

      // Product-form update of the explicit inverse.
      const double piv = alpha[r];
      for (std::size_t c = 0; c < m; ++c) binv_[r * m + c] /= piv;
      for (std::size_t k = 0; k < m; ++k) {
        if (k == r || alpha[k] == 0.0) continue;
        const double f = alpha[k];
        for (std::size_t c = 0; c < m; ++c) binv_[k * m + c] -= f * binv_[r * m + c];
      }
      if (++since_refactor >= opt_.refactor_every) {
        refactor();
        since_refactor = 0;
      }
    }
  }

  Solution& finish(Solution& sol, Status status) {
    sol.status = status;
    sol.iterations = iterations_;
    if (status != Status::kOptimal) return sol;
    refactor();
    std::vector<double> y;
    compute_duals(y);
    sol.primal.assign(x_.begin(), x_.begin() + n_);
    // Snap values sitting a hair outside their bounds.
    for (int j = 0; j < n_; ++j) {
      auto& v = sol.primal[static_cast<std::size_t>(j)];
      v = std::clamp(v, lo_[static_cast<std::size_t>(j)], up_[static_cast<std::size_t>(j)]);
    }
    sol.dual = y;
    sol.reduced_cost.resize(static_cast<std::size_t>(n_));
    sol.objective = 0.0;
    sol.dual_objective = 0.0;
    for (int i = 0; i < m_; ++i) sol.dual_objective += lp_.rhs(i) * y[static_cast<std::size_t>(i)];
    for (int j = 0; j < n_; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      sol.objective += lp_.cost(j) * sol.primal[jj];
      const double d = state_[jj] == VarState::kBasic ? 0.0 : reduced_cost(j, y);
      sol.reduced_cost[jj] = d;
      if (state_[jj] != VarState::kBasic) sol.dual_objective += d * x_[jj];
    }
    return sol;
  }

  const LinearProgram& lp_;
  Options opt_;
  int n_;
  int m_;
  std::vector<double> lo_, up_, cost_;
  std::vector<int> art_row_;
  std::vector<double> art_sign_;
  std::vector<VarState> state_;
  std::vector<double> x_;
  std::vector<int> basis_;
  std::vector<double> binv_;
  double rhs_scale_ = 1.0;
  int iterations_ = 0;
};

std::vector<double> lower_bounds(const LinearProgram& lp) {
  std::vector<double> v(static_cast<std::size_t>(lp.num_cols()));
  for (int j = 0; j < lp.num_cols(); ++j) v[static_cast<std::size_t>(j)] = lp.lower(j);
  return v;
}

std::vector<double> upper_bounds(const LinearProgram& lp) {
  std::vector<double> v(static_cast<std::size_t>(lp.num_cols()));
  for (int j = 0; j < lp.num_cols(); ++j) v[static_cast<std::size_t>(j)] = lp.upper(j);
  return v;
}

Solution solve_with_bounds(const LinearProgram& lp, const std::vector<double>& lower,
                           const std::vector<double>& upper, const Options& options) {
  Simplex simplex(lp, lower, upper, options);
  return simplex.run();
}

}  // namespace

Solution solve_lp(const LinearProgram& lp, const Options& options) {
  lp.check();
  return solve_with_bounds(lp, lower_bounds(lp), upper_bounds(lp), options);
}

// ----- branch and bound -----

namespace {

struct Node {
  double bound;
  int id;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

Solution solve_mip(const LinearProgram& lp, const MipOptions& options) {
  lp.check();
  Solution best;
  best.status = Status::kInfeasible;
  double incumbent = kInfinity;
  if (options.incumbent_value) {
    incumbent = *options.incumbent_value;
    if (!options.incumbent.empty()) {
      best.status = Status::kOptimal;
      best.primal = options.incumbent;
      best.objective = incumbent;
    }
  }
  auto prune_at = [&](double value) {
    return value >= incumbent - 1e-9 * std::max(1.0, std::abs(incumbent));
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(Node{-kInfinity, 0, lower_bounds(lp), upper_bounds(lp)});
  int next_id = 1;
  int nodes = 0;
  bool limit_hit = false;
  double root_bound = kInfinity;
  bool root_unbounded = false;

  while (!open.empty()) {
    if (nodes >= options.node_limit) {
      limit_hit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (prune_at(node.bound)) continue;
    ++nodes;
    Solution relax = solve_with_bounds(lp, node.lower, node.upper, options.lp);
    if (nodes == 1) {
      if (relax.status == Status::kUnbounded) root_unbounded = true;
      if (relax.status == Status::kOptimal) root_bound = relax.objective;
    }
    if (relax.status != Status::kOptimal) continue;
    if (prune_at(relax.objective)) continue;

    int branch_var = -1;
    double most = options.integrality_tol;
    for (int j = 0; j < lp.num_cols(); ++j) {
      if (!lp.is_integer(j)) continue;
      const double v = relax.primal[static_cast<std::size_t>(j)];
      const double frac = std::abs(v - std::round(v));
      if (frac > most + 1e-12) {
        most = frac;
        branch_var = j;
      }
    }
    if (branch_var < 0) {
      for (int j = 0; j < lp.num_cols(); ++j)
        if (lp.is_integer(j)) {
          auto& v = relax.primal[static_cast<std::size_t>(j)];
          v = std::round(v);
        }
      double value = 0.0;
      for (int j = 0; j < lp.num_cols(); ++j) value += lp.cost(j) * relax.primal[static_cast<std::size_t>(j)];
      relax.objective = value;
      if (value < incumbent) {
        incumbent = value;
        best = std::move(relax);
        best.status = Status::kOptimal;
      }
      continue;
    }
    const auto b = static_cast<std::size_t>(branch_var);
    const double v = relax.primal[b];
    Node left{relax.objective, next_id++, node.lower, node.upper};
    left.upper[b] = std::floor(v);
    Node right{relax.objective, next_id++, std::move(node.lower), std::move(node.upper)};
    right.lower[b] = std::ceil(v);
    open.push(std::move(left));
    open.push(std::move(right));
  }

  double bound = incumbent;
  if (limit_hit)
    while (!open.empty()) {
      bound = std::min(bound, open.top().bound);
      open.pop();
    }
  if (nodes == 1 && best.status != Status::kOptimal && root_unbounded) best.status = Status::kUnbounded;
  if (limit_hit && best.status != Status::kOptimal) best.status = Status::kIterationLimit;
  best.bound = limit_hit ? std::max(std::min(bound, incumbent), std::min(root_bound, incumbent))
                         : incumbent;
  best.node_limit_hit = limit_hit;
  best.nodes = nodes;
  return best;
}

// ----- MPS -----

void write_mps(const LinearProgram& lp, std::ostream& out, const std::string& name) {
  auto row_name = [&](int i) {
    std::ostringstream os;
    os << 'R' << std::setw(6) << std::setfill('0') << i;
    return os.str();
  };
  auto col_name = [&](int j) {
    std::ostringstream os;
    os << 'C' << std::setw(6) << std::setfill('0') << j;
    return os.str();
  };
  auto field = [&](const std::string& s, int width) {
    std::string f = s.substr(0, static_cast<std::size_t>(width));
    f.resize(static_cast<std::size_t>(width), ' ');
    return f;
  };
  auto number = [](double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    std::string s = os.str();
    if (s.size() > 12) {
      os.str("");
      os << std::setprecision(6) << v;
      s = os.str();
    }
    return s;
  };
  // Fixed columns: 2-3 type, 5-12 name, 15-22 name, 25-36 value.
  auto line = [&](const std::string& type, const std::string& a, const std::string& b,
                  const std::string& value) {
    out << ' ' << field(type, 2) << ' ' << field(a, 8) << "  " << field(b, 8) << "  " << value << '\n';
  };

  out << "NAME          " << name << '\n';
  out << "ROWS\n";
  out << " N  COST\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const char* s = lp.sense(i) == RowSense::kLe ? "L" : (lp.sense(i) == RowSense::kGe ? "G" : "E");
    out << ' ' << field(s, 2) << ' ' << row_name(i) << '\n';
  }
  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < lp.num_cols(); ++j) {
    if (lp.is_integer(j) != in_int) {
      const std::string m = "MARKER" + std::to_string(marker++);
      out << "    " << field(m, 8) << "  'MARKER'                 " << (lp.is_integer(j) ? "'INTORG'" : "'INTEND'") << '\n';
      in_int = lp.is_integer(j);
    }
    if (lp.cost(j) != 0.0) line("", col_name(j), "COST", number(lp.cost(j)));
    for (const auto& [i, v] : lp.column(j)) line("", col_name(j), row_name(i), number(v));
    if (lp.cost(j) == 0.0 && lp.column(j).empty()) line("", col_name(j), "COST", "0");
  }
  if (in_int) out << "    " << field("MARKER" + std::to_string(marker), 8) << "  'MARKER'                 'INTEND'\n";
  out << "RHS\n";
  for (int i = 0; i < lp.num_rows(); ++i)
    if (lp.rhs(i) != 0.0) line("", "RHS", row_name(i), number(lp.rhs(i)));
  out << "BOUNDS\n";
  for (int j = 0; j < lp.num_cols(); ++j) {
    const double lo = lp.lower(j), up = lp.upper(j);
    if (lo == up) {
      line("FX", "BND", col_name(j), number(lo));
      continue;
    }
    if (!std::isfinite(lo) && !std::isfinite(up)) {
      line("FR", "BND", col_name(j), "");
      continue;
    }
    if (!std::isfinite(lo)) line("MI", "BND", col_name(j), "");
    else if (lo != 0.0) line("LO", "BND", col_name(j), number(lo));
    if (std::isfinite(up)) line("UP", "BND", col_name(j), number(up));
  }
  out << "ENDATA\n";
}

}  // namespace fleetmix::lp
