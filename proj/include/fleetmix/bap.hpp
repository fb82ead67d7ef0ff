#ifndef FLEETMIX_BAP_HPP
#define FLEETMIX_BAP_HPP

#include <optional>
#include <utility>
#include <vector>

#include "fleetmix/colgen.hpp"
#include "fleetmix/master.hpp"
#include "fleetmix/plan.hpp"

namespace fleetmix {

enum class NodeStatus { kOpen, kSolved, kInfeasible, kTerminated, kPruned };

std::string to_string(NodeStatus status);

struct BapNode {
  int id = 0;
  FleetBounds bounds;
  int parent = -1;
  NodeStatus status = NodeStatus::kOpen;
  double z = 0.0;             // node LP value once solved
  double z_bar = std::numeric_limits<double>::infinity();  // restricted integer value
  double lower = -std::numeric_limits<double>::infinity(); // parent's LP value
  std::vector<double> fleet_lp;
};

/// Children with F_t <= floor(v) and F_t >= floor(v) + 1. Throws
/// std::invalid_argument when v is integral.
std::pair<BapNode, BapNode> branch(const BapNode& node, int type, double value, int first_id);

/// Open node that forbids the incumbent fleet with the smallest z_bar (ties:
/// smallest id). Without an incumbent every open node qualifies.
std::optional<std::size_t> select_node(const std::vector<BapNode>& open,
                                       const std::optional<FleetVector>& incumbent);

struct BapConfig {
  CgConfig cg;                // cg.budget is the root budget
  CgBudget node_budget;
  int max_nodes = 1000;
  double max_seconds = 60.0;  // tree budget, checked between nodes
  double max_total_seconds = 0.0;  // root plus tree; 0: no limit
  MasterMipOptions mip;
  int child_estimate_nodes = 50;
};

struct BapStats {
  int nodes_solved = 0;
  int nodes_infeasible = 0;
  int nodes_pruned = 0;
  int integral_nodes = 0;
  int refinements = 0;        // selections made after select_node returned none
  bool exhausted = false;     // tree fully explored
  double root_z = 0.0;
  double root_integer = 0.0;  // the RMH value at the root
  std::optional<FleetPlan> root_plan;  // the RMH plan itself, same seed and budget
  std::vector<double> incumbent_trace;
  int incumbent_increases = 0;
  int z_increases = 0;        // summed over node CG runs
  /// Best Lagrangian bound of every node CG run, with the node's box.
  std::vector<std::pair<FleetBounds, double>> node_bounds;
};

FleetPlan run_bap(const HorizonInstance& instance, const BapConfig& config,
                  BapStats* stats = nullptr, const MasterObserver& observer = {});

}  // namespace fleetmix

#endif  // FLEETMIX_BAP_HPP
