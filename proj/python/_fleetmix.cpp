#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fleetmix/runner.hpp"

namespace py = pybind11;
using namespace fleetmix;

namespace {

Method method_from(const std::string& name) {
  auto m = parse_method(name);
  if (!m) throw py::value_error("unknown method: " + name);
  return *m;
}

}  // namespace

PYBIND11_MODULE(_fleetmix, m) {
  m.doc() = "Fleet composition over a planning horizon";

  py::register_exception<InstanceError>(m, "InstanceError", PyExc_ValueError);
  py::register_exception<GenerationError>(m, "GenerationError", PyExc_RuntimeError);

  py::class_<HorizonInstance>(m, "Instance")
      .def_static("from_json", [](const std::string& s) { return load_instance(s); })
      .def_static("load", &load_instance_file, py::arg("path"))
      .def("to_json", [](const HorizonInstance& h) { return save_instance(h); })
      .def("save", [](const HorizonInstance& h, const std::string& p) { save_instance_file(h, p); })
      .def_property_readonly("name", [](const HorizonInstance& h) { return h.name; })
      .def_property_readonly("num_days", &HorizonInstance::num_days)
      .def_property_readonly("num_types", &HorizonInstance::num_types)
      .def_property_readonly("fixed_costs",
                             [](const HorizonInstance& h) {
                               std::vector<double> b;
                               for (const auto& t : h.vehicle_types) b.push_back(t.fixed_cost);
                               return b;
                             })
      .def_property_readonly("requests_per_day",
                             [](const HorizonInstance& h) {
                               std::vector<std::size_t> n;
                               for (const auto& d : h.days) n.push_back(d.requests.size());
                               return n;
                             })
      .def("prefix", &horizon_prefix, py::arg("days"), py::arg("scale_fixed") = true)
      .def("without_last_types", &without_last_types, py::arg("k"))
      .def("__eq__", [](const HorizonInstance& a, const HorizonInstance& b) { return a == b; });

  m.def(
      "random_instance",
      [](int days, int min_requests, int max_requests, int types, double day_variety, std::uint64_t seed) {
        RandomInstanceConfig c;
        c.num_days = days;
        c.min_requests = min_requests;
        c.max_requests = max_requests;
        c.num_types = types;
        c.day_variety = day_variety;
        return make_random_instance(c, seed);
      },
      py::arg("days") = 1, py::arg("min_requests") = 5, py::arg("max_requests") = 10, py::arg("types") = 3,
      py::arg("day_variety") = 0.0, py::arg("seed") = 1);

  py::class_<SolveSettings>(m, "Settings")
      .def(py::init<>())
      .def_readwrite("time_limit", &SolveSettings::time_limit)
      .def_property(
          "exact",
          [](const SolveSettings& s) { return s.pricing == PricingMode::kExact; },
          [](SolveSettings& s, bool v) { s.pricing = v ? PricingMode::kExact : PricingMode::kHeuristic; })
      .def_readwrite("parallelism", &SolveSettings::parallelism)
      .def_readwrite("lns_iterations", &SolveSettings::lns_iterations)
      .def_readwrite("max_solutions", &SolveSettings::max_solutions)
      .def_readwrite("subproblem_seconds", &SolveSettings::subproblem_seconds)
      .def_readwrite("cg_iterations", &SolveSettings::cg_iterations)
      .def_readwrite("stagnation_limit", &SolveSettings::stagnation_limit)
      .def_readwrite("gap_eps", &SolveSettings::gap_eps)
      .def_readwrite("sa_m", &SolveSettings::sa_m)
      .def_readwrite("bap_node_iterations", &SolveSettings::bap_node_iterations)
      .def_readwrite("bap_max_nodes", &SolveSettings::bap_max_nodes)
      .def_readwrite("lb_runs", &SolveSettings::lb_runs);

  py::class_<FleetPlan>(m, "Plan")
      .def_property_readonly("method", [](const FleetPlan& p) { return to_string(p.method); })
      .def_property_readonly("fleet", [](const FleetPlan& p) { return p.fleet.counts(); })
      .def_readonly("fixed_cost", &FleetPlan::fixed_cost)
      .def_readonly("operational_cost", &FleetPlan::operational_cost)
      .def_readonly("total_cost", &FleetPlan::total_cost)
      .def_readonly("idle_per_day", &FleetPlan::idle_per_day)
      .def_readonly("infeasible", &FleetPlan::infeasible)
      .def_readonly("wall_time", &FleetPlan::wall_time)
      .def_readonly("seed", &FleetPlan::seed)
      .def_property_readonly("mean_idle", &FleetPlan::mean_idle)
      .def_property_readonly("vehicles", &FleetPlan::vehicles)
      .def_property_readonly("day_fleets",
                             [](const FleetPlan& p) {
                               std::vector<std::vector<int>> f;
                               for (const auto& d : p.per_day) f.push_back(d.fleet.counts());
                               return f;
                             })
      .def("check", &check_plan, py::arg("instance"))
      .def(
          "to_json",
          [](const FleetPlan& p, bool routes) {
            PlanJsonOptions o;
            o.include_routes = routes;
            return plan_to_json(p, o);
          },
          py::arg("routes") = false);

  py::class_<LowerBound>(m, "LowerBound")
      .def_readonly("operational", &LowerBound::operational)
      .def_readonly("fixed", &LowerBound::fixed)
      .def_readonly("total", &LowerBound::total)
      .def_readonly("per_day", &LowerBound::per_day);

  m.def(
      "solve",
      [](const std::string& method, const HorizonInstance& inst, const SolveSettings& s, std::uint64_t seed) {
        const Method mm = method_from(method);
        py::gil_scoped_release release;
        return solve(mm, inst, s, seed);
      },
      py::arg("method"), py::arg("instance"), py::arg("settings") = SolveSettings{}, py::arg("seed") = 1);
  m.def(
      "lower_bound",
      [](const HorizonInstance& inst, const SolveSettings& s, std::uint64_t seed) {
        py::gil_scoped_release release;
        return lower_bound(inst, s, seed);
      },
      py::arg("instance"), py::arg("settings") = SolveSettings{}, py::arg("seed") = 1);
  m.def("gap", &compute_gap, py::arg("plan_cost"), py::arg("total_lb"));
}
