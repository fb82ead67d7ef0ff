#include "fleetmix/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fleetmix {

using nlohmann::json;

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool Request::allows(int type_id) const {
  return allowed_types.empty() ||
         std::find(allowed_types.begin(), allowed_types.end(), type_id) != allowed_types.end();
}

int HorizonInstance::commodity_index(std::string_view name) const {
  for (std::size_t c = 0; c < commodities.size(); ++c)
    if (commodities[c] == name) return static_cast<int>(c);
  return -1;
}

bool FleetVector::dominates(const FleetVector& other) const {
  if (other.size() != size()) return false;
  for (std::size_t t = 0; t < size(); ++t)
    if (counts_[t] < other.counts_[t]) return false;
  return true;
}

FleetVector FleetVector::max_with(const FleetVector& other) const {
  FleetVector out(*this);
  for (std::size_t t = 0; t < size() && t < other.size(); ++t)
    out.counts_[t] = std::max(out.counts_[t], other.counts_[t]);
  return out;
}

std::string FleetVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t t = 0; t < counts_.size(); ++t) os << (t ? "," : "") << counts_[t];
  os << ')';
  return os.str();
}

// ----- JSON parsing -----

namespace {

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key + ": missing field");
  return *it;
}

double number(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number()) throw SchemaError(path + "." + key + ": expected a number");
  return v.get<double>();
}

int integer(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number_integer()) throw SchemaError(path + "." + key + ": expected an integer");
  return v.get<int>();
}

TimeWindow interval(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
    throw SchemaError(path + "." + key + ": expected [integer, integer]");
  return {v[0].get<int>(), v[1].get<int>()};
}

// Commodity map -> dense vector; unknown commodity names are a validation error.
std::vector<double> commodity_map(const json& obj, const char* key, const std::string& path,
                                  const std::vector<std::string>& commodities) {
  const json& v = field(obj, key, path);
  if (!v.is_object()) throw SchemaError(path + "." + key + ": expected an object");
  std::vector<double> out(commodities.size(), 0.0);
  for (auto it = v.begin(); it != v.end(); ++it) {
    auto pos = std::find(commodities.begin(), commodities.end(), it.key());
    if (pos == commodities.end())
      throw ValidationError(path + "." + key + ": unknown commodity \"" + it.key() + "\"");
    if (!it.value().is_number())
      throw SchemaError(path + "." + key + "." + it.key() + ": expected a number");
    out[static_cast<std::size_t>(pos - commodities.begin())] = it.value().get<double>();
  }
  return out;
}

json commodity_json(const std::vector<double>& values, const std::vector<std::string>& names) {
  json out = json::object();
  for (std::size_t c = 0; c < names.size(); ++c) out[names[c]] = c < values.size() ? values[c] : 0.0;
  return out;
}

std::string day_tag(const DayInstance& day) { return "day " + std::to_string(day.id); }

}  // namespace

HorizonInstance load_instance(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }

  HorizonInstance inst;
  const std::string root = "$";
  const json& name = field(doc, "name", root);
  if (!name.is_string()) throw SchemaError("$.name: expected a string");
  inst.name = name.get<std::string>();

  const json& comms = field(doc, "commodities", root);
  if (!comms.is_array()) throw SchemaError("$.commodities: expected an array");
  for (const auto& c : comms) {
    if (!c.is_string()) throw SchemaError("$.commodities: expected strings");
    inst.commodities.push_back(c.get<std::string>());
  }

  const json& types = field(doc, "vehicle_types", root);
  if (!types.is_array()) throw SchemaError("$.vehicle_types: expected an array");
  for (std::size_t k = 0; k < types.size(); ++k) {
    const std::string path = "$.vehicle_types[" + std::to_string(k) + "]";
    VehicleType vt;
    vt.id = integer(types[k], "id", path);
    vt.fixed_cost = number(types[k], "fixed_cost", path);
    vt.capacity = commodity_map(types[k], "capacity", path, inst.commodities);
    vt.cost_per_distance = number(types[k], "cost_per_distance", path);
    vt.cost_per_time = number(types[k], "cost_per_time", path);
    vt.speed = number(types[k], "speed", path);
    inst.vehicle_types.push_back(std::move(vt));
  }

  const json& days = field(doc, "days", root);
  if (!days.is_array()) throw SchemaError("$.days: expected an array");
  for (std::size_t d = 0; d < days.size(); ++d) {
    const std::string path = "$.days[" + std::to_string(d) + "]";
    DayInstance day;
    day.id = integer(days[d], "id", path);
    const json& depot = field(days[d], "depot", path);
    day.depot = {number(depot, "x", path + ".depot"), number(depot, "y", path + ".depot")};
    day.shift = interval(days[d], "shift", path);
    const json& reqs = field(days[d], "requests", path);
    if (!reqs.is_array()) throw SchemaError(path + ".requests: expected an array");
    for (std::size_t r = 0; r < reqs.size(); ++r) {
      const std::string rpath = path + ".requests[" + std::to_string(r) + "]";
      Request req;
      req.id = integer(reqs[r], "id", rpath);
      req.location = {number(reqs[r], "x", rpath), number(reqs[r], "y", rpath)};
      req.demand = commodity_map(reqs[r], "demand", rpath, inst.commodities);
      req.tw = interval(reqs[r], "tw", rpath);
      req.service_time = integer(reqs[r], "service_time", rpath);
      const json& allowed = field(reqs[r], "allowed_types", rpath);
      if (!allowed.is_array()) throw SchemaError(rpath + ".allowed_types: expected an array");
      for (const auto& a : allowed) {
        if (!a.is_number_integer()) throw SchemaError(rpath + ".allowed_types: expected integers");
        req.allowed_types.push_back(a.get<int>());
      }
      day.requests.push_back(std::move(req));
    }
    inst.days.push_back(std::move(day));
  }

  validate(inst);
  return inst;
}

HorizonInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_instance(buffer.str());
}

std::string save_instance(const HorizonInstance& inst) {
  json doc;
  doc["name"] = inst.name;
  doc["commodities"] = inst.commodities;
  doc["vehicle_types"] = json::array();
  for (const auto& vt : inst.vehicle_types) {
    doc["vehicle_types"].push_back({{"id", vt.id},
                                    {"fixed_cost", vt.fixed_cost},
                                    {"capacity", commodity_json(vt.capacity, inst.commodities)},
                                    {"cost_per_distance", vt.cost_per_distance},
                                    {"cost_per_time", vt.cost_per_time},
                                    {"speed", vt.speed}});
  }
  doc["days"] = json::array();
  for (const auto& day : inst.days) {
    json jd;
    jd["id"] = day.id;
    jd["depot"] = {{"x", day.depot.x}, {"y", day.depot.y}};
    jd["shift"] = {day.shift.earliest, day.shift.latest};
    jd["requests"] = json::array();
    for (const auto& r : day.requests) {
      jd["requests"].push_back({{"id", r.id},
                                {"x", r.location.x},
                                {"y", r.location.y},
                                {"demand", commodity_json(r.demand, inst.commodities)},
                                {"tw", {r.tw.earliest, r.tw.latest}},
                                {"service_time", r.service_time},
                                {"allowed_types", r.allowed_types}});
    }
    doc["days"].push_back(std::move(jd));
  }
  return doc.dump(1);
}

void save_instance_file(const HorizonInstance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << save_instance(instance) << '\n';
}

void validate(const HorizonInstance& inst) {
  if (inst.days.empty()) throw ValidationError("instance has no days");
  if (inst.vehicle_types.empty()) throw ValidationError("instance has no vehicle types");
  const std::size_t nc = inst.commodities.size();
  if (nc == 0) throw ValidationError("instance declares no commodities");

  for (std::size_t t = 0; t < inst.vehicle_types.size(); ++t) {
    const VehicleType& vt = inst.vehicle_types[t];
    const std::string tag = "vehicle type " + std::to_string(vt.id);
    if (vt.id != static_cast<int>(t)) throw ValidationError(tag + ": ids must be 0..|T|-1 in order");
    if (vt.fixed_cost < 0) throw ValidationError(tag + ": negative fixed_cost");
    if (vt.capacity.size() != nc) throw ValidationError(tag + ": capacity size mismatch");
    bool any_positive = false;
    for (double c : vt.capacity) {
      if (c < 0) throw ValidationError(tag + ": negative capacity");
      any_positive = any_positive || c > 0;
    }
    if (!any_positive) throw ValidationError(tag + ": no positive capacity");
    if (!(vt.speed > 0)) throw ValidationError(tag + ": speed must be positive");
    if (vt.cost_per_distance < 0 || vt.cost_per_time < 0)
      throw ValidationError(tag + ": negative cost coefficient");
  }

  std::set<int> day_ids;
  for (const auto& day : inst.days) {
    if (!day_ids.insert(day.id).second) throw ValidationError(day_tag(day) + ": duplicate day id");
    if (day.shift.earliest > day.shift.latest) throw ValidationError(day_tag(day) + ": empty shift");
    std::set<int> ids;
    for (const auto& r : day.requests) {
      const std::string tag = day_tag(day) + ", request " + std::to_string(r.id);
      if (!ids.insert(r.id).second) throw ValidationError(tag + ": duplicate request id");
      if (r.tw.earliest > r.tw.latest) throw ValidationError(tag + ": tw earliest > latest");
      if (r.tw.earliest < day.shift.earliest || r.tw.latest > day.shift.latest)
        throw ValidationError(tag + ": time window outside shift");
      if (r.service_time < 0) throw ValidationError(tag + ": negative service_time");
      if (r.demand.size() != nc) throw ValidationError(tag + ": demand size mismatch");
      double total = 0.0;
      for (double q : r.demand) {
        if (q < 0) throw ValidationError(tag + ": negative demand");
        total += q;
      }
      if (!(total > 0)) throw ValidationError(tag + ": total demand must be positive");
      for (int a : r.allowed_types)
        if (a < 0 || a >= static_cast<int>(inst.vehicle_types.size()))
          throw ValidationError(tag + ": unservable request (allowed type " + std::to_string(a) +
                                " does not exist)");
      bool servable = false;
      for (const auto& vt : inst.vehicle_types) {
        if (!r.allows(vt.id)) continue;
        bool carries = true;
        for (std::size_t c = 0; c < nc; ++c)
          if (r.demand[c] > 0 && !(vt.capacity[c] > 0)) carries = false;
        servable = servable || carries;
      }
      if (!servable)
        throw ValidationError(tag + ": unservable request (no allowed type carries its demand)");
    }
  }
}

double total_demand(const DayInstance& day, int commodity) {
  double sum = 0.0;
  for (const auto& r : day.requests) sum += r.demand.at(static_cast<std::size_t>(commodity));
  return sum;
}

double total_demand(const HorizonInstance& instance, const DayInstance& day,
                    std::string_view commodity) {
  const int c = instance.commodity_index(commodity);
  if (c < 0) throw std::invalid_argument("unknown commodity \"" + std::string(commodity) + "\"");
  return total_demand(day, c);
}

double total_load(const DayInstance& day) {
  double sum = 0.0;
  for (const auto& r : day.requests)
    for (double q : r.demand) sum += q;
  return sum;
}

// ----- synthetic generation -----

namespace {

DayInstance perturb_day(const DayInstance& base, int new_id, const PerturbationConfig& cfg,
                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> scale(cfg.scale_lo, cfg.scale_hi);
  std::uniform_real_distribution<double> jitter(-cfg.dup_jitter, cfg.dup_jitter);

  DayInstance day;
  day.id = new_id;
  day.depot = base.depot;
  day.shift = base.shift;
  int next_id = 0;
  for (const auto& r : base.requests) next_id = std::max(next_id, r.id + 1);

  const bool identity = cfg.scale_lo == 1.0 && cfg.scale_hi == 1.0;
  auto rescale = [&](Request& r) {
    if (identity) return;
    const double s = scale(rng);
    for (double& q : r.demand) q *= s;
  };

  for (const auto& r : base.requests) {
    if (cfg.drop_prob > 0 && unit(rng) < cfg.drop_prob) continue;
    Request kept = r;
    rescale(kept);
    day.requests.push_back(kept);
    if (cfg.dup_prob > 0 && unit(rng) < cfg.dup_prob) {
      Request copy = r;
      copy.id = next_id++;
      copy.location.x += jitter(rng);
      copy.location.y += jitter(rng);
      rescale(copy);
      day.requests.push_back(copy);
    }
  }
  return day;
}

}  // namespace

GeneratedHorizon generate_synthetic(const HorizonInstance& base, int n_days,
                                    const PerturbationConfig& cfg, std::uint64_t seed) {
  if (n_days < 1) throw GenerationError("n_days must be >= 1");
  if (base.days.empty()) throw GenerationError("base instance has no days");
  if (!(cfg.scale_lo > 0) || cfg.scale_lo > cfg.scale_hi)
    throw GenerationError("demand scale range must satisfy 0 < lo <= hi");
  if (cfg.drop_prob < 0 || cfg.drop_prob > 1 || cfg.dup_prob < 0 || cfg.dup_prob > 1)
    throw GenerationError("drop/duplicate probabilities must lie in [0, 1]");

  GeneratedHorizon out;
  out.instance.name = base.name + "-synthetic";
  out.instance.commodities = base.commodities;
  out.instance.vehicle_types = base.vehicle_types;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < n_days; ++k) {
    const DayInstance& src = base.days[static_cast<std::size_t>(k) % base.days.size()];
    DayInstance day;
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt >= 100)
        throw GenerationError("day " + std::to_string(k) + " has no requests after 100 retries");
      day = perturb_day(src, k, cfg, rng);
      if (!day.requests.empty()) break;
    }
    GeneratedDayStats stats;
    stats.day_id = k;
    stats.num_requests = static_cast<int>(day.requests.size());
    stats.total_demand.assign(base.commodities.size(), 0.0);
    for (const auto& r : day.requests)
      for (std::size_t c = 0; c < r.demand.size(); ++c) stats.total_demand[c] += r.demand[c];
    out.stats.push_back(std::move(stats));
    out.instance.days.push_back(std::move(day));
  }
  validate(out.instance);
  return out;
}

GeneratedHorizon generate_synthetic(const HorizonInstance& base, const DayInstance& base_day,
                                    int n_days, const PerturbationConfig& config,
                                    std::uint64_t seed) {
  HorizonInstance single = base;
  single.days = {base_day};
  return generate_synthetic(single, n_days, config, seed);
}

HorizonInstance make_random_instance(const RandomInstanceConfig& cfg, std::uint64_t seed) {
  if (cfg.num_days < 1 || cfg.num_types < 1 || cfg.num_commodities < 1 || cfg.min_requests < 1 ||
      cfg.max_requests < cfg.min_requests)
    throw GenerationError("invalid random instance configuration");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> coord(-cfg.area, cfg.area);
  std::uniform_real_distribution<double> qty(cfg.demand_lo, cfg.demand_hi);
  std::uniform_int_distribution<int> count(cfg.min_requests, cfg.max_requests);

  HorizonInstance inst;
  inst.name = "random-" + std::to_string(seed);
  for (int c = 0; c < cfg.num_commodities; ++c) inst.commodities.push_back("c" + std::to_string(c));

  // Archetypes from small/cheap to large/expensive. Capacity grows faster than
  // fixed cost so that big vehicles pay off on heavy days only.
  for (int t = 0; t < cfg.num_types; ++t) {
    const double size = cfg.num_types == 1 ? 1.0 : static_cast<double>(t) / (cfg.num_types - 1);
    VehicleType vt;
    vt.id = t;
    const double base_cap = cfg.demand_hi * (1.5 + 3.5 * size) * (0.9 + 0.2 * unit(rng));
    vt.fixed_cost = std::round(cfg.fixed_cost_scale * cfg.num_days * (40.0 + 60.0 * size) *
                               (0.9 + 0.2 * unit(rng)));
    for (int c = 0; c < cfg.num_commodities; ++c) {
      // Multi-commodity: each type leans towards one commodity but carries all.
      const double lean = (t + c) % cfg.num_commodities == 0 ? 1.0 : 0.6;
      vt.capacity.push_back(std::round(base_cap * lean));
    }
    vt.cost_per_distance = std::round(100.0 * (0.6 + 0.8 * size)) / 100.0;
    vt.cost_per_time = std::round(100.0 * (0.10 + 0.05 * size)) / 100.0;
    vt.speed = 1.0;
    inst.vehicle_types.push_back(std::move(vt));
  }

  const int shift_end = cfg.shift_length;
  const TimeWindow whole{0, shift_end};
  const TimeWindow morning{0, shift_end / 2};
  const TimeWindow afternoon{shift_end / 2, shift_end};

  for (int d = 0; d < cfg.num_days; ++d) {
    DayInstance day;
    day.id = d;
    day.depot = {0.0, 0.0};
    day.shift = whole;
    const int n = count(rng);
    // Day profile, only drawn when days differ.
    int day_commodity = -1, day_block = -1;
    double day_level = 1.0;
    if (cfg.day_variety > 0) {
      day_commodity = static_cast<int>(unit(rng) * cfg.num_commodities) % cfg.num_commodities;
      day_block = static_cast<int>(unit(rng) * cfg.num_types) % cfg.num_types;
      day_level = 0.6 + 0.8 * unit(rng);
    }
    auto follows_profile = [&] { return cfg.day_variety > 0 && unit(rng) < cfg.day_variety; };
    for (int r = 0; r < n; ++r) {
      Request req;
      req.id = r;
      req.location = {std::round(coord(rng) * 10) / 10, std::round(coord(rng) * 10) / 10};
      req.demand.assign(static_cast<std::size_t>(cfg.num_commodities), 0.0);
      int main_c = static_cast<int>(unit(rng) * cfg.num_commodities) % cfg.num_commodities;
      double level = 1.0;
      if (follows_profile()) {
        main_c = day_commodity;
        level = day_level;
      }
      req.demand[static_cast<std::size_t>(main_c)] =
          std::max(1.0, std::min(cfg.demand_hi, std::round(qty(rng) * level)));
      if (cfg.num_commodities > 1 && unit(rng) < 0.3) {
        const int other = (main_c + 1) % cfg.num_commodities;
        req.demand[static_cast<std::size_t>(other)] = std::round(qty(rng) * 0.5) + 1;
      }
      const double w = unit(rng);
      req.tw = w < cfg.window_share / 2 ? morning : (w < cfg.window_share ? afternoon : whole);
      req.service_time = 5 + static_cast<int>(unit(rng) * 10);
      if (cfg.num_types > 1 && unit(rng) < cfg.restricted_share) {
        // A contiguous block of neighbouring sizes (site access, equipment).
        const int width = std::max(1, (cfg.num_types + 1) / 2);
        int first = static_cast<int>(unit(rng) * (cfg.num_types - width + 1)) % (cfg.num_types - width + 1);
        if (follows_profile()) first = std::min(day_block, cfg.num_types - width);
        for (int t = first; t < first + width; ++t) req.allowed_types.push_back(t);
      }
      day.requests.push_back(std::move(req));
    }
    inst.days.push_back(std::move(day));
  }
  validate(inst);
  return inst;
}

HorizonInstance horizon_prefix(const HorizonInstance& instance, int d, bool scale_fixed) {
  if (d < 1 || d > static_cast<int>(instance.days.size()))
    throw std::invalid_argument("prefix length out of range");
  HorizonInstance out = instance;
  out.days.resize(static_cast<std::size_t>(d));
  if (scale_fixed) {
    const double ratio = static_cast<double>(d) / static_cast<double>(instance.days.size());
    for (auto& vt : out.vehicle_types) vt.fixed_cost *= ratio;
  }
  out.name = instance.name + "-I" + std::to_string(d);
  return out;
}

HorizonInstance without_last_types(const HorizonInstance& instance, int k) {
  if (k < 0 || k >= static_cast<int>(instance.vehicle_types.size()))
    throw std::invalid_argument("cannot remove that many vehicle types");
  HorizonInstance out = instance;
  const int keep = static_cast<int>(instance.vehicle_types.size()) - k;
  out.vehicle_types.resize(static_cast<std::size_t>(keep));
  for (auto& day : out.days)
    for (auto& r : day.requests) {
      if (r.allowed_types.empty()) continue;
      std::vector<int> kept;
      for (int a : r.allowed_types)
        if (a < keep) kept.push_back(a);
      // A request whose compatible types were all removed keeps the dangling
      // ids so validation reports it as unservable instead of "all allowed".
      if (!kept.empty()) r.allowed_types = std::move(kept);
    }
  out.name = instance.name + "-t" + std::to_string(keep);
  return out;
}

HorizonInstance select_days(const HorizonInstance& instance, const std::vector<int>& day_indices) {
  HorizonInstance out = instance;
  out.days.clear();
  for (int i : day_indices) out.days.push_back(instance.days.at(static_cast<std::size_t>(i)));
  return out;
}

}  // namespace fleetmix
