#ifndef FLEETMIX_TESTS_HELPERS_HPP
#define FLEETMIX_TESTS_HELPERS_HPP

#include <vector>

#include "fleetmix/model.hpp"

namespace testing {

using namespace fleetmix;

inline VehicleType make_type(int id, double fixed, std::vector<double> capacity, double per_distance = 1.0,
                             double per_time = 0.0) {
  VehicleType t;
  t.id = id;
  t.fixed_cost = fixed;
  t.capacity = std::move(capacity);
  t.cost_per_distance = per_distance;
  t.cost_per_time = per_time;
  t.speed = 1.0;
  return t;
}

inline Request make_request(int id, double x, double y, std::vector<double> demand,
                            TimeWindow tw = {0, 1000}, int service = 0, std::vector<int> allowed = {}) {
  Request r;
  r.id = id;
  r.location = {x, y};
  r.demand = std::move(demand);
  r.tw = tw;
  r.service_time = service;
  r.allowed_types = std::move(allowed);
  return r;
}

inline DayInstance make_day(int id, std::vector<Request> requests, TimeWindow shift = {0, 1000}) {
  DayInstance d;
  d.id = id;
  d.depot = {0.0, 0.0};
  d.shift = shift;
  d.requests = std::move(requests);
  return d;
}

inline HorizonInstance make_horizon(std::vector<VehicleType> types, std::vector<DayInstance> days,
                                    int commodities = 1) {
  HorizonInstance h;
  h.name = "test";
  for (int c = 0; c < commodities; ++c) h.commodities.push_back("c" + std::to_string(c));
  h.vehicle_types = std::move(types);
  h.days = std::move(days);
  return h;
}

/// Oracle-sized random horizon.
inline HorizonInstance tiny_instance(std::uint64_t seed, int days = 3, int min_req = 3, int max_req = 5,
                                     int types = 2) {
  RandomInstanceConfig rc;
  rc.num_days = days;
  rc.min_requests = min_req;
  rc.max_requests = max_req;
  rc.num_types = types;
  return make_random_instance(rc, seed);
}

}  // namespace testing

#endif
