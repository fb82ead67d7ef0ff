#include "fleetmix/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string_view>

namespace fleetmix::log {

namespace {

Level from_env() {
  const char* v = std::getenv("FLEET_LOG");
  if (v == nullptr) return Level::kError;
  std::string_view s(v);
  if (s == "debug") return Level::kDebug;
  if (s == "info") return Level::kInfo;
  return Level::kError;
}

std::atomic<int>& level_store() {
  static std::atomic<int> level{static_cast<int>(from_env())};
  return level;
}

std::mutex& out_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Level threshold() { return static_cast<Level>(level_store().load()); }

void set_threshold(Level level) { level_store().store(static_cast<int>(level)); }

bool enabled(Level level) { return static_cast<int>(level) <= level_store().load(); }

void write(Level level, const std::string& message) {
  static constexpr const char* kNames[] = {"error", "info", "debug"};
  std::lock_guard lock(out_mutex());
  std::cerr << '[' << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace fleetmix::log
