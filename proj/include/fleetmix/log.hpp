#ifndef FLEETMIX_LOG_HPP
#define FLEETMIX_LOG_HPP

#include <sstream>
#include <string>

namespace fleetmix::log {

enum class Level { kError = 0, kInfo = 1, kDebug = 2 };

/// Read once from FLEET_LOG (error | info | debug); defaults to error.
Level threshold();
void set_threshold(Level level);
bool enabled(Level level);
void write(Level level, const std::string& message);

}  // namespace fleetmix::log

#define FLEET_LOG_AT(level, expr)                                 \
  do {                                                            \
    if (::fleetmix::log::enabled(level)) {                        \
      std::ostringstream fleet_log_os_;                           \
      fleet_log_os_ << expr;                                      \
      ::fleetmix::log::write(level, fleet_log_os_.str());         \
    }                                                             \
  } while (0)

#define FLEET_INFO(expr) FLEET_LOG_AT(::fleetmix::log::Level::kInfo, expr)
#define FLEET_DEBUG(expr) FLEET_LOG_AT(::fleetmix::log::Level::kDebug, expr)
#define FLEET_ERROR(expr) FLEET_LOG_AT(::fleetmix::log::Level::kError, expr)

#endif  // FLEETMIX_LOG_HPP
