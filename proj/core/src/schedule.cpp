#include "iprox/schedule.hpp"

#include <cmath>
#include <string>

#include "iprox/errors.hpp"

namespace iprox {

std::string_view to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::geometric: return "geometric";
    case ScheduleKind::power: return "power";
  }
  return "?";
}

ScheduleKind schedule_kind_from_string(std::string_view s) {
  if (s == "constant") return ScheduleKind::constant;
  if (s == "geometric") return ScheduleKind::geometric;
  if (s == "power") return ScheduleKind::power;
  throw std::invalid_argument("unknown schedule '" + std::string(s) + "'");
}

Schedule Schedule::constant(double eps0, double gamma0) {
  Schedule s;
  s.eps0 = eps0;
  s.gamma0 = gamma0;
  s.validate();
  return s;
}

Schedule Schedule::geometric(double eps0, double ratio, double gamma0) {
  Schedule s;
  s.kind = ScheduleKind::geometric;
  s.eps0 = eps0;
  s.ratio = ratio;
  s.gamma0 = gamma0;
  s.validate();
  return s;
}

Schedule Schedule::power_law(double eps0, double p, double gamma0) {
  Schedule s;
  s.kind = ScheduleKind::power;
  s.eps0 = eps0;
  s.power = p;
  s.gamma0 = gamma0;
  s.validate();
  return s;
}

double Schedule::decay(int k) const {
  switch (kind) {
    case ScheduleKind::constant: return 1.0;
    case ScheduleKind::geometric: return std::pow(ratio, k);
    case ScheduleKind::power: return std::pow(static_cast<double>(k) + 1.0, -power);
  }
  return 1.0;
}

void Schedule::validate() const {
  require(eps0 >= 0 && std::isfinite(eps0), "schedule eps0 must be finite and >= 0");
  require(gamma0 >= 0 && std::isfinite(gamma0), "schedule gamma0 must be finite and >= 0");
  if (kind == ScheduleKind::geometric) require(ratio > 0 && ratio < 1, "geometric ratio must lie in (0, 1)");
  if (kind == ScheduleKind::power) require(power > 0, "power-law exponent must be positive");
}

}  // namespace iprox
