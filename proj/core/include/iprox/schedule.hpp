#pragma once

#include <string_view>

namespace iprox {

enum class ScheduleKind { constant, geometric, power };

std::string_view to_string(ScheduleKind k);
ScheduleKind schedule_kind_from_string(std::string_view s);

/// Error level eps_k (and an optional generic gamma_k = gamma0 * decay_k).
struct Schedule {
  ScheduleKind kind = ScheduleKind::constant;
  double eps0 = 0.0;
  double gamma0 = 0.0;
  /// Geometric ratio in (0, 1).
  double ratio = 0.5;
  /// Power-law exponent > 0: eps_k = eps0 / (k + 1)^p.
  double power = 1.0;

  static Schedule constant(double eps0, double gamma0 = 0.0);
  static Schedule geometric(double eps0, double ratio, double gamma0 = 0.0);
  static Schedule power_law(double eps0, double p, double gamma0 = 0.0);

  double decay(int k) const;
  double eps(int k) const { return eps0 * decay(k); }
  double gamma(int k) const { return gamma0 * decay(k); }
  bool vanishing() const { return kind != ScheduleKind::constant || (eps0 == 0 && gamma0 == 0); }
  void validate() const;
};

}  // namespace iprox
