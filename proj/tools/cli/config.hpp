#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "iprox/approximators.hpp"
#include "iprox/iteration.hpp"

namespace iprox::cli {

/// Parse or validation failure; what() carries the line (or env var) and key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::sq_l2;
  int dim = 2;
  /// gamma_pen, the constant c, or lambda_mcp depending on kind.
  double gamma = 1.0;
  double b = 2.0;
  std::vector<double> q;
  double shift = 0.0;
  bool operator==(const PenaltySpec&) const = default;
};

struct ApproxSpec {
  ApproxKind kind = ApproxKind::a;
  double eps = 0.1;
  /// Policy name; "default" picks the adversarial choice for the kind.
  std::string policy = "default";
  std::string direction = "seeded";
  std::uint64_t seed = 0;
  long samples = 100000;
  long pilot_samples = 1000;
  double box = 5.0;
  bool operator==(const ApproxSpec&) const = default;
};

struct AlgorithmSpec {
  Algorithm kind = Algorithm::fb;
  /// Unset means the optimal step for the algorithm.
  std::optional<double> tau;
  Order order = Order::g_first;
  /// Prox parameter for PPA; the splitting algorithms use tau.
  double lambda = 1.0;
  double mu = 1.0;
  double L_f = 2.0;
  std::vector<double> center = {1.5, -1.0};
  std::vector<double> x0 = {3.0, -2.0};
  int iterations = 300;
  bool operator==(const AlgorithmSpec&) const = default;
};

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::constant;
  /// Defaults to approx.eps.
  std::optional<double> eps0;
  double gamma0 = 0.0;
  double ratio = 0.5;
  double power = 1.0;
  bool operator==(const ScheduleSpec&) const = default;
};

struct OutputSpec {
  std::string trace = "trace.csv";
  std::string manifest = "manifest.json";
  /// Optional SVG plot of dist and envelope; empty disables it.
  std::string plot;
  bool log_scale = true;
  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  PenaltySpec penalty;
  ApproxSpec approx;
  AlgorithmSpec algorithm;
  ScheduleSpec schedule;
  OutputSpec output;
  bool operator==(const RunConfig&) const = default;

  Penalty make_penalty() const;
  Policy make_policy() const;
  Schedule make_schedule() const;
  SmoothTerm make_smooth_term() const;
  double step() const;
  /// Prox parameter of g: lambda for PPA, tau otherwise.
  double prox_lambda() const;
  Vec start() const;
};

/// Environment overrides use IPROX_<SECTION>_<KEY>, e.g. IPROX_APPROX_EPS.
inline constexpr std::string_view kEnvPrefix = "IPROX_";

/// key = value lines under [penalty], [approx], [algorithm], [schedule] and
/// [output]; '#' or ';' start a comment. Vectors are comma separated.
RunConfig parse_config(std::string_view text, bool apply_env = false);
RunConfig load_config(const std::string& path, bool apply_env = true);

/// Canonical text form; parse_config(to_text(c)) == c.
std::string to_text(const RunConfig& c);
nlohmann::json to_json(const RunConfig& c);

}  // namespace iprox::cli
