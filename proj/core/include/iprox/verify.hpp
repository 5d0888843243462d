#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "iprox/approximators.hpp"
#include "iprox/schedule.hpp"
#include "iprox/splitting.hpp"
#include "iprox/surface.hpp"

namespace iprox {

enum class CheckStatus { pass, fail, skipped };

std::string_view to_string(CheckStatus s);

struct CheckRecord {
  std::string id;
  /// Key into property_manifest().
  std::string property;
  CheckStatus status = CheckStatus::skipped;
  std::vector<double> measured;
  std::vector<double> bound;
  nlohmann::json config = nlohmann::json::object();
  /// Point (or parameter tuple) where a failing check was violated.
  Vec witness;
  std::string note;

  bool failed() const { return status == CheckStatus::fail; }
  nlohmann::json to_json() const;
};

struct CheckContext {
  std::uint64_t seed = 0;
};

struct CheckEntry {
  std::string id;
  std::string property;
  std::function<CheckRecord(const CheckContext&)> run;
};

const std::vector<CheckEntry>& registry();

/// Every verified property; each must be covered by at least one check.
const std::vector<std::string>& property_manifest();

/// "all" (or empty) matches everything; otherwise prefix or substring match.
bool filter_matches(std::string_view filter, std::string_view id);

/// Runs the matching checks on `jobs` threads; records come back sorted by id.
std::vector<CheckRecord> run_all(std::string_view filter, std::uint64_t seed = 0, int jobs = 1);

nlohmann::json report_json(const std::vector<CheckRecord>& records, std::string_view filter,
                           std::uint64_t seed);

// Parameterized checks, also used by the registry.

/// sigma and (L, gamma) of one approximation kind against the closed-form
/// bounds on `cloud_size` points of the box [-5, 5]^dim.
CheckRecord check_table1(const Penalty& p, ApproxKind kind, double eps, int cloud_size,
                         std::uint64_t seed, long mc_samples = 100000);

/// Quadratic family psi = L/2 x^2 against psi_eps = L'/2 x^2 on [-eps, eps].
CheckRecord check_lower_bound(double L, double L_prime, double eps);

/// ||psi_n' - psi'|| <= 2 sqrt((L_psi + L_n) eps_n) for the 1D shrink family
/// on [-half_width, half_width].
CheckRecord check_landau_kolmogorov(const Penalty& p, double n, double half_width);

/// example_id in {sq_l2:a, sq_l2:b, sq_l2:d, l2:a, l2:b, l2:d}.
CheckRecord check_appendix_fixed_points(std::string_view example_id, double eps, double gamma);

CheckRecord check_prox_transfer(const Penalty& p, int points, std::uint64_t seed);

/// Closed-form eps-subdifferential membership against a brute-force scan of
/// the defining inequality.
CheckRecord check_eps_subdifferential(const Penalty& p, int triples, std::uint64_t seed);

/// Gaussian-softmin estimate against the exact Gaussian integral for a
/// quadratic penalty.
CheckRecord check_gaussian_softmin(const Penalty& quad, double lambda, double eps, long samples,
                                   std::uint64_t seed);

CheckRecord check_surface(const SurfaceSpec& spec);

/// One convergence run. Constant schedules check the windowed distance
/// against the ball radius; vanishing ones check dist < 1e-5 at the end.
CheckRecord convergence_ball_experiment(Algorithm a, Order order, ApproxKind kind,
                                        const Schedule& schedule, std::uint64_t seed, int K);

}  // namespace iprox
