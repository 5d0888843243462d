#pragma once

// Registry-only checks and helpers shared by the check sources.

#include <cstdint>
#include <string>

#include "iprox/verify.hpp"

namespace iprox::checks {

/// Sets the status; a failing record without a witness gets its measured
/// values as witness.
void finish(CheckRecord& r, bool ok);
CheckRecord skipped(std::string note);

std::vector<double> to_vector(const Vec& v);

CheckRecord prox_lipschitz(std::uint64_t seed);
CheckRecord first_order(std::uint64_t seed);
CheckRecord moreau_grid(std::uint64_t seed);
CheckRecord potential_gradient(std::uint64_t seed);
CheckRecord potential_ball(std::uint64_t seed);
CheckRecord l1_diameter();
CheckRecord error_bound_l1();
CheckRecord steiner_points();
CheckRecord b_implies_a(std::uint64_t seed);
CheckRecord b_fixed_point_criticality(std::uint64_t seed);
CheckRecord c_fixed_point_optimality(std::uint64_t seed);
CheckRecord const_no_fixed_point(std::uint64_t seed);
CheckRecord lower_bound_family();
CheckRecord shrink_interval();
CheckRecord landau_family();
CheckRecord weak_split();
CheckRecord transfer_all(std::uint64_t seed);

CheckRecord viscous_envelope(std::uint64_t seed);
CheckRecord viscous_hessian(std::uint64_t seed);
CheckRecord softmin_oracle(std::uint64_t seed);
CheckRecord softmin_nonexpansive(std::uint64_t seed);
CheckRecord softmin_weakly_convex(std::uint64_t seed);

CheckRecord km_assumption();
CheckRecord km_convergence(std::uint64_t seed);
CheckRecord km_fejer();
CheckRecord spectral(std::uint64_t seed);
CheckRecord splitting_definitions(std::uint64_t seed);
CheckRecord exact_rate(Algorithm a, Order order);

}  // namespace iprox::checks
