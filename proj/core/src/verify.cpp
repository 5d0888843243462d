#include "iprox/verify.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "checks.hpp"
#include "iprox/errors.hpp"
#include "iprox/rng.hpp"

namespace iprox {

namespace {

// FNV-1a, so check seeds do not depend on the standard library's hash.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct BallCase {
  const char* name;
  Algorithm algorithm;
  Order order;
};

constexpr BallCase kBallCases[] = {
    {"ppa", Algorithm::ppa, Order::g_first}, {"fb", Algorithm::fb, Order::g_first},
    {"pr_g", Algorithm::pr, Order::g_first}, {"pr_f", Algorithm::pr, Order::f_first},
    {"dr_g", Algorithm::dr, Order::g_first}, {"dr_f", Algorithm::dr, Order::f_first},
};

constexpr ApproxKind kKinds[] = {ApproxKind::a, ApproxKind::b, ApproxKind::c,
                                 ApproxKind::d, ApproxKind::e, ApproxKind::f};

std::vector<CheckEntry> build_registry() {
  std::vector<CheckEntry> r;
  auto add = [&r](std::string id, std::string property,
                  std::function<CheckRecord(const CheckContext&)> fn) {
    r.push_back({std::move(id), std::move(property), std::move(fn)});
  };
  auto seeded = [](CheckRecord (*fn)(std::uint64_t)) {
    return [fn](const CheckContext& c) { return fn(c.seed); };
  };
  auto plain = [](CheckRecord (*fn)()) { return [fn](const CheckContext&) { return fn(); }; };

  add("penalty.prox_lipschitz", "prox-lipschitz", seeded(checks::prox_lipschitz));
  add("penalty.first_order", "first-order-inclusion", seeded(checks::first_order));
  add("penalty.moreau", "moreau-envelope", seeded(checks::moreau_grid));
  add("penalty.potential_gradient", "potential-gradient", seeded(checks::potential_gradient));
  add("penalty.error_bound", "error-bound", plain(checks::error_bound_l1));

  const std::pair<const char*, Penalty> subdiff[] = {{"sq_l2", Penalty::sq_l2(2, 1.0)},
                                                     {"l1", Penalty::l1(1, 1.0)},
                                                     {"l2", Penalty::l2(2, 1.0)}};
  for (const auto& [name, p] : subdiff) {
    add(std::string("subdiff.") + name, "eps-subdifferential-closed-form",
        [p](const CheckContext& c) { return check_eps_subdifferential(p, 500, c.seed); });
  }
  add("subdiff.potential_ball", "eps-subdifferential-potential-ball",
      seeded(checks::potential_ball));
  add("subdiff.l1_diameter", "eps-critical-diameter", plain(checks::l1_diameter));
  add("steiner.points", "steiner-point", plain(checks::steiner_points));

  const std::pair<const char*, Penalty> table1[] = {{"sq_l2", Penalty::sq_l2(2, 1.0)},
                                                    {"l1", Penalty::l1(1, 1.0)},
                                                    {"l2", Penalty::l2(2, 1.0)},
                                                    {"mcp", Penalty::mcp(1, 1.0, 2.0)}};
  for (const auto& [name, p] : table1) {
    for (ApproxKind k : kKinds) {
      add(std::string("table1.") + name + "." + std::string(to_string(k)), "approximation-bounds",
          [p, k](const CheckContext& c) { return check_table1(p, k, 0.1, 200, c.seed); });
    }
  }
  add("approx.b_implies_a", "b-implies-a", seeded(checks::b_implies_a));
  add("approx.b_fixed_points", "b-fixed-point-criticality",
      seeded(checks::b_fixed_point_criticality));
  add("approx.c_fixed_points", "c-fixed-point-optimality",
      seeded(checks::c_fixed_point_optimality));
  add("approx.const_a", "const-no-fixed-point", seeded(checks::const_no_fixed_point));

  add("lower_bound.quadratic", "quadratic-gap-lower-bound", plain(checks::lower_bound_family));
  add("lower_bound.shrink_interval", "shrink-gap", plain(checks::shrink_interval));
  add("lower_bound.landau_kolmogorov", "landau-kolmogorov", plain(checks::landau_family));

  add("hj.softmin_oracle", "gaussian-softmin-oracle", seeded(checks::softmin_oracle));
  add("hj.envelope", "viscous-envelope", seeded(checks::viscous_envelope));
  add("hj.hessian", "viscous-hessian", seeded(checks::viscous_hessian));
  add("hj.nonexpansive", "softmin-nonexpansive", seeded(checks::softmin_nonexpansive));
  add("hj.weakly_convex", "softmin-weakly-convex", seeded(checks::softmin_weakly_convex));

  const std::tuple<const char*, double, double> appendix[] = {
      {"sq_l2:a", 0.5, 1.0}, {"sq_l2:b", 0.5, 1.0}, {"sq_l2:d", 0.5, 1.0},
      {"l2:a", 0.5, 1.0},    {"l2:b", 1.5, 1.0},    {"l2:d", 0.5, 1.0}};
  for (const auto& [ex, eps, gamma] : appendix) {
    std::string id = std::string("appendix.") + ex;
    std::replace(id.begin(), id.end(), ':', '.');
    add(id, "appendix-fixed-points", [ex = std::string(ex), eps = eps, gamma = gamma](
                                         const CheckContext&) {
      return check_appendix_fixed_points(ex, eps, gamma);
    });
  }
  add("transfer.identity", "prox-scaling-transfer", seeded(checks::transfer_all));
  add("transfer.weak_split", "weakly-convex-split", plain(checks::weak_split));

  add("km.assumption", "km-assumption", plain(checks::km_assumption));
  add("km.convergence", "km-convergence", seeded(checks::km_convergence));
  add("km.fejer", "km-fejer", plain(checks::km_fejer));
  add("spectral.radius", "spectral-radius", seeded(checks::spectral));
  add("splitting.operators", "splitting-operators", seeded(checks::splitting_definitions));
  add("surface.contractivity", "contractivity-surface",
      [](const CheckContext&) { return check_surface(SurfaceSpec{}); });

  for (const BallCase& bc : kBallCases) {
    const std::string alg = bc.name;
    add("rate." + alg, "exact-linear-rate", [bc](const CheckContext&) {
      return checks::exact_rate(bc.algorithm, bc.order);
    });
    for (ApproxKind k : kKinds) {
      const std::string ks(to_string(k));
      add("ball." + alg + "." + ks, "ball-radius", [bc, k](const CheckContext& c) {
        const int K = k == ApproxKind::f ? 120 : 300;
        return convergence_ball_experiment(bc.algorithm, bc.order, k,
                                           Schedule::constant(0.1), c.seed, K);
      });
      add("vanish." + alg + "." + ks + ".geometric", "vanishing-convergence",
          [bc, k](const CheckContext& c) {
            return convergence_ball_experiment(bc.algorithm, bc.order, k,
                                               Schedule::geometric(0.1, 0.9), c.seed, 2000);
          });
      add("vanish." + alg + "." + ks + ".power", "vanishing-convergence",
          [bc, k](const CheckContext& c) {
            return convergence_ball_experiment(bc.algorithm, bc.order, k,
                                               Schedule::power_law(0.1, 4.0), c.seed, 2000);
          });
    }
  }
  std::sort(r.begin(), r.end(), [](const CheckEntry& a, const CheckEntry& b) { return a.id < b.id; });
  return r;
}

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

nlohmann::json CheckRecord::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["property"] = property;
  j["status"] = std::string(to_string(status));
  j["measured"] = measured;
  j["bound"] = bound;
  j["config"] = config;
  if (witness.size() > 0) j["witness"] = checks::to_vector(witness);
  if (!note.empty()) j["note"] = note;
  return j;
}

const std::vector<CheckEntry>& registry() {
  static const std::vector<CheckEntry> r = build_registry();
  return r;
}

const std::vector<std::string>& property_manifest() {
  static const std::vector<std::string> m = {
      "appendix-fixed-points",
      "approximation-bounds",
      "b-fixed-point-criticality",
      "b-implies-a",
      "ball-radius",
      "c-fixed-point-optimality",
      "const-no-fixed-point",
      "contractivity-surface",
      "eps-critical-diameter",
      "eps-subdifferential-closed-form",
      "eps-subdifferential-potential-ball",
      "error-bound",
      "exact-linear-rate",
      "first-order-inclusion",
      "gaussian-softmin-oracle",
      "km-assumption",
      "km-convergence",
      "km-fejer",
      "landau-kolmogorov",
      "moreau-envelope",
      "potential-gradient",
      "prox-lipschitz",
      "prox-scaling-transfer",
      "quadratic-gap-lower-bound",
      "shrink-gap",
      "softmin-nonexpansive",
      "softmin-weakly-convex",
      "spectral-radius",
      "splitting-operators",
      "steiner-point",
      "vanishing-convergence",
      "viscous-envelope",
      "viscous-hessian",
      "weakly-convex-split",
  };
  return m;
}

bool filter_matches(std::string_view filter, std::string_view id) {
  if (filter.empty() || filter == "all") return true;
  return id.find(filter) != std::string_view::npos;
}

std::vector<CheckRecord> run_all(std::string_view filter, std::uint64_t seed, int jobs) {
  std::vector<const CheckEntry*> todo;
  for (const CheckEntry& e : registry()) {
    if (filter_matches(filter, e.id)) todo.push_back(&e);
  }
  std::vector<CheckRecord> out(todo.size());
  auto run_one = [&](std::size_t i) {
    const CheckEntry& e = *todo[i];
    CheckContext ctx{derive_seed(seed, fnv1a(e.id))};
    CheckRecord rec;
    try {
      rec = e.run(ctx);
    } catch (const std::exception& ex) {
      rec = CheckRecord{};
      rec.note = std::string("exception: ") + ex.what();
      checks::finish(rec, false);
    }
    rec.id = e.id;
    rec.property = e.property;
    out[i] = std::move(rec);
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(todo.size())));
  if (n == 1) {
    for (std::size_t i = 0; i < todo.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < todo.size(); i = next++) run_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  return out;
}

nlohmann::json report_json(const std::vector<CheckRecord>& records, std::string_view filter,
                           std::uint64_t seed) {
  nlohmann::json j;
  j["filter"] = std::string(filter);
  j["seed"] = seed;
  std::size_t pass = 0, fail = 0, skip = 0;
  nlohmann::json arr = nlohmann::json::array();
  for (const CheckRecord& r : records) {
    arr.push_back(r.to_json());
    if (r.status == CheckStatus::pass) ++pass;
    if (r.status == CheckStatus::fail) ++fail;
    if (r.status == CheckStatus::skipped) ++skip;
  }
  j["summary"] = {{"pass", pass}, {"fail", fail}, {"skipped", skip}};
  j["records"] = std::move(arr);
  return j;
}

}  // namespace iprox
