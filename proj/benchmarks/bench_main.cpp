#include <benchmark/benchmark.h>

#include "iprox/approximators.hpp"
#include "iprox/hjprox.hpp"
#include "iprox/iteration.hpp"
#include "iprox/rng.hpp"
#include "iprox/surface.hpp"

using namespace iprox;

namespace {

const std::vector<Vec>& cloud() {
  static const std::vector<Vec> c = box_cloud(1, 2, 256, 5.0);
  return c;
}

void BM_ProxExact(benchmark::State& state) {
  const Penalty p = Penalty::mcp(2, 1.0, 2.0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(prox_exact(p, 1.0, cloud()[i++ % cloud().size()]));
  }
}
BENCHMARK(BM_ProxExact);

void BM_Approx(benchmark::State& state) {
  const auto kind = static_cast<ApproxKind>(state.range(0));
  Policy pol = kind == ApproxKind::d ? Policy::gaussian_bump() : Policy::adversarial();
  const ApproxOperator g = make_approx(kind, Penalty::l2(2, 1.0), 1.0, 0.1, pol);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(g.evaluate(cloud()[i++ % cloud().size()]));
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Approx)->DenseRange(0, 4);

void BM_SteinerSelector(benchmark::State& state) {
  const ApproxOperator g = make_type_e(Penalty::l1(2, 1.0), 1.0, 0.1, Policy::steiner());
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(g.evaluate(cloud()[i++ % cloud().size()]));
}
BENCHMARK(BM_SteinerSelector);

void BM_TypeF(benchmark::State& state) {
  HJConfig cfg;
  cfg.eps = 0.01;
  cfg.samples = state.range(0);
  const Penalty p = Penalty::l1(2, 1.0);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(type_f_prox(p, cfg, cloud()[i++ % cloud().size()]));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TypeF)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SplittingRun(benchmark::State& state) {
  SplittingProblem prob;
  prob.algorithm = static_cast<Algorithm>(state.range(0));
  prob.f = SmoothTerm::diagonal_quadratic(1.0, 2.0, (Vec(2) << 1.5, -1.0).finished());
  prob.tau = optimal_tau(prob.algorithm, 1.0, 2.0);
  const Penalty p = Penalty::l1(2, 1.0);
  const ApproxFactory make = [&](double eps) {
    return make_type_a(p, prob.tau, eps, Policy::adversarial());
  };
  const Vec x0 = (Vec(2) << 3.0, -2.0).finished();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_splitting(prob, make, Schedule::geometric(0.1, 0.9), x0, 300, std::nullopt));
  }
  state.SetLabel(std::string(to_string(prob.algorithm)));
}
BENCHMARK(BM_SplittingRun)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_Surface(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(contractivity_surface(SurfaceSpec{}));
}
BENCHMARK(BM_Surface)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
