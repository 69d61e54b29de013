// Serial reference kernels against their OpenMP counterparts, and the
// brute-force Hausdorff scan against the uniform-grid index.
//
//   bench_kernels --benchmark_filter=Hausdorff

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "toric/degeneration.hpp"

using namespace toric;

namespace {

PatchSpec bicubic() {
  const double h[16] = {0, 1, 1, 0, 1, 3, 2, 1, 1, 2, 3, 1, 0, 1, 1, 0};
  const double b[4] = {1, 3, 3, 1};
  std::vector<double> w;
  std::vector<Point> pts;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      w.push_back(b[i] * b[j]);
      pts.push_back({double(i), double(j), h[j * 4 + i]});
    }
  }
  return PatchSpec(tensor_patch(3, 3), w, pts);
}

Lifting no_face_lifting() {
  RationalVector v{0, 1, 1, Rational(1, 2), 1, 2, 2, 1, 1, 1, 1, 1, 0, 2, 2, 0};
  return Lifting(v);
}

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_Evaluate(benchmark::State& state) {
  const auto spec = bicubic();
  const int m = static_cast<int>(state.range(1));
  const auto grid = domain_grid(spec.basis(), m);
  std::vector<double> logw;
  for (double w : spec.weights()) logw.push_back(std::log(w));
  for (auto _ : state) {
    PointCloud out;
    out.dim = 3;
    evaluate_params(spec.basis(), logw, spec.control_points(), grid.params, out, exec_of(state));
    benchmark::DoNotOptimize(out.coords.data());
  }
  state.SetItemsProcessed(state.iterations() * m * m);
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_Evaluate)->ArgsProduct({{0, 1}, {65, 257}})->Unit(benchmark::kMillisecond);

void BM_Hausdorff(benchmark::State& state) {
  const auto spec = bicubic();
  const int m = static_cast<int>(state.range(2));
  const auto y = sample_degeneration(spec, no_face_lifting(), 125.0, m, Execution::Serial);
  const auto x = sample(control_surface(spec, regular_decomposition(spec.config(), no_face_lifting())), m, Execution::Serial);
  const auto method = state.range(1) == 0 ? HausdorffMethod::BruteForce : HausdorffMethod::GridIndex;
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_distance(x, y, method, exec_of(state)));
  state.SetLabel(std::string(state.range(1) == 0 ? "brute" : "grid") + (state.range(0) == 0 ? "/serial" : "/parallel"));
}
BENCHMARK(BM_Hausdorff)->ArgsProduct({{0, 1}, {0, 1}, {17, 33}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hausdorff)->ArgsProduct({{0, 1}, {1}, {65}})->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  const auto spec = bicubic();
  const std::vector<double> schedule{1, 5, 25, 125, 625};
  for (auto _ : state) {
    auto r = convergence_sweep(spec, no_face_lifting(), schedule, 65, 1.0, exec_of(state));
    benchmark::DoNotOptimize(r.rows.data());
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
