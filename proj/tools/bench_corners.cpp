// Benchmark: serial reference vs OpenMP corner kernels on the perturbation
// sweep and the robustness verification. The --grid-points option scales the
// per-corner work.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "portsynth/pipeline.hpp"
#include "portsynth/synthesis.hpp"

using namespace portsynth;

namespace {

template <typename F>
double time_ms(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int grid_points = 4000;
  int repeats = 3;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--grid-points") grid_points = std::atoi(argv[i + 1]);
    if (flag == "--repeats") repeats = std::atoi(argv[i + 1]);
  }

  const CircuitParams circuit;
  const FrequencyGrid grid = FrequencyGrid::log_spaced(1e-2, 1e2, grid_points);
  const double tol_pct = 5.0, cancel_tol = 0.02;

  std::printf("corner sweep benchmark: %d corners x %d grid points, %d workers\n",
              kCornerCount, grid_points, corner_worker_count());

  double serial_best = 1e300, parallel_best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    serial_best = std::min(serial_best, time_ms([&] {
      sweep_perturbations(circuit, tol_pct, grid, cancel_tol, ExecutionMode::Serial);
    }));
    parallel_best = std::min(parallel_best, time_ms([&] {
      sweep_perturbations(circuit, tol_pct, grid, cancel_tol, ExecutionMode::Parallel);
    }));
  }
  std::printf("  sweep   serial   %9.2f ms\n", serial_best);
  std::printf("  sweep   parallel %9.2f ms   speedup %.2fx\n", parallel_best,
              serial_best / parallel_best);

  // Verification benchmark uses the synthesized compensator.
  RunConfig cfg;
  cfg.manual_bound = ManualBound{{0.36, 0.06}, {3.4, 1.0}};
  const FrequencyGrid synth_grid = build_grid(cfg.grid);
  const SweepResult sweep =
      sweep_perturbations(circuit, tol_pct, synth_grid, cancel_tol, ExecutionMode::Parallel);
  const SynthesisResult res = synthesize(cfg, sweep, synth_grid);

  double vs = 1e300, vp = 1e300;
  for (int r = 0; r < repeats; ++r) {
    vs = std::min(vs, time_ms([&] {
      verify_robust(res.Zc, circuit, tol_pct, cancel_tol, ExecutionMode::Serial);
    }));
    vp = std::min(vp, time_ms([&] {
      verify_robust(res.Zc, circuit, tol_pct, cancel_tol, ExecutionMode::Parallel);
    }));
  }
  std::printf("  verify  serial   %9.2f ms\n", vs);
  std::printf("  verify  parallel %9.2f ms   speedup %.2fx\n", vp, vs / vp);
  return 0;
}
