// The OpenMP corner kernels must agree bit-for-bit with the serial reference.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "portsynth/errors.hpp"
#include "portsynth/pipeline.hpp"
#include "portsynth/synthesis.hpp"

using namespace portsynth;

namespace {

bool identical(const Polynomial& a, const Polynomial& b) { return a.coeffs() == b.coeffs(); }

bool identical(const RationalFunction& a, const RationalFunction& b) {
  return identical(a.num(), b.num()) && identical(a.den(), b.den());
}

}  // namespace

TEST_CASE("sweep: serial reference and OpenMP kernels are bit-identical") {
  const FrequencyGrid grid = FrequencyGrid::log_spaced(1e-2, 1e2, 120);
  const SweepResult serial =
      sweep_perturbations(CircuitParams{}, 5.0, grid, 0.02, ExecutionMode::Serial);
  const SweepResult parallel =
      sweep_perturbations(CircuitParams{}, 5.0, grid, 0.02, ExecutionMode::Parallel);

  REQUIRE(serial.corners.size() == parallel.corners.size());
  for (std::size_t c = 0; c < serial.corners.size(); ++c) {
    const CornerRecord& a = serial.corners[c];
    const CornerRecord& b = parallel.corners[c];
    CHECK(a.levels == b.levels);
    CHECK(identical(a.Zpert, b.Zpert));
    CHECK(identical(a.delta.dN, b.delta.dN));
    CHECK(identical(a.delta.dD, b.delta.dD));
    CHECK(a.norm_curve == b.norm_curve);
  }
}

TEST_CASE("verification: serial reference and OpenMP kernels are bit-identical") {
  RunConfig cfg;
  cfg.manual_bound = ManualBound{{0.36, 0.06}, {3.4, 1.0}};
  const FrequencyGrid grid = build_grid(cfg.grid);
  const SweepResult sweep =
      sweep_perturbations(cfg.circuit, cfg.tolerance_pct, grid, cfg.cancel_tol);
  const SynthesisResult res = synthesize(cfg, sweep, grid);

  const auto serial =
      verify_robust(res.Zc, cfg.circuit, cfg.tolerance_pct, cfg.cancel_tol, ExecutionMode::Serial);
  const auto parallel = verify_robust(res.Zc, cfg.circuit, cfg.tolerance_pct, cfg.cancel_tol,
                                      ExecutionMode::Parallel);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t c = 0; c < serial.size(); ++c) {
    CHECK(serial[c].levels == parallel[c].levels);
    CHECK(serial[c].stable == parallel[c].stable);
    REQUIRE(serial[c].poles.size() == parallel[c].poles.size());
    for (std::size_t k = 0; k < serial[c].poles.size(); ++k)
      CHECK(serial[c].poles[k] == parallel[c].poles[k]);
  }
}

TEST_CASE("worker cap honors the environment variable") {
  setenv("PORT_SYNTH_THREADS", "3", 1);
  CHECK(corner_worker_count() == 3);
  setenv("PORT_SYNTH_THREADS", "1", 1);
  CHECK(corner_worker_count() == 1);
  unsetenv("PORT_SYNTH_THREADS");
  CHECK(corner_worker_count() >= 1);
}

TEST_CASE("errors inside the parallel region surface deterministically") {
  const RationalFunction zc = -cancel_near_pairs(circuit_impedance(CircuitParams{}), 0.02);
  std::string serial_msg, parallel_msg;
  try {
    verify_robust(zc, CircuitParams{}, 5.0, 0.02, ExecutionMode::Serial);
  } catch (const DegenerateSum& e) {
    serial_msg = e.what();
  }
  try {
    verify_robust(zc, CircuitParams{}, 5.0, 0.02, ExecutionMode::Parallel);
  } catch (const DegenerateSum& e) {
    parallel_msg = e.what();
  }
  CHECK(!serial_msg.empty());
  CHECK(serial_msg == parallel_msg);
}
