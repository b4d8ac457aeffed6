#ifndef PORTSYNTH_SYNTHESIS_HPP_
#define PORTSYNTH_SYNTHESIS_HPP_

#include <array>
#include <string>

#include "portsynth/coprime.hpp"
#include "portsynth/hinf.hpp"
#include "portsynth/rational.hpp"

namespace portsynth {

/// Element values of the one-port network.
struct CircuitParams {
  double R1 = 1.0;  // ohms
  double R2 = 3.0;  // ohms
  double L1 = 2.0;  // henries
  double L2 = 1.0;  // henries
  double C1 = 1.0;  // farads
};

/// Port impedance Z(s) = V/I from the node equations, denominator monic.
RationalFunction circuit_impedance(const CircuitParams& p);

/// One perturbation corner: each parameter at -1/0/+1 tolerance level.
using CornerLevels = std::array<int, 5>;

/// The 3^5 = 243 corners in a fixed order: corner index c sets level
/// (c / 3^j) % 3 - 1 for parameter j in the order R1, R2, L1, L2, C1.
constexpr int kCornerCount = 243;
CornerLevels corner_levels(int index);
CircuitParams perturb(const CircuitParams& nominal, const CornerLevels& levels, double tol_pct);

struct CornerRecord {
  CornerLevels levels{};
  RationalFunction Zpert;
  PerturbationDelta delta;
  std::vector<double> norm_curve;  // Euclidean magnitude of [dN; dD] per grid point
};

struct SweepResult {
  std::vector<CornerRecord> corners;
  std::vector<double> grid_points;
};

/// Corner loops run either serially (reference implementation) or through the
/// OpenMP worker pool; both produce bit-identical results.
enum class ExecutionMode { Serial, Parallel };

/// Worker count for the parallel mode: the PORT_SYNTH_THREADS environment
/// variable when set, otherwise the OpenMP default.
int corner_worker_count();

/// Evaluates all 243 corners: perturbed impedance, minimal realization,
/// coprime fractions over the nominal q, delta against the nominal fraction,
/// and the delta magnitude curve over the grid.
SweepResult sweep_perturbations(const CircuitParams& nominal, double tol_pct,
                                const FrequencyGrid& grid, double cancel_tol,
                                ExecutionMode mode = ExecutionMode::Parallel);

/// Pointwise upper envelope of the corner curves.
std::vector<double> sweep_envelope(const SweepResult& sweep);

/// First-order stable minimum-phase bound k (s+z)/(s+p) dominating the
/// envelope with the given headroom, chosen to hug the envelope in the
/// log-magnitude sense. Throws FitFailed when no candidate in the search box
/// dominates.
RationalFunction fit_bound(const SweepResult& sweep, const FrequencyGrid& grid,
                           double margin = 0.05);

/// Checks |R(jw)| >= env(w) at every grid point.
bool bound_dominates(const RationalFunction& bound, const SweepResult& sweep,
                     const FrequencyGrid& grid);

/// T1 = bound * [X; Ycof], T2 = bound * [D; -N].
struct MatchingData {
  RationalVector T1;
  RationalVector T2;
};
MatchingData build_T1_T2(const RationalFunction& bound, const CoprimeFraction& frac);

/// Zc = (Ycof + N Q) / (X - D Q), simplified by exact and near (1e-4)
/// cancellation. Throws SingularParametrization when the denominator vanishes
/// or the result is improper.
RationalFunction compensator(const CoprimeFraction& frac, const RationalFunction& Q);

/// Parallel interconnection (Za^-1 + Zb^-1)^-1 = Za Zb / (Za + Zb).
RationalFunction interconnect(const RationalFunction& Za, const RationalFunction& Zb);

struct CornerVerdict {
  CornerLevels levels{};
  bool stable = false;
  std::vector<Complex> poles;
};

/// Interconnects the compensator with every perturbation corner and reports
/// stability (all poles in Re < -1e-9) with the pole lists.
std::vector<CornerVerdict> verify_robust(const RationalFunction& Zc,
                                         const CircuitParams& nominal, double tol_pct,
                                         double cancel_tol,
                                         ExecutionMode mode = ExecutionMode::Parallel);

/// Full synthesis output for reporting.
struct SynthesisResult {
  RationalFunction bound;
  ModelMatchResult match;
  RationalFunction Zc;
  std::vector<CornerVerdict> verdicts;
  bool infeasible = false;
  std::string infeasible_reason;
};

}  // namespace portsynth

#endif  // PORTSYNTH_SYNTHESIS_HPP_
