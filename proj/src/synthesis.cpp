#include "portsynth/synthesis.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>

#include "portsynth/errors.hpp"

namespace portsynth {

RationalFunction circuit_impedance(const CircuitParams& p) {
  const Polynomial num({-p.R1 * p.R2, p.R1 * (p.L1 - p.L2), p.R1 * p.R2 * p.L1 * p.C1,
                        p.R1 * p.L1 * p.L2 * p.C1});
  const Polynomial den({p.R1 - p.R2, p.L1 - p.L2 + p.C1 * p.R1 * p.R2,
                        p.L1 * p.C1 * p.R2 + p.L2 * p.C1 * p.R1, p.L1 * p.L2 * p.C1});
  return RationalFunction(num, den);
}

CornerLevels corner_levels(int index) {
  CornerLevels levels{};
  for (int j = 0; j < 5; ++j) {
    levels[static_cast<std::size_t>(j)] = index % 3 - 1;
    index /= 3;
  }
  return levels;
}

CircuitParams perturb(const CircuitParams& nominal, const CornerLevels& levels, double tol_pct) {
  const double f = tol_pct / 100.0;
  CircuitParams p = nominal;
  p.R1 *= 1.0 + levels[0] * f;
  p.R2 *= 1.0 + levels[1] * f;
  p.L1 *= 1.0 + levels[2] * f;
  p.L2 *= 1.0 + levels[3] * f;
  p.C1 *= 1.0 + levels[4] * f;
  return p;
}

int corner_worker_count() {
  if (const char* env = std::getenv("PORT_SYNTH_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return omp_get_max_threads();
}

namespace {

// Runs `body(corner)` for every corner index. The parallel path must not let
// exceptions cross the omp region; the first failing corner wins so the error
// surfaced does not depend on scheduling.
template <typename F>
void run_corners(int count, ExecutionMode mode, F&& body) {
  if (mode == ExecutionMode::Serial) {
    for (int c = 0; c < count; ++c) body(c);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static) num_threads(corner_worker_count())
  for (int c = 0; c < count; ++c) {
    try {
      body(c);
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

SweepResult sweep_perturbations(const CircuitParams& nominal, double tol_pct,
                                const FrequencyGrid& grid, double cancel_tol,
                                ExecutionMode mode) {
  if (!(tol_pct >= 0.0 && tol_pct < 100.0))
    throw ValidationError("tolerance percentage must lie in [0, 100)");

  const RationalFunction z_nom =
      cancel_near_pairs(circuit_impedance(nominal), cancel_tol);
  const FractionPair nom = coprime_fractions(z_nom);
  const int nominal_deg = nom.q.degree();

  SweepResult out;
  out.grid_points = grid.points();
  out.corners.resize(kCornerCount);

  run_corners(kCornerCount, mode, [&](int c) {
    CornerRecord& rec = out.corners[static_cast<std::size_t>(c)];
    rec.levels = corner_levels(c);
    const CircuitParams p = perturb(nominal, rec.levels, tol_pct);
    rec.Zpert = cancel_near_pairs(circuit_impedance(p), cancel_tol);
    if (rec.Zpert.den().degree() != nominal_deg)
      throw QCollision("corner " + std::to_string(c) +
                       ": reduced impedance degree differs from nominal");
    const FractionPair pert = coprime_fractions(rec.Zpert);
    rec.delta.dN = pert.N - nom.N;
    rec.delta.dD = pert.D - nom.D;

    RationalVector dvec(rec.delta.dN, rec.delta.dD);
    rec.norm_curve.reserve(grid.size());
    for (double w : grid.points()) rec.norm_curve.push_back(column_magnitude(dvec, w));
  });
  return out;
}

std::vector<double> sweep_envelope(const SweepResult& sweep) {
  std::vector<double> env(sweep.grid_points.size(), 0.0);
  for (const CornerRecord& rec : sweep.corners)
    for (std::size_t k = 0; k < env.size(); ++k)
      env[k] = std::max(env[k], rec.norm_curve[k]);
  return env;
}

namespace {

constexpr double kFitZMin = 1e-2, kFitZMax = 1e2;
constexpr double kFitKMin = 1e-9, kFitKMax = 1e3;

double bound_mag(double k, double z, double p, double w) {
  return k * std::hypot(w, z) / std::hypot(w, p);
}

}  // namespace

RationalFunction fit_bound(const SweepResult& sweep, const FrequencyGrid& grid,
                           double margin) {
  if (!(margin >= 0.0)) throw ValidationError("margin must be nonnegative");
  const std::vector<double> env = sweep_envelope(sweep);
  const std::vector<double>& ws = grid.points();

  double env_max = 0.0;
  for (double e : env) env_max = std::max(env_max, e);
  if (env_max < 1e-300) {
    // Degenerate envelope: any positive gain dominates.
    return RationalFunction(Polynomial({kFitKMin * kFitZMin, kFitKMin}),
                            Polynomial({kFitZMin, 1.0}));
  }

  // Required gain for a (z, p) template, then the worst log overshoot.
  const auto evaluate_zp = [&](double z, double p, double* k_out) {
    double k_req = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (env[i] <= 0.0) continue;
      k_req = std::max(k_req, env[i] * std::hypot(ws[i], p) / std::hypot(ws[i], z));
    }
    k_req *= 1.0 + margin;
    *k_out = k_req;
    if (k_req > kFitKMax) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (env[i] <= 0.0) continue;
      worst = std::max(worst, std::log(bound_mag(k_req, z, p, ws[i]) / env[i]));
    }
    return worst;
  };

  double best_obj = std::numeric_limits<double>::infinity();
  double best_z = kFitZMin, best_p = kFitZMin, best_k = 0.0;
  double lo_z = std::log10(kFitZMin), hi_z = std::log10(kFitZMax);
  double lo_p = lo_z, hi_p = hi_z;
  const int coarse = 41, fine = 9;

  for (int round = 0; round < 3; ++round) {
    const int steps = round == 0 ? coarse : fine;
    for (int iz = 0; iz < steps; ++iz) {
      for (int ip = 0; ip < steps; ++ip) {
        const double z = std::pow(10.0, lo_z + (hi_z - lo_z) * iz / (steps - 1));
        const double p = std::pow(10.0, lo_p + (hi_p - lo_p) * ip / (steps - 1));
        double k = 0.0;
        const double obj = evaluate_zp(z, p, &k);
        if (obj < best_obj) {
          best_obj = obj;
          best_z = z;
          best_p = p;
          best_k = k;
        }
      }
    }
    const double span_z = (hi_z - lo_z) / (round == 0 ? coarse - 1 : fine - 1);
    const double span_p = (hi_p - lo_p) / (round == 0 ? coarse - 1 : fine - 1);
    lo_z = std::log10(best_z) - span_z;
    hi_z = std::log10(best_z) + span_z;
    lo_p = std::log10(best_p) - span_p;
    hi_p = std::log10(best_p) + span_p;
  }

  if (!std::isfinite(best_obj))
    throw FitFailed("no first-order bound in the search box dominates the envelope");
  best_k = std::max(best_k, kFitKMin);
  return RationalFunction(Polynomial({best_k * best_z, best_k}), Polynomial({best_p, 1.0}));
}

bool bound_dominates(const RationalFunction& bound, const SweepResult& sweep,
                     const FrequencyGrid& grid) {
  const std::vector<double> env = sweep_envelope(sweep);
  const std::vector<double>& ws = grid.points();
  for (std::size_t i = 0; i < ws.size(); ++i)
    if (std::abs(evaluate(bound, Complex(0.0, ws[i]))) < env[i]) return false;
  return true;
}

MatchingData build_T1_T2(const RationalFunction& bound, const CoprimeFraction& frac) {
  MatchingData out;
  out.T1 = RationalVector(bound * frac.X, bound * frac.Ycof);
  out.T2 = RationalVector(bound * frac.D, -(bound * frac.N));
  return out;
}

namespace {

// Lifts a member of the fraction family back over q (members are stored in
// lowest terms, e.g. Ycof = (s+20.97)/(s+2) over q = (s+1)(s+2)).
Polynomial over_q(const RationalFunction& f, const Polynomial& q) {
  const RationalFunction lifted = f * RationalFunction(q, Polynomial({1.0}));
  return lifted.num() * (1.0 / lifted.den().coeff(0));
}

}  // namespace

RationalFunction compensator(const CoprimeFraction& frac, const RationalFunction& Q) {
  // (Ycof + N Q) / (X - D Q) over the shared denominator q * den(Q); building
  // the two polynomials directly keeps the hidden common factors simple
  // enough for cancellation instead of compounding them through the
  // intermediate products.
  const Polynomial y_q = over_q(frac.Ycof, frac.q);
  const Polynomial n_q = over_q(frac.N, frac.q);
  const Polynomial x_q = over_q(frac.X, frac.q);
  const Polynomial d_q = over_q(frac.D, frac.q);

  const Polynomial num = y_q * Q.den() + n_q * Q.num();
  const Polynomial den = x_q * Q.den() - d_q * Q.num();
  if (den.is_zero()) throw SingularParametrization("X - D Q is identically zero");
  RationalFunction zc = cancel_near_pairs(RationalFunction(num, den), 1e-4);
  if (!zc.is_proper())
    throw SingularParametrization("X - D Q has a zero at infinity");
  return zc;
}

RationalFunction interconnect(const RationalFunction& Za, const RationalFunction& Zb) {
  if (Za.is_zero() || Zb.is_zero()) throw DegenerateSum("interconnecting a zero impedance");
  // Za Zb / (Za + Zb) with the shared denominator product cancelled
  // algebraically: n_a n_b / (n_a d_b + n_b d_a).
  const Polynomial num = Za.num() * Zb.num();
  const Polynomial den = Za.num() * Zb.den() + Zb.num() * Za.den();
  if (den.is_zero()) throw DegenerateSum("Za + Zb is identically zero");
  return RationalFunction(num, den);
}

std::vector<CornerVerdict> verify_robust(const RationalFunction& Zc,
                                         const CircuitParams& nominal, double tol_pct,
                                         double cancel_tol, ExecutionMode mode) {
  std::vector<CornerVerdict> out(kCornerCount);
  run_corners(kCornerCount, mode, [&](int c) {
    CornerVerdict& v = out[static_cast<std::size_t>(c)];
    v.levels = corner_levels(c);
    const CircuitParams p = perturb(nominal, v.levels, tol_pct);
    const RationalFunction zt = [&] {
      try {
        const RationalFunction zp = cancel_near_pairs(circuit_impedance(p), cancel_tol);
        return interconnect(zp, Zc);
      } catch (const DegenerateSum& e) {
        throw DegenerateSum("corner " + std::to_string(c) + ": " + e.what());
      }
    }();
    v.poles = zt.poles();
    v.stable = true;
    for (const Complex& pole : v.poles)
      if (pole.real() >= -1e-9) v.stable = false;
  });
  return out;
}

}  // namespace portsynth
