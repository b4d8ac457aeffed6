#ifndef PORTSYNTH_HINF_HPP_
#define PORTSYNTH_HINF_HPP_

#include "portsynth/rational.hpp"

namespace portsynth {

/// Inner-outer factorization T2 = Ui * Uo of a 2x1 column: Ui has unit
/// Euclidean magnitude on the imaginary axis, Uo carries the magnitude.
struct InnerOuterPair {
  RationalVector Ui;
  RationalFunction Uo;
};

/// Factors the column through the spectral factorization of
/// m(s) = n1(s) n1(-s) + n2(s) n2(-s) over the common stable denominator.
/// Throws AxisZero when the column magnitude vanishes on the axis.
InnerOuterPair inner_outer(const RationalVector& T2);

/// Spectral factor G_- of a scalar G with G(-s) = G(s) and G(jw) > 0:
/// G_-(-s) G_-(s) = G(s) with G_- and 1/G_- stable, positive gain at
/// infinity. Throws NotSymmetric / NotPositive / AxisZero.
RationalFunction spectral_factor(const RationalFunction& G);

/// Y := (I - Ui Ui*) T1, the part of T1 the matching cannot touch.
RationalVector build_Yvec(const RationalVector& T1, const RationalVector& Ui);

/// For a trial bound beta > ||Yvec||inf: Yo = spectral factor of
/// beta^2 - Yvec* Yvec and Rfun = (Ui* T1) / Yo. Throws BetaTooSmall.
struct BoundFactor {
  RationalFunction Yo;
  RationalFunction Rfun;
};
BoundFactor build_R(double beta, const RationalVector& T1, const RationalVector& Ui,
                    const RationalVector& Yvec, const FrequencyGrid& grid);

/// Closest stable function to Rfun in the L-infinity norm: splits off the
/// antistable part, forms the gramian eigen-pair, builds the all-pass
/// correction gamma * f/g and returns Xfun = Rfun - gamma f/g together with
/// gamma (the Hankel norm of Rfun). A stable input returns (Rfun, 0).
struct NehariResult {
  RationalFunction Xfun;
  double gamma = 0.0;
};
NehariResult nehari_scalar(const RationalFunction& Rfun);

/// Everything the beta-search produces for one matching problem.
struct ModelMatchResult {
  double beta = 0.0;
  double gamma = 0.0;        // Nehari distance at the final beta
  double hankel_norm = 0.0;  // equals gamma; kept for reporting
  RationalVector Yvec;
  RationalFunction Yo;
  RationalFunction Rfun;
  RationalFunction Xfun;
  RationalFunction Q;
  double achieved_norm = 0.0;
  double achieved_argmax = 0.0;
  double yvec_norm = 0.0;
  double t1_norm = 0.0;
  std::vector<std::pair<double, double>> beta_trace;  // (beta, hankel norm)
};

/// Bisection on beta in (||Yvec||, ||T1||] against the predicate
/// hankel_norm(Rfun(beta)) < 1, followed by the Nehari solve at the final
/// feasible beta and Q = Uo^-1 Xfun Yo. Throws Infeasible when no beta in the
/// bracket satisfies the predicate.
ModelMatchResult model_match(const RationalVector& T1, const RationalVector& T2, double tol,
                             const FrequencyGrid& grid = FrequencyGrid::standard());

/// Same search with an explicitly seeded bracket (exposed for reproducing
/// published bisection traces).
ModelMatchResult model_match_bracketed(const RationalVector& T1, const RationalVector& T2,
                                       double lo, double hi, double tol,
                                       const FrequencyGrid& grid);

}  // namespace portsynth

#endif  // PORTSYNTH_HINF_HPP_
