#ifndef PORTSYNTH_COPRIME_HPP_
#define PORTSYNTH_COPRIME_HPP_

#include "portsynth/rational.hpp"

namespace portsynth {

/// Coprime fraction of a plant over the ring S together with its Bezout
/// certificate: plant = N/D with X*N + Ycof*D = 1, all four members proper
/// and stable. q is the stable denominator polynomial shared by the family.
struct CoprimeFraction {
  RationalFunction N;
  RationalFunction D;
  RationalFunction X;
  RationalFunction Ycof;
  Polynomial q;
};

/// Difference of two coprime fractions built over the same q.
struct PerturbationDelta {
  RationalFunction dN;
  RationalFunction dD;
};

/// Fractions N = num/q, D = den/q with q(s) = prod_{k=1..m} (s + k + offset),
/// m = deg(plant denominator), plant denominator normalized monic and the gain
/// absorbed into N. Exact collisions of plant zeros with q roots cancel
/// harmlessly; a plant pole within 1e-6 of a q root raises QCollision since it
/// would silently drop the fraction's degree.
struct FractionPair {
  RationalFunction N;
  RationalFunction D;
  Polynomial q;
};
FractionPair coprime_fractions(const RationalFunction& plant, double offset = 0.0);

/// Minimal-degree Bezout cofactors: solves x*n + y*d = q^2 for polynomials
/// x (deg < m) and y (deg <= m) through the Sylvester linear system, then
/// X = x/q, Ycof = y/q. Throws NotCoprime when n and d share a root.
struct BezoutPair {
  RationalFunction X;
  RationalFunction Ycof;
};
BezoutPair bezout_solve(const RationalFunction& N, const RationalFunction& D,
                        const Polynomial& q);

/// Convenience: fractions plus cofactors in one call.
CoprimeFraction make_coprime_fraction(const RationalFunction& plant, double offset = 0.0);

/// dN = pert.N - nom.N, dD = pert.D - nom.D. Throws MismatchedQ when the two
/// fractions were built over different q polynomials.
PerturbationDelta perturbation_delta(const CoprimeFraction& nom, const CoprimeFraction& pert);

}  // namespace portsynth

#endif  // PORTSYNTH_COPRIME_HPP_
