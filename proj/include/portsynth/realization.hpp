#ifndef PORTSYNTH_REALIZATION_HPP_
#define PORTSYNTH_REALIZATION_HPP_

#include <Eigen/Dense>

#include "portsynth/rational.hpp"

namespace portsynth {

/// Minimal state-space realization (A, B, C) of a strictly proper scalar
/// transfer function, direct term D = 0.
struct StateSpaceRealization {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  double D = 0.0;

  int order() const { return static_cast<int>(A.rows()); }
  Complex transfer(Complex s) const;
};

/// Controllable canonical realization of a strictly proper rational function.
/// Eigenvalues of A are the denominator roots; the transfer function
/// reproduces the input. Throws NotStrictlyProper when deg num >= deg den.
StateSpaceRealization realize_strictly_proper(const RationalFunction& r);

/// Solves A P + P A^T = Q for symmetric P via the vectorized linear system.
/// Throws SingularSylvester when A and -A share an eigenvalue (the system is
/// singular); that signals an imaginary-axis pole upstream.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

/// Gramians of an antistable strictly proper function and the dominant
/// eigenpair of their product; sqrt(lambda_sq) is the Hankel norm.
struct HankelData {
  Eigen::MatrixXd Lc;
  Eigen::MatrixXd Lo;
  double lambda_sq = 0.0;
  Eigen::VectorXd w;
  Eigen::VectorXd v;

  double hankel_norm() const;
};

HankelData hankel_from_realization(const StateSpaceRealization& ss);

/// Builds the gramian data for a strictly proper function whose poles all lie
/// in the open right half-plane. Throws NotAntistable otherwise.
HankelData hankel_data(const RationalFunction& r1);

/// Additive decomposition r = r1 + r2 with r1 strictly proper and antistable
/// (poles in Re > 0) and r2 in S carrying the direct term. Requires distinct
/// poles away from the imaginary axis.
struct StableSplit {
  RationalFunction antistable;  // r1
  RationalFunction stable;      // r2
};
StableSplit stable_antistable_split(const RationalFunction& r);

/// Norm of the Hankel operator of r: the gramian-based value for the
/// antistable part, 0 when r is already stable.
double hankel_norm(const RationalFunction& r);

}  // namespace portsynth

#endif  // PORTSYNTH_REALIZATION_HPP_
