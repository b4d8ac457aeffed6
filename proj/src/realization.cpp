#include "portsynth/realization.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "portsynth/errors.hpp"

namespace portsynth {

namespace {

constexpr double kAxisTol = 1e-6;

// Rank by singular values against a relative threshold.
int numeric_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-8) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  int rank = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv(k) > rel_tol * sv(0)) ++rank;
  return rank;
}

}  // namespace

Complex StateSpaceRealization::transfer(Complex s) const {
  const int n = order();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) * s - A.cast<Complex>();
  Eigen::VectorXcd x = m.partialPivLu().solve(B.cast<Complex>());
  return (C.cast<Complex>() * x)(0) + D;
}

StateSpaceRealization realize_strictly_proper(const RationalFunction& r) {
  if (!r.is_strictly_proper())
    throw NotStrictlyProper("realization requires deg num < deg den");
  if (r.is_zero()) throw NotStrictlyProper("realization of the zero function");

  const int n = r.den().degree();
  StateSpaceRealization ss;
  ss.A = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) ss.A(k, k + 1) = 1.0;
  for (int k = 0; k < n; ++k) ss.A(n - 1, k) = -r.den().coeff(static_cast<std::size_t>(k));
  ss.B = Eigen::VectorXd::Zero(n);
  ss.B(n - 1) = 1.0;
  ss.C = Eigen::RowVectorXd::Zero(n);
  for (int k = 0; k < n; ++k) ss.C(k) = r.num().coeff(static_cast<std::size_t>(k));
  ss.D = 0.0;

  // The input is already in lowest terms, so the canonical form is minimal;
  // the observability rank check guards against residual common factors.
  Eigen::MatrixXd obs(n, n);
  Eigen::RowVectorXd row = ss.C;
  for (int k = 0; k < n; ++k) {
    obs.row(k) = row;
    row = row * ss.A;
  }
  if (numeric_rank(obs) < n)
    throw NotStrictlyProper("realization is not observable; input not in lowest terms");
  return ss;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || Q.rows() != n || Q.cols() != n)
    throw SingularSylvester("dimension mismatch");

  // Eigenvalue condition: A and -A must not share an eigenvalue.
  Eigen::VectorXcd eig = Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(eig(i) + std::conj(eig(j))) < 1e-9)
        throw SingularSylvester("eigenvalue sum vanishes; solution not unique");

  // Vectorize: (I (x) A + A (x) I) vec(P) = vec(Q).
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        K(i * n + j, i * n + k) += A(j, k);  // P A^T term, row-major vec
        K(i * n + j, k * n + j) += A(i, k);  // A P term
      }
  Eigen::VectorXd q(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q(i * n + j) = Q(i, j);

  Eigen::VectorXd pv = K.fullPivLu().solve(q);
  Eigen::MatrixXd P(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) P(i, j) = pv(i * n + j);
  P = 0.5 * (P + P.transpose()).eval();

  const double rel = (A * P + P * A.transpose() - Q).norm();
  if (!(rel <= 1e-10 * std::max(Q.norm(), 1e-30)))
    throw SingularSylvester("residual too large; system near-singular");
  return P;
}

double HankelData::hankel_norm() const { return std::sqrt(lambda_sq); }

HankelData hankel_from_realization(const StateSpaceRealization& ss) {
  HankelData hd;
  hd.Lc = solve_lyapunov(ss.A, ss.B * ss.B.transpose());
  hd.Lo = solve_lyapunov(ss.A.transpose(), ss.C.transpose() * ss.C);

  Eigen::EigenSolver<Eigen::MatrixXd> es(hd.Lc * hd.Lo, true);
  int best = 0;
  double best_val = -1.0;
  for (int k = 0; k < es.eigenvalues().size(); ++k) {
    const Complex ev = es.eigenvalues()(k);
    if (std::abs(ev.imag()) > 1e-8 * std::max(1.0, std::abs(ev))) continue;
    if (ev.real() > best_val) { best_val = ev.real(); best = k; }
  }
  hd.lambda_sq = std::max(0.0, best_val);

  Eigen::VectorXcd wc = es.eigenvectors().col(best);
  int imax = 0;
  wc.cwiseAbs().maxCoeff(&imax);
  wc /= wc(imax) / std::abs(wc(imax));  // strip the arbitrary complex phase
  hd.w = wc.real();
  hd.w.normalize();
  for (int k = 0; k < hd.w.size(); ++k) {
    if (std::abs(hd.w(k)) > 1e-12) {
      if (hd.w(k) < 0.0) hd.w = -hd.w;
      break;
    }
  }
  hd.v = hd.Lo * hd.w / std::sqrt(hd.lambda_sq);
  return hd;
}

HankelData hankel_data(const RationalFunction& r1) {
  for (const Complex& p : r1.poles())
    if (p.real() <= 0.0)
      throw NotAntistable("hankel data requires all poles in Re > 0");
  return hankel_from_realization(realize_strictly_proper(r1));
}

StableSplit stable_antistable_split(const RationalFunction& r) {
  if (!r.is_proper()) throw NotProper("split requires a proper function");

  const std::vector<Complex> ps = r.poles();
  for (const Complex& p : ps)
    if (std::abs(p.real()) < kAxisTol)
      throw AxisPole("pole within 1e-6 of the imaginary axis");
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j)
      if (std::abs(ps[i] - ps[j]) < kAxisTol)
        throw RepeatedPole("poles closer than 1e-6");

  const double direct = r.at_infinity();
  StableSplit out;
  out.antistable = RationalFunction();                 // 0
  out.stable = RationalFunction::constant(direct);

  // Residue at p: num(p) / prod_{q != p} (p - q), denominator monic.
  std::vector<bool> done(ps.size(), false);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (done[i]) continue;
    done[i] = true;
    const Complex p = ps[i];
    Complex denom = 1.0;
    for (std::size_t j = 0; j < ps.size(); ++j)
      if (j != i) denom *= (p - ps[j]);
    const Complex res = r.num()(p) / denom;

    RationalFunction term;
    if (std::abs(p.imag()) <= 1e-9 * std::max(1.0, std::abs(p))) {
      term = RationalFunction(Polynomial({res.real()}), Polynomial({-p.real(), 1.0}));
    } else {
      // Pair with the conjugate pole: res/(s-p) + conj(res)/(s-conj(p)).
      std::size_t mate = ps.size();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        if (done[j]) continue;
        const double d = std::abs(ps[j] - std::conj(p));
        if (d < best) { best = d; mate = j; }
      }
      if (mate == ps.size()) throw RepeatedPole("complex pole without conjugate partner");
      done[mate] = true;
      const double a = 2.0 * res.real();
      const double b = -2.0 * (res * std::conj(p)).real();
      term = RationalFunction(Polynomial({b, a}),
                              Polynomial({std::norm(p), -2.0 * p.real(), 1.0}));
    }
    if (p.real() > 0.0)
      out.antistable = out.antistable + term;
    else
      out.stable = out.stable + term;
  }
  return out;
}

double hankel_norm(const RationalFunction& r) {
  const StableSplit split = stable_antistable_split(r);
  if (split.antistable.is_zero()) return 0.0;
  return hankel_data(split.antistable).hankel_norm();
}

}  // namespace portsynth
