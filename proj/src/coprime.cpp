#include "portsynth/coprime.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "portsynth/errors.hpp"

namespace portsynth {

namespace {

// Recovers the polynomial p from a fraction known to equal p/q: multiplies by
// q and checks the denominator collapses to a constant.
Polynomial numerator_over_q(const RationalFunction& f, const Polynomial& q) {
  RationalFunction prod = f * RationalFunction(q, Polynomial({1.0}));
  if (prod.den().degree() != 0)
    throw NotCoprime("fraction does not live over the given q");
  return prod.num() * (1.0 / prod.den().coeff(0));
}

}  // namespace

FractionPair coprime_fractions(const RationalFunction& plant, double offset) {
  if (!plant.is_proper()) throw NotProper("plant must be proper");

  const int m = plant.den().degree();
  Polynomial q({1.0});
  for (int k = 1; k <= m; ++k) q = q * Polynomial({static_cast<double>(k) + offset, 1.0});

  if (m >= 1) {
    for (const Complex& p : plant.poles())
      for (int k = 1; k <= m; ++k)
        if (std::abs(p - Complex(-(static_cast<double>(k) + offset), 0.0)) < 1e-6)
          throw QCollision("plant pole coincides with a root of q; shift the q roots");
  }

  FractionPair out;
  out.q = q;
  out.N = RationalFunction(plant.num(), q);
  out.D = RationalFunction(plant.den(), q);
  return out;
}

BezoutPair bezout_solve(const RationalFunction& N, const RationalFunction& D,
                        const Polynomial& q) {
  const Polynomial n = numerator_over_q(N, q);
  const Polynomial d = numerator_over_q(D, q);
  const int m = d.degree();

  BezoutPair out;
  if (m <= 0) {
    // Constant plant: X n + Y d = 1 with d = 1.
    if (n.is_zero()) {
      out.X = RationalFunction();
      out.Ycof = RationalFunction::constant(1.0);
    } else {
      out.X = RationalFunction::constant(1.0 / n.coeff(0));
      out.Ycof = RationalFunction();
    }
    return out;
  }

  if (!n.is_zero() && n.degree() >= 1) {
    for (const Complex& rn : roots(n))
      for (const Complex& rd : roots(d))
        if (std::abs(rn - rd) < 1e-6) throw NotCoprime("n and d share a root");
  }

  // x n + y d = q^2, deg x <= m-1, deg y <= m: a square (2m+1) system.
  const Polynomial c = q * q;
  const int rows = 2 * m + 1;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(rows, rows);
  for (int j = 0; j < m; ++j)         // x_j multiplies s^j * n
    for (int i = 0; i <= n.degree(); ++i)
      K(i + j, j) = n.coeff(static_cast<std::size_t>(i));
  for (int j = 0; j <= m; ++j)        // y_j multiplies s^j * d
    for (int i = 0; i <= m; ++i)
      K(i + j, m + j) = d.coeff(static_cast<std::size_t>(i));

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
  for (int i = 0; i < rows; ++i) rhs(i) = c.coeff(static_cast<std::size_t>(i));

  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  if (!lu.isInvertible()) throw NotCoprime("singular Sylvester system");
  const Eigen::VectorXd sol = lu.solve(rhs);

  std::vector<double> xc(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) xc[static_cast<std::size_t>(j)] = sol(j);
  std::vector<double> yc(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) yc[static_cast<std::size_t>(j)] = sol(m + j);

  out.X = RationalFunction(Polynomial(std::move(xc)), q);
  out.Ycof = RationalFunction(Polynomial(std::move(yc)), q);
  return out;
}

CoprimeFraction make_coprime_fraction(const RationalFunction& plant, double offset) {
  FractionPair fp = coprime_fractions(plant, offset);
  BezoutPair bp = bezout_solve(fp.N, fp.D, fp.q);
  CoprimeFraction out;
  out.N = std::move(fp.N);
  out.D = std::move(fp.D);
  out.X = std::move(bp.X);
  out.Ycof = std::move(bp.Ycof);
  out.q = std::move(fp.q);
  return out;
}

PerturbationDelta perturbation_delta(const CoprimeFraction& nom, const CoprimeFraction& pert) {
  const auto& a = nom.q.coeffs();
  const auto& b = pert.q.coeffs();
  if (a.size() != b.size())
    throw MismatchedQ("fractions built over different q");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > 1e-9 * std::max(1.0, std::abs(a[k])))
      throw MismatchedQ("fractions built over different q");

  PerturbationDelta out;
  out.dN = pert.N - nom.N;
  out.dD = pert.D - nom.D;
  return out;
}

}  // namespace portsynth
