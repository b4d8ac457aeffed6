#include "portsynth/hinf.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>

#include "portsynth/errors.hpp"
#include "portsynth/realization.hpp"

namespace portsynth {

namespace {

// Roots with Re < 0; a root on the axis has no half-plane and is an error.
std::vector<Complex> stable_half(const std::vector<Complex>& rts, double axis_tol) {
  std::vector<Complex> out;
  for (const Complex& r : rts) {
    if (std::abs(r.real()) < axis_tol * std::max(1.0, std::abs(r)))
      throw AxisZero("root too close to the imaginary axis");
    if (r.real() < 0.0) out.push_back(r);
  }
  return out;
}

// Numerator of C (sI - A)^-1 w by interpolation on a circle enclosing the
// spectrum; the denominator det(sI - A) is supplied by the caller.
Polynomial interpolate_numerator(const Eigen::MatrixXd& A, const Eigen::RowVectorXd& C,
                                 const Eigen::VectorXd& w, const Polynomial& den) {
  const int n = static_cast<int>(A.rows());
  double rho = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rho = std::max(rho, std::abs(A(i, j)));
  rho = 2.0 * rho * n + 1.0;

  Eigen::MatrixXcd V(n, n);
  Eigen::VectorXcd rhs(n);
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * M_PI * (k + 0.25) / n;
    const Complex s(rho * std::cos(th), rho * std::sin(th));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) * s - A.cast<Complex>();
    const Complex val = (C.cast<Complex>() * m.partialPivLu().solve(w.cast<Complex>()))(0);
    rhs(k) = val * den(s);
    Complex pw = 1.0;
    for (int j = 0; j < n; ++j) { V(k, j) = pw; pw *= s; }
  }
  const Eigen::VectorXcd coef = V.partialPivLu().solve(rhs);
  std::vector<double> c(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = coef(j).real();
  return Polynomial(std::move(c));
}

}  // namespace

InnerOuterPair inner_outer(const RationalVector& T2) {
  const CommonDenominator cd = over_common_denominator(T2);

  // m(s) = sum_k n_k(s) n_k(-s); on the axis this is the squared magnitude.
  Polynomial m;
  for (const Polynomial& n : cd.numerators) m = m + n * n.paraconjugate();
  if (m.is_zero()) throw AxisZero("column is identically zero");

  Polynomial m_minus({1.0});
  if (m.degree() >= 1) m_minus = polynomial_from_roots(stable_half(roots(m), 1e-7));
  m_minus = m_minus * std::sqrt(std::abs(m.leading()));

  // Only true duplicates (like a factor shared by every entry) may cancel
  // here: merging a genuine pair that happens to sit within the default
  // tolerance would dent the unit-magnitude property.
  constexpr double kInnerCancelTol = 1e-9;
  InnerOuterPair out;
  out.Uo = RationalFunction::with_cancel_tol(m_minus, cd.den, kInnerCancelTol);
  for (const Polynomial& n : cd.numerators)
    out.Ui.entries.push_back(RationalFunction::with_cancel_tol(n, m_minus, kInnerCancelTol));
  return out;
}

RationalFunction spectral_factor(const RationalFunction& G) {
  // Symmetry G(-s) = G(s): compare num(s) den(-s) against num(-s) den(s).
  {
    const Polynomial lhs = G.num() * G.den().paraconjugate();
    const Polynomial rhs = G.num().paraconjugate() * G.den();
    double scale = 1.0;
    for (double c : lhs.coeffs()) scale = std::max(scale, std::abs(c));
    const Polynomial diff = lhs - rhs;
    for (double c : diff.coeffs())
      if (std::abs(c) > 1e-8 * scale) throw NotSymmetric("G(-s) != G(s)");
  }
  for (double w : FrequencyGrid::standard().points()) {
    const Complex val = evaluate(G, Complex(0.0, w));
    if (!(val.real() > 0.0)) throw NotPositive("G not positive on the axis");
  }

  Polynomial num_minus({1.0});
  Polynomial den_minus({1.0});
  if (G.num().degree() >= 1) num_minus = polynomial_from_roots(stable_half(roots(G.num()), 1e-7));
  if (G.den().degree() >= 1) den_minus = polynomial_from_roots(stable_half(roots(G.den()), 1e-7));
  RationalFunction cand(num_minus, den_minus);

  // The gain satisfies |G_-(jw)|^2 = G(jw); fix it at a probe frequency.
  const double w0 = 0.7310562;
  const Complex g0 = evaluate(G, Complex(0.0, w0));
  const double mag2 = std::norm(evaluate(cand, Complex(0.0, w0)));
  if (!(mag2 > 0.0)) throw NotPositive("degenerate spectral candidate");
  return cand * std::sqrt(g0.real() / mag2);
}

namespace {

// Shared structure of the projection sums: T1 lifted to A_k / E, Ui lifted to
// n_k / mu, and S(s) = sum_k n_k(-s) A_k(s). Building the combinations over
// these explicit denominators keeps every hidden common factor a simple root,
// which the constructor cancellation then removes reliably; chaining generic
// rational operators instead piles up near-multiple clusters.
struct ProjectionParts {
  CommonDenominator t1;
  CommonDenominator ui;
  Polynomial S;
};

ProjectionParts projection_parts(const RationalVector& T1, const RationalVector& Ui) {
  ProjectionParts parts;
  parts.t1 = over_common_denominator(T1);
  parts.ui = over_common_denominator(Ui);
  for (std::size_t k = 0; k < Ui.entries.size(); ++k)
    parts.S = parts.S + parts.ui.numerators[k].paraconjugate() * parts.t1.numerators[k];
  return parts;
}

}  // namespace

RationalVector build_Yvec(const RationalVector& T1, const RationalVector& Ui) {
  const ProjectionParts parts = projection_parts(T1, Ui);
  const Polynomial m = parts.ui.den * parts.ui.den.paraconjugate();
  const Polynomial den = m * parts.t1.den;

  RationalVector out;
  for (std::size_t k = 0; k < T1.entries.size(); ++k) {
    const Polynomial num = parts.t1.numerators[k] * m - parts.ui.numerators[k] * parts.S;
    out.entries.push_back(RationalFunction(num, den));
  }
  return out;
}

BoundFactor build_R(double beta, const RationalVector& T1, const RationalVector& Ui,
                    const RationalVector& Yvec, const FrequencyGrid& grid) {
  const double ynorm = linf_norm(Yvec, grid).value;
  if (!(beta > ynorm)) throw BetaTooSmall("beta must exceed ||Yvec||inf");

  RationalFunction G = RationalFunction::constant(beta * beta);
  for (const auto& y : Yvec.entries) G = G - y * paraconjugate(y);

  BoundFactor out;
  out.Yo = spectral_factor(G);

  const ProjectionParts parts = projection_parts(T1, Ui);
  const RationalFunction ui_star_t1(parts.S,
                                    parts.ui.den.paraconjugate() * parts.t1.den);
  out.Rfun = ui_star_t1 / out.Yo;
  return out;
}

NehariResult nehari_scalar(const RationalFunction& Rfun) {
  const StableSplit split = stable_antistable_split(Rfun);
  if (split.antistable.is_zero()) return {Rfun, 0.0};

  const StateSpaceRealization ss = realize_strictly_proper(split.antistable);
  const HankelData hd = hankel_from_realization(ss);
  const double gamma = hd.hankel_norm();

  // f = C (sI - A)^-1 w over den_f = den of the antistable part,
  // g = B^T (sI + A^T)^-1 v over den_g(s) = +/- den_f(-s) made monic.
  const Polynomial den_f = split.antistable.den();
  const Polynomial num_f = interpolate_numerator(ss.A, ss.C, hd.w, den_f);
  Polynomial den_g = den_f.paraconjugate();
  den_g = den_g * (1.0 / den_g.leading());
  const Polynomial num_g =
      interpolate_numerator(-ss.A.transpose(), ss.B.transpose(), hd.v, den_g);

  // antistable - gamma f/g over the explicit common denominator den_f num_g;
  // the numerator carries den_f twice, which cancels against the denominator
  // and leaves the stable poles contributed by the zeros of g.
  const Polynomial num_t =
      split.antistable.num() * num_g - gamma * (num_f * den_g);
  RationalFunction correction(num_t, den_f * num_g);

  NehariResult out;
  out.gamma = gamma;
  out.Xfun = split.stable + correction;
  return out;
}

namespace {

struct FeasiblePoint {
  double beta = 0.0;
  BoundFactor bf;
  double hankel = 0.0;
};

}  // namespace

ModelMatchResult model_match_bracketed(const RationalVector& T1, const RationalVector& T2,
                                       double lo, double hi, double tol,
                                       const FrequencyGrid& grid) {
  if (!(tol > 0.0)) throw ValidationError("bisection tolerance must be positive");

  const InnerOuterPair io = inner_outer(T2);
  const RationalVector yvec = build_Yvec(T1, io.Ui);

  ModelMatchResult res;
  res.Yvec = yvec;
  res.yvec_norm = linf_norm(yvec, grid).value;
  res.t1_norm = linf_norm(T1, grid).value;

  std::optional<FeasiblePoint> feasible;
  const double hi0 = hi;
  while (hi - lo >= tol) {
    const double mid = 0.5 * (lo + hi);
    BoundFactor bf = build_R(mid, T1, io.Ui, yvec, grid);
    const double h = hankel_norm(bf.Rfun);
    res.beta_trace.emplace_back(mid, h);
    if (h < 1.0) {
      feasible = FeasiblePoint{mid, std::move(bf), h};
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (!feasible) {
    BoundFactor bf = build_R(hi0, T1, io.Ui, yvec, grid);
    const double h = hankel_norm(bf.Rfun);
    res.beta_trace.emplace_back(hi0, h);
    if (h >= 1.0)
      throw Infeasible("Hankel norm >= 1 at beta = ||T1||inf; no Q with margin < 1");
    feasible = FeasiblePoint{hi0, std::move(bf), h};
  }

  res.beta = feasible->beta;
  res.Yo = feasible->bf.Yo;
  res.Rfun = feasible->bf.Rfun;
  res.hankel_norm = feasible->hankel;

  const NehariResult nr = nehari_scalar(res.Rfun);
  res.gamma = nr.gamma;
  res.Xfun = nr.Xfun;
  // Q = Uo^-1 Xfun Yo in a single construction: the three factors carry
  // clustered roots near each other, and cancelling them once from the full
  // products loses far less accuracy than chaining pairwise operations.
  res.Q = RationalFunction(res.Xfun.num() * res.Yo.num() * io.Uo.den(),
                           res.Xfun.den() * res.Yo.den() * io.Uo.num());

  const RationalVector diff = T1 - T2 * res.Q;
  const LinfNorm achieved = linf_norm(diff, grid);
  res.achieved_norm = achieved.value;
  res.achieved_argmax = achieved.omega;
  return res;
}

ModelMatchResult model_match(const RationalVector& T1, const RationalVector& T2, double tol,
                             const FrequencyGrid& grid) {
  if (T2.is_zero()) {
    if (!T1.is_zero()) throw Infeasible("T2 is zero; matching cannot reduce T1");
    ModelMatchResult res;
    res.Yvec = T1;
    res.Yo = RationalFunction::constant(1.0);
    return res;
  }
  const InnerOuterPair io = inner_outer(T2);
  const RationalVector yvec = build_Yvec(T1, io.Ui);
  const double lo = linf_norm(yvec, grid).value;
  const double hi = linf_norm(T1, grid).value;
  return model_match_bracketed(T1, T2, lo, hi, tol, grid);
}

}  // namespace portsynth
