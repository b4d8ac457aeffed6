#include "portsynth/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "portsynth/errors.hpp"

namespace portsynth {

namespace {

// Tolerance for cancelling floating-point duplicate roots at construction.
// Coincident factors split under root finding by roughly the square root of
// the coefficient noise (~1e-8 here), so this sits above those splits and
// below the ~2e-4 separation of the tightest genuine pole/zero pairs.
constexpr double kExactCancelTol = 1e-6;

double pair_scale(Complex a, Complex b) {
  return std::max(1.0, 0.5 * (std::abs(a) + std::abs(b)));
}

// True when another root of the same polynomial sits within a few pair
// distances of r: the root then belongs to an unresolved cluster (a multiple
// root split by rounding) and its computed position cannot be trusted to the
// pair distance.
bool in_cluster(const std::vector<Complex>& rts, std::size_t self, double dist) {
  for (std::size_t k = 0; k < rts.size(); ++k)
    if (k != self && std::abs(rts[k] - rts[self]) <= 8.0 * dist) return true;
  return false;
}

// Greedy closest-pair matching between numerator and denominator roots.
// Each accepted pair carries the deflation value for the numerator side and
// for the denominator side. When one side is an unresolved cluster, both
// sides deflate by the resolved side's value, so the removed factor is
// exactly unity; genuinely separated pairs each give up their own root.
// `relative` scales the tolerance by the root magnitude.
std::vector<std::pair<Complex, Complex>> pair_roots(const std::vector<Complex>& rn,
                                                    const std::vector<Complex>& rd,
                                                    double tol, bool relative,
                                                    bool heal_clusters) {
  std::vector<std::pair<Complex, Complex>> values;
  std::vector<bool> usedn(rn.size(), false), usedd(rd.size(), false);
  while (true) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = rn.size(), bj = rd.size();
    for (std::size_t i = 0; i < rn.size(); ++i) {
      if (usedn[i]) continue;
      for (std::size_t j = 0; j < rd.size(); ++j) {
        if (usedd[j]) continue;
        double d = std::abs(rn[i] - rd[j]);
        if (relative) d /= pair_scale(rn[i], rd[j]);
        if (d < best) { best = d; bi = i; bj = j; }
      }
    }
    if (bi == rn.size() || best >= tol) break;
    usedn[bi] = true;
    usedd[bj] = true;
    const double dist = std::abs(rn[bi] - rd[bj]);
    const bool nc = heal_clusters && in_cluster(rn, bi, dist);
    const bool dc = heal_clusters && in_cluster(rd, bj, dist);
    if (nc == dc) {
      values.push_back({rn[bi], rd[bj]});
    } else {
      const Complex shared = nc ? rd[bj] : rn[bi];
      values.push_back({shared, shared});
    }
  }
  return values;
}

// Removes the shared values from p by synthetic division, pairing complex
// values with their conjugates so the quotient stays real.
Polynomial deflate_values(const Polynomial& p, const std::vector<Complex>& values) {
  Polynomial out = p;
  std::vector<bool> used(values.size(), false);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const Complex r = values[i];
    if (std::abs(r.imag()) <= 1e-9 * std::max(1.0, std::abs(r))) {
      out = out.deflate_real_root(r.real());
      continue;
    }
    std::size_t mate = values.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(values[j] - std::conj(r));
      if (d < best) { best = d; mate = j; }
    }
    if (mate < values.size() && best <= 2.0 * std::abs(r.imag()) + 1e-9) {
      used[mate] = true;
      const Complex z(0.5 * (r.real() + values[mate].real()),
                      0.5 * (std::abs(r.imag()) + std::abs(values[mate].imag())));
      out = out.deflate_conjugate_pair(z);
    } else {
      // Lone near-real value: the imaginary part is root-finding noise.
      out = out.deflate_real_root(r.real());
    }
  }
  return out;
}

std::pair<Polynomial, Polynomial> cancel_common(Polynomial num, Polynomial den,
                                                double tol, bool relative,
                                                bool heal_clusters) {
  if (num.degree() < 1 || den.degree() < 1) return {std::move(num), std::move(den)};
  const auto rn = roots(num);
  const auto rd = roots(den);
  const auto pairs = pair_roots(rn, rd, tol, relative, heal_clusters);
  if (pairs.empty()) return {std::move(num), std::move(den)};
  std::vector<Complex> num_values, den_values;
  for (const auto& [vn, vd] : pairs) {
    num_values.push_back(vn);
    den_values.push_back(vd);
  }
  Polynomial new_num = deflate_values(num, num_values);
  Polynomial new_den = deflate_values(den, den_values);
  return {std::move(new_num), std::move(new_den)};
}

bool same_denominator(const Polynomial& a, const Polynomial& b) {
  if (a.degree() != b.degree()) return false;
  double scale = 0.0;
  for (double c : a.coeffs()) scale = std::max(scale, std::abs(c));
  for (std::size_t k = 0; k < a.coeffs().size(); ++k)
    if (std::abs(a.coeffs()[k] - b.coeffs()[k]) > 1e-9 * std::max(scale, 1.0)) return false;
  return true;
}

}  // namespace

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : RationalFunction(with_cancel_tol(std::move(num), std::move(den), kExactCancelTol)) {}

RationalFunction RationalFunction::with_cancel_tol(Polynomial num, Polynomial den,
                                                   double tol) {
  if (den.is_zero()) throw ZeroPolynomial("rational function with zero denominator");
  RationalFunction out;
  const double lead = den.leading();
  out.den_ = den * (1.0 / lead);
  out.num_ = num * (1.0 / lead);
  if (out.num_.is_zero()) {
    out.den_ = Polynomial({1.0});
    return out;
  }
  auto [n, d] = cancel_common(out.num_, out.den_, tol, /*relative=*/true,
                              /*heal_clusters=*/true);
  out.num_ = std::move(n);
  out.den_ = std::move(d);
  const double dl = out.den_.leading();
  if (dl != 1.0) {
    out.den_ = out.den_ * (1.0 / dl);
    out.num_ = out.num_ * (1.0 / dl);
  }
  return out;
}

double RationalFunction::at_infinity() const {
  if (num_.degree() > den_.degree()) throw NotProper("value at infinity of an improper function");
  if (num_.degree() < den_.degree()) return 0.0;
  return num_.leading() / den_.leading();
}

std::vector<Complex> RationalFunction::poles() const {
  if (den_.degree() < 1) return {};
  return roots(den_);
}

std::vector<Complex> RationalFunction::zeros() const {
  if (num_.degree() < 1) return {};
  return roots(num_);
}

bool RationalFunction::is_stable(double margin) const {
  for (const Complex& p : poles())
    if (p.real() >= -margin) return false;
  return true;
}

bool RationalFunction::in_S(double margin) const { return is_proper() && is_stable(margin); }

RationalFunction RationalFunction::operator+(const RationalFunction& rhs) const {
  if (same_denominator(den_, rhs.den_))
    return RationalFunction(num_ + rhs.num_, den_);
  return RationalFunction(num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& rhs) const {
  if (same_denominator(den_, rhs.den_))
    return RationalFunction(num_ - rhs.num_, den_);
  return RationalFunction(num_ * rhs.den_ - rhs.num_ * den_, den_ * rhs.den_);
}

RationalFunction RationalFunction::operator*(const RationalFunction& rhs) const {
  return RationalFunction(num_ * rhs.num_, den_ * rhs.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& rhs) const {
  if (rhs.num_.is_zero()) throw ZeroPolynomial("division by the zero rational function");
  return RationalFunction(num_ * rhs.den_, den_ * rhs.num_);
}

RationalFunction RationalFunction::operator*(double k) const {
  return RationalFunction(num_ * k, den_);
}

RationalFunction RationalFunction::operator-() const { return (*this) * -1.0; }

RationalFunction RationalFunction::inverse() const {
  if (num_.is_zero()) throw ZeroPolynomial("inverse of the zero rational function");
  return RationalFunction(den_, num_);
}

Complex evaluate(const RationalFunction& r, Complex s) {
  const Complex d = r.den()(s);
  if (std::abs(d) < 1e-300) throw PoleHit("evaluation at a pole");
  return r.num()(s) / d;
}

RationalFunction paraconjugate(const RationalFunction& r) {
  return RationalFunction(r.num().paraconjugate(), r.den().paraconjugate());
}

RationalFunction cancel_near_pairs(const RationalFunction& r, double tol) {
  // Distance is scaled by the pair magnitude beyond |s| = 1 so that a pair
  // like (-2.581, -2.571) and its perturbed relatives merge at the same
  // tolerance that governs pairs near the origin.
  // No cluster healing here: at merge-scale tolerances every pair is a
  // deliberate removal of a separated pole/zero pair.
  auto [n, d] = cancel_common(r.num(), r.den(), tol, /*relative=*/true,
                              /*heal_clusters=*/false);
  return RationalFunction(std::move(n), std::move(d));
}

FrequencyGrid::FrequencyGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw ValidationError("frequency grid must be nonempty");
  for (std::size_t k = 0; k + 1 < points_.size(); ++k)
    if (!(points_[k] < points_[k + 1]))
      throw ValidationError("frequency grid must be strictly increasing");
  if (points_.front() < 0.0) throw ValidationError("frequencies must be nonnegative");
}

FrequencyGrid FrequencyGrid::log_spaced(double min_omega, double max_omega, int points,
                                        bool include_zero) {
  if (points < 2 || min_omega <= 0.0 || !(min_omega < max_omega))
    throw ValidationError("log grid needs points >= 2 and 0 < min_omega < max_omega");
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(points) + 1);
  if (include_zero) pts.push_back(0.0);
  const double l0 = std::log10(min_omega), l1 = std::log10(max_omega);
  for (int k = 0; k < points; ++k)
    pts.push_back(std::pow(10.0, l0 + (l1 - l0) * k / (points - 1)));
  return FrequencyGrid(std::move(pts));
}

FrequencyGrid FrequencyGrid::linear(double min_omega, double max_omega, int points) {
  if (points < 2 || !(min_omega < max_omega))
    throw ValidationError("linear grid needs points >= 2 and min_omega < max_omega");
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k)
    pts.push_back(min_omega + (max_omega - min_omega) * k / (points - 1));
  return FrequencyGrid(std::move(pts));
}

const FrequencyGrid& FrequencyGrid::standard() {
  static const FrequencyGrid grid = log_spaced(1e-2, 1e2, 400, /*include_zero=*/true);
  return grid;
}

bool RationalVector::is_zero() const {
  for (const auto& e : entries)
    if (!e.is_zero()) return false;
  return true;
}

RationalVector RationalVector::operator-(const RationalVector& rhs) const {
  RationalVector out;
  for (std::size_t k = 0; k < entries.size(); ++k)
    out.entries.push_back(entries[k] - rhs.entries[k]);
  return out;
}

RationalVector RationalVector::operator*(const RationalFunction& q) const {
  RationalVector out;
  for (const auto& e : entries) out.entries.push_back(e * q);
  return out;
}

double column_magnitude(const RationalVector& v, double omega) {
  double acc = 0.0;
  for (const auto& e : v.entries) acc += std::norm(evaluate(e, Complex(0.0, omega)));
  return std::sqrt(acc);
}

namespace {

void check_axis_poles(const RationalFunction& r, const FrequencyGrid& grid) {
  for (const Complex& p : r.poles()) {
    if (std::abs(p.real()) >= 1e-9) continue;
    const double im = std::abs(p.imag());
    for (double w : grid.points())
      if (std::abs(w - im) < 1e-6)
        throw PoleOnAxis("pole at j" + std::to_string(im) + " meets the grid");
  }
}

}  // namespace

LinfNorm linf_norm(const RationalVector& v, const FrequencyGrid& grid) {
  for (const auto& e : v.entries) check_axis_poles(e, grid);
  LinfNorm best;
  best.omega = grid.points().front();
  for (double w : grid.points()) {
    const double m = column_magnitude(v, w);
    if (m > best.value) { best.value = m; best.omega = w; }
  }
  return best;
}

LinfNorm linf_norm(const RationalFunction& r, const FrequencyGrid& grid) {
  RationalVector v;
  v.entries.push_back(r);
  return linf_norm(v, grid);
}

CommonDenominator over_common_denominator(const RationalVector& v) {
  // Union of denominator root multisets, matched with a tight tolerance.
  std::vector<Complex> union_roots;
  std::vector<std::vector<Complex>> dens;
  for (const auto& e : v.entries) dens.push_back(e.poles());
  for (const auto& dr : dens) {
    std::vector<bool> matched(union_roots.size(), false);
    std::vector<Complex> missing;
    for (const Complex& r : dr) {
      bool found = false;
      for (std::size_t k = 0; k < union_roots.size(); ++k) {
        if (matched[k]) continue;
        if (std::abs(union_roots[k] - r) < 1e-9 * pair_scale(union_roots[k], r)) {
          matched[k] = true;
          found = true;
          break;
        }
      }
      if (!found) missing.push_back(r);
    }
    union_roots.insert(union_roots.end(), missing.begin(), missing.end());
  }

  CommonDenominator out;
  out.den = polynomial_from_roots(union_roots);
  for (std::size_t i = 0; i < v.entries.size(); ++i) {
    // Multiplier = union roots minus this entry's own denominator roots.
    std::vector<Complex> extra = union_roots;
    for (const Complex& r : dens[i]) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t bk = extra.size();
      for (std::size_t k = 0; k < extra.size(); ++k) {
        const double d = std::abs(extra[k] - r);
        if (d < best) { best = d; bk = k; }
      }
      if (bk < extra.size()) extra.erase(extra.begin() + static_cast<std::ptrdiff_t>(bk));
    }
    out.numerators.push_back(v.entries[i].num() * polynomial_from_roots(extra));
  }
  return out;
}

}  // namespace portsynth
