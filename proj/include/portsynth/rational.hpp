#ifndef PORTSYNTH_RATIONAL_HPP_
#define PORTSYNTH_RATIONAL_HPP_

#include <complex>
#include <vector>

#include "portsynth/polynomial.hpp"

namespace portsynth {

/// Ratio of two real polynomials, kept in normalized form: the denominator is
/// monic (its gain absorbed into the numerator) and common roots of numerator
/// and denominator are cancelled at construction. Cancellation at construction
/// uses a tight, magnitude-scaled tolerance so only floating-point duplicates
/// disappear; deliberately merging nearby pole/zero pairs is the separate
/// cancel_near_pairs() operation.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_({1.0}) {}
  RationalFunction(Polynomial num, Polynomial den);
  static RationalFunction constant(double c) {
    return RationalFunction(Polynomial({c}), Polynomial({1.0}));
  }
  /// Construction with a caller-chosen duplicate-cancellation tolerance, for
  /// call sites that must preserve genuine pole/zero pairs tighter than the
  /// default threshold.
  static RationalFunction with_cancel_tol(Polynomial num, Polynomial den, double tol);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_proper() const { return num_.degree() <= den_.degree(); }
  bool is_strictly_proper() const { return num_.degree() < den_.degree(); }

  /// Value of the function as s -> infinity; 0 for strictly proper inputs.
  /// Throws NotProper for improper functions.
  double at_infinity() const;

  std::vector<Complex> poles() const;
  std::vector<Complex> zeros() const;

  /// True when every pole satisfies Re < -margin.
  bool is_stable(double margin = 1e-9) const;
  /// True when proper and stable: membership in the ring S.
  bool in_S(double margin = 1e-9) const;

  RationalFunction operator+(const RationalFunction& rhs) const;
  RationalFunction operator-(const RationalFunction& rhs) const;
  RationalFunction operator*(const RationalFunction& rhs) const;
  RationalFunction operator/(const RationalFunction& rhs) const;
  RationalFunction operator*(double k) const;
  RationalFunction operator-() const;

  RationalFunction inverse() const;

 private:
  Polynomial num_;
  Polynomial den_;
};

inline RationalFunction operator*(double k, const RationalFunction& r) { return r * k; }

/// num(s)/den(s) by Horner recurrence. Throws PoleHit when |den(s)| vanishes.
Complex evaluate(const RationalFunction& r, Complex s);

/// r(-s); on the imaginary axis this is the complex conjugate of r.
RationalFunction paraconjugate(const RationalFunction& r);

/// Greedily cancels numerator/denominator root pairs closer than `tol`,
/// closest pair first; the distance is magnitude-scaled beyond |s| = 1.
/// The leading-gain ratio is preserved, so each removed pair contributes a
/// near-unity factor.
RationalFunction cancel_near_pairs(const RationalFunction& r, double tol);

/// Angular-frequency grid, strictly increasing, optionally starting at 0.
class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::vector<double> points);
  static FrequencyGrid log_spaced(double min_omega, double max_omega, int points,
                                  bool include_zero = true);
  static FrequencyGrid linear(double min_omega, double max_omega, int points);
  /// 400 logarithmically spaced points over [1e-2, 1e2] rad/s plus omega = 0.
  static const FrequencyGrid& standard();

  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<double> points_;
};

/// Column of rational functions (2x1 throughout this project).
struct RationalVector {
  std::vector<RationalFunction> entries;

  RationalVector() = default;
  RationalVector(RationalFunction a, RationalFunction b) {
    entries.push_back(std::move(a));
    entries.push_back(std::move(b));
  }

  bool is_zero() const;
  RationalVector operator-(const RationalVector& rhs) const;
  /// Entrywise product with a scalar rational function.
  RationalVector operator*(const RationalFunction& q) const;
};

/// Euclidean magnitude of the column evaluated at s = j*omega.
double column_magnitude(const RationalVector& v, double omega);

struct LinfNorm {
  double value = 0.0;
  double omega = 0.0;  // argmax over the grid
};

/// max over the grid of the Euclidean column magnitude (the largest singular
/// value of a 2x1 column). Throws PoleOnAxis when an entry has a pole on the
/// evaluation path.
LinfNorm linf_norm(const RationalVector& v, const FrequencyGrid& grid);
LinfNorm linf_norm(const RationalFunction& r, const FrequencyGrid& grid);

/// Least common denominator of the entries by root-multiset union, plus the
/// matching numerators: entries[k] == numerators[k] / common_den.
struct CommonDenominator {
  Polynomial den;
  std::vector<Polynomial> numerators;
};
CommonDenominator over_common_denominator(const RationalVector& v);

}  // namespace portsynth

#endif  // PORTSYNTH_RATIONAL_HPP_
