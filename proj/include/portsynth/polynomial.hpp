#ifndef PORTSYNTH_POLYNOMIAL_HPP_
#define PORTSYNTH_POLYNOMIAL_HPP_

#include <complex>
#include <initializer_list>
#include <vector>

namespace portsynth {

using Complex = std::complex<double>;

/// Real-coefficient polynomial in s, coefficients stored in ascending degree.
/// The zero polynomial is represented by the single coefficient 0; any other
/// polynomial keeps a nonzero leading coefficient.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);
  static Polynomial constant(double c) { return Polynomial({c}); }

  const std::vector<double>& coeffs() const { return coeffs_; }
  double coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }
  double leading() const { return coeffs_.back(); }

  /// Degree of the polynomial; -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const;

  Complex operator()(Complex s) const;  // Horner evaluation
  double operator()(double s) const;

  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator*(double k) const;
  Polynomial operator-() const;

  /// p(-s): odd-degree coefficients flip sign.
  Polynomial paraconjugate() const;

  /// Divides by a monic linear factor (s - r), discarding the remainder.
  Polynomial deflate_real_root(double r) const;
  /// Divides by (s - z)(s - conj(z)) for a complex root z, discarding the remainder.
  Polynomial deflate_conjugate_pair(Complex z) const;

  bool operator==(const Polynomial& rhs) const { return coeffs_ == rhs.coeffs_; }

 private:
  void trim();
  std::vector<double> coeffs_;
};

inline Polynomial operator*(double k, const Polynomial& p) { return p * k; }

/// All deg(p) roots via the companion matrix, polished by a Newton step.
/// Throws ZeroPolynomial / ConstantPolynomial when there are no roots to find.
std::vector<Complex> roots(const Polynomial& p);

/// Monic polynomial with the given roots, times `gain`. The root multiset is
/// symmetrized so the result has real coefficients: roots with a nearby
/// conjugate partner are averaged into exact pairs, the rest are treated as
/// real roots.
Polynomial polynomial_from_roots(std::vector<Complex> rts, double gain = 1.0);

}  // namespace portsynth

#endif  // PORTSYNTH_POLYNOMIAL_HPP_
