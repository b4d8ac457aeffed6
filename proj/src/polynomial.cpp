#include "portsynth/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "portsynth/errors.hpp"

namespace portsynth {

namespace {

double max_abs_coeff(const std::vector<double>& c) {
  double m = 0.0;
  for (double x : c) m = std::max(m, std::abs(x));
  return m;
}

// One Newton step per root against the original polynomial. Clusters
// (near-multiple roots) make the derivative small; the step is skipped there.
Complex polish_root(const Polynomial& p, Complex r) {
  for (int it = 0; it < 3; ++it) {
    Complex val = p(r);
    Complex der = 0.0;
    const auto& c = p.coeffs();
    for (std::size_t k = c.size() - 1; k >= 1; --k) der = der * r + double(k) * c[k];
    if (std::abs(der) < 1e-14 * std::max(1.0, std::abs(val))) break;
    Complex step = val / der;
    if (std::abs(step) > 0.5 * std::max(1.0, std::abs(r))) break;
    r -= step;
  }
  return r;
}

}  // namespace

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : coeffs_(coeffs) {
  if (coeffs_.empty()) coeffs_ = {0.0};
  trim();
}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_ = {0.0};
  trim();
}

void Polynomial::trim() {
  const double scale = max_abs_coeff(coeffs_);
  const double tol = scale * 1e-12;
  while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= tol) coeffs_.pop_back();
  if (coeffs_.size() == 1 && std::abs(coeffs_[0]) == 0.0) coeffs_[0] = 0.0;
}

int Polynomial::degree() const {
  if (is_zero()) return -1;
  return static_cast<int>(coeffs_.size()) - 1;
}

bool Polynomial::is_zero() const {
  return coeffs_.size() == 1 && coeffs_[0] == 0.0;
}

Complex Polynomial::operator()(Complex s) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  std::vector<double> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = coeff(k) + rhs.coeff(k);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
  std::vector<double> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = coeff(k) - rhs.coeff(k);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  if (is_zero() || rhs.is_zero()) return Polynomial();
  std::vector<double> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
      out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(double k) const {
  std::vector<double> out = coeffs_;
  for (double& c : out) c *= k;
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-() const { return (*this) * -1.0; }

Polynomial Polynomial::paraconjugate() const {
  std::vector<double> out = coeffs_;
  for (std::size_t k = 1; k < out.size(); k += 2) out[k] = -out[k];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::deflate_real_root(double r) const {
  // Synthetic division by (s - r).
  const int n = degree();
  if (n < 1) throw ConstantPolynomial("cannot deflate a constant polynomial");
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  double carry = coeffs_.back();
  for (int k = n - 1; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = carry;
    carry = coeffs_[static_cast<std::size_t>(k)] + carry * r;
  }
  return Polynomial(std::move(out));
}

Polynomial Polynomial::deflate_conjugate_pair(Complex z) const {
  const int n = degree();
  if (n < 2) throw ConstantPolynomial("cannot deflate a quadratic from degree < 2");
  // Divide by s^2 - 2 Re(z) s + |z|^2.
  const double b = -2.0 * z.real();
  const double c = std::norm(z);
  std::vector<double> rem = coeffs_;
  std::vector<double> out(static_cast<std::size_t>(n - 1), 0.0);
  for (int k = n; k >= 2; --k) {
    const double q = rem[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(k - 2)] = q;
    rem[static_cast<std::size_t>(k - 1)] -= q * b;
    rem[static_cast<std::size_t>(k - 2)] -= q * c;
  }
  return Polynomial(std::move(out));
}

std::vector<Complex> roots(const Polynomial& p) {
  if (p.is_zero()) throw ZeroPolynomial("roots of the zero polynomial are undefined");
  const int n = p.degree();
  if (n == 0) throw ConstantPolynomial("a nonzero constant has no roots");

  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n));
  const auto& c = p.coeffs();

  if (n == 1) {
    out.push_back(Complex(-c[0] / c[1], 0.0));
  } else if (n == 2) {
    const double a = c[2], b = c[1], d = c[0];
    const Complex disc = std::sqrt(Complex(b * b - 4.0 * a * d, 0.0));
    // Numerically stable quadratic formula.
    const Complex q = -0.5 * (b + (b >= 0 ? 1.0 : -1.0) * disc);
    if (std::abs(q) > 0.0) {
      out.push_back(q / a);
      out.push_back(Complex(d, 0.0) / q);
    } else {
      out.push_back(Complex(0.0, 0.0));
      out.push_back(Complex(0.0, 0.0));
    }
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    const double lead = c.back();
    for (int k = 0; k < n; ++k) companion(k, n - 1) = -c[static_cast<std::size_t>(k)] / lead;
    for (int k = 1; k < n; ++k) companion(k, k - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
    for (int k = 0; k < n; ++k) out.push_back(polish_root(p, es.eigenvalues()(k)));
  }

  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

Polynomial polynomial_from_roots(std::vector<Complex> rts, double gain) {
  std::sort(rts.begin(), rts.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  Polynomial out({gain});
  std::vector<bool> used(rts.size(), false);
  for (std::size_t i = 0; i < rts.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const Complex r = rts[i];
    const double imag_tol = 1e-9 * std::max(1.0, std::abs(r));
    if (std::abs(r.imag()) <= imag_tol) {
      out = out * Polynomial({-r.real(), 1.0});
      continue;
    }
    // Find the closest unused conjugate partner and average the pair.
    std::size_t best = rts.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1; j < rts.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(rts[j] - std::conj(r));
      if (d < best_d) { best_d = d; best = j; }
    }
    if (best < rts.size() && best_d <= 1e-6 * std::max(1.0, std::abs(r)) + 1e-9) {
      used[best] = true;
      const Complex mate = rts[best];
      const double re = 0.5 * (r.real() + mate.real());
      const double im = 0.5 * (std::abs(r.imag()) + std::abs(mate.imag()));
      out = out * Polynomial({re * re + im * im, -2.0 * re, 1.0});
    } else {
      // No conjugate partner within tolerance; drop the imaginary part.
      out = out * Polynomial({-r.real(), 1.0});
    }
  }
  return out;
}

}  // namespace portsynth
