#ifndef PORTSYNTH_TESTS_TEST_SUPPORT_HPP_
#define PORTSYNTH_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "portsynth/rational.hpp"

namespace portsynth::testing {

// Random stable polynomial: product of real factors (s + a), a in [lo, hi].
inline Polynomial random_stable_poly(std::mt19937& rng, int deg, double lo = 0.2,
                                     double hi = 4.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Polynomial p({1.0});
  for (int k = 0; k < deg; ++k) p = p * Polynomial({dist(rng), 1.0});
  return p;
}

// Random member of S: stable poles, arbitrary real numerator, proper.
inline RationalFunction random_stable_rational(std::mt19937& rng, int deg) {
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::vector<double> num(static_cast<std::size_t>(deg) + 1);
  for (double& c : num) c = coeff(rng);
  if (std::abs(num.back()) < 0.1) num.back() = 0.7;
  return RationalFunction(Polynomial(num), random_stable_poly(rng, deg));
}

// Random RL-infinity function with poles on both sides of the axis and a
// guaranteed gap around it.
inline RationalFunction random_two_sided_rational(std::mt19937& rng, int n_stable,
                                                  int n_antistable) {
  std::uniform_real_distribution<double> mag(0.3, 3.0);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  Polynomial den({1.0});
  for (int k = 0; k < n_stable; ++k) den = den * Polynomial({mag(rng), 1.0});
  for (int k = 0; k < n_antistable; ++k) den = den * Polynomial({-mag(rng) - 0.05 * k, 1.0});
  const int deg = den.degree();
  std::vector<double> num(static_cast<std::size_t>(deg) + 1);
  for (double& c : num) c = coeff(rng);
  if (std::abs(num.back()) < 0.1) num.back() = 1.3;
  return RationalFunction(Polynomial(num), den);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-12, std::abs(want));
}

// Unordered root-set comparison with relative tolerance.
inline bool roots_match(std::vector<Complex> got, const std::vector<Complex>& want,
                        double rel_tol) {
  if (got.size() != want.size()) return false;
  for (const Complex& w : want) {
    bool found = false;
    for (std::size_t k = 0; k < got.size(); ++k) {
      if (std::abs(got[k] - w) <= rel_tol * std::max(1.0, std::abs(w))) {
        got.erase(got.begin() + static_cast<std::ptrdiff_t>(k));
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// Relative agreement of two rational functions at a probe point.
inline double probe_rel_diff(const RationalFunction& a, const RationalFunction& b,
                             Complex s) {
  const Complex va = evaluate(a, s), vb = evaluate(b, s);
  return std::abs(va - vb) / std::max(1e-12, std::abs(vb));
}

}  // namespace portsynth::testing

#endif  // PORTSYNTH_TESTS_TEST_SUPPORT_HPP_
