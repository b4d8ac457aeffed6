#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "portsynth/errors.hpp"
#include "portsynth/polynomial.hpp"

using namespace portsynth;

namespace {

// Checks that `rts` contains each expected root once, within tol.
void check_roots(std::vector<Complex> rts, std::vector<Complex> expected, double tol) {
  REQUIRE(rts.size() == expected.size());
  for (const Complex& e : expected) {
    bool found = false;
    for (std::size_t k = 0; k < rts.size(); ++k) {
      if (std::abs(rts[k] - e) < tol) {
        rts.erase(rts.begin() + static_cast<std::ptrdiff_t>(k));
        found = true;
        break;
      }
    }
    CHECK_MESSAGE(found, "missing root ", e.real(), "+", e.imag(), "j");
  }
}

}  // namespace

TEST_CASE("degree and zero conventions") {
  CHECK(Polynomial().degree() == -1);
  CHECK(Polynomial().is_zero());
  CHECK(Polynomial({0.0, 0.0, 0.0}).is_zero());
  CHECK(Polynomial({3.0}).degree() == 0);
  CHECK(Polynomial({1.0, 0.0, 2.0}).degree() == 2);
  CHECK(Polynomial({1.0, 1.0, 0.0}).degree() == 1);  // leading zeros trimmed
}

TEST_CASE("arithmetic and evaluation") {
  const Polynomial p({-3.0, 1.0, 6.0, 2.0});  // 2s^3+6s^2+s-3
  CHECK(p(1.0) == doctest::Approx(6.0));
  CHECK(p(Complex(0.0, 1.0)).real() == doctest::Approx(-9.0));

  const Polynomial a({1.0, 1.0});
  const Polynomial b({2.0, 1.0});
  const Polynomial ab = a * b;
  CHECK(ab.coeffs() == std::vector<double>{2.0, 3.0, 1.0});
  CHECK((a + b).coeffs() == std::vector<double>{3.0, 2.0});
  CHECK((a - a).is_zero());
}

TEST_CASE("paraconjugate flips odd coefficients") {
  const Polynomial p({1.0, 2.0, 3.0, 4.0});
  CHECK(p.paraconjugate().coeffs() == std::vector<double>{1.0, -2.0, 3.0, -4.0});
  const Polynomial even({0.06});
  CHECK(even.paraconjugate().coeffs() == std::vector<double>{0.06});
}

TEST_CASE("roots of the circuit cubic match the factored display") {
  // 2s^3+6s^2+s-3 = 2(s+2.5811)(s+1)(s-0.5811)
  const Polynomial p({-3.0, 1.0, 6.0, 2.0});
  check_roots(roots(p), {{-2.5811, 0.0}, {-1.0, 0.0}, {0.5811, 0.0}}, 1e-3);
}

TEST_CASE("roots of the perturbed cubic") {
  // 2.3152s^3+8.1033s^2+4.5228s-2.1 = 2.3152(s+2.624)(s+1.171)(s-0.2951)
  const Polynomial p({-2.1, 4.5228, 8.1033, 2.3152});
  check_roots(roots(p), {{-2.624, 0.0}, {-1.171, 0.0}, {0.2951, 0.0}}, 1e-3);
}

TEST_CASE("difference of squares") {
  check_roots(roots(Polynomial({-1.0, 0.0, 1.0})), {{1.0, 0.0}, {-1.0, 0.0}}, 1e-12);
}

TEST_CASE("root finding error cases") {
  CHECK_THROWS_AS(roots(Polynomial()), ZeroPolynomial);
  CHECK_THROWS_AS(roots(Polynomial({5.0})), ConstantPolynomial);
}

TEST_CASE("roots satisfy the residual bound") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int deg = 1 + trial % 8;
    std::vector<double> c(static_cast<std::size_t>(deg) + 1);
    for (double& x : c) x = dist(rng);
    if (std::abs(c.back()) < 0.1) c.back() = 1.0;
    const Polynomial p(c);
    if (p.degree() < 1) continue;
    double max_coeff = 0.0;
    for (double x : p.coeffs()) max_coeff = std::max(max_coeff, std::abs(x));
    for (const Complex& r : roots(p)) {
      const double bound =
          1e-8 * max_coeff * std::pow(std::max(1.0, std::abs(r)), p.degree());
      CHECK(std::abs(p(r)) <= bound);
    }
  }
}

TEST_CASE("roots/reconstruction round trip") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int deg = 2 + trial % 6;
    std::vector<double> c(static_cast<std::size_t>(deg) + 1);
    for (double& x : c) x = dist(rng);
    if (std::abs(c.back()) < 0.1) c.back() = 1.5;
    const Polynomial p(c);
    if (p.degree() < 2) continue;
    const Polynomial q = polynomial_from_roots(roots(p), p.leading());
    REQUIRE(q.degree() == p.degree());
    double scale = 0.0;
    for (double x : p.coeffs()) scale = std::max(scale, std::abs(x));
    for (std::size_t k = 0; k < p.coeffs().size(); ++k)
      CHECK(std::abs(p.coeffs()[k] - q.coeffs()[k]) <= 1e-8 * scale);
  }
}

TEST_CASE("deflation removes a factor exactly") {
  const Polynomial p = Polynomial({2.0, 1.0}) * Polynomial({-1.5, 1.0}) * Polynomial({5.0, 2.0, 1.0});
  const Polynomial d = p.deflate_real_root(1.5);
  CHECK(d.degree() == 3);
  CHECK(std::abs(d(Complex(-2.0, 0.0))) < 1e-12);
  const Polynomial d2 = d.deflate_conjugate_pair(Complex(-1.0, 2.0));
  CHECK(d2.degree() == 1);
  CHECK(d2(Complex(-2.0, 0.0)).real() == doctest::Approx(0.0).epsilon(1e-12));
}
