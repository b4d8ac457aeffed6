#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "portsynth/errors.hpp"
#include "portsynth/hinf.hpp"
#include "portsynth/realization.hpp"
#include "portsynth/synthesis.hpp"
#include "test_support.hpp"

using namespace portsynth;
using namespace portsynth::testing;

namespace {

// The worked example matching data: published bound, nominal fractions.
MatchingData reference_matching() {
  const RationalFunction plant = cancel_near_pairs(circuit_impedance(CircuitParams{}), 0.02);
  const CoprimeFraction frac = make_coprime_fraction(plant);
  const RationalFunction bound(Polynomial({0.36, 0.06}), Polynomial({3.4, 1.0}));
  return build_T1_T2(bound, frac);
}

double grid_max_inner_defect(const RationalVector& ui) {
  double worst = 0.0;
  for (double w : FrequencyGrid::standard().points()) {
    double mag2 = 0.0;
    for (const auto& e : ui.entries) mag2 += std::norm(evaluate(e, Complex(0.0, w)));
    worst = std::max(worst, std::abs(mag2 - 1.0));
  }
  return worst;
}

}  // namespace

TEST_CASE("inner-outer of an already inner column") {
  RationalVector t2(RationalFunction::constant(1.0), RationalFunction());
  const InnerOuterPair io = inner_outer(t2);
  CHECK(io.Uo.num().coeffs() == std::vector<double>{1.0});
  CHECK(io.Ui.entries[0].num().coeffs() == std::vector<double>{1.0});
  CHECK(io.Ui.entries[1].is_zero());
}

TEST_CASE("inner-outer of the worked example") {
  const MatchingData md = reference_matching();
  const InnerOuterPair io = inner_outer(md.T2);

  CHECK(rel_err(io.Ui.entries[0].num().leading(), 0.70711) < 0.01);
  CHECK(roots_match(io.Ui.entries[0].zeros(), {{-1.242, 0.0}, {0.3131, 0.0}}, 0.01));
  CHECK(roots_match(io.Ui.entries[0].poles(), {{-1.141, 0.0}, {-0.4334, 0.0}}, 0.01));
  CHECK(rel_err(io.Ui.entries[1].num().leading(), -0.70711) < 0.01);
  CHECK(roots_match(io.Ui.entries[1].zeros(), {{-1.0, 0.0}, {0.5811, 0.0}}, 0.01));

  // Uo displayed as 0.084853 (s+0.4334)(s+1.141)(s+2)(s+3.4)(s+6) over
  // (s+1)(s+2)^2(s+3.4)^2; stored in lowest terms here.
  CHECK(rel_err(io.Uo.num().leading(), 0.084853) < 0.01);
  CHECK(roots_match(io.Uo.zeros(), {{-0.4334, 0.0}, {-1.141, 0.0}, {-6.0, 0.0}}, 0.01));
  CHECK(roots_match(io.Uo.poles(), {{-1.0, 0.0}, {-2.0, 0.0}, {-3.4, 0.0}}, 0.01));
  CHECK(io.Uo.in_S());

  CHECK(grid_max_inner_defect(io.Ui) < 1e-9);
}

TEST_CASE("inner-outer rejects columns vanishing on the axis") {
  RationalVector t2(RationalFunction(Polynomial({1.0, 0.0, 1.0}),
                                     Polynomial({1.0, 1.0}) * Polynomial({1.0, 1.0})),
                    RationalFunction());
  CHECK_THROWS_AS(inner_outer(t2), AxisZero);
}

TEST_CASE("spectral factor of a constant") {
  const RationalFunction g = spectral_factor(RationalFunction::constant(1.2123 * 1.2123));
  REQUIRE(g.num().degree() == 0);
  CHECK(g.num().coeffs()[0] == doctest::Approx(1.2123));
}

TEST_CASE("spectral factor pairs roots across the axis") {
  // G = (1 - s^2) / (4 - s^2) factors as (s+1)/(s+2) times its mirror.
  const RationalFunction G(Polynomial({1.0, 0.0, -1.0}), Polynomial({4.0, 0.0, -1.0}));
  const RationalFunction g = spectral_factor(G);
  CHECK(roots_match(g.zeros(), {{-1.0, 0.0}}, 1e-9));
  CHECK(roots_match(g.poles(), {{-2.0, 0.0}}, 1e-9));
  CHECK(g.num().leading() == doctest::Approx(1.0));
  // Reconstruction oracle: g(-s) g(s) = G at probe points.
  for (double w : {0.0, 0.4, 1.7, 9.0}) {
    const Complex s(0.0, w);
    const Complex rec = evaluate(paraconjugate(g), s) * evaluate(g, s);
    const Complex want = evaluate(G, s);
    CHECK(std::abs(rec - want) <= 1e-8 * std::abs(want));
  }
}

TEST_CASE("spectral factor rejects asymmetric or sign-indefinite input") {
  CHECK_THROWS_AS(spectral_factor(RationalFunction(Polynomial({1.0, 1.0}), Polynomial({2.0, 1.0}))),
                  NotSymmetric);
  CHECK_THROWS_AS(spectral_factor(RationalFunction(Polynomial({-1.0, 0.0, 1.0}),
                                                   Polynomial({4.0, 0.0, -1.0}))),
                  NotPositive);
}

TEST_CASE("Yvec of the worked example peaks at 0.3028") {
  const MatchingData md = reference_matching();
  const InnerOuterPair io = inner_outer(md.T2);
  const RationalVector yv = build_Yvec(md.T1, io.Ui);
  const LinfNorm n = linf_norm(yv, FrequencyGrid::standard());
  CHECK(std::abs(n.value - 0.3028) < 0.01);

  // Orthogonality: Ui* Yvec vanishes on the axis.
  for (double w : FrequencyGrid::standard().points()) {
    const Complex s(0.0, w);
    Complex acc = 0.0;
    for (std::size_t k = 0; k < 2; ++k)
      acc += std::conj(evaluate(io.Ui.entries[k], s)) * evaluate(yv.entries[k], s);
    CHECK(std::abs(acc) < 1e-8);
  }
}

TEST_CASE("projecting an inner column onto itself leaves nothing") {
  const MatchingData md = reference_matching();
  const InnerOuterPair io = inner_outer(md.T2);
  const RationalVector yv = build_Yvec(io.Ui, io.Ui);
  for (double w : {0.0, 0.5, 2.0, 30.0}) {
    CHECK(column_magnitude(yv, w) < 1e-8);
  }
}

TEST_CASE("T1 norm of the worked example") {
  const MatchingData md = reference_matching();
  CHECK(std::abs(linf_norm(md.T1, FrequencyGrid::standard()).value - 1.5682) < 0.02);
}

TEST_CASE("build_R reproduces the first bisection table row") {
  const MatchingData md = reference_matching();
  const InnerOuterPair io = inner_outer(md.T2);
  const RationalVector yv = build_Yvec(md.T1, io.Ui);
  const BoundFactor bf = build_R(0.9355, md.T1, io.Ui, yv, FrequencyGrid::standard());
  CHECK(std::abs(hankel_norm(bf.Rfun) - 1.3004) < 0.02);
}

TEST_CASE("build_R at a huge beta leaves a nearly stable Rfun") {
  const MatchingData md = reference_matching();
  const InnerOuterPair io = inner_outer(md.T2);
  const RationalVector yv = build_Yvec(md.T1, io.Ui);
  const BoundFactor bf = build_R(1e6, md.T1, io.Ui, yv, FrequencyGrid::standard());
  CHECK(std::abs(bf.Yo.at_infinity()) > 1e5);
  CHECK(hankel_norm(bf.Rfun) < 1e-5);
}

TEST_CASE("build_R rejects beta below the Yvec norm") {
  const MatchingData md = reference_matching();
  const InnerOuterPair io = inner_outer(md.T2);
  const RationalVector yv = build_Yvec(md.T1, io.Ui);
  CHECK_THROWS_AS(build_R(0.1, md.T1, io.Ui, yv, FrequencyGrid::standard()), BetaTooSmall);
}

TEST_CASE("the chosen beta reproduces the displayed Yo and Rfun") {
  const MatchingData md = reference_matching();
  const InnerOuterPair io = inner_outer(md.T2);
  const RationalVector yv = build_Yvec(md.T1, io.Ui);
  const BoundFactor bf = build_R(1.2123, md.T1, io.Ui, yv, FrequencyGrid::standard());

  CHECK(rel_err(bf.Yo.num().leading(), 1.2116) < 0.01);
  CHECK(roots_match(bf.Yo.zeros(), {{-3.397, 0.0}, {-1.14, 0.0}, {-0.4208, 0.0}}, 0.01));
  CHECK(roots_match(bf.Yo.poles(), {{-0.4334, 0.0}, {-1.141, 0.0}, {-3.4, 0.0}}, 0.01));
  CHECK(bf.Yo.in_S());
  CHECK(RationalFunction(bf.Yo.den(), bf.Yo.num()).in_S());

  CHECK(rel_err(bf.Rfun.num().leading(), -0.03501) < 0.02);
  CHECK(bf.Rfun.num().degree() == 7);
  CHECK(bf.Rfun.den().degree() == 7);
  // Antistable poles {0.4334, 1.141} and the displayed stable ones.
  CHECK(roots_match(bf.Rfun.poles(),
                    {{0.4334, 0.0},
                     {1.141, 0.0},
                     {-1.14, 0.0},
                     {-1.0, 0.0},
                     {-2.0, 0.0},
                     {-3.397, 0.0},
                     {-0.4208, 0.0}},
                    0.02));
}

TEST_CASE("nehari: a stable function is its own approximation") {
  const RationalFunction r(Polynomial({1.0}), Polynomial({1.0, 1.0}));
  const NehariResult nr = nehari_scalar(r);
  CHECK(nr.gamma == 0.0);
  CHECK(probe_rel_diff(nr.Xfun, r, Complex(0.0, 0.7)) < 1e-12);
}

TEST_CASE("nehari solve of the worked example") {
  const MatchingData md = reference_matching();
  const InnerOuterPair io = inner_outer(md.T2);
  const RationalVector yv = build_Yvec(md.T1, io.Ui);
  const BoundFactor bf = build_R(1.2123, md.T1, io.Ui, yv, FrequencyGrid::standard());

  const StableSplit split = stable_antistable_split(bf.Rfun);
  // The antistable part as printed (with the misplaced decimal corrected).
  CHECK(rel_err(split.antistable.num().leading(), -0.90464) < 0.01);
  CHECK(roots_match(split.antistable.zeros(), {{1.09, 0.0}}, 0.01));
  CHECK(roots_match(split.antistable.poles(), {{0.4334, 0.0}, {1.141, 0.0}}, 0.01));
  CHECK(split.stable.in_S());

  const NehariResult nr = nehari_scalar(bf.Rfun);
  CHECK(std::abs(nr.gamma - 0.9916) < 0.003);
  CHECK(nr.Xfun.in_S());
  CHECK(rel_err(nr.Xfun.at_infinity(), 0.95658) < 0.02);

  // Display comparison after merging the tiny-residue pairs the reference
  // tables drop.
  const RationalFunction reduced = cancel_near_pairs(nr.Xfun, 0.02);
  CHECK(roots_match(reduced.poles(),
                    {{-1.112, 0.0}, {-1.0, 0.0}, {-2.0, 0.0}, {-3.397, 0.0}}, 0.02));
  CHECK(roots_match(reduced.zeros(),
                    {{-4.27, 0.0}, {-1.141, 0.0}, {-1.141, 0.0}, {-0.4331, 0.0}}, 0.02));

  // All-pass optimality: |R - X| deviates from gamma by far less than 1%.
  double lo = 1e300, hi = 0.0;
  for (double w : FrequencyGrid::standard().points()) {
    const Complex s(0.0, w);
    const double m = std::abs(evaluate(bf.Rfun, s) - evaluate(nr.Xfun, s));
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  CHECK(hi / nr.gamma < 1.01);
  CHECK(lo / nr.gamma > 0.99);
}

TEST_CASE("nehari eigen-pair functions f and g") {
  const MatchingData md = reference_matching();
  const InnerOuterPair io = inner_outer(md.T2);
  const RationalVector yv = build_Yvec(md.T1, io.Ui);
  const BoundFactor bf = build_R(1.2123, md.T1, io.Ui, yv, FrequencyGrid::standard());
  const StableSplit split = stable_antistable_split(bf.Rfun);
  const NehariResult nr = nehari_scalar(bf.Rfun);

  // gamma f / g = R1 + R2 - X; its poles and zeros are basis-invariant even
  // though f and g individually carry the realization's scale. The raw
  // difference keeps function-neutral junk pairs, so check containment of the
  // structural roots rather than the whole multiset.
  const RationalFunction gf_over_g = split.antistable + split.stable - nr.Xfun;
  const auto contains = [](const std::vector<Complex>& rts, Complex want, double tol) {
    for (const Complex& r : rts)
      if (std::abs(r - want) <= tol * std::abs(want)) return true;
    return false;
  };
  const std::vector<Complex> gp = gf_over_g.poles();
  CHECK(contains(gp, {0.4334, 0.0}, 0.01));   // f's antistable poles
  CHECK(contains(gp, {1.141, 0.0}, 0.01));
  CHECK(contains(gp, {-1.112, 0.0}, 0.01));   // zero of g
  CHECK(contains(gf_over_g.zeros(), {1.112, 0.0}, 0.01));  // zero of f
  // |gamma f / g| is all-pass at level gamma.
  for (double w : {0.0, 0.3, 1.0, 5.0, 40.0}) {
    const double m = std::abs(evaluate(gf_over_g, Complex(0.0, w)));
    CHECK(std::abs(m - nr.gamma) < 0.01 * nr.gamma);
  }
}

TEST_CASE("hankel norm is nonincreasing across the bisection betas") {
  const MatchingData md = reference_matching();
  const InnerOuterPair io = inner_outer(md.T2);
  const RationalVector yv = build_Yvec(md.T1, io.Ui);
  const double betas[] = {0.9355, 1.0937, 1.1728, 1.2123, 1.2518};
  double prev = 1e300;
  for (double b : betas) {
    const BoundFactor bf = build_R(b, md.T1, io.Ui, yv, FrequencyGrid::standard());
    const double h = hankel_norm(bf.Rfun);
    CHECK(h <= prev + 1e-9);
    prev = h;
  }
}

TEST_CASE("model match reproduces the published bisection trace") {
  const MatchingData md = reference_matching();
  const ModelMatchResult res =
      model_match_bracketed(md.T1, md.T2, 0.3028, 1.5682, 0.05, FrequencyGrid::standard());

  const double want_beta[] = {0.9355, 1.2518, 1.0937, 1.1728, 1.2123};
  const double want_hankel[] = {1.3004, 0.9593, 1.1035, 1.0263, 0.9916};
  REQUIRE(res.beta_trace.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(std::abs(res.beta_trace[k].first - want_beta[k]) < 5e-4);
    CHECK(std::abs(res.beta_trace[k].second - want_hankel[k]) < 0.02);
  }
  CHECK(std::abs(res.beta - 1.2123) < 5e-4);
  CHECK(std::abs(res.hankel_norm - 0.9916) < 0.01);
  CHECK(std::abs(res.gamma - res.hankel_norm) < 1e-9);
  CHECK(res.gamma <= res.beta);
  CHECK(res.Q.in_S());
  CHECK(res.Q.is_proper());
  CHECK(res.achieved_norm <= res.beta + 1e-6);
}

TEST_CASE("matching T1 = T2 returns Q = 1 with vanishing error") {
  const MatchingData md = reference_matching();
  const ModelMatchResult res = model_match(md.T2, md.T2, 0.05, FrequencyGrid::standard());
  for (double w : {0.0, 0.4, 2.0, 25.0}) {
    const Complex q = evaluate(res.Q, Complex(0.0, w));
    CHECK(std::abs(q - Complex(1.0, 0.0)) < 1e-6);
  }
  CHECK(res.achieved_norm < 1e-8);
}

TEST_CASE("an unreachable bracket reports Infeasible") {
  const MatchingData md = reference_matching();
  // The infimal matching error sits near 1.2; a bracket capped at 0.5 fails.
  CHECK_THROWS_AS(
      model_match_bracketed(md.T1, md.T2, 0.3028, 0.5, 0.05, FrequencyGrid::standard()),
      Infeasible);
}

TEST_CASE("zero T2 cannot match a nonzero T1") {
  const MatchingData md = reference_matching();
  RationalVector zero{RationalFunction(), RationalFunction()};
  CHECK_THROWS_AS(model_match(md.T1, zero, 0.05, FrequencyGrid::standard()), Infeasible);
  const ModelMatchResult res = model_match(zero, zero, 0.05, FrequencyGrid::standard());
  CHECK(res.achieved_norm == 0.0);
}

TEST_CASE("norm preservation under the inner projection stack") {
  // [Ui* G; (I - Ui Ui*) G] has the same pointwise magnitude as G.
  const MatchingData md = reference_matching();
  const InnerOuterPair io = inner_outer(md.T2);
  std::mt19937 rng(97);
  for (int trial = 0; trial < 40; ++trial) {
    RationalVector g(random_stable_rational(rng, 2), random_stable_rational(rng, 2));
    const RationalVector proj = build_Yvec(g, io.Ui);  // (I - Ui Ui*) G
    for (double w : {0.0, 0.7, 3.0, 15.0}) {
      const Complex s(0.0, w);
      Complex inner = 0.0;
      for (std::size_t k = 0; k < 2; ++k)
        inner += std::conj(evaluate(io.Ui.entries[k], s)) * evaluate(g.entries[k], s);
      const double stacked =
          std::sqrt(std::norm(inner) + std::pow(column_magnitude(proj, w), 2));
      const double want = column_magnitude(g, w);
      CHECK(std::abs(stacked - want) <= 1e-8 * std::max(1.0, want));
    }
  }
}

TEST_CASE("the weighted residual stays below one at the returned beta") {
  // F = Ui* T1 - Uo Q and G = Yvec satisfy ||F Yo^-1|| < 1; F Yo^-1 = R - X.
  const MatchingData md = reference_matching();
  const ModelMatchResult res = model_match(md.T1, md.T2, 0.05, FrequencyGrid::standard());
  double worst = 0.0;
  for (double w : FrequencyGrid::standard().points()) {
    const Complex s(0.0, w);
    const double m = std::abs(evaluate(res.Rfun, s) - evaluate(res.Xfun, s));
    worst = std::max(worst, m);
  }
  CHECK(worst < 1.0);
  CHECK(linf_norm(res.Yvec, FrequencyGrid::standard()).value < res.beta);
}
