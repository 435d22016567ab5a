#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ergolab/averages/average.hpp"
#include "ergolab/averages/lacunary.hpp"
#include "ergolab/averages/maximal.hpp"
#include "ergolab/dynamics/trig_polynomial.hpp"
#include "ergolab/numerics/fit.hpp"
#include "ergolab/numerics/rng.hpp"

using namespace ergolab;
using namespace ergolab::averages;
using dynamics::koopman_apply;
using numerics::cplx;

namespace {

const FlowPair kStd;
const FlowPair kIrrational = FlowPair::make({1.0, std::sqrt(2.0) - 1.0}, {std::sqrt(3.0) - 1.0, 1.0});
const TrigPolynomial kOne = TrigPolynomial::constant(2, 1.0);
const TrigPolynomial kE1 = TrigPolynomial::mode({1, 0});
const TrigPolynomial kE2 = TrigPolynomial::mode({0, 1});

TorusPoint random_point(numerics::CounterRng& rng) { return TorusPoint({rng.uniform(), rng.uniform()}); }

TrigPolynomial nonnegative(numerics::CounterRng& rng) {
  return TrigPolynomial::random(2, 3, 2, rng).abs_squared();
}

AverageRequest fine(double n, double kappa = 2.0) {
  return AverageRequest{n, kappa, numerics::QuadratureRule{4, 16, 1e-13, std::size_t{1} << 20}};
}

}  // namespace

TEST(Average, ConstantsGiveOne) {
  for (double n : {0.5, 1.0, 37.2, 1e4}) {
    EXPECT_LT(std::abs(compute_average(kStd, kOne, kOne, TorusPoint({0.3, 0.9}), {n, 2.0, {}}) - 1.0), 1e-14);
  }
}

TEST(Average, IntegerLengthKillsLinearPhase) {
  EXPECT_LT(std::abs(compute_average(kStd, kE1, kOne, TorusPoint({0.0, 0.0}), {10.0, 2.0, {}})), 1e-15);
}

TEST(Average, FresnelAtFifty) {
  // (C(100) + i S(100)) / (2 N) from mpmath.
  const cplx v = compute_average(kStd, kOne, kE2, TorusPoint({0.0, 0.0}), {50.0, 2.0, {}});
  EXPECT_NEAR(v.real() * 50.0, 0.24999994933940895, 1e-11);
  EXPECT_NEAR(v.imag() * 50.0, 0.24840845057391878, 1e-11);
}

TEST(Average, TwoModesAgainstReference) {
  // (1/10) e(0.4) int_0^10 e(t + t^2) dt from mpmath.
  const cplx v = compute_average(kStd, kE1, kE2, TorusPoint({0.3, 0.1}), {10.0, 2.0, {}});
  EXPECT_NEAR(v.real(), -0.010277417652549434, 1e-12);
  EXPECT_NEAR(v.imag(), -0.0088945918864137345, 1e-12);
}

TEST(Average, KernelAgreesWithQuadratureOracle) {
  numerics::CounterRng rng(17);
  for (double kappa : {2.0, 1.5, 0.5, 3.0}) {
    for (int k = 0; k < 4; ++k) {
      const auto f1 = TrigPolynomial::random(2, 3, 2, rng), f2 = TrigPolynomial::random(2, 3, 2, rng);
      const auto x = random_point(rng);
      const double n = kappa > 2.0 ? 3.0 : 9.0;
      const cplx fast = compute_average(kIrrational, f1, f2, x, {n, kappa, {}});
      const auto slow = average_by_quadrature(kIrrational, f1, f2, x, fine(n, kappa));
      ASSERT_TRUE(slow.converged);
      EXPECT_LT(std::abs(fast - slow.value), 1e-10) << "kappa " << kappa;
    }
  }
}

TEST(Average, RequestValidation) {
  EXPECT_THROW(compute_average(kStd, kOne, kOne, TorusPoint({0, 0}), {0.0, 2.0, {}}), DomainError);
  EXPECT_THROW(compute_average(kStd, kOne, kOne, TorusPoint({0, 0}), {1.0, -1.0, {}}), DomainError);
  EXPECT_FALSE((AverageRequest{1.0, 1.0, {}}.warnings().empty()));
  EXPECT_TRUE((AverageRequest{1.0, 2.0, {}}.warnings().empty()));
  EXPECT_THROW(compute_average(kStd, TrigPolynomial::mode({1, 0, 0}), kOne, TorusPoint({0, 0}), {1.0, 2.0, {}}),
               ConfigError);
}

TEST(Average, SupBoundAndBilinearity) {
  numerics::CounterRng rng(23);
  for (int k = 0; k < 20; ++k) {
    const auto f1 = TrigPolynomial::random(2, 4, 3, rng), g1 = TrigPolynomial::random(2, 4, 3, rng);
    const auto f2 = TrigPolynomial::random(2, 4, 3, rng);
    const auto x = random_point(rng);
    const double n = rng.uniform(1.0, 200.0);
    const AverageRequest req{n, 2.0, {}};
    const cplx a = compute_average(kIrrational, f1, f2, x, req);
    EXPECT_LE(std::abs(a), f1.sup_bound() * f2.sup_bound() + 1e-12);
    const cplx s(0.7, -1.3), t(-2.0, 0.5);
    auto combo = f1;
    combo *= s;
    auto g1s = g1;
    g1s *= t;
    combo += g1s;
    const cplx lhs = compute_average(kIrrational, combo, f2, x, req);
    const cplx rhs = s * a + t * compute_average(kIrrational, g1, f2, x, req);
    EXPECT_LT(std::abs(lhs - rhs), 1e-10);
  }
}

TEST(Average, FlowCovariance) {
  numerics::CounterRng rng(29);
  for (int k = 0; k < 10; ++k) {
    const auto f1 = TrigPolynomial::random(2, 3, 2, rng), f2 = TrigPolynomial::random(2, 3, 2, rng);
    const auto x = random_point(rng);
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    const AverageRequest req{25.0, 2.0, {}};
    const cplx moved = compute_average(kIrrational, f1, f2, dynamics::flow_apply(kIrrational, x, a, b), req);
    const cplx composed = compute_average(kIrrational, koopman_apply(kIrrational, f1, a, b),
                                          koopman_apply(kIrrational, f2, a, b), x, req);
    EXPECT_LT(std::abs(moved - composed), 1e-10);
  }
}

TEST(Average, SpaceMeanOfProductModes) {
  const Frequency k{2, -1};
  const Frequency m{-2, 1};
  const auto f1 = TrigPolynomial::mode(k), f2 = TrigPolynomial::mode(m);
  const double n = 6.0;
  numerics::CounterRng rng(101);
  cplx mean{};
  const int samples = 10000;
  for (int s = 0; s < samples; ++s) mean += compute_average(kIrrational, f1, f2, random_point(rng), {n, 2.0, {}}) / double(samples);
  // k + m = 0: the space mean is the time average of the pure phase.
  const double alpha = dynamics::s_speed(kIrrational, k), beta = dynamics::t_speed(kIrrational, m);
  const cplx direct = numerics::integrate_1d_or_throw([&](double t) { return numerics::unit_phase(alpha * t + beta * t * t); },
                                                      0.0, n, {4, 16, 1e-13, std::size_t{1} << 16}) / n;
  EXPECT_LT(std::abs(mean - direct), 1e-12);

  // k + m != 0: the space mean vanishes up to Monte-Carlo error.
  const auto g2 = TrigPolynomial::mode({1, 1});
  cplx other{};
  for (int s = 0; s < samples; ++s) other += compute_average(kIrrational, f1, g2, random_point(rng), {n, 2.0, {}}) / double(samples);
  const double scale = std::abs(compute_average(kIrrational, f1, g2, TorusPoint({0, 0}), {n, 2.0, {}}));
  EXPECT_LT(std::abs(other), 5.0 * scale / std::sqrt(double(samples)));
}

TEST(Lacunary, ScheduleAndValidation) {
  const auto s = LacunarySchedule::make(2.0, 5);
  EXPECT_EQ(s.scales(), (std::vector<double>{1, 2, 4, 8, 16, 32}));
  EXPECT_THROW(LacunarySchedule::make(1.0, 5), DomainError);
  EXPECT_THROW(LacunarySchedule::make(2.0, 0), DomainError);
}

TEST(Lacunary, ConstantsConvergeToOne) {
  const auto rec = lacunary_trajectory(kStd, kOne, kOne, TorusPoint({0.1, 0.2}), LacunarySchedule::make(2.0, 5));
  for (const auto& v : rec.values) EXPECT_LT(std::abs(v - 1.0), 1e-14);
  ASSERT_TRUE(rec.limit_estimate.has_value());
  EXPECT_LT(std::abs(*rec.limit_estimate - 1.0), 1e-14);
  EXPECT_LT(rec.cauchy_residual, 1e-14);
}

TEST(Lacunary, SingleModesDecayToZero) {
  const auto rec = lacunary_trajectory(kStd, kE1, kE2, TorusPoint({0.0, 0.0}), LacunarySchedule::make(2.0, 14));
  ASSERT_TRUE(rec.limit_estimate.has_value());
  EXPECT_LT(std::abs(*rec.limit_estimate), 1e-3);
  EXPECT_LT(rec.cauchy_residual, 1e-2);
  EXPECT_LT(std::abs(rec.values.back()), std::abs(rec.values[4]));
  // Oracle at the modest scales.
  for (std::size_t i = 0; i < 7; ++i) {
    const auto slow = average_by_quadrature(kStd, kE1, kE2, TorusPoint({0.0, 0.0}), fine(rec.scales[i]));
    EXPECT_LT(std::abs(slow.value - rec.values[i]), 1e-10);
  }
}

TEST(Lacunary, InvariantFirstFactor) {
  // e(x2) is S-invariant for s_dir = (1, 0).
  const TorusPoint x({0.3, 0.45});
  const auto rec = lacunary_trajectory(kStd, kE2, kOne, x, LacunarySchedule::make(1.5, 8));
  for (const auto& v : rec.values) EXPECT_LT(std::abs(v - kE2.evaluate(x.coords())), 1e-13);
}

TEST(Lacunary, CauchyResidualIsLastThreeSpread) {
  EXPECT_DOUBLE_EQ(cauchy_residual({cplx(100), cplx(1), cplx(1.5), cplx(1.25)}), 0.5);
  EXPECT_DOUBLE_EQ(cauchy_residual({cplx(2)}), 0.0);
}

TEST(Sandwich, LacunaryFloorIsRobust) {
  EXPECT_EQ(lacunary_floor(2.0, 8.0), 3);
  EXPECT_EQ(lacunary_floor(1.5, 1.5 * 1.5 * 1.5), 3);
  EXPECT_EQ(lacunary_floor(10.0, 999.999), 2);
  EXPECT_EQ(lacunary_floor(3.0, 1.0), 0);
}

TEST(Sandwich, Constants) {
  const auto r = sandwich_check(kStd, kOne, kOne, TorusPoint({0.5, 0.5}), 1.7, 12.0);
  EXPECT_NEAR(r.lower, 1.0 / 1.7, 1e-14);
  EXPECT_NEAR(r.middle, 1.0, 1e-14);
  EXPECT_NEAR(r.upper, 1.7, 1e-14);
  EXPECT_TRUE(r.holds);
}

TEST(Sandwich, GridPointHasSlack) {
  numerics::CounterRng rng(3);
  const auto f1 = nonnegative(rng), f2 = nonnegative(rng);
  const TorusPoint x({0.2, 0.7});
  const auto r = sandwich_check(kIrrational, f1, f2, x, 2.0, 16.0);
  EXPECT_DOUBLE_EQ(r.lower_scale, 16.0);
  EXPECT_NEAR(r.lower, r.middle / 2.0, 1e-12 * r.middle);
  EXPECT_TRUE(r.holds);
}

TEST(Sandwich, SquaredFormsExample) {
  auto g1 = kOne;
  g1 += kE1;
  auto g2 = kOne;
  g2 -= kE2;
  const auto r = sandwich_check(kStd, g1.abs_squared(), g2.abs_squared(), TorusPoint({0.0, 0.0}), 1.5, 7.3);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.lower, r.middle);
  EXPECT_LE(r.middle, r.upper);
  // Each side by the quadrature oracle.
  const auto direct = [&](double n) {
    return average_by_quadrature(kStd, g1.abs_squared(), g2.abs_squared(), TorusPoint({0.0, 0.0}), fine(n)).value.real();
  };
  EXPECT_NEAR(r.middle, direct(7.3), 1e-10);
  EXPECT_NEAR(r.lower, direct(r.lower_scale) / 1.5, 1e-10);
  EXPECT_NEAR(r.upper, 1.5 * direct(r.upper_scale), 1e-10);
}

TEST(Sandwich, RejectsSignedInputs) {
  auto cosine = kE1;
  cosine += TrigPolynomial::mode({-1, 0});
  EXPECT_THROW(sandwich_check(kStd, cosine, kOne, TorusPoint({0, 0}), 2.0, 3.0), DomainError);
  EXPECT_THROW(sandwich_check(kStd, kOne, kE2, TorusPoint({0, 0}), 2.0, 3.0), DomainError);  // complex
  EXPECT_THROW(sandwich_check(kStd, kOne, kOne, TorusPoint({0, 0}), 1.0, 3.0), DomainError);
  // 0.8 + cos + 0.3 cos(2x) > 0 (min 1/12), though c0 < sum |c_k|: sampling decides.
  auto f = TrigPolynomial::constant(2, 0.8);
  for (int s : {-1, 1}) {
    f += TrigPolynomial::mode({s, 0}, 0.5);
    f += TrigPolynomial::mode({2 * s, 0}, 0.15);
  }
  EXPECT_NO_THROW(require_nonnegative(f, "f"));
  f += TrigPolynomial::constant(2, -0.5);
  EXPECT_THROW(require_nonnegative(f, "f"), DomainError);
}

TEST(Sandwich, RandomizedInstancesHold) {
  numerics::CounterRng rng(77);
  for (int k = 0; k < 10; ++k) {
    const auto f1 = nonnegative(rng), f2 = nonnegative(rng);
    const auto x = random_point(rng);
    for (int j = 0; j < 8; ++j) {
      const double n = std::exp(rng.uniform(0.0, std::log(500.0)));
      EXPECT_TRUE(sandwich_check(kIrrational, f1, f2, x, 1.3, n).holds) << k << " " << n;
    }
  }
}

TEST(Maximal, ExponentValidation) {
  EXPECT_NO_THROW(ExponentPair::make(3.0, 1.5));
  EXPECT_THROW(ExponentPair::make(3.0, 2.0), DomainError);
  EXPECT_THROW(ExponentPair::make(1.0, INFINITY), DomainError);
}

TEST(Maximal, ConstantsReachGeometricSeries) {
  const auto r = maximal_chain_check(kStd, kOne, kOne, TorusPoint({0, 0}), 3.0, {2.0, 2.0}, default_m_max(3.0));
  EXPECT_NEAR(r.lhs, 1.0, 1e-14);
  EXPECT_NEAR(r.rhs, std::sqrt(std::sqrt(2.0) + 1.0), 1e-9);
  EXPECT_TRUE(r.holds);
}

TEST(Maximal, ZeroSecondFactor) {
  const auto r = maximal_chain_check(kStd, kOne, TrigPolynomial(2), TorusPoint({0, 0}), 2.0, {2.0, 2.0}, 10);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(Maximal, RandomizedInstancesHold) {
  numerics::CounterRng rng(55);
  const auto f1 = TrigPolynomial::random(2, 4, 2, rng), f2 = TrigPolynomial::random(2, 4, 2, rng);
  for (int s = 0; s < 20; ++s) {
    const auto x = random_point(rng);
    const auto r = maximal_chain_check(kIrrational, f1, f2, x, 4.0, {3.0, 1.5}, default_m_max(4.0));
    EXPECT_TRUE(r.holds) << r.lhs << " " << r.rhs;
    EXPECT_GT(r.tail_bound, 0.0);
  }
}

TEST(Maximal, DefaultDepthResolvesTail) {
  EXPECT_EQ(default_m_max(1.0), 20);
  EXPECT_LE(std::ldexp(100.0 * 100.0, -default_m_max(100.0)), 1e-6);
}

TEST(Maximal, GridMaximalAndWeakNorm) {
  const TorusPoint x({0.0, 0.0});
  // Constants: every grid average is 1.
  EXPECT_NEAR(grid_maximal_average(kStd, kOne, kOne, x, 0.5, 10.0), 1.0, 1e-14);
  const double m = grid_maximal_average(kStd, kE1, kE2, x, 0.25, 20.0);
  double brute = 0.0;
  for (int j = 1; j <= 80; ++j) brute = std::max(brute, std::abs(compute_average(kStd, kE1, kE2, x, {0.25 * j, 2.0, {}})));
  EXPECT_NEAR(m, brute, 1e-12);
  std::vector<TorusPoint> xs{TorusPoint({0, 0}), TorusPoint({0.5, 0.5})};
  EXPECT_NEAR(maximal_weak_l1_estimate(kStd, kOne, kOne, xs, 1.0, 4.0), 1.0, 1e-14);
  EXPECT_THROW(grid_maximal_average(kStd, kOne, kOne, x, 2.0, 1.0), DomainError);
}

TEST(SingleQuadratic, ConstantAndFresnelLimit) {
  EXPECT_LT(std::abs(single_quadratic_average(kStd, TrigPolynomial::constant(2, cplx(2, -1)), TorusPoint({0.4, 0.4}), 13.0) -
                     cplx(2, -1)),
            1e-14);
  const TorusPoint x({0.0, 0.37});
  const cplx phase = kE2.evaluate(x.coords());
  for (double n : {200.0, 1000.0, 5000.0}) {
    const cplx na = n * single_quadratic_average(kStd, kE2, x, n);
    EXPECT_LT(std::abs(na / phase - cplx(0.25, 0.25)), 1.0 / (4.0 * std::numbers::pi * n) + 1e-9) << n;
  }
}

TEST(SingleQuadratic, DecayExponentNearMinusOne) {
  std::vector<double> ns, vals;
  for (int k = 4; k <= 14; ++k) {
    ns.push_back(std::ldexp(1.0, k));
    vals.push_back(std::abs(single_quadratic_average(kStd, kE2, TorusPoint({0, 0}), ns.back())));
  }
  const auto fit = numerics::fit_power_law(ns, vals);
  EXPECT_GE(fit.exponent, -1.15);
  EXPECT_LE(fit.exponent, -0.85);
}

TEST(Difference, InvariantFactorVanishes) {
  EXPECT_EQ(difference_average(kStd, kE2, kE1, TorusPoint({0.2, 0.1}), 7.0, 0.3), cplx{});
  EXPECT_THROW(difference_average(kStd, kE1, kE2, TorusPoint({0, 0}), 7.0, 0.0), DomainError);
  EXPECT_THROW(difference_average(kStd, kE1, kE2, TorusPoint({0, 0}), 7.0, 1.5), DomainError);
}

TEST(Difference, EqualsAverageOfKoopmanDifference) {
  numerics::CounterRng rng(19);
  for (int k = 0; k < 10; ++k) {
    const auto f1 = TrigPolynomial::random(2, 4, 3, rng), f2 = TrigPolynomial::random(2, 4, 3, rng);
    const auto x = random_point(rng);
    const double delta = rng.uniform(0.01, 1.0), n = rng.uniform(1.0, 50.0);
    const auto shifted = koopman_apply(kIrrational, f1, delta, 0.0) - f1;
    const cplx a = difference_average(kIrrational, f1, f2, x, n, delta);
    const cplx b = compute_average(kIrrational, shifted, f2, x, {n, 2.0, {}});
    EXPECT_LT(std::abs(a - b), 1e-10);
  }
}

TEST(Difference, MonteCarloDecay) {
  numerics::CounterRng rng(2);
  std::vector<TorusPoint> xs;
  for (int s = 0; s < 200; ++s) xs.push_back(random_point(rng));
  std::vector<double> ns, l1;
  for (int k = 0; k <= 10; ++k) {
    const double n = std::ldexp(1.0, k);
    double mean = 0.0;
    for (const auto& x : xs) mean += std::abs(difference_average(kStd, kE1, kE2, x, n, 0.3)) / xs.size();
    ns.push_back(n);
    l1.push_back(mean);
  }
  EXPECT_LT(numerics::fit_power_law(ns, l1).exponent, -0.3);
}
