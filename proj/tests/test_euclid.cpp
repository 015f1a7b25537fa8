#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyperhardy/euclid.hpp"
#include "hyperhardy/rellich.hpp"

using namespace hyperhardy;

namespace {

double sinh_term(const RadialFunction& u, int N, int power) {
  const auto H = ModelManifold::hyperbolic(N);
  return weighted_l2(
      u, [&](double r) { return std::pow(H.inverse_square(r), power / 2); }, H, support_rule(u, 32));
}

HalfSpaceFunction zero_halfspace() {
  return {[](const HalfJet&, const HalfJet&) { return HalfJet(0.0); }, 1.0, 0.5, 2.0, "zero"};
}

}  // namespace

TEST(SphereArea, Examples) {
  EXPECT_NEAR(sphere_area(1), 2.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(sphere_area(2), 4.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(sphere_area(3), 2.0 * std::numbers::pi * std::numbers::pi, 1e-13);
  EXPECT_THROW(sphere_area(-1), DomainError);
}

TEST(GeodesicDistance, Examples) {
  EXPECT_EQ(geodesic_distance_halfspace({{0.0, 0.0}, 1.0}), 0.0);
  for (double y : {1e-6, 0.1, 0.5, 2.0, 7.0, 1e5})
    EXPECT_NEAR(geodesic_distance_halfspace({{0.0, 0.0, 0.0}, y}), std::abs(std::log(y)), 1e-13 * (1 + std::abs(std::log(y))));
  EXPECT_THROW(geodesic_distance_halfspace({{0.0}, 0.0}), DomainError);
  EXPECT_THROW(geodesic_distance_halfspace(0.3, -1.0), DomainError);
}

TEST(GeodesicDistance, MatchesArccoshAwayFromThePole) {
  for (double x : {0.3, 1.0, 4.0})
    for (double y : {0.2, 1.0, 3.0}) {
      const double d = std::acosh(1.0 + ((y - 1) * (y - 1) + x * x) / (2 * y));
      EXPECT_NEAR(geodesic_distance_halfspace(x, y), d, 1e-13 * d);
    }
}

TEST(GeodesicDistance, GrowsLikeLogOfInverseHeight) {
  for (double x : {0.0, 0.5, 2.0}) {
    const double y = 1e-12;
    const double d = geodesic_distance_halfspace(x, y);
    EXPECT_NEAR(d / std::log(1.0 / y), 1.0, std::log(1.0 + x * x) / std::log(1.0 / y) + 1e-10);
  }
}

TEST(GeodesicDistanceProperty, DependsOnlyOnHorizontalNorm) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> G(0.0, 1.0);
  std::uniform_real_distribution<double> Y(0.05, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(4);
    for (auto& xi : x) xi = G(rng);
    // Householder reflection through a random unit vector.
    std::vector<double> n(4);
    double nn = 0.0;
    for (auto& ni : n) {
      ni = G(rng);
      nn += ni * ni;
    }
    double dot = 0.0;
    for (int i = 0; i < 4; ++i) dot += n[i] * x[i];
    std::vector<double> Rx(4);
    for (int i = 0; i < 4; ++i) Rx[i] = x[i] - 2.0 * dot / nn * n[i];
    const double y = Y(rng);
    const double d0 = geodesic_distance_halfspace({x, y});
    EXPECT_NEAR(geodesic_distance_halfspace({Rx, y}), d0, 1e-13 * (1 + d0));
  }
}

TEST(BallTransform, DerivativesMatchFiniteDifferences) {
  const auto u = modulated_bump(0.4, 2.5, 0.3, -0.2);
  for (int N : {3, 6}) {
    const auto v = ball_transform(u, N);
    EXPECT_NEAR(v.support().lo, std::tanh(0.2), 1e-15);
    EXPECT_NEAR(v.support().hi, std::tanh(1.25), 1e-15);
    for (double t : {0.3, 0.5, 0.7, 0.8}) {
      const double h = 1e-5;
      EXPECT_NEAR(v.d1(t), (v.value(t + h) - v.value(t - h)) / (2 * h), 1e-6 * (1 + std::abs(v.d1(t))));
      EXPECT_NEAR(v.d2(t), (v.d1(t + h) - v.d1(t - h)) / (2 * h), 1e-5 * (1 + std::abs(v.d2(t))));
      const double W = 2.0 / (1.0 - t * t);
      EXPECT_NEAR(v.value(t), std::pow(W, 0.5 * (N - 2)) * u.value(2 * std::atanh(t)), 1e-14 * (1 + v.value(t)));
    }
  }
}

TEST(BallIdentity, Examples) {
  const auto u = modulated_bump(0.3, 2.0, 0.4, 0.1);
  EXPECT_LT(ball_identity_check(u, 3, BallIdentity::mass).discrepancy, 1e-6);
  EXPECT_LT(ball_identity_check(u, 5, BallIdentity::gradient).discrepancy, 1e-6);
  EXPECT_LT(ball_identity_check(u, 4, BallIdentity::hardy_weight).discrepancy, 1e-6);
}

TEST(BallIdentity, ZeroFunction) {
  const auto u = RadialFunction::closed_form([](double) { return 0.0; }, [](double) { return 0.0; },
                                             [](double) { return 0.0; }, {0.5, 1.0}, "zero");
  for (auto w : {BallIdentity::gradient, BallIdentity::mass, BallIdentity::hardy_weight}) {
    const auto c = ball_identity_check(u, 5, w);
    EXPECT_EQ(c.lhs, 0.0);
    EXPECT_EQ(c.rhs, 0.0);
    EXPECT_EQ(c.discrepancy, 0.0);
  }
}

TEST(BallIdentityProperty, AllThreeIdentitiesOnSeededBumps) {
  std::mt19937_64 rng(52);
  const BumpSampler sample{0.05, 6.0};
  for (int i = 0; i < 20; ++i) {
    const auto u = sample(rng);
    for (int N : {3, 5, 7})
      for (auto w : {BallIdentity::gradient, BallIdentity::mass, BallIdentity::hardy_weight})
        EXPECT_LT(ball_identity_check(u, N, w).discrepancy, 1e-6) << u.id() << " N=" << N << " " << to_string(w);
  }
}

TEST(BallHardy, PositiveOnBump) {
  const auto v = bump(0.2, 0.6);
  const auto rep = check_corollary22(v, 3);
  EXPECT_GT(rep.margin, 0.0);
  EXPECT_EQ(rep.family, "ball");
  EXPECT_LT(rep.quad_error, 1e-8 * rep.lhs);
}

TEST(BallHardy, MatchesHyperbolicMarginWithoutSinhTerm) {
  const auto u = modulated_bump(0.3, 2.2, -0.3, 0.2);
  const auto ball3 = check_corollary22(ball_transform(u, 3), 3);
  const auto hyp3 = check_poincare_hardy(u, 3);
  EXPECT_NEAR(ball3.margin, hyp3.margin, 1e-5 * std::abs(hyp3.margin));
  for (int N : {4, 5, 7}) {
    const auto ball = check_corollary22(ball_transform(u, N), N);
    const auto hyp = check_poincare_hardy(u, N);
    const double expected = hyp.margin + 0.25 * (N - 1) * (N - 3) * sinh_term(u, N, 2);
    EXPECT_NEAR(ball.margin, expected, 1e-5 * std::abs(expected)) << "N=" << N;
  }
}

TEST(BallHardy, RejectsSupportAtTheSphere) {
  const auto v = bump(0.5, 1.0);
  EXPECT_THROW(check_corollary22(v, 3), SupportError);
  EXPECT_THROW(check_corollary22(bump(0.2, 0.6), 2), DomainError);
}

TEST(BallHardy, AllowsSupportThroughTheCentre) {
  const auto v = RadialFunction::closed_form(
      [](double t) { return std::pow(1 - t * t / 0.25, 3); }, [](double t) { return -6 * t / 0.25 * std::pow(1 - t * t / 0.25, 2); },
      {}, {0.0, 0.5}, "cap");
  EXPECT_GT(check_corollary22(v, 3).margin, 0.0);
}

TEST(BallHardyProperty, SeededBumps) {
  std::mt19937_64 rng(22);
  const BumpSampler sample{0.01, 0.99};
  for (int i = 0; i < 50; ++i) {
    const auto v = sample(rng);
    for (int N : {3, 4, 6}) {
      const auto rep = check_corollary22(v, N);
      EXPECT_TRUE(rep.passes()) << v.id() << " N=" << N << " margin=" << rep.margin;
    }
  }
}

TEST(BallWeightComparison, HoldsOnAThousandPoints) {
  for (int i = 1; i <= 1000; ++i) {
    const double t = i / 1001.0;
    const auto c = ball_weight_comparison(t);
    EXPECT_TRUE(c.holds()) << "t=" << t;
  }
  EXPECT_TRUE(ball_weight_comparison(1.0 - 1e-12).holds());
  EXPECT_THROW(ball_weight_comparison(1.0), DomainError);
  EXPECT_THROW(ball_weight_comparison(0.0), DomainError);
}

TEST(HalfSpaceFunction, LaplacianMatchesFiniteDifferences) {
  const auto v = tensor_bump(1.2, 0.4, 2.5, 0.3, -0.2);
  for (int N : {3, 5}) {
    for (auto [rho, y] : {std::pair{0.3, 0.9}, std::pair{0.7, 1.6}, std::pair{1.0, 0.6}}) {
      const double h = 1e-4;
      auto f = [&](double r, double yy) { return v.at(r, yy, N).v; };
      const double frr = (f(rho + h, y) - 2 * f(rho, y) + f(rho - h, y)) / (h * h);
      const double fr = (f(rho + h, y) - f(rho - h, y)) / (2 * h);
      const double fyy = (f(rho, y + h) - 2 * f(rho, y) + f(rho, y - h)) / (h * h);
      const double fy = (f(rho, y + h) - f(rho, y - h)) / (2 * h);
      const auto s = v.at(rho, y, N);
      const double lap = frr + (N - 2) * fr / rho + fyy;
      EXPECT_NEAR(s.laplacian, lap, 1e-5 * (1 + std::abs(lap)));
      EXPECT_NEAR(s.grad_sq, fr * fr + fy * fy, 1e-7 * (1 + s.grad_sq));
      EXPECT_NEAR(s.dy, fy, 1e-7 * (1 + std::abs(fy)));
    }
  }
}

TEST(HalfSpaceFunction, LaplacianOnTheAxisIsTheLimit) {
  const auto v = tensor_bump(1.0, 0.5, 2.0);
  const auto axis = v.at(0.0, 1.2, 5);
  const auto near = v.at(1e-6, 1.2, 5);
  EXPECT_NEAR(axis.laplacian, near.laplacian, 1e-8 * std::abs(axis.laplacian));
}

TEST(HalfSpaceFunction, RejectsSupportTouchingTheBoundary) {
  EXPECT_THROW(tensor_bump(1.0, 0.0, 2.0), SupportError);
  auto zero = [](const HalfJet&, const HalfJet&) { return HalfJet(0.0); };
  EXPECT_THROW(HalfSpaceFunction(zero, 1.0, -0.5, 2.0, "low"), SupportError);
  EXPECT_THROW(HalfSpaceFunction(zero, 1.0, 2.0, 1.0, "flipped"), ArgumentError);
}

TEST(HalfSpaceFunction, FromRadialValue) {
  const auto U = smooth_bump(0.5, 1.5);
  const auto v = halfspace_from_radial(U, 1.5);
  for (auto [rho, y] : {std::pair{0.2, 1.9}, std::pair{0.8, 0.7}}) {
    const double d = geodesic_distance_halfspace(rho, y);
    EXPECT_NEAR(v.at(rho, y, 5).v, std::pow(y, -1.5) * U.value(d), 1e-14);
  }
  EXPECT_NEAR(v.y_lo(), std::exp(-1.5), 1e-15);
  EXPECT_THROW(halfspace_from_radial(smooth_bump(0.0, 1.0), 1.0), SupportError);
}

TEST(HardyMazya, PositiveOnTensorBump) {
  const auto v = tensor_bump(1.0, 0.5, 2.0);
  const auto rep = check_corollary23(v, 3);
  EXPECT_GT(rep.margin, 0.0);
  EXPECT_GT(rep.rhs, 0.0);
  EXPECT_EQ(rep.family, "halfspace");
  EXPECT_LT(rep.quad_error, 1e-6 * rep.lhs);
}

TEST(HardyMazya, ZeroFunction) {
  const auto rep = check_corollary23(zero_halfspace(), 3);
  EXPECT_EQ(rep.lhs, 0.0);
  EXPECT_EQ(rep.rhs, 0.0);
  EXPECT_EQ(rep.margin, 0.0);
}

TEST(HardyMazya, GradientIdentity) {
  for (int N : {3, 5, 6}) {
    const auto c = halfspace_gradient_identity(smooth_bump(0.4, 1.6), N);
    EXPECT_LT(c.discrepancy, 1e-6) << "N=" << N << " lhs=" << c.lhs << " rhs=" << c.rhs;
  }
}

TEST(HardyMazya, MatchesHyperbolicMarginWithoutSinhTerm) {
  for (int N : {3, 5}) {
    const auto U = smooth_bump(0.5, 1.5);
    const auto hs = check_corollary23(halfspace_from_radial(U, 0.5 * (N - 2)), N);
    const auto hyp = check_poincare_hardy(U, N);
    const double expected = sphere_area(N - 1) * (hyp.margin + 0.25 * (N - 1) * (N - 3) * sinh_term(U, N, 2));
    EXPECT_NEAR(hs.margin, expected, 1e-4 * std::abs(expected)) << "N=" << N;
  }
}

TEST(HardyMazyaProperty, SeededTensorBumps) {
  std::mt19937_64 rng(25);
  const HalfSpaceBumpSampler sample;
  for (int i = 0; i < 50; ++i) {
    const auto v = sample(rng);
    for (int N : {3, 5}) {
      const auto rep = check_corollary23(v, N);
      EXPECT_TRUE(rep.passes()) << v.id() << " N=" << N << " margin=" << rep.margin;
    }
  }
}

TEST(HalfSpaceRellich, PositiveOnTensorBump) {
  const auto v = tensor_bump(1.0, 0.5, 2.0);
  for (auto w : {HalfSpaceRellich::y2_weight, HalfSpaceRellich::y4_weight}) {
    const auto rep = check_corollary32(v, 5, w);
    EXPECT_GT(rep.margin, 0.0) << to_string(w);
    EXPECT_GT(rep.rhs, 0.0);
  }
  EXPECT_THROW(check_corollary32(v, 4, HalfSpaceRellich::y2_weight), DomainError);
}

TEST(HalfSpaceRellich, VariantNames) {
  EXPECT_EQ(halfspace_rellich_from_string("y2"), HalfSpaceRellich::y2_weight);
  EXPECT_EQ(halfspace_rellich_from_string("y4"), HalfSpaceRellich::y4_weight);
  EXPECT_THROW(halfspace_rellich_from_string("3.5"), ArgumentError);
  EXPECT_DOUBLE_EQ(halfspace_rellich_alpha(6, HalfSpaceRellich::y2_weight), 2.0);
  EXPECT_DOUBLE_EQ(halfspace_rellich_alpha(6, HalfSpaceRellich::y4_weight), 1.0);
}

TEST(HalfSpaceRellich, BilaplacianIdentity) {
  const auto U = smooth_bump(0.4, 1.4);
  for (int N : {5, 6, 8})
    for (auto w : {HalfSpaceRellich::y2_weight, HalfSpaceRellich::y4_weight}) {
      const auto c = halfspace_bilaplacian_identity(U, N, w);
      EXPECT_LT(c.discrepancy, 1e-4) << "N=" << N << " " << to_string(w) << " lhs=" << c.lhs << " rhs=" << c.rhs;
    }
}

TEST(HalfSpaceRellich, MatchesHyperbolicMarginWithoutSinhTerms) {
  const int N = 5;
  const auto U = smooth_bump(0.5, 1.5);
  const auto hyp = check_theorem31(U, N);
  const double dropped = static_cast<double>(min_B_closed_form(N)) * sinh_term(U, N, 2) +
                         static_cast<double>(min_A_closed_form(N)) * sinh_term(U, N, 4);
  const double expected = sphere_area(N - 1) * (hyp.margin + dropped);
  for (auto w : {HalfSpaceRellich::y2_weight, HalfSpaceRellich::y4_weight}) {
    const auto hs = check_corollary32(halfspace_from_radial(U, halfspace_rellich_alpha(N, w)), N, w);
    EXPECT_NEAR(hs.margin, expected, 1e-4 * std::abs(expected)) << to_string(w);
  }
}

TEST(HalfSpaceRellichProperty, SeededTensorBumps) {
  std::mt19937_64 rng(32);
  const HalfSpaceBumpSampler sample;
  for (int i = 0; i < 50; ++i) {
    const auto v = sample(rng);
    for (auto w : {HalfSpaceRellich::y2_weight, HalfSpaceRellich::y4_weight}) {
      const auto rep = check_corollary32(v, 5, w);
      EXPECT_TRUE(rep.passes()) << v.id() << " " << to_string(w) << " margin=" << rep.margin;
    }
  }
}

TEST(HalfSpaceGradientHardy, PositiveOnTensorBump) {
  const auto rep = check_halfspace_gradient_hardy(tensor_bump(1.0, 0.5, 2.0), 5);
  EXPECT_GT(rep.margin, 0.0);
}

TEST(HalfSpaceGradientHardyProperty, SeededTensorBumps) {
  std::mt19937_64 rng(94);
  const HalfSpaceBumpSampler sample;
  for (int i = 0; i < 50; ++i) {
    const auto v = sample(rng);
    const auto rep = check_halfspace_gradient_hardy(v, 5);
    EXPECT_TRUE(rep.passes()) << v.id() << " margin=" << rep.margin;
  }
}

TEST(HyperbolicLaplacianInHalfSpace, AlphaZeroIsTheLaplacianItself) {
  const auto suite = laplacian_transfer_polynomials<5>();
  for (const auto& [name, fn] : suite) {
    for (auto term : {MiddleTerm::corrected}) {
      const auto r = lemma71_check<5>(fn, 0.0, {0.3, -0.2, 0.5, 0.1}, 1.7, term);
      EXPECT_LT(r.residual, 1e-10) << name;
    }
  }
}

TEST(HyperbolicLaplacianInHalfSpace, CorrectedPowerOnPolynomial) {
  const auto suite = laplacian_transfer_polynomials<5>();
  for (const auto& [name, fn] : suite) {
    const auto r = lemma71_check<5>(fn, 1.5, {0.0, 0.0, 0.0, 0.0}, 2.0);
    EXPECT_LT(r.residual, 1e-10) << name;
  }
}

TEST(HyperbolicLaplacianInHalfSpace, LiteralPowerOnlyAgreesWhereTheMiddleTermVanishes) {
  const auto suite = laplacian_transfer_polynomials<5>();
  const auto& fn = suite.front().second;
  // 2 alpha = N - 2 kills the middle term, so both powers agree there.
  EXPECT_LT(lemma71_check<5>(fn, 1.5, {0.0, 0.0, 0.0, 0.0}, 2.0, MiddleTerm::literal).residual, 1e-10);
  const auto lit = lemma71_check<5>(fn, 0.0, {0.0, 0.0, 0.0, 0.0}, 2.0, MiddleTerm::literal);
  const auto cor = lemma71_check<5>(fn, 0.0, {0.0, 0.0, 0.0, 0.0}, 2.0, MiddleTerm::corrected);
  EXPECT_LT(cor.residual, 1e-10);
  EXPECT_GT(lit.residual, 1e-2);
  // v = x1^2 + y^3: the literal term is off by (N-2) y^alpha v_y (y - 1) = 3 * 12 at y = 2.
  EXPECT_NEAR(lit.formula - cor.formula, 36.0, 1e-10);
  EXPECT_THROW(lemma71_check<5>(fn, 0.0, {0.0, 0.0, 0.0, 0.0}, 0.0), DomainError);
}

TEST(HyperbolicLaplacianInHalfSpaceProperty, PolynomialSuite) {
  const auto cor5 = run_laplacian_transfer_suite<5>(MiddleTerm::corrected, laplacian_transfer_alphas(5));
  EXPECT_EQ(cor5.cases, 150u);
  EXPECT_TRUE(cor5.passes()) << cor5.max_residual;
  const auto lit5 = run_laplacian_transfer_suite<5>(MiddleTerm::literal, laplacian_transfer_alphas(5));
  EXPECT_FALSE(lit5.passes());
  EXPECT_GT(lit5.failures, 100u);
  for (const auto& r : {run_laplacian_transfer_suite<3>(MiddleTerm::corrected, {0.0, -0.5, 1.0}),
                        run_laplacian_transfer_suite<7>(MiddleTerm::corrected, laplacian_transfer_alphas(7))})
    EXPECT_TRUE(r.passes()) << r.max_residual;
}
