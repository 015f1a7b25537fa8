#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "hyperhardy/rellich.hpp"

using namespace hyperhardy;

namespace {

double oracle(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

}  // namespace

TEST(ModeEigenvalue, Examples) {
  EXPECT_EQ(mode_eigenvalue(0, 5), 0);
  EXPECT_EQ(mode_eigenvalue(0, 9), 0);
  EXPECT_EQ(mode_eigenvalue(1, 5), 4);
  EXPECT_EQ(mode_eigenvalue(2, 5), 10);
  EXPECT_THROW(mode_eigenvalue(-1, 5), DomainError);
}

TEST(ModeMultiplicity, Examples) {
  EXPECT_EQ(mode_multiplicity(0, 7), 1);
  EXPECT_EQ(mode_multiplicity(1, 7), 7);
  EXPECT_EQ(mode_multiplicity(2, 5), 14);
}

TEST(ModeMultiplicity, MatchesHarmonicPolynomialCount) {
  // S^2: 2n+1; S^1 has 2 harmonics per degree n >= 1.
  for (int n = 0; n < 20; ++n) EXPECT_EQ(mode_multiplicity(n, 3), 2 * n + 1);
  for (int n = 1; n < 20; ++n) EXPECT_EQ(mode_multiplicity(n, 2), 2);
}

TEST(ModeCoefficients, Examples) {
  EXPECT_EQ(coeff_A_exact(0, 5), 1);
  EXPECT_EQ(coeff_A_exact(0, 5), min_A_closed_form(5));
  EXPECT_EQ(coeff_B_exact(0, 5), 12);
  EXPECT_EQ(coeff_B_exact(0, 5), min_B_closed_form(5));
  EXPECT_EQ(coeff_A_exact(1, 5), 27);
  EXPECT_DOUBLE_EQ(coeff_A(1, 5), 27.0);
  EXPECT_THROW(coeff_A(0, 4), DomainError);
  EXPECT_THROW(coeff_B(0, 3), DomainError);
}

TEST(ModeCoefficientsProperty, MinimaAtZeroMatchClosedForms) {
  for (int N = 5; N <= 12; ++N) {
    const auto a = min_coeff_A(N, 50);
    const auto b = min_coeff_B(N, 50);
    EXPECT_EQ(a.value, min_A_closed_form(N)) << "N=" << N;
    EXPECT_EQ(b.value, min_B_closed_form(N)) << "N=" << N;
    EXPECT_EQ(a.argmin, 0);
    EXPECT_EQ(b.argmin, 0);
    for (int n = 0; n <= 50; ++n) {
      const auto m = mode_coefficients(n, N);
      EXPECT_GT(m.A_n, 0);
      EXPECT_GT(m.B_n, 0);
      EXPECT_EQ(m.lambda_n, static_cast<long>(n) * n + static_cast<long>(N - 2) * n);
    }
  }
}

TEST(JointSharpnessIdentity, Examples) {
  const auto five = verify_remark31_identity(5);
  EXPECT_TRUE(five.holds);
  EXPECT_EQ(five.lhs, 25);
  const auto six = verify_remark31_identity(6);
  EXPECT_TRUE(six.holds);
  EXPECT_EQ(six.rhs, 144);
  const auto four = verify_remark31_identity(4);
  EXPECT_TRUE(four.holds);
  EXPECT_FALSE(four.in_range);
  EXPECT_EQ(four.lhs, 0);
}

TEST(JointSharpnessIdentityProperty, HoldsForN5To50) {
  for (int N = 5; N <= 50; ++N) {
    EXPECT_TRUE(verify_remark31_identity(N).holds) << N;
    // 9/16 + min A_n equals the Euclidean Rellich constant N^2 (N-4)^2 / 16.
    EXPECT_EQ(cpp_rational(9, 16) + min_A_closed_form(N), cpp_rational(N * N * (N - 4) * (N - 4), 16));
  }
}

TEST(SinhHardy, QuinticBumpMatchesOracle) {
  const auto u = bump(1.0, 3.0);
  const auto rep = check_lemma61(u);
  auto s = [](double r) { return std::sinh(r); };
  const double lhs = oracle([&](double r) { return u.d1(r) * u.d1(r) / (s(r) * s(r)); }, 1.0, 3.0);
  const double rhs = oracle(
      [&](double r) {
        const double w = 1.0 / (s(r) * s(r));
        return u.value(r) * u.value(r) * (2.25 * w * w + w);
      },
      1.0, 3.0);
  EXPECT_NEAR(rep.lhs, lhs, 1e-10 * lhs);
  EXPECT_NEAR(rep.rhs, rhs, 1e-10 * rhs);
  EXPECT_GT(rep.margin, 0.0);
}

TEST(SinhHardy, ZeroFunctionHasZeroMargin) {
  const auto z = RadialFunction::closed_form([](double) { return 0.0; }, [](double) { return 0.0; },
                                             [](double) { return 0.0; }, {0.5, 1.0}, "zero");
  EXPECT_EQ(check_lemma61(z).margin, 0.0);
}

TEST(SinhHardy, MarginEqualsProofSlack) {
  // u = w sinh r turns the margin into [int w'^2 - (1/4) int w^2/r^2] + (1/4) int w^2 (1/r^2 - 1/sinh^2).
  const auto w = modulated_bump(0.4, 2.2, 0.3, -0.1);
  const auto u = from_jet(
      [w](double r) {
        const double s = std::sinh(r), c = std::cosh(r);
        return Jet2{w.value(r) * s, w.d1(r) * s + w.value(r) * c, w.d2(r) * s + 2.0 * w.d1(r) * c + w.value(r) * s};
      },
      w.support(), "sinh*w");
  const double hardy_gap = oracle([&](double r) { return w.d1(r) * w.d1(r) - 0.25 * w.value(r) * w.value(r) / (r * r); },
                                  0.4, 2.2);
  const double sinh_gap = oracle(
      [&](double r) {
        const double s = std::sinh(r);
        return 0.25 * w.value(r) * w.value(r) * (1.0 / (r * r) - 1.0 / (s * s));
      },
      0.4, 2.2);
  const auto rep = check_lemma61(u);
  EXPECT_NEAR(rep.margin, hardy_gap + sinh_gap, 1e-9 * rep.lhs);
  EXPECT_GT(hardy_gap, 0.0);
  EXPECT_GT(sinh_gap, 0.0);
}

TEST(SinhHardy, RejectsSupportOutsideGrid) {
  EXPECT_THROW(check_lemma61(bump(1.0, 3.0), make_grid(0.5, 2.0, 64)), SupportError);
  EXPECT_NO_THROW(check_lemma61(bump(1.0, 3.0), make_grid(0.5, 4.0, 64)));
}

TEST(SinhHardyProperty, SeededBumps) {
  const BumpSampler sample{0.01, 10.0};
  std::mt19937_64 rng(61);
  for (int i = 0; i < 50; ++i) {
    const auto u = sample(rng);
    const auto rep = check_lemma61(u);
    EXPECT_TRUE(rep.passes()) << u.id() << " margin=" << rep.margin;
  }
}

TEST(ReducedForm, RadialModeMatchesBilaplacianForm) {
  const auto H = ModelManifold::hyperbolic(5);
  for (const auto& u : {bump(0.5, 2.0), modulated_bump(1.0, 4.0, 0.5, -0.25), bump(3.0, 3.5)}) {
    const double bil = bilaplacian_form(u, H, support_rule(u));
    EXPECT_NEAR(radial_reduced_form(liouville_transform(u, 5), 5, 0), bil, 1e-5 * bil) << u.id();
  }
}

TEST(ReducedForm, ZeroFunction) {
  const auto z = RadialFunction::closed_form([](double) { return 0.0; }, [](double) { return 0.0; },
                                             [](double) { return 0.0; }, {0.5, 1.0}, "zero");
  EXPECT_EQ(radial_reduced_form(z, 5, 0), 0.0);
  EXPECT_EQ(radial_reduced_form(z, 5, 3), 0.0);
}

TEST(ReducedForm, ModeOneAddsTheAngularTerms) {
  // With L0 the n = 0 integrand, the n = 1 form is int (L0 - lam d/sinh^2)^2.
  const int N = 5;
  const auto d = modulated_bump(0.6, 2.4, -0.4, 0.3);
  const double lam = 4.0;
  const double a = 2.0, b = 2.0;
  auto L0 = [&](double r) {
    const double c = 1.0 / std::tanh(r);
    return d.d2(r) - a * c * c * d.value(r) - b * d.value(r);
  };
  auto is2 = [](double r) { return 1.0 / (std::sinh(r) * std::sinh(r)); };
  const double cross = oracle([&](double r) { return -2.0 * lam * L0(r) * d.value(r) * is2(r); }, 0.6, 2.4);
  const double square = oracle([&](double r) { return lam * lam * d.value(r) * d.value(r) * is2(r) * is2(r); }, 0.6, 2.4);
  const double diff = radial_reduced_form(d, N, 1) - radial_reduced_form(d, N, 0);
  EXPECT_NEAR(diff, cross + square, 1e-8 * std::abs(square));
}

TEST(ReducedForm, SupportCheckedAgainstGrid) {
  EXPECT_THROW(radial_reduced_form(bump(0.5, 2.0), 5, 0, make_grid(1.0, 3.0, 64)), SupportError);
}

TEST(ModeChainProperty, HoldsForModesUpToFive) {
  const BumpSampler sample{0.01, 8.0};
  for (int N : {5, 6, 8}) {
    std::mt19937_64 rng(600 + N);
    for (int i = 0; i < 10; ++i) {
      const auto d = sample(rng);
      for (int n = 0; n <= 5; ++n) {
        const auto rep = check_mode_chain(d, N, n);
        EXPECT_TRUE(rep.passes()) << "N=" << N << " n=" << n << " " << d.id() << " margin=" << rep.margin;
      }
    }
  }
}

TEST(PoincareRellich, BumpNearOneHasPositiveMargin) {
  const auto rep = check_theorem31(bump(1.0, 2.0), 5);
  EXPECT_GT(rep.margin, 0.0);
  EXPECT_LT(rep.quad_error, 1e-8 * rep.lhs);
}

TEST(PoincareRellich, FarBumpDominatedByInverseSquareTerm) {
  const auto u = bump(10.0, 11.0);
  const auto rep = check_theorem31(u, 5);
  EXPECT_GT(rep.margin, 0.0);
  const auto H = ModelManifold::hyperbolic(5);
  const auto rule = support_rule(u);
  const double r2 = 2.0 * weighted_l2(u, [](double r) { return 1.0 / (r * r); }, H, rule);
  EXPECT_GT(r2, 0.95 * rep.rhs);
}

TEST(PoincareRellich, SmallBumpSeesEuclideanRellichWeight) {
  const auto u = bump(0.01, 0.02);
  const auto rep = check_theorem31(u, 5);
  const auto H = ModelManifold::hyperbolic(5);
  const double r4 = weighted_l2(u, [](double r) { return 1.0 / (r * r * r * r); }, H, support_rule(u));
  EXPECT_NEAR(rep.rhs / (25.0 / 16.0 * r4), 1.0, 1e-2);
  EXPECT_GT(rep.margin, 0.0);
}

TEST(PoincareRellich, RejectsLowDimension) { EXPECT_THROW(check_theorem31(bump(1.0, 2.0), 4), DomainError); }

TEST(PoincareRellichProperty, SeededBumps) {
  const BumpSampler sample{0.01, 12.0};
  for (int N : {5, 6, 8, 10}) {
    std::mt19937_64 rng(3100 + N);
    for (int i = 0; i < 50; ++i) {
      const auto u = sample(rng);
      const auto rep = check_theorem31(u, N);
      EXPECT_TRUE(rep.passes()) << "N=" << N << " " << u.id() << " margin=" << rep.margin << " lhs=" << rep.lhs;
    }
  }
}

TEST(SharpRellich, InverseSquareConstantAboveTwoAndNonincreasing) {
  double prev = std::numeric_limits<double>::infinity();
  for (double r_max : {15.0, 30.0, 60.0}) {
    const auto est = estimate_sharp_rellich_r2(5, 1e-3, r_max, 4096);
    EXPECT_GE(est.value, 2.0 - 1e-2);
    EXPECT_LE(est.value, prev);
    prev = est.value;
  }
}

TEST(SharpRellich, ApproachesTwoOnWideTruncation) {
  // The bottom decays like 2 + O(1/log(r_max)^2); at r_max = 1e6 it is below 2.6.
  const auto est = estimate_sharp_rellich_r2(5, 1e-3, 1e6, 16384);
  EXPECT_GE(est.value, 2.0 - 1e-2);
  EXPECT_LE(est.value, 2.6);
}

TEST(SharpRellich, N6AboveItsConstant) {
  EXPECT_GE(estimate_sharp_rellich_r2(6, 1e-3, 60.0, 4096).value, 25.0 / 8.0 - 1e-2);
}

TEST(SharpRellich, OneDimensionalAnchor) {
  const auto est = one_dimensional_rellich(1e-14, 1e14, 8192);
  EXPECT_NEAR(est.value, 9.0 / 16.0, 1e-2);
  EXPECT_GE(est.value, 9.0 / 16.0 - 1e-3);
}

TEST(SharpRellich, EuclideanRadialPencilN5) {
  const auto E = ModelManifold::euclidean(5);
  auto P = assemble_pencil(E, [](double) { return 0.0; }, [](double r) { return 1.0 / (r * r * r * r); },
                           make_grid(1e-10, 1e10, 8192, Grading::geometric), PencilOrder::fourth);
  EXPECT_NEAR(min_generalized_eigenvalue(P).value, 25.0 / 16.0, 5e-2);
}

TEST(LimitConstant, QuarterOnWideTruncation) {
  const auto est = prop66_limit_constant(1e-12, 1e12, 8192);
  EXPECT_NEAR(est.value, 0.25, 1e-2);
  EXPECT_NEAR(rellich_r2_upper_bound(5, est), 2.0, 8.0 * 1e-2);
}

TEST(LimitConstant, MatchesOneDimensionalHardyBottom) {
  const auto est = prop66_limit_constant(1e-4, 1e4, 8192);
  const double L = std::log(1e8);
  EXPECT_NEAR(est.value, 0.25 + std::numbers::pi * std::numbers::pi / (L * L), 1e-4);
}

TEST(LimitConstant, NonincreasingAsRminHalves) {
  double prev = std::numeric_limits<double>::infinity();
  for (double r_min = 1e-4; r_min > 1e-4 / 33.0; r_min *= 0.5) {
    const double v = prop66_limit_constant(r_min, 1e4, 4096).value;
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(LimitConstant, IndependentOfDimension) {
  const auto est = prop66_limit_constant(1e-6, 1e6, 2048);
  for (int N : {5, 6, 9}) EXPECT_DOUBLE_EQ(rellich_r2_upper_bound(N, est) / (0.5 * (N - 1) * (N - 1)), est.value);
}

TEST(AsymptoticConstants, Examples) {
  const auto a = asymptotic_constants(5);
  EXPECT_EQ(a.c1_power, cpp_rational(1, 12));
  EXPECT_NEAR(a.c1, std::cbrt(1.0 / 12.0), 1e-15);
  EXPECT_NEAR(a.c1, 0.43679, 1e-5);
  EXPECT_EQ(a.c2_over_c1, cpp_rational(8, 9));
  EXPECT_EQ(a.k1_exact, cpp_rational(-8, 9));
  EXPECT_EQ(a.k1_exact - 2 * a.c2_over_c1, cpp_rational(-8, 3));
  EXPECT_TRUE(a.consistent);
}

TEST(AsymptoticConstantsProperty, ConsistencyForAllDimensions) {
  for (int N = 5; N <= 30; ++N) {
    const auto a = asymptotic_constants(N);
    EXPECT_TRUE(a.consistent) << N;
    EXPECT_EQ(a.k1_exact, cpp_rational(-2 * (N - 1) * (N - 3), (N + 1) * (N - 2))) << N;
    EXPECT_NEAR(std::pow(a.c1, N - 2), static_cast<double>(a.c1_power), 1e-14);
  }
}

TEST(ChangeOfVariable, FlatAtThePole) {
  const double r = 1e-3;
  // Direct oracle: int_r^inf dsigma / sinh^4 by adaptive quadrature.
  const double I = oracle([](double x) { return std::pow(std::sinh(x), -4); }, r, 1.0) +
                   oracle([](double x) { return std::pow(std::sinh(x), -4); }, 1.0, 60.0);
  EXPECT_NEAR(s_of_r(5, r), std::pow(3.0 * I, -1.0 / 3.0), 1e-9 * r);
  EXPECT_NEAR(s_of_r(5, r) / r, 1.0, 1e-5);
}

TEST(ChangeOfVariable, LeadingExponentialAtTen) {
  const auto a = asymptotic_constants(5);
  const double s = s_of_r(5, 10.0);
  const double lead = a.c1 * std::exp(40.0 / 3.0);
  EXPECT_NEAR(s / lead - 1.0, -static_cast<double>(a.c2_over_c1) * std::exp(-20.0), 1e-12);
}

TEST(ChangeOfVariable, SeriesAndQuadratureAgreeAtThreshold) {
  for (int N : {5, 7}) {
    const double below = s_of_r(N, std::nextafter(2.0, 0.0));
    const double at = s_of_r(N, 2.0);
    EXPECT_NEAR(below, at, 1e-13 * at);
  }
}

TEST(ChangeOfVariableProperty, IncreasingAndSatisfiesTheOde) {
  const ChangeOfVariable cov(5);
  const auto& r = cov.r_table();
  const auto& s = cov.s_table();
  for (std::size_t i = 1; i < s.size(); ++i) ASSERT_GT(s[i], s[i - 1]);
  // ds/s^(N-1) = dr/sinh^(N-1) r between table points.
  for (std::size_t i = 1; i < s.size(); i += 256) {
    const double lhs = (std::pow(s[i - 1], -3) - std::pow(s[i], -3)) / 3.0;
    const double rhs = oracle([](double x) { return std::pow(std::sinh(x), -4); }, r[i - 1], r[i]);
    EXPECT_NEAR(lhs, rhs, 1e-6 * rhs) << "r=" << r[i];
  }
}

TEST(ChangeOfVariable, InversionRoundTrip) {
  const ChangeOfVariable cov(5);
  for (double r : {2e-4, 0.01, 0.5, 1.999, 2.0, 7.3, 39.0}) EXPECT_NEAR(cov.r(cov.s(r)), r, 1e-12 * r);
  EXPECT_THROW(cov.r(0.5 * cov.s_min()), RangeError);
  EXPECT_THROW(cov.r(2.0 * cov.s_max()), RangeError);
}

TEST(ChangeOfVariable, TwoTermExpansionErrorShrinks) {
  std::vector<double> ratios;
  for (double r : {8.0, 10.0, 12.0}) ratios.push_back(std::abs(expansion_residual(5, r)));
  EXPECT_LT(ratios[1], ratios[0]);
  EXPECT_LT(ratios[2], 0.5 * ratios[0]);
}

TEST(ChangeOfVariable, ExpansionResidualMatchesDirectDifferenceAtModerateR) {
  const auto a = asymptotic_constants(5);
  const double r = 3.0;
  const double direct = (s_of_r(5, r) - a.c1 * std::exp(a.mu * r) + a.c2 * std::exp(-a.nu * r)) / std::exp(-a.nu * r);
  EXPECT_NEAR(expansion_residual(5, r), direct, 1e-9);
}

TEST(ChangeOfVariableProperty, RhoCorrectionFitsK1) {
  std::vector<double> rs;
  for (double r = 8.0; r <= 12.0; r += 0.25) rs.push_back(r);
  for (int N : {5, 6, 8}) {
    const double k1 = asymptotic_constants(N).k1;
    EXPECT_NEAR(fit_k1(N, rs), k1, 0.05 * std::abs(k1)) << N;
  }
}

TEST(RellichInSVariable, BumpHasPositiveMargin) {
  const auto v = bump(2.0, 5.0);
  EXPECT_GT(check_prop63(v, 5).margin, 0.0);
}

TEST(RellichInSVariable, MatchesRadialFormUpToSinhTerms) {
  // The s-form keeps the first four terms of the radial inequality; the two
  // sinh terms are dropped from the right side.
  const int N = 5;
  auto cov = std::make_shared<const ChangeOfVariable>(N);
  const auto u = bump(1.0, 2.0);
  const auto v = compose_with_r_of_s(u, cov);
  const auto rs = check_prop63(v, *cov);
  const auto rr = check_theorem31(u, N);
  EXPECT_NEAR(rs.lhs, rr.lhs, 1e-4 * rr.lhs);
  const auto H = ModelManifold::hyperbolic(N);
  const auto rule = support_rule(u);
  const double s2 = weighted_l2(u, [&](double r) { return H.inverse_square(r); }, H, rule);
  const double s4 = weighted_l2(u, [&](double r) { return H.inverse_square(r) * H.inverse_square(r); }, H, rule);
  const double dropped = 12.0 * s2 + 1.0 * s4;
  EXPECT_NEAR(rs.margin, rr.margin + dropped, 1e-4 * rr.lhs);
}

TEST(RellichInSVariable, ZeroFunctionAndRange) {
  const auto z = RadialFunction::closed_form([](double) { return 0.0; }, [](double) { return 0.0; },
                                             [](double) { return 0.0; }, {1.0, 2.0}, "zero");
  const ChangeOfVariable cov(5);
  EXPECT_EQ(check_prop63(z, cov).margin, 0.0);
  EXPECT_THROW(check_prop63(bump(1e-6, 1e-5), cov), RangeError);
}

TEST(RellichInSVariableProperty, SeededBumps) {
  const ChangeOfVariable cov(6);
  const BumpSampler sample{1e-3, 1e6};
  std::mt19937_64 rng(69);
  for (int i = 0; i < 50; ++i) {
    const auto v = sample(rng);
    const auto rep = check_prop63(v, cov);
    EXPECT_TRUE(rep.passes()) << v.id() << " margin=" << rep.margin;
  }
}
