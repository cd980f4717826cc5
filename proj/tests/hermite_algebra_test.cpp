#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hermrank/hermite_algebra.hpp"
#include "test_support.hpp"

namespace hermrank {
namespace {

using testing::explicit_hermite;
using testing::random_poly;

TEST(HermiteToMonomial, LowOrderPolynomials) {
  EXPECT_EQ(hermite_to_monomial(HermitePoly::basis(0)), MonomialPoly({1}));
  EXPECT_EQ(hermite_to_monomial(HermitePoly::basis(2)), MonomialPoly({-1, 0, 1}));
  EXPECT_EQ(hermite_to_monomial(HermitePoly::basis(4)), MonomialPoly({3, 0, -6, 0, 1}));
}

TEST(HermiteToMonomial, MatchesExplicitSumAndProjection) {
  for (unsigned n = 0; n <= 20; ++n) {
    const MonomialPoly h = hermite_to_monomial(HermitePoly::basis(n));
    EXPECT_EQ(h, explicit_hermite(n)) << "n = " << n;
  }
  // H_4 recovered by Gaussian-moment projection of x^4 - 6x^2 + 3.
  EXPECT_EQ(testing::project_to_hermite(MonomialPoly({3, 0, -6, 0, 1})), HermitePoly::basis(4));
}

TEST(MonomialToHermite, SmallPowers) {
  EXPECT_EQ(monomial_to_hermite(MonomialPoly::basis(2)), HermitePoly({1, 0, 1}));
  EXPECT_EQ(monomial_to_hermite(MonomialPoly::basis(3)), HermitePoly({0, 3, 0, 1}));
  EXPECT_EQ(monomial_to_hermite(MonomialPoly({1})), HermitePoly::basis(0));
  EXPECT_TRUE(monomial_to_hermite(MonomialPoly{}).is_zero());
}

TEST(MonomialToHermite, AgreesWithGaussianProjection) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    const auto p = random_poly<MonomialBasis>(rng, 1 + t % 10);
    EXPECT_EQ(monomial_to_hermite(p), testing::project_to_hermite(p));
  }
}

TEST(BasisConversion, RoundTripIsIdentity) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_poly<HermiteBasis>(rng, t % 13);
    EXPECT_EQ(monomial_to_hermite(hermite_to_monomial(p)), p);
  }
}

TEST(Multiply, Linearization) {
  EXPECT_EQ(multiply(HermitePoly::basis(1), HermitePoly::basis(1)), HermitePoly({1, 0, 1}));
  EXPECT_EQ(multiply(HermitePoly::basis(2), HermitePoly::basis(2)), HermitePoly({2, 0, 4, 0, 1}));
  EXPECT_TRUE(multiply(HermitePoly{}, HermitePoly::basis(3)).is_zero());
}

TEST(Multiply, AgreesWithPowerBasisProduct) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_poly<HermiteBasis>(rng, t % 9);
    const auto b = random_poly<HermiteBasis>(rng, (t * 5) % 9);
    const auto expected =
        monomial_to_hermite(testing::naive_product(hermite_to_monomial(a), hermite_to_monomial(b)));
    EXPECT_EQ(multiply(a, b), expected);
  }
}

TEST(ClosedForms, SquareCoefficientsAndConstantTerm) {
  for (unsigned m = 1; m <= 8; ++m) {
    const HermitePoly sq = square_hermite(m);
    EXPECT_EQ(sq, multiply(HermitePoly::basis(m), HermitePoly::basis(m)));
    for (unsigned k = 0; k <= m; ++k) {
      const Integer b = binomial(m, k);
      EXPECT_EQ(sq.coeff(2 * m - 2 * k), Rational(factorial(k) * b * b));
    }
    EXPECT_EQ(sq.coeff(0), Rational(factorial(m)));
    // Coefficient of H_2 is (m-1)! m^2.
    EXPECT_EQ(sq.coeff(2), Rational(factorial(m - 1) * m * m));
  }
  EXPECT_EQ(square_hermite(2), HermitePoly({2, 0, 4, 0, 1}));
}

TEST(ClosedForms, CubeMatchesRepeatedMultiplication) {
  for (unsigned m = 1; m <= 8; ++m) {
    const HermitePoly h = HermitePoly::basis(m);
    EXPECT_EQ(cube_hermite(m), multiply(multiply(h, h), h)) << "m = " << m;
  }
  EXPECT_EQ(cube_hermite(3).coeff(1), Rational(324));
}

TEST(Compose, Examples) {
  EXPECT_EQ(compose(MonomialPoly::basis(2), HermitePoly::basis(2)), HermitePoly({2, 0, 4, 0, 1}));
  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_poly<HermiteBasis>(rng, 1 + t);
    EXPECT_EQ(compose(MonomialPoly::basis(1), p), p);
  }
}

TEST(Compose, CubeOfH3ProjectsTo324OnH1) {
  // (x^3 - 3x)^3 x has Gaussian mean E x^10 - 9 E x^8 + 27 E x^6 - 27 E x^4
  // = 945 - 945 + 405 - 81.
  const MonomialPoly h3({0, -3, 0, 1});
  const MonomialPoly cubed = testing::naive_product(testing::naive_product(h3, h3), h3);
  const Rational oracle = testing::hermite_projection(cubed, 1);
  EXPECT_EQ(oracle, Rational(945 - 945 + 405 - 81));
  EXPECT_EQ(compose(MonomialPoly::basis(3), HermitePoly::basis(3)).coeff(1), oracle);
}

TEST(Compose, DegreeIsProductOfDegrees) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 20; ++t) {
    const auto q = random_poly<MonomialBasis>(rng, 1 + t % 5);
    const auto p = random_poly<HermiteBasis>(rng, 1 + t % 4);
    EXPECT_EQ(compose(q, p).degree(), q.degree() * p.degree());
  }
}

TEST(Compose, DegreeCapIsEnforced) {
  EXPECT_THROW(compose(MonomialPoly::basis(9), HermitePoly::basis(8)), DegreeCapError);
  EXPECT_NO_THROW(compose(MonomialPoly::basis(8), HermitePoly::basis(8)));
  EXPECT_THROW(multiply(HermitePoly::basis(40), HermitePoly::basis(25)), DegreeCapError);
  EXPECT_NO_THROW(multiply(HermitePoly::basis(40), HermitePoly::basis(25), 80));
}

TEST(HermiteRank, Basics) {
  EXPECT_EQ(hermite_rank(HermitePoly::basis(3)), 3u);
  EXPECT_FALSE(hermite_rank(HermitePoly::constant(5)).has_value());
  EXPECT_FALSE(hermite_rank(HermitePoly{}).has_value());
  EXPECT_EQ(hermite_rank(HermitePoly({7, 0, 0, 2, 1})), 3u);
}

TEST(HermiteRank, OddCubesHaveRankOne) {
  for (unsigned m = 3; m <= 9; m += 2) {
    const auto c = compose(MonomialPoly::basis(3), HermitePoly::basis(m));
    EXPECT_EQ(hermite_rank(c), 1u) << "m = " << m;
    EXPECT_GT(c.coeff(1), 0);
  }
}

TEST(HermiteRank, EvenSquaresHaveRankTwo) {
  for (unsigned m = 4; m <= 10; m += 2)
    EXPECT_EQ(hermite_rank(compose(MonomialPoly::basis(2), HermitePoly::basis(m))), 2u) << "m = " << m;
}

TEST(HermiteRank, FunctionsOfXSquaredNeverHaveRankOne) {
  std::mt19937_64 rng(23);
  const HermitePoly x_squared = monomial_to_hermite(MonomialPoly::basis(2));
  for (int t = 0; t < 200; ++t) {
    const auto q = random_poly<MonomialBasis>(rng, 1 + t % 6);
    const auto r = hermite_rank(compose(q, x_squared));
    ASSERT_TRUE(r.has_value());
    EXPECT_GE(*r, 2u);
  }
}

TEST(GaussianMoments, Examples) {
  auto m = gaussian_moments(HermitePoly::basis(0));
  EXPECT_EQ(m.mean, 1);
  EXPECT_EQ(m.variance, 0);
  m = gaussian_moments(HermitePoly::basis(3));
  EXPECT_EQ(m.mean, 0);
  EXPECT_EQ(m.variance, 6);
  m = gaussian_moments(HermitePoly({0, 2, 1}));
  EXPECT_EQ(m.mean, 0);
  EXPECT_EQ(m.variance, 6);
}

TEST(GaussianMoments, AgreeWithExactMomentOracle) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 40; ++t) {
    const auto p = random_poly<HermiteBasis>(rng, t % 8);
    const MonomialPoly f = hermite_to_monomial(p);
    const Rational mean = testing::gaussian_expectation(f);
    const Rational second = testing::gaussian_expectation(testing::naive_product(f, f));
    const auto m = gaussian_moments(p);
    EXPECT_EQ(m.mean, mean);
    EXPECT_EQ(m.variance, second - mean * mean);
  }
}

// Monte Carlo estimate of Var p(Z) within 4 standard errors of the exact value.
void expect_variance_matches_monte_carlo(const HermitePoly& p, std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto coeffs = coefficients_as<double>(hermite_to_monomial(p));
  const double mean = static_cast<double>(gaussian_moments(p).mean);
  double s2 = 0, s4 = 0;
  for (int i = 0; i < samples; ++i) {
    const double z = normal(rng);
    double v = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) v = v * z + coeffs[k];
    const double d2 = (v - mean) * (v - mean);
    s2 += d2;
    s4 += d2 * d2;
  }
  s2 /= samples;
  s4 /= samples;
  const double se = std::sqrt((s4 - s2 * s2) / samples);
  const double exact = static_cast<double>(gaussian_moments(p).variance);
  EXPECT_NEAR(s2, exact, 4 * se) << p.to_string();
}

TEST(GaussianMoments, VarianceMatchesMonteCarlo) {
  expect_variance_matches_monte_carlo(HermitePoly({0, 2, 1}), 101, 1'000'000);
  expect_variance_matches_monte_carlo(compose(MonomialPoly({1, -1, 1}), HermitePoly({0, 1, Rational(1, 2)})), 103,
                                      1'000'000);
}

TEST(Polynomial, ToString) {
  EXPECT_EQ(HermitePoly({Rational(-1), Rational(1, 3), 2}).to_string(), "2*H2 + 1/3*H1 - 1");
  EXPECT_EQ(MonomialPoly({0, -3, 0, 1}).to_string(), "x^3 - 3*x");
  EXPECT_EQ(HermitePoly{}.to_string(), "0");
}

}  // namespace
}  // namespace hermrank
