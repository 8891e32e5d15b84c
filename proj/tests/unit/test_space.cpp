#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "sparsegreedy.hpp"

namespace sg = sparsegreedy;

namespace {

sg::Vector vec(std::initializer_list<double> xs) {
  sg::Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(SpaceSpec, RejectsExponentBelowTwo) {
  EXPECT_THROW(sg::SpaceSpec::make(3, 1.5), std::invalid_argument);
  EXPECT_THROW(sg::SpaceSpec::make(0, 2.0), std::invalid_argument);
  EXPECT_NO_THROW(sg::SpaceSpec::make(1, 2.0));
}

TEST(SpaceSpec, GammaIsHalfOfPMinusOne) {
  EXPECT_DOUBLE_EQ(sg::smoothness_gamma(sg::SpaceSpec::make(3, 2.0)), 0.5);
  EXPECT_DOUBLE_EQ(sg::smoothness_gamma(sg::SpaceSpec::make(3, 4.0)), 1.5);
  const auto s = sg::SpaceSpec::make(5, 2.0);
  EXPECT_EQ(sg::smoothness_gamma(s), sg::smoothness_gamma(s));
}

TEST(LpNorm, Examples) {
  EXPECT_EQ(sg::lp_norm(vec({0, 0, 0}), sg::SpaceSpec::make(3, 2.0)), 0.0);
  EXPECT_NEAR(sg::lp_norm(vec({3, 4}), sg::SpaceSpec::make(2, 2.0)), 5.0, 1e-15);
  EXPECT_NEAR(sg::lp_norm(vec({1, 1, 1, 1}), sg::SpaceSpec::make(4, 4.0)), std::pow(4.0, 0.25), 1e-15);
}

TEST(LpNorm, DimensionMismatch) {
  EXPECT_THROW(sg::lp_norm(vec({1, 2}), sg::SpaceSpec::make(3, 2.0)), sg::DimensionMismatch);
}

TEST(LpNorm, MatchesNaiveLoop) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const double p = gen::exponent(rng);
    const auto f = gen::gaussian_vector(7, rng);
    EXPECT_NEAR(sg::lp_norm(f, sg::SpaceSpec::make(7, p)), gen::naive_lp(f, p), 1e-12);
  }
}

TEST(LpNorm, SurvivesLargeEntries) {
  const auto f = vec({1e200, 1e200});
  EXPECT_NEAR(sg::lp_norm(f, sg::SpaceSpec::make(2, 4.0)) / 1e200, std::pow(2.0, 0.25), 1e-14);
}

TEST(NormingFunctional, Examples) {
  const auto s2 = sg::SpaceSpec::make(2, 2.0);
  auto F = sg::norming_functional(vec({2, 0}), s2);
  EXPECT_NEAR(F.weights()[0], 1.0, 1e-15);
  EXPECT_NEAR(F.weights()[1], 0.0, 1e-15);

  F = sg::norming_functional(vec({1, -1}), s2);
  EXPECT_NEAR(F.weights()[0], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(F.weights()[1], -1.0 / std::sqrt(2.0), 1e-15);

  const auto s4 = sg::SpaceSpec::make(2, 4.0);
  const auto f = vec({1, 2});
  F = sg::norming_functional(f, s4);
  const double n3 = std::pow(17.0, 0.75);
  EXPECT_NEAR(F.weights()[0], 1.0 / n3, 1e-14);
  EXPECT_NEAR(F.weights()[1], 8.0 / n3, 1e-14);
  EXPECT_NEAR(F(f), std::pow(17.0, 0.25), 1e-12);
  EXPECT_NEAR(gen::naive_lp(F.weights(), 4.0 / 3.0), 1.0, 1e-12);
}

TEST(NormingFunctional, RejectsZero) {
  EXPECT_THROW(sg::norming_functional(vec({0, 0}), sg::SpaceSpec::make(2, 3.0)), std::invalid_argument);
}

TEST(NormingFunctionalProperty, PeakAndUnitDualNorm) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(dim(rng));
    const double p = gen::exponent(rng);
    const auto space = sg::SpaceSpec::make(n, p);
    auto f = gen::gaussian_vector(n, rng);
    if (trial % 7 == 0) f[0] = 0.0;  // exercise sign(0) = 0
    if (f.isZero(0.0)) continue;
    const auto F = sg::norming_functional(f, space);
    EXPECT_NEAR(F(f), sg::lp_norm(f, space), 1e-10 * std::max(1.0, sg::lp_norm(f, space)));
    EXPECT_NEAR(gen::naive_lp(F.weights(), p / (p - 1.0)), 1.0, 1e-10);
    EXPECT_NEAR(F.dual_norm(), 1.0, 1e-10);
  }
}

TEST(NormingFunctionalProperty, HolderBound) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const double p = gen::exponent(rng);
    const auto space = sg::SpaceSpec::make(6, p);
    const auto f = gen::gaussian_vector(6, rng);
    const auto g = gen::gaussian_vector(6, rng);
    EXPECT_LE(std::abs(sg::norming_functional(f, space)(g)), sg::lp_norm(g, space) + 1e-10);
  }
}

TEST(NormingFunctionalProperty, HilbertReduction) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = gen::gaussian_vector(9, rng);
    const auto w = sg::norming_functional(f, sg::SpaceSpec::make(9, 2.0)).weights();
    const sg::Vector expected = f / f.norm();
    for (Eigen::Index i = 0; i < 9; ++i) EXPECT_NEAR(w[i], expected[i], 1e-12);
  }
}

TEST(NormalizeDictionary, Examples) {
  const auto id = sg::normalize_dictionary(sg::Matrix::Identity(3, 3), sg::SpaceSpec::make(3, 5.0));
  EXPECT_TRUE(id.atoms().isApprox(sg::Matrix::Identity(3, 3), 0.0));

  sg::Matrix raw(2, 1);
  raw << 3, 4;
  auto d = sg::normalize_dictionary(raw, sg::SpaceSpec::make(2, 2.0));
  EXPECT_NEAR(d.atoms()(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(d.atoms()(1, 0), 0.8, 1e-15);

  raw << 1, 1;
  d = sg::normalize_dictionary(raw, sg::SpaceSpec::make(2, 4.0));
  EXPECT_NEAR(d.atoms()(0, 0), std::pow(2.0, -0.25), 1e-15);
  EXPECT_NEAR(d.atoms()(1, 0), std::pow(2.0, -0.25), 1e-15);
}

TEST(NormalizeDictionary, ReportsZeroColumnIndex) {
  sg::Matrix raw = sg::Matrix::Identity(3, 3);
  raw.col(1).setZero();
  try {
    sg::normalize_dictionary(raw, sg::SpaceSpec::make(3, 2.0));
    FAIL() << "expected throw";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find('1'), std::string::npos) << e.what();
  }
}

TEST(NormalizeDictionary, PreservesOrderAndUnitNorms) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const double p = gen::exponent(rng);
    sg::Matrix raw(5, 8);
    for (Eigen::Index j = 0; j < 8; ++j) raw.col(j) = gen::gaussian_vector(5, rng);
    const auto d = sg::normalize_dictionary(raw, sg::SpaceSpec::make(5, p));
    for (Eigen::Index j = 0; j < 8; ++j) {
      EXPECT_NEAR(gen::naive_lp(d.atoms().col(j), p), 1.0, 1e-12);
      const sg::Vector scaled = raw.col(j) / gen::naive_lp(raw.col(j), p);
      EXPECT_TRUE(d.atoms().col(j).isApprox(scaled, 1e-12));
    }
  }
}

TEST(Dictionary, FromNormalizedRejectsBadColumns) {
  const auto space = sg::SpaceSpec::make(2, 2.0);
  sg::Matrix m(2, 2);
  m << 1, 0.5, 0, 0.5;
  EXPECT_THROW(sg::Dictionary::from_normalized(m, space), std::invalid_argument);
  m << 1, 1, 0, 0;
  EXPECT_THROW(sg::Dictionary::from_normalized(m, space), std::invalid_argument);
  m << 1, 0, 0, 1;
  EXPECT_NO_THROW(sg::Dictionary::from_normalized(m, space));
}

TEST(Dictionary, FunctionalsRepresentEachAtom) {
  std::mt19937_64 rng(8);
  const auto d = gen::gaussian_dict(6, 10, 3.0, rng);
  for (std::size_t j = 0; j < d.size(); ++j) {
    const sg::Vector g = d.atom(j);
    const auto F = sg::norming_functional(g, d.space());
    EXPECT_TRUE(d.functionals().col(static_cast<Eigen::Index>(j)).isApprox(F.weights(), 1e-13));
  }
}
