#include <gtest/gtest.h>

#include <numbers>

#include "helpers.hpp"

using std::numbers::pi;

namespace {

mn::AdcvSequence random_adcv(std::size_t n, std::size_t kmax, std::uint64_t seed) {
  auto x = testutil::normals(kmax, seed, 31);
  for (std::size_t k = 0; k < kmax; ++k) x[k] *= 0.05 / std::sqrt(static_cast<double>(k + 1));
  return mn::AdcvSequence{n, x};
}

double quadrature_cvm(const mn::AdcvSequence& v, std::size_t points) {
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) grid[i] = pi * static_cast<double>(i) / static_cast<double>(points - 1);
  const auto s = mn::sn_process(v, grid);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < points; ++i) {
    acc += 0.5 * (grid[i + 1] - grid[i]) * (s[i] * s[i] + s[i + 1] * s[i + 1]);
  }
  return acc;
}

}  // namespace

TEST(Psi, Examples) {
  for (std::size_t k = 1; k < 10; ++k) EXPECT_EQ(mn::psi(k, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(mn::psi(0, pi), 0.5);
  EXPECT_NEAR(mn::psi(2, pi / 4), 1.0 / (2 * pi), 1e-16);
  EXPECT_THROW(mn::psi(1, -0.1), mn::InvalidArgument);
  EXPECT_THROW(mn::psi(1, 3.2), mn::InvalidArgument);
}

TEST(SnProcess, ZeroAndSingleLag) {
  const std::vector<double> grid = mn::ks_grid(64);
  const mn::AdcvSequence zero{50, std::vector<double>(46, 0.0)};
  for (double s : mn::sn_process(zero, grid)) EXPECT_EQ(s, 0.0);
  mn::AdcvSequence one{50, std::vector<double>(46, 0.0)};
  one.v[0] = 0.3;
  const auto s = mn::sn_process(one, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(s[i], 49 * 0.3 * std::sin(grid[i]) / pi, 1e-14);
  }
}

TEST(SnProcess, MatchesNaiveDoubleLoop) {
  const auto v = random_adcv(80, 76, 1);
  const auto grid = mn::ks_grid(100);
  const auto s = mn::sn_process(v, grid);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= 76; ++k) {
      acc += static_cast<double>(80 - k) * v.v[k - 1] * std::sin(static_cast<double>(k) * grid[g]) /
             (static_cast<double>(k) * pi);
    }
    EXPECT_NEAR(s[g], acc, 1e-12);
  }
}

TEST(Cvm, Examples) {
  EXPECT_EQ(mn::cvm_statistic(mn::AdcvSequence{20, std::vector<double>(16, 0.0)}).value, 0.0);
  mn::AdcvSequence one{20, std::vector<double>(16, 0.0)};
  one.v[0] = 0.2;
  const double closed = mn::cvm_statistic(one).value;
  EXPECT_NEAR(closed, 19.0 * 19.0 * 0.04 / (2 * pi), 1e-14);
  EXPECT_NEAR(quadrature_cvm(one, 20001), closed, 1e-4 * closed);
}

TEST(Cvm, ClosedFormMatchesQuadrature) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto v = random_adcv(60, 56, seed);
    const double closed = mn::cvm_statistic(v).value;
    EXPECT_LE(std::abs(quadrature_cvm(v, 20001) - closed), 1e-4 * std::max(1.0, closed));
  }
}

TEST(Cvm, LagTruncationAdditivity) {
  auto v = random_adcv(40, 36, 3);
  mn::AdcvSequence trunc{40, std::vector<double>(v.v.begin(), v.v.begin() + 10)};
  auto padded = trunc;
  padded.v.resize(36, 0.0);
  EXPECT_EQ(mn::cvm_statistic(trunc).value, mn::cvm_statistic(padded).value);
}

TEST(Cvm, Scale) {
  auto v = random_adcv(40, 36, 4);
  auto w = v;
  for (double& x : w.v) x *= -3.0;
  EXPECT_NEAR(mn::cvm_statistic(w).value, 9.0 * mn::cvm_statistic(v).value, 1e-12);
  EXPECT_NEAR(mn::ks_statistic(w).value, 3.0 * mn::ks_statistic(v).value, 1e-12);
}

TEST(Ks, GridIsNestedPowerOfTwoPlusOne) {
  EXPECT_EQ(mn::ks_grid_points(512), 513u);
  EXPECT_EQ(mn::ks_grid_points(513), 513u);
  EXPECT_EQ(mn::ks_grid_points(2), 2u);
  EXPECT_EQ(mn::ks_grid_points(3), 3u);
  EXPECT_EQ(mn::ks_grid_points(100), 129u);
  const auto coarse = mn::ks_grid(64), fine = mn::ks_grid(128);
  ASSERT_EQ(fine.size(), 2 * coarse.size() - 1);
  for (std::size_t i = 0; i < coarse.size(); ++i) EXPECT_EQ(coarse[i], fine[2 * i]);
  EXPECT_EQ(coarse.front(), 0.0);
  EXPECT_EQ(coarse.back(), pi);
}

TEST(Ks, Examples) {
  EXPECT_EQ(mn::ks_statistic(mn::AdcvSequence{20, std::vector<double>(16, 0.0)}).value, 0.0);
  mn::AdcvSequence one{30, std::vector<double>(26, 0.0)};
  one.v[0] = 0.1;
  // pi/2 is a grid point of every nested grid with at least 3 points
  EXPECT_NEAR(mn::ks_statistic(one).value, 29 * 0.1 / pi, 1e-15);
}

TEST(Ks, RefinementNeverDecreases) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto v = random_adcv(50, 46, seed);
    double prev = 0.0;
    for (std::size_t g : {8u, 16u, 32u, 64u, 128u, 256u, 512u, 1024u}) {
      mn::SpectralConfig cfg;
      cfg.ks_grid_size = g;
      const double ks = mn::ks_statistic(v, cfg).value;
      EXPECT_GE(ks, prev);
      prev = ks;
    }
  }
}

TEST(SpectralBasis, MatchesSingleEvaluation) {
  const std::size_t n = 40, kmax = 36;
  mn::Matrix vstar(kmax, 5);
  std::vector<mn::AdcvSequence> cols;
  for (Eigen::Index b = 0; b < 5; ++b) {
    cols.push_back(random_adcv(n, kmax, 10 + static_cast<std::uint64_t>(b)));
    for (std::size_t k = 0; k < kmax; ++k) vstar(static_cast<Eigen::Index>(k), b) = cols.back().v[k];
  }
  const mn::SpectralBasis basis(kmax, 512);
  std::vector<double> cvm, ks;
  basis.statistics(vstar, n, cvm, ks);
  for (std::size_t b = 0; b < 5; ++b) {
    EXPECT_NEAR(cvm[b], mn::cvm_statistic(cols[b]).value, 1e-14);
    EXPECT_NEAR(ks[b], mn::ks_statistic(cols[b]).value, 1e-13);
  }
}

TEST(Statistics, Nonnegative) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto v = random_adcv(30, 26, seed);
    EXPECT_GE(mn::cvm_statistic(v).value, 0.0);
    EXPECT_GE(mn::ks_statistic(v).value, 0.0);
  }
}
