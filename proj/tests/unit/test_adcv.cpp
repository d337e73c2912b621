#include <gtest/gtest.h>

#include "helpers.hpp"

using mn::Matrix;

namespace {

// u_center evaluated literally from its defining formula, with each sum
// recomputed per entry.
Matrix u_center_literal(const Matrix& a) {
  const Eigen::Index m = a.rows();
  const double md = static_cast<double>(m);
  Matrix out = Matrix::Zero(m, m);
  double total = 0.0;
  for (Eigen::Index s = 0; s < m; ++s)
    for (Eigen::Index t = 0; t < m; ++t)
      if (s != t) total += a(s, t);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i == j) continue;
      double ri = 0.0, cj = 0.0;
      for (Eigen::Index t = 0; t < m; ++t) {
        ri += a(i, t);
        cj += a(t, j);
      }
      out(i, j) = a(i, j) - ri / (md - 2) - cj / (md - 2) + total / ((md - 1) * (md - 2));
    }
  return out;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(PairwiseDistances, ScalarExample) {
  const auto d = testutil::scalar_distances({0, 1, 2});
  Matrix expect(3, 3);
  expect << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  EXPECT_EQ(d.matrix(), expect);
}

TEST(PairwiseDistances, ConstantSeriesGivesZeroMatrix) {
  const auto d = testutil::scalar_distances(std::vector<double>(9, 3.5));
  EXPECT_TRUE(d.degenerate());
  EXPECT_EQ(d.matrix().norm(), 0.0);
}

TEST(PairwiseDistances, MatchesElementwiseRecomputation) {
  std::vector<mn::VectorObject> objs;
  for (std::uint32_t i = 0; i < 10; ++i) objs.push_back({testutil::normals(2, 5, i)});
  const auto d = mn::pairwise_distances(objs, mn::MetricKind::VectorEuclidean, 3);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) {
      const double dx = objs[i].values[0] - objs[j].values[0];
      const double dy = objs[i].values[1] - objs[j].values[1];
      EXPECT_NEAR(d(i, j), std::sqrt(dx * dx + dy * dy), 1e-12);
    }
}

TEST(PairwiseDistances, ErrorNamesOffendingPair) {
  const std::vector<double> grid{0.0, 0.5, 1.0};
  std::vector<mn::CurveObject> objs(9, mn::CurveObject{grid, {0, 0, 0}});
  objs[6].grid = {0.0, 0.25, 1.0};
  try {
    mn::pairwise_distances(objs, mn::MetricKind::CurveL2);
    FAIL();
  } catch (const mn::PairError& e) {
    EXPECT_EQ(e.row(), 6u);
  }
}

TEST(PairwiseDistances, ThreadCountIndependent) {
  const auto x = testutil::normals(60, 8);
  const auto s = testutil::scalar_series(x);
  EXPECT_EQ(mn::pairwise_distances(s, mn::MetricKind::VectorEuclidean, 1).matrix(),
            mn::pairwise_distances(s, mn::MetricKind::VectorEuclidean, 4).matrix());
}

TEST(DistanceMatrix, RejectsInvalid) {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = 1;
  EXPECT_THROW(mn::DistanceMatrix{a}, mn::InvalidArgument);
  a(1, 0) = 1;
  a(2, 2) = 1e-300;
  EXPECT_THROW(mn::DistanceMatrix{a}, mn::InvalidArgument);
  a(2, 2) = 0;
  a(0, 2) = a(2, 0) = -1;
  EXPECT_THROW(mn::DistanceMatrix{a}, mn::InvalidArgument);
}

TEST(UCenter, ConstantOffDiagonalCentersToZero) {
  Matrix a = Matrix::Ones(4, 4);
  a.diagonal().setZero();
  EXPECT_LE(mn::u_center(a).values.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(UCenter, ScalarFivePointsMatchesFormula) {
  const auto d = testutil::scalar_distances({0, 1, 2, 3, 4});
  const auto u = mn::u_center(d.matrix());
  EXPECT_LE((u.values - u_center_literal(d.matrix())).cwiseAbs().maxCoeff(), 1e-14);
  for (Eigen::Index i = 0; i < 5; ++i) {
    EXPECT_EQ(u.values(i, i), 0.0);
    EXPECT_NEAR(u.values.row(i).sum(), 0.0, 1e-13);
    EXPECT_NEAR(u.values.col(i).sum(), 0.0, 1e-13);
  }
}

TEST(UCenter, MatchesLiteralFormulaOnRandomInputs) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Matrix a = testutil::random_dissimilarity(4 + seed % 12, seed);
    EXPECT_LE((mn::u_center(a).values - u_center_literal(a)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(UCenter, RejectsSmallBlocks) {
  EXPECT_THROW(mn::u_center(Matrix::Zero(3, 3)), mn::InvalidArgument);
}

TEST(Adcv, ConstantSeriesIsZero) {
  const auto d = testutil::scalar_distances(std::vector<double>(12, 1.0));
  const auto v = mn::adcv_all(d, 8);
  for (double x : v.v) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(mn::adcv_oracle(d, 3), 0.0);
}

TEST(Adcv, OracleN12Lag1) {
  const auto d = testutil::scalar_distances(testutil::normals(12, 21));
  const double oracle = mn::adcv_oracle(d, 1);
  EXPECT_LE(rel_err(mn::adcv_at_lag(d, 1), oracle), 1e-10);
}

TEST(Adcv, OracleSingleQuadruple) {
  const auto d = testutil::scalar_distances(testutil::normals(6, 22));
  // n = 6, k = 2 -> m = 4, a single 4-subset
  EXPECT_LE(rel_err(mn::adcv_at_lag(d, 2), mn::adcv_oracle(d, 2)), 1e-10);
}

TEST(Adcv, OracleEquivalenceAcrossSizes) {
  for (std::size_t m = 4; m <= 20; m += 2) {
    for (std::size_t k : {1u, 2u, 3u}) {
      const auto d = testutil::scalar_distances(testutil::normals(m + k, 100 + m, static_cast<std::uint32_t>(k)));
      const double oracle = mn::adcv_oracle(d, k);
      EXPECT_LE(rel_err(mn::adcv_at_lag(d, k), oracle), 1e-10) << "m=" << m << " k=" << k;
    }
  }
}

TEST(Adcv, OracleOnNonEuclideanDissimilarity) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const mn::DistanceMatrix d(testutil::random_dissimilarity(14, seed));
    for (std::size_t k : {1u, 4u}) {
      EXPECT_LE(rel_err(mn::adcv_at_lag(d, k), mn::adcv_oracle(d, k)), 1e-10);
    }
  }
}

TEST(Adcv, OracleGuard) {
  const auto d = testutil::scalar_distances(testutil::normals(30, 1));
  EXPECT_THROW(mn::adcv_oracle(d, 1), mn::InvalidArgument);
  EXPECT_NO_THROW(mn::adcv_oracle(d, 6));
}

TEST(Adcv, LagRange) {
  const auto d = testutil::scalar_distances(testutil::normals(10, 1));
  EXPECT_THROW(mn::adcv_at_lag(d, 0), mn::InvalidArgument);
  EXPECT_THROW(mn::adcv_at_lag(d, 7), mn::InvalidArgument);
  EXPECT_NO_THROW(mn::adcv_at_lag(d, 6));
  EXPECT_THROW(mn::adcv_all(d, 7), mn::InvalidArgument);
  EXPECT_EQ(mn::adcv_all(d, 6).v.size(), 6u);
}

TEST(Adcv, AllMatchesSingleLagCalls) {
  const auto d = testutil::scalar_distances(testutil::normals(40, 2));
  const auto v = mn::adcv_all(d, 36, 3);
  for (std::size_t k = 1; k <= 36; ++k) EXPECT_EQ(v.v[k - 1], mn::adcv_at_lag(d, k));
}

TEST(Adcv, SwappingBlockRolesLeavesValue) {
  const auto d = testutil::scalar_distances(testutil::normals(30, 3));
  const std::size_t k = 2;
  const auto a = mn::u_center(d.a_block(k)), b = mn::u_center(d.b_block(k));
  const double ab = a.values.cwiseProduct(b.values).sum();
  const double ba = b.values.cwiseProduct(a.values).sum();
  EXPECT_NEAR(ab * mn::adcv_normaliser(28), mn::adcv_at_lag(d, k), 1e-15);
  EXPECT_DOUBLE_EQ(ab, ba);
}

TEST(Adcv, ExpandedFormMatchesExplicitCentering) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const mn::DistanceMatrix d(testutil::random_dissimilarity(30, seed));
    const auto expanded = mn::adcv_all_expanded(d.matrix(), 26);
    for (std::size_t k = 1; k <= 26; ++k) {
      const double direct = mn::adcv_at_lag(d, k);
      EXPECT_NEAR(expanded[k - 1], direct, 1e-11 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST(AdcvProperties, ShiftInvarianceExact) {
  // dyadic data and shift: differences are computed without rounding
  std::vector<double> x(20);
  auto s = testutil::stream(4);
  for (double& v : x) v = static_cast<double>(s() % 1024) / 64.0;
  std::vector<double> y = x;
  for (double& v : y) v += 12.5;
  const auto dx = testutil::scalar_distances(x), dy = testutil::scalar_distances(y);
  EXPECT_EQ(dx.matrix(), dy.matrix());
  EXPECT_EQ(mn::adcv_all(dx, 16).v, mn::adcv_all(dy, 16).v);
}

TEST(AdcvProperties, ShiftInvarianceRandom) {
  const auto x = testutil::normals(25, 5);
  std::vector<double> y = x;
  for (double& v : y) v += 3.7;
  const auto vx = mn::adcv_all(testutil::scalar_distances(x), 21).v;
  const auto vy = mn::adcv_all(testutil::scalar_distances(y), 21).v;
  for (std::size_t i = 0; i < vx.size(); ++i) EXPECT_NEAR(vx[i], vy[i], 1e-12);
}

TEST(AdcvProperties, Reversal) {
  const auto x = testutil::normals(35, 6);
  std::vector<double> r(x.rbegin(), x.rend());
  const auto vx = mn::adcv_all(testutil::scalar_distances(x), 31).v;
  const auto vr = mn::adcv_all(testutil::scalar_distances(r), 31).v;
  for (std::size_t i = 0; i < vx.size(); ++i) {
    EXPECT_NEAR(vx[i], vr[i], 1e-12 * std::max(1.0, std::abs(vx[i])));
  }
}

TEST(AdcvProperties, ScaleEquivariance) {
  const Matrix a = testutil::random_dissimilarity(25, 9);
  const auto v1 = mn::adcv_all(mn::DistanceMatrix(a), 21).v;
  const auto v2 = mn::adcv_all(mn::DistanceMatrix(2.5 * a), 21).v;
  for (std::size_t i = 0; i < v1.size(); ++i) EXPECT_NEAR(v2[i], 6.25 * v1[i], 1e-12);
}
