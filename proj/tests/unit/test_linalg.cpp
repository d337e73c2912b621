#include <gtest/gtest.h>

#include "helpers.hpp"

using mn::Matrix;

namespace {
double rel_fro(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }
}  // namespace

TEST(SymEig, DiagonalInput) {
  Matrix a(2, 2);
  a << 1, 0, 0, 3;
  const auto e = mn::sym_eig(a);
  EXPECT_DOUBLE_EQ(e.values(0), 3.0);
  EXPECT_DOUBLE_EQ(e.values(1), 1.0);
  EXPECT_NEAR(std::abs(e.vectors(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors(0, 1)), 1.0, 1e-15);
}

TEST(SymEig, IdentityHasUnitEigenvalues) {
  const auto e = mn::sym_eig(Matrix::Identity(4, 4));
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(e.values(i), 1.0);
}

TEST(SymEig, ReconstructionAndOrthonormality) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = testutil::stream(seed, 3);
    std::normal_distribution<double> nd;
    Matrix g(5, 5);
    for (Eigen::Index i = 0; i < 25; ++i) g.data()[i] = nd(s);
    const Matrix a = g + g.transpose();
    const auto e = mn::sym_eig(a);
    const Matrix recon = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LE((recon - a).norm(), 1e-9 * a.norm());
    EXPECT_LE((e.vectors.transpose() * e.vectors - Matrix::Identity(5, 5)).norm(), 1e-9);
    for (Eigen::Index i = 1; i < 5; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
  }
}

TEST(SymEig, RejectsNonSymmetric) {
  Matrix a(2, 2);
  a << 1, 2, 0, 1;
  EXPECT_THROW(mn::sym_eig(a), mn::InvalidArgument);
}

TEST(MatrixFunctions, Examples) {
  EXPECT_LE(mn::matrix_log(Matrix::Identity(3, 3)).norm(), 1e-15);
  EXPECT_LE(rel_fro(mn::matrix_sqrt(4.0 * Matrix::Identity(2, 2)), 2.0 * Matrix::Identity(2, 2)),
            1e-15);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4;
  d(1, 1) = 9;
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 2;
  expect(1, 1) = 3;
  EXPECT_LE(rel_fro(mn::cholesky_lower(d), expect), 1e-15);
}

TEST(MatrixFunctions, RoundTripsOnRandomSpd) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix a = testutil::random_spd(4, seed);
    EXPECT_LE(rel_fro(mn::matrix_exp_sym(mn::matrix_log(a)), a), 1e-9);
    const Matrix r = mn::matrix_sqrt(a);
    EXPECT_LE(rel_fro(r * r, a), 1e-9);
    const Matrix is = mn::matrix_inv_sqrt(a);
    EXPECT_LE(rel_fro(is * a * is, Matrix::Identity(4, 4)), 1e-9);
    const Matrix l = mn::cholesky_lower(a);
    EXPECT_LE(rel_fro(l * l.transpose(), a), 1e-9);
    for (Eigen::Index i = 0; i < 4; ++i) {
      EXPECT_GT(l(i, i), 0.0);
      for (Eigen::Index j = i + 1; j < 4; ++j) EXPECT_EQ(l(i, j), 0.0);
    }
  }
}

TEST(MatrixFunctions, SpdFloorRejects) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1e-12;
  EXPECT_THROW(mn::matrix_log(a), mn::NotSpd);
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  EXPECT_THROW(mn::cholesky_lower(neg), mn::NotSpd);
}
