#pragma once

// Dense symmetric linear algebra needed by the SPD metrics. The
// eigendecomposition itself is delegated to Eigen's self-adjoint solver.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "metricnoise/error.hpp"

namespace metricnoise {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kSpdFloor = 1e-10;

struct SymEig {
  Vector values;   // descending
  Matrix vectors;  // columns are orthonormal eigenvectors
};

inline bool is_symmetric(const Matrix& a, double rel_tol = kSymmetryTolerance) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  return (a - a.transpose()).norm() <= rel_tol * scale;
}

inline SymEig sym_eig(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw InvalidArgument("sym_eig: matrix must be square and non-empty");
  }
  if (!a.allFinite()) throw InvalidArgument("sym_eig: non-finite entry");
  if (!is_symmetric(a)) throw InvalidArgument("sym_eig: matrix is not symmetric");
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("sym_eig: eigen solver did not converge");
  }
  const Eigen::Index p = a.rows();
  SymEig out{Vector(p), Matrix(p, p)};
  for (Eigen::Index i = 0; i < p; ++i) {
    out.values(i) = solver.eigenvalues()(p - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(p - 1 - i);
  }
  return out;
}

/// Throws NotSpd unless `a` is symmetric and lambda_min > floor * lambda_max.
inline SymEig require_spd(const Matrix& a, const char* who = "spd") {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw NotSpd(std::string(who) + ": matrix must be square and non-empty");
  }
  if (!a.allFinite()) throw NotSpd(std::string(who) + ": non-finite entry");
  if (!is_symmetric(a)) throw NotSpd(std::string(who) + ": matrix is not symmetric");
  SymEig e = sym_eig(a);
  const double top = e.values(0);
  const double bottom = e.values(e.values.size() - 1);
  if (!(top > 0.0) || !(bottom > kSpdFloor * top)) {
    throw NotSpd(std::string(who) + ": smallest eigenvalue below SPD floor");
  }
  return e;
}

/// V f(Lambda) V^T for a precomputed decomposition.
template <class F>
Matrix apply_spectral(const SymEig& e, F&& f) {
  Vector mapped = e.values.unaryExpr(f);
  Matrix out = e.vectors * mapped.asDiagonal() * e.vectors.transpose();
  return 0.5 * (out + out.transpose());
}

inline Matrix matrix_log(const Matrix& a) {
  return apply_spectral(require_spd(a, "matrix_log"), [](double x) { return std::log(x); });
}

inline Matrix matrix_sqrt(const Matrix& a) {
  return apply_spectral(require_spd(a, "matrix_sqrt"), [](double x) { return std::sqrt(x); });
}

inline Matrix matrix_inv_sqrt(const Matrix& a) {
  return apply_spectral(require_spd(a, "matrix_inv_sqrt"),
                        [](double x) { return 1.0 / std::sqrt(x); });
}

/// Exponential of a symmetric matrix.
inline Matrix matrix_exp_sym(const Matrix& a) {
  return apply_spectral(sym_eig(a), [](double x) { return std::exp(x); });
}

/// Lower Cholesky factor with positive diagonal.
inline Matrix cholesky_lower(const Matrix& a) {
  require_spd(a, "cholesky_lower");
  Eigen::LLT<Matrix> llt(0.5 * (a + a.transpose()));
  if (llt.info() != Eigen::Success) throw NotSpd("cholesky_lower: factorization failed");
  return llt.matrixL();
}

}  // namespace metricnoise
