#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "metricnoise/error.hpp"

namespace metricnoise {

/// Natural cubic interpolating spline (zero second derivative at both ends).
/// Stored per interval as y_i + b_i t + c_i t^2 + d_i t^3 with t = x - x_i, so
/// every knot is reproduced exactly.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw InvalidArgument("spline: need >= 2 matching knots");
    for (std::size_t i = 1; i < n; ++i) {
      if (!(x_[i] > x_[i - 1])) throw InvalidArgument("spline: knots must increase");
    }
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

    // Second derivatives M_i; M_0 = M_{n-1} = 0. Thomas algorithm.
    std::vector<double> m(n, 0.0);
    if (n > 2) {
      const std::size_t k = n - 2;
      std::vector<double> diag(k), upper(k), rhs(k);
      for (std::size_t r = 0; r < k; ++r) {
        const std::size_t i = r + 1;
        diag[r] = 2.0 * (h[i - 1] + h[i]);
        upper[r] = h[i];
        rhs[r] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
      }
      for (std::size_t r = 1; r < k; ++r) {
        const double f = h[r] / diag[r - 1];  // sub-diagonal entry of row r is h[r]
        diag[r] -= f * upper[r - 1];
        rhs[r] -= f * rhs[r - 1];
      }
      m[k] = rhs[k - 1] / diag[k - 1];
      for (std::size_t r = k - 1; r-- > 0;) m[r + 1] = (rhs[r] - upper[r] * m[r + 2]) / diag[r];
    }

    b_.resize(n - 1);
    c_.resize(n - 1);
    d_.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      b_[i] = (y_[i + 1] - y_[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
      c_[i] = m[i] / 2.0;
      d_[i] = (m[i + 1] - m[i]) / (6.0 * h[i]);
    }
  }

  double operator()(double x) const {
    if (x == x_.back()) return y_.back();
    const std::size_t i = interval(x);
    const double t = x - x_[i];
    return y_[i] + t * (b_[i] + t * (c_[i] + t * d_[i]));
  }

  double derivative(double x) const {
    const std::size_t i = interval(x);
    const double t = x - x_[i];
    return b_[i] + t * (2.0 * c_[i] + 3.0 * t * d_[i]);
  }

  double second_derivative(double x) const {
    const std::size_t i = interval(x);
    const double t = x - x_[i];
    return 2.0 * c_[i] + 6.0 * t * d_[i];
  }

  const std::vector<double>& knots() const noexcept { return x_; }
  const std::vector<double>& values() const noexcept { return y_; }

 private:
  std::size_t interval(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t idx = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(idx, x_.size() - 2);
  }

  std::vector<double> x_, y_, b_, c_, d_;
};

/// The spline g through (0,0), (0.33,0.2), (0.66,0.8), (1,1) that shapes the
/// transport-model noise maps.
inline const NaturalCubicSpline& spline_g() {
  static const NaturalCubicSpline g({0.0, 0.33, 0.66, 1.0}, {0.0, 0.2, 0.8, 1.0});
  return g;
}

}  // namespace metricnoise
