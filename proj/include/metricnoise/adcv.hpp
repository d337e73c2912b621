#pragma once

// Pairwise distance matrices, U-centering and the auto-distance covariance
// V_n(k) of an object series.
//
// Conventions (0-based): for lag k and m = n - k the "a" block is
// D[k..n-1, k..n-1] (current observations) and the "b" block is
// D[0..m-1, 0..m-1] (lagged observations), so entry (i, j) of both blocks
// refers to the pair Z_{k+i} = (X_{k+i}, X_i).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "metricnoise/error.hpp"
#include "metricnoise/linalg.hpp"
#include "metricnoise/objects.hpp"
#include "metricnoise/parallel.hpp"

namespace metricnoise {

/// Symmetric, nonnegative, zero-diagonal matrix of pairwise distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  explicit DistanceMatrix(Matrix d) : d_(std::move(d)) {
    if (d_.rows() != d_.cols()) throw InvalidArgument("distance matrix must be square");
    const Eigen::Index n = d_.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (d_(j, j) != 0.0) throw InvalidArgument("distance matrix diagonal must be zero");
      for (Eigen::Index i = 0; i < n; ++i) {
        const double v = d_(i, j);
        if (!std::isfinite(v) || v < 0.0) {
          throw InvalidArgument("distance matrix entries must be finite and nonnegative");
        }
        if (v != d_(j, i)) throw InvalidArgument("distance matrix must be symmetric");
      }
    }
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(d_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return d_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Matrix& matrix() const noexcept { return d_; }

  /// Block of current observations for lag k.
  auto a_block(std::size_t k) const {
    const auto m = static_cast<Eigen::Index>(size() - k);
    const auto kk = static_cast<Eigen::Index>(k);
    return d_.block(kk, kk, m, m);
  }

  /// Block of lagged observations for lag k.
  auto b_block(std::size_t k) const {
    const auto m = static_cast<Eigen::Index>(size() - k);
    return d_.block(0, 0, m, m);
  }

  /// True when every pairwise distance is zero (all objects equal).
  bool degenerate() const { return size() == 0 || (d_.array() == 0.0).all(); }

  /// D[tau(i), tau(j)].
  Matrix permuted(std::span<const std::size_t> tau) const {
    const auto n = d_.rows();
    Matrix out(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto tj = static_cast<Eigen::Index>(tau[static_cast<std::size_t>(j)]);
      for (Eigen::Index i = 0; i < n; ++i) {
        out(i, j) = d_(static_cast<Eigen::Index>(tau[static_cast<std::size_t>(i)]), tj);
      }
    }
    return out;
  }

 private:
  Matrix d_;
};

namespace detail {

template <class Obj>
DistanceMatrix pairwise(const std::vector<Obj>& objs, MetricKind metric, std::size_t threads) {
  const std::size_t n = objs.size();
  if (n == 0) throw InvalidArgument("pairwise_distances: empty series");
  const MetricContext ctx = make_context(objs.front(), metric);
  std::vector<Prepared> prep(n);
  parallel_for(n, threads, [&](std::size_t i) {
    try {
      prep[i] = prepare(objs[i], ctx);
    } catch (const Error& e) {
      throw PairError(i, i, e.what());
    }
  });
  Matrix d = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.0;
      try {
        v = prepared_distance(prep[i], prep[j], ctx);
      } catch (const Error& e) {
        throw PairError(i, j, e.what());
      }
      if (!std::isfinite(v) || v < 0.0) throw PairError(i, j, "non-finite or negative distance");
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  });
  return DistanceMatrix(std::move(d));
}

}  // namespace detail

/// All pairwise distances d(X_i, X_j), computed once per series.
inline DistanceMatrix pairwise_distances(const ObjectSeries& series, MetricKind metric,
                                         std::size_t threads = 1) {
  return std::visit([&](const auto& objs) { return detail::pairwise(objs, metric, threads); },
                    series);
}

/// U-centred m x m matrix; zero diagonal, zero off-diagonal row sums.
struct UCentered {
  std::size_t m = 0;
  Matrix values;
};

/// U-centering with denominators m-2 and (m-1)(m-2). Row and column sums
/// are precomputed, so the cost is O(m^2).
template <class Derived>
UCentered u_center(const Eigen::MatrixBase<Derived>& block) {
  const Eigen::Index m = block.rows();
  if (block.cols() != m) throw InvalidArgument("u_center: block must be square");
  if (m < 4) throw InvalidArgument("u_center: block size must be at least 4");
  const Vector rows = block.rowwise().sum();
  const Eigen::RowVectorXd cols = block.colwise().sum();
  const double total = rows.sum() - block.diagonal().sum();
  const double md = static_cast<double>(m);
  const double inv_m2 = 1.0 / (md - 2.0);
  const double grand = total / ((md - 1.0) * (md - 2.0));
  UCentered out{static_cast<std::size_t>(m), Matrix(m, m)};
  for (Eigen::Index j = 0; j < m; ++j) {
    const double cj = cols(j) * inv_m2;
    for (Eigen::Index i = 0; i < m; ++i) {
      out.values(i, j) = block(i, j) - rows(i) * inv_m2 - cj + grand;
    }
    out.values(j, j) = 0.0;
  }
  return out;
}

/// Sample ADCVs V_n(1..K_max) and the sample size that produced them.
struct AdcvSequence {
  std::size_t n = 0;
  std::vector<double> v;  // v[k-1] = V_n(k)

  std::size_t max_lag() const noexcept { return v.size(); }
};

namespace detail {
inline void check_lag(std::size_t n, std::size_t k, const char* who) {
  if (n < 5 || k < 1 || k > n - 4) {
    throw InvalidArgument(std::string(who) + ": lag " + std::to_string(k) +
                          " outside [1, n-4] for n = " + std::to_string(n));
  }
}
}  // namespace detail

/// Elementwise product of the two U-centred blocks at lag k. This matrix is
/// the fixed kernel the wild bootstrap reweights.
inline Matrix lag_product(const DistanceMatrix& d, std::size_t k) {
  detail::check_lag(d.size(), k, "lag_product");
  const UCentered a = u_center(d.a_block(k));
  const UCentered b = u_center(d.b_block(k));
  return a.values.cwiseProduct(b.values);
}

inline double adcv_normaliser(std::size_t m) {
  const double md = static_cast<double>(m);
  return 1.0 / (md * (md - 3.0));
}

inline double adcv_at_lag(const DistanceMatrix& d, std::size_t k) {
  detail::check_lag(d.size(), k, "adcv_at_lag");
  const UCentered a = u_center(d.a_block(k));
  const UCentered b = u_center(d.b_block(k));
  return a.values.cwiseProduct(b.values).sum() * adcv_normaliser(d.size() - k);
}

inline AdcvSequence adcv_all(const DistanceMatrix& d, std::size_t max_lag,
                             std::size_t threads = 1) {
  const std::size_t n = d.size();
  if (n < 5 || max_lag < 1 || max_lag > n - 4) {
    throw InvalidArgument("adcv_all: K_max " + std::to_string(max_lag) +
                          " outside [1, n-4] for n = " + std::to_string(n));
  }
  AdcvSequence out{n, std::vector<double>(max_lag)};
  parallel_for(max_lag, threads, [&](std::size_t i) { out.v[i] = adcv_at_lag(d, i + 1); });
  return out;
}

/// Brute-force fourth-order U-statistic: the average of the symmetrised
/// kernel h over every 4-subset of {Z_k, ..., Z_{n-1}}. O(m^4); test oracle.
inline double adcv_oracle(const DistanceMatrix& d, std::size_t k) {
  detail::check_lag(d.size(), k, "adcv_oracle");
  const std::size_t n = d.size();
  const std::size_t m = n - k;
  if (m > 24) throw InvalidArgument("adcv_oracle: n - k must not exceed 24");
  auto dx = [&](std::size_t u, std::size_t v) { return d(u, v); };
  auto dy = [&](std::size_t u, std::size_t v) { return d(u - k, v - k); };

  double total = 0.0;
  std::size_t subsets = 0;
  for (std::size_t i = k; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t q = j + 1; q < n; ++q)
        for (std::size_t r = q + 1; r < n; ++r) {
          std::array<std::size_t, 4> idx{i, j, q, r};
          double h = 0.0;
          do {
            const auto [i1, i2, i3, i4] = idx;
            h += dx(i1, i2) * (dy(i3, i4) + dy(i1, i2) - 2.0 * dy(i1, i3));
          } while (std::next_permutation(idx.begin(), idx.end()));
          total += h / 24.0;
          ++subsets;
        }
  return total / static_cast<double>(subsets);
}

/// V_n(1..max_lag) of an arbitrary zero-diagonal distance matrix through the
/// expanded form of sum_{i != j} a~_ij b~_ij:
///   sum a_ij b_ij - 2/(m-2) sum_i r^a_i r^b_i + S^a S^b / ((m-1)(m-2)),
/// with block row sums r and block totals S updated incrementally across
/// lags. Algebraically identical to adcv_all but O(m^2) multiply-adds per lag
/// with no temporaries; used for permutation draws.
inline std::vector<double> adcv_all_expanded(const Matrix& d, std::size_t max_lag) {
  const Eigen::Index n = d.rows();
  Vector ra = d.rowwise().sum();
  Vector rb = ra;
  std::vector<double> out(max_lag);
  for (std::size_t kk = 1; kk <= max_lag; ++kk) {
    const auto k = static_cast<Eigen::Index>(kk);
    const Eigen::Index m = n - k;
    ra -= d.col(k - 1);
    rb -= d.col(n - k);
    const double sa = ra.tail(m).sum();
    const double sb = rb.head(m).sum();
    const double rr = ra.tail(m).dot(rb.head(m));
    double cross = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      cross += d.col(k + j).segment(k, m).dot(d.col(j).head(m));
    }
    const double md = static_cast<double>(m);
    const double s = cross - 2.0 / (md - 2.0) * rr + sa * sb / ((md - 1.0) * (md - 2.0));
    out[kk - 1] = s * adcv_normaliser(static_cast<std::size_t>(m));
  }
  return out;
}

}  // namespace metricnoise
