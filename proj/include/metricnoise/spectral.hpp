#pragma once

// The Psi_k basis, the partial-sum process S_n(zeta) and the CvM / KS
// statistics built from a sequence of ADCVs.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "metricnoise/adcv.hpp"
#include "metricnoise/error.hpp"
#include "metricnoise/linalg.hpp"

namespace metricnoise {

enum class StatisticKind { CvM, KS };

inline std::string_view to_string(StatisticKind k) { return k == StatisticKind::CvM ? "CvM" : "KS"; }

inline StatisticKind statistic_from_string(std::string_view s) {
  const std::string l = detail::lower(s);
  if (l == "cvm") return StatisticKind::CvM;
  if (l == "ks") return StatisticKind::KS;
  throw InvalidArgument("unknown statistic '" + std::string(s) + "'");
}

struct StatisticValue {
  StatisticKind kind = StatisticKind::CvM;
  double value = 0.0;
};

struct SpectralConfig {
  /// Requested number of KS grid points; rounded up to 2^j + 1.
  std::size_t ks_grid_size = 512;
  /// Largest lag; empty means n - 4.
  std::optional<std::size_t> max_lag;
};

inline double psi(std::size_t k, double zeta) {
  constexpr double pi = std::numbers::pi;
  if (!(zeta >= 0.0 && zeta <= pi)) throw InvalidArgument("psi: zeta outside [0, pi]");
  if (k == 0) return zeta / (2.0 * pi);
  const double kd = static_cast<double>(k);
  return std::sin(kd * zeta) / (kd * pi);
}

/// Number of KS grid points actually used: the smallest 2^j + 1 that is at
/// least `requested`. Grids of this form are nested under refinement.
inline std::size_t ks_grid_points(std::size_t requested) {
  if (requested < 2) throw InvalidArgument("ks_grid_size must be at least 2");
  std::size_t intervals = 1;
  while (intervals + 1 < requested) intervals *= 2;
  return intervals + 1;
}

/// Uniform grid on [0, pi] with both endpoints; point j is j * pi / (G - 1).
inline std::vector<double> ks_grid(std::size_t requested) {
  const std::size_t g = ks_grid_points(requested);
  const double intervals = static_cast<double>(g - 1);
  std::vector<double> z(g);
  for (std::size_t j = 0; j < g; ++j) {
    z[j] = std::numbers::pi * (static_cast<double>(j) / intervals);
  }
  z.back() = std::numbers::pi;
  return z;
}

/// Weighted ADCVs c_k = (n - k) V_n(k).
inline std::vector<double> weighted_adcv(const AdcvSequence& v) {
  std::vector<double> c(v.v.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = static_cast<double>(v.n - (i + 1)) * v.v[i];
  }
  return c;
}

inline std::vector<double> sn_process(const AdcvSequence& v, const std::vector<double>& grid) {
  const std::vector<double> c = weighted_adcv(v);
  std::vector<double> s(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) acc += c[i] * psi(i + 1, grid[g]);
    s[g] = acc;
  }
  return s;
}

/// ||Psi_k||^2 on [0, pi] = 1 / (2 pi k^2); the Psi_k are mutually orthogonal.
inline double psi_norm2(std::size_t k) {
  const double kd = static_cast<double>(k);
  return 1.0 / (2.0 * std::numbers::pi * kd * kd);
}

/// Integral of S_n^2 over [0, pi] in closed form: sum_k c_k^2 ||Psi_k||^2.
inline double cvm_from_weighted(const double* c, std::size_t count, std::ptrdiff_t stride = 1) {
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double ci = c[static_cast<std::ptrdiff_t>(i) * stride];
    acc += ci * ci * psi_norm2(i + 1);
  }
  return acc;
}

inline StatisticValue cvm_statistic(const AdcvSequence& v) {
  const std::vector<double> c = weighted_adcv(v);
  return {StatisticKind::CvM, cvm_from_weighted(c.data(), c.size())};
}

inline StatisticValue ks_statistic(const AdcvSequence& v, const SpectralConfig& cfg = {}) {
  const std::vector<double> s = sn_process(v, ks_grid(cfg.ks_grid_size));
  double best = 0.0;
  for (double x : s) best = std::max(best, std::abs(x));
  return {StatisticKind::KS, best};
}

/// Precomputed Psi_k(zeta_g) table for evaluating many ADCV vectors at once.
class SpectralBasis {
 public:
  SpectralBasis(std::size_t max_lag, std::size_t ks_grid_size)
      : grid_(ks_grid(ks_grid_size)),
        table_(static_cast<Eigen::Index>(grid_.size()), static_cast<Eigen::Index>(max_lag)) {
    for (Eigen::Index k = 0; k < table_.cols(); ++k) {
      for (Eigen::Index g = 0; g < table_.rows(); ++g) {
        table_(g, k) = psi(static_cast<std::size_t>(k + 1), grid_[static_cast<std::size_t>(g)]);
      }
    }
  }

  const std::vector<double>& grid() const noexcept { return grid_; }
  std::size_t max_lag() const noexcept { return static_cast<std::size_t>(table_.cols()); }

  /// Columns of `vstar` (K x B) are ADCV vectors of a size-n sample. Returns
  /// the CvM and KS statistic of every column.
  void statistics(const Matrix& vstar, std::size_t n, std::vector<double>& cvm,
                  std::vector<double>& ks) const {
    const Eigen::Index kmax = vstar.rows();
    if (kmax != table_.cols()) throw InvalidArgument("SpectralBasis: lag count mismatch");
    Matrix c = vstar;
    for (Eigen::Index k = 0; k < kmax; ++k) {
      c.row(k) *= static_cast<double>(n - static_cast<std::size_t>(k + 1));
    }
    const Eigen::Index b = vstar.cols();
    cvm.assign(static_cast<std::size_t>(b), 0.0);
    ks.assign(static_cast<std::size_t>(b), 0.0);
    for (Eigen::Index j = 0; j < b; ++j) {
      cvm[static_cast<std::size_t>(j)] =
          cvm_from_weighted(c.col(j).data(), static_cast<std::size_t>(kmax));
    }
    const Matrix s = table_ * c;
    for (Eigen::Index j = 0; j < b; ++j) {
      ks[static_cast<std::size_t>(j)] = s.col(j).cwiseAbs().maxCoeff();
    }
  }

 private:
  std::vector<double> grid_;
  Matrix table_;
};

}  // namespace metricnoise
