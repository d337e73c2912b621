#pragma once

// Data-generating processes for the simulation studies: Euclidean series,
// functional series on a grid, conditional autoregressive Wishart matrices
// and autoregressive transport models of distributions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "metricnoise/error.hpp"
#include "metricnoise/linalg.hpp"
#include "metricnoise/objects.hpp"
#include "metricnoise/random.hpp"
#include "metricnoise/spline.hpp"

namespace metricnoise {

enum class DgpFamily {
  UnivIID,
  UnivNMA2,
  UnivARCH2,
  UnivTAR1,
  BivIID,
  BivNMA2,
  BivARCH2,
  BivMAR2,
  VAR1,
  FuncBM,
  FuncBB,
  FuncFARCH,
  FuncFNMA,
  FuncFAR,
  CAW,
  ATM,
};

enum class NoiseKind { BM, BB };
enum class FarKernel { Gaussian, Wiener };

inline constexpr double kFarGaussianConst = 0.2051;
inline constexpr double kFarWienerConst = 0.7346;
inline constexpr std::size_t kDefaultBurnIn = 200;
inline constexpr std::size_t kDefaultCurveGrid = 1000;
inline constexpr std::size_t kDefaultDistributionGrid = 101;
inline constexpr double kWishartDf = 10.0;

inline constexpr std::array<std::pair<DgpFamily, std::string_view>, 16> kFamilyNames{{
    {DgpFamily::UnivIID, "UnivIID"},   {DgpFamily::UnivNMA2, "UnivNMA2"},
    {DgpFamily::UnivARCH2, "UnivARCH2"}, {DgpFamily::UnivTAR1, "UnivTAR1"},
    {DgpFamily::BivIID, "BivIID"},     {DgpFamily::BivNMA2, "BivNMA2"},
    {DgpFamily::BivARCH2, "BivARCH2"}, {DgpFamily::BivMAR2, "BivMAR2"},
    {DgpFamily::VAR1, "VAR1"},         {DgpFamily::FuncBM, "FuncBM"},
    {DgpFamily::FuncBB, "FuncBB"},     {DgpFamily::FuncFARCH, "FuncFARCH"},
    {DgpFamily::FuncFNMA, "FuncFNMA"}, {DgpFamily::FuncFAR, "FuncFAR"},
    {DgpFamily::CAW, "CAW"},           {DgpFamily::ATM, "ATM"},
}};

inline std::string_view to_string(DgpFamily f) {
  for (const auto& [fam, name] : kFamilyNames) {
    if (fam == f) return name;
  }
  return "?";
}

inline DgpFamily family_from_string(std::string_view s) {
  const std::string l = detail::lower(s);
  for (const auto& [fam, name] : kFamilyNames) {
    if (detail::lower(name) == l) return fam;
  }
  throw InvalidArgument("unknown DGP family '" + std::string(s) + "'");
}

inline std::string_view to_string(NoiseKind k) { return k == NoiseKind::BM ? "BM" : "BB"; }
inline std::string_view to_string(FarKernel k) {
  return k == FarKernel::Gaussian ? "Gaussian" : "Wiener";
}

inline NoiseKind noise_from_string(std::string_view s) {
  const std::string l = detail::lower(s);
  if (l == "bm") return NoiseKind::BM;
  if (l == "bb") return NoiseKind::BB;
  throw InvalidArgument("unknown noise kind '" + std::string(s) + "'");
}

inline FarKernel kernel_from_string(std::string_view s) {
  const std::string l = detail::lower(s);
  if (l == "gaussian" || l == "g") return FarKernel::Gaussian;
  if (l == "wiener" || l == "w") return FarKernel::Wiener;
  throw InvalidArgument("unknown FAR kernel '" + std::string(s) + "'");
}

struct DgpSpec {
  DgpFamily family = DgpFamily::UnivIID;
  std::size_t n = 200;
  /// Dependence / correlation parameter: cross-correlation of the bivariate
  /// innovations, VAR coefficient, FARCH kernel scale, CAW rho, ATM rho.
  double rho = 0.0;
  /// Dimension p for VAR1 and CAW.
  std::size_t dim = 2;
  /// Curve grid T or distribution grid G; 0 selects the family default.
  std::size_t grid_size = 0;
  std::optional<std::size_t> burn_in;
  NoiseKind noise = NoiseKind::BM;
  FarKernel kernel = FarKernel::Gaussian;
  /// ATM order p and coefficients; empty beta derives them from rho.
  std::size_t order = 0;
  std::vector<double> beta;
};

inline bool is_recursive(const DgpSpec& s) {
  switch (s.family) {
    case DgpFamily::UnivARCH2:
    case DgpFamily::UnivTAR1:
    case DgpFamily::BivARCH2:
    case DgpFamily::BivMAR2:
    case DgpFamily::VAR1:
    case DgpFamily::FuncFARCH:
    case DgpFamily::FuncFAR:
    case DgpFamily::CAW: return true;
    case DgpFamily::ATM: return s.order >= 1;
    default: return false;
  }
}

inline std::size_t effective_burn_in(const DgpSpec& s) {
  if (!is_recursive(s)) return 0;
  return s.burn_in.value_or(kDefaultBurnIn);
}

inline std::size_t effective_grid_size(const DgpSpec& s) {
  if (s.grid_size != 0) return s.grid_size;
  return s.family == DgpFamily::ATM ? kDefaultDistributionGrid : kDefaultCurveGrid;
}

/// ATM coefficients: explicit beta, else 0.5 rho for order 1 and
/// rho (0.2, -0.5, 0.1, -0.3) for order 4.
inline std::vector<double> atm_coefficients(const DgpSpec& s) {
  if (!s.beta.empty()) {
    if (s.beta.size() != s.order) throw InvalidArgument("beta: length must equal order");
    return s.beta;
  }
  switch (s.order) {
    case 0: return {};
    case 1: return {0.5 * s.rho};
    case 4: return {0.2 * s.rho, -0.5 * s.rho, 0.1 * s.rho, -0.3 * s.rho};
    default: throw InvalidArgument("beta: required for ATM orders other than 0, 1, 4");
  }
}

inline void validate(const DgpSpec& s) {
  if (s.n < 1) throw InvalidArgument("n: must be at least 1");
  if (!std::isfinite(s.rho)) throw InvalidArgument("rho: must be finite");
  switch (s.family) {
    case DgpFamily::BivIID:
    case DgpFamily::BivNMA2:
    case DgpFamily::BivARCH2:
    case DgpFamily::BivMAR2:
      if (!(std::abs(s.rho) < 1.0)) throw InvalidArgument("rho: must lie in (-1, 1)");
      break;
    case DgpFamily::VAR1:
      if (s.dim < 1) throw InvalidArgument("dim: must be at least 1");
      break;
    case DgpFamily::CAW:
      if (s.dim < 1 || static_cast<double>(s.dim) > kWishartDf) {
        throw InvalidArgument("dim: must lie in [1, 10]");
      }
      if (s.rho < 0.0) throw InvalidArgument("rho: must be nonnegative");
      break;
    case DgpFamily::ATM:
      for (double b : atm_coefficients(s)) {
        if (!(b >= -1.0 && b <= 1.0)) throw InvalidArgument("beta: entries must lie in [-1, 1]");
      }
      break;
    default: break;
  }
  if (s.family >= DgpFamily::FuncBM && s.family <= DgpFamily::FuncFAR &&
      effective_grid_size(s) < 2) {
    throw InvalidArgument("grid_size: must be at least 2");
  }
  if (s.family == DgpFamily::ATM && effective_grid_size(s) < 3) {
    throw InvalidArgument("grid_size: must be at least 3");
  }
}

struct GenerationInfo {
  std::size_t attempts = 0;
  bool regenerated = false;
};

// ---------------------------------------------------------------------------

namespace detail {

class SimRng {
 public:
  SimRng(std::uint64_t seed, std::uint32_t attempt)
      : stream_(seed, StreamDomain::Simulation, attempt, 0) {}

  double normal() { return normal_(stream_); }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * stream_.uniform01();
  }
  double chi_squared(double df) {
    std::chi_squared_distribution<double> chi(df);
    return chi(stream_);
  }

 private:
  CounterStream stream_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline std::vector<double> unit_grid(std::size_t t) {
  std::vector<double> g(t);
  const double last = static_cast<double>(t - 1);
  for (std::size_t j = 0; j < t; ++j) g[j] = static_cast<double>(j) / last;
  g.back() = 1.0;
  return g;
}

/// Brownian motion on `grid` (grid[0] = 0) from N(0, dt) increments; the
/// bridge variant subtracts tau B(1), so its last value is exactly zero.
inline std::vector<double> noise_curve(SimRng& rng, const std::vector<double>& grid,
                                       NoiseKind kind) {
  std::vector<double> b(grid.size(), 0.0);
  for (std::size_t j = 1; j < grid.size(); ++j) {
    b[j] = b[j - 1] + std::sqrt(grid[j] - grid[j - 1]) * rng.normal();
  }
  if (kind == NoiseKind::BB) {
    const double end = b.back();
    for (std::size_t j = 0; j < grid.size(); ++j) b[j] -= grid[j] * end;
  }
  return b;
}

/// Piecewise-linear evaluation of a table, clamped to the grid ends.
inline double interp(const std::vector<double>& x, const std::vector<double>& f, double at) {
  if (at <= x.front()) return f.front();
  if (at >= x.back()) return f.back();
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const double t = (at - x[j - 1]) / (x[j] - x[j - 1]);
  return f[j - 1] + t * (f[j] - f[j - 1]);
}

/// Inverse of a nondecreasing table by linear interpolation, clamped to the
/// grid ends outside the table's range.
inline double invert(const std::vector<double>& x, const std::vector<double>& f, double y) {
  if (y <= f.front()) return x.front();
  if (y >= f.back()) return x.back();
  const auto it = std::upper_bound(f.begin(), f.end(), y);
  const std::size_t j = static_cast<std::size_t>(it - f.begin());
  const double span = f[j] - f[j - 1];
  if (span <= 0.0) return x[j];
  const double t = (y - f[j - 1]) / span;
  return x[j - 1] + t * (x[j] - x[j - 1]);
}

template <class Gen>
ObjectSeries vector_series(std::size_t n, std::size_t burn, std::size_t dim, Gen&& step) {
  std::vector<VectorObject> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n + burn; ++t) {
    std::vector<double> y = step();
    if (y.size() != dim) throw InvalidArgument("internal: wrong dimension");
    if (t >= burn) out.push_back(VectorObject{std::move(y)});
  }
  return out;
}

inline ObjectSeries gen_univariate(const DgpSpec& s, SimRng& rng) {
  const std::size_t burn = effective_burn_in(s);
  switch (s.family) {
    case DgpFamily::UnivIID:
      return vector_series(s.n, 0, 1, [&] { return std::vector<double>{rng.normal()}; });
    case DgpFamily::UnivNMA2: {
      double e2 = rng.normal(), e1 = rng.normal();
      return vector_series(s.n, 0, 1, [&] {
        const double e0 = rng.normal();
        const double y = e0 * e1 * e2;
        e2 = e1;
        e1 = e0;
        return std::vector<double>{y};
      });
    }
    case DgpFamily::UnivARCH2: {
      double y1 = 0.0, y2 = 0.0;
      return vector_series(s.n, burn, 1, [&] {
        const double sigma2 = 0.5 + 0.8 * y1 * y1 + 0.1 * y2 * y2;
        const double y = std::sqrt(sigma2) * rng.normal();
        y2 = y1;
        y1 = y;
        return std::vector<double>{y};
      });
    }
    case DgpFamily::UnivTAR1: {
      double y1 = 0.0;
      return vector_series(s.n, burn, 1, [&] {
        const double coef = y1 < 0.0 ? -1.5 : 0.5;
        y1 = coef * y1 + rng.normal();
        return std::vector<double>{y1};
      });
    }
    default: throw InvalidArgument("internal: not a univariate family");
  }
}

inline ObjectSeries gen_multivariate(const DgpSpec& s, SimRng& rng) {
  const std::size_t burn = effective_burn_in(s);
  const double rho = s.rho;
  const double rho_c = std::sqrt(1.0 - rho * rho);
  auto innovation = [&] {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    return std::array<double, 2>{z1, rho * z1 + rho_c * z2};
  };
  switch (s.family) {
    case DgpFamily::BivIID:
      return vector_series(s.n, 0, 2, [&] {
        const auto e = innovation();
        return std::vector<double>{e[0], e[1]};
      });
    case DgpFamily::BivNMA2: {
      auto e2 = innovation(), e1 = innovation();
      return vector_series(s.n, 0, 2, [&] {
        const auto e0 = innovation();
        std::vector<double> y{e0[0] * e1[0] * e2[0], e0[1] * e1[1] * e2[1]};
        e2 = e1;
        e1 = e0;
        return y;
      });
    }
    case DgpFamily::BivARCH2: {
      std::array<double, 2> h{0.003, 0.005};
      std::array<double, 2> y{0.0, 0.0};
      return vector_series(s.n, burn, 2, [&] {
        const double y0 = y[0] * y[0], y1 = y[1] * y[1];
        const std::array<double, 2> hn{0.003 + 0.2 * y0 + 0.1 * y1 + 0.4 * h[0] + 0.05 * h[1],
                                       0.005 + 0.1 * y0 + 0.3 * y1 + 0.05 * h[0] + 0.5 * h[1]};
        const auto e = innovation();
        h = hn;
        y = {std::sqrt(h[0]) * e[0], std::sqrt(h[1]) * e[1]};
        return std::vector<double>{y[0], y[1]};
      });
    }
    case DgpFamily::BivMAR2: {
      std::array<double, 2> y{0.0, 0.0};
      return vector_series(s.n, burn, 2, [&] {
        const auto e = innovation();
        y = {0.04 * y[0] - 0.1 * y[1] + e[0], 0.11 * y[0] + 0.5 * y[1] + e[1]};
        return std::vector<double>{y[0], y[1]};
      });
    }
    case DgpFamily::VAR1: {
      std::vector<double> y(s.dim, 0.0);
      return vector_series(s.n, burn, s.dim, [&] {
        for (double& v : y) v = rho * v + rng.normal();
        return y;
      });
    }
    default: throw InvalidArgument("internal: not a multivariate family");
  }
}

inline ObjectSeries gen_functional(const DgpSpec& s, SimRng& rng) {
  const std::size_t t_size = effective_grid_size(s);
  const std::vector<double> grid = unit_grid(t_size);
  const std::vector<double> w = trapezoid_weights(grid);
  const std::size_t burn = effective_burn_in(s);
  std::vector<double> half_exp(t_size);
  for (std::size_t j = 0; j < t_size; ++j) half_exp[j] = std::exp(0.5 * grid[j] * grid[j]);

  std::vector<CurveObject> out;
  out.reserve(s.n);
  auto emit = [&](std::size_t t, std::vector<double> y) {
    if (t >= burn) out.push_back(CurveObject{grid, std::move(y)});
  };

  switch (s.family) {
    case DgpFamily::FuncBM:
    case DgpFamily::FuncBB: {
      const NoiseKind kind = s.family == DgpFamily::FuncBM ? NoiseKind::BM : NoiseKind::BB;
      for (std::size_t t = 0; t < s.n; ++t) emit(t, noise_curve(rng, grid, kind));
      break;
    }
    case DgpFamily::FuncFNMA: {
      std::vector<double> prev = noise_curve(rng, grid, s.noise);
      for (std::size_t t = 0; t < s.n; ++t) {
        std::vector<double> cur = noise_curve(rng, grid, s.noise);
        std::vector<double> y(t_size);
        for (std::size_t j = 0; j < t_size; ++j) y[j] = cur[j] * prev[j];
        emit(t, std::move(y));
        prev = std::move(cur);
      }
      break;
    }
    case DgpFamily::FuncFARCH: {
      // Separable kernel rho exp(tau1^2/2) exp(tau2^2/2).
      std::vector<double> y(t_size, 0.0);
      for (std::size_t t = 0; t < s.n + burn; ++t) {
        double integral = 0.0;
        for (std::size_t j = 0; j < t_size; ++j) integral += w[j] * half_exp[j] * y[j] * y[j];
        const std::vector<double> e = noise_curve(rng, grid, NoiseKind::BM);
        for (std::size_t i = 0; i < t_size; ++i) {
          y[i] = e[i] * std::sqrt(grid[i] + s.rho * half_exp[i] * integral);
        }
        emit(t, y);
      }
      break;
    }
    case DgpFamily::FuncFAR: {
      std::vector<double> y(t_size, 0.0), next(t_size);
      for (std::size_t t = 0; t < s.n + burn; ++t) {
        const std::vector<double> e = noise_curve(rng, grid, s.noise);
        if (s.kernel == FarKernel::Gaussian) {
          double integral = 0.0;
          for (std::size_t j = 0; j < t_size; ++j) integral += w[j] * half_exp[j] * y[j];
          for (std::size_t i = 0; i < t_size; ++i) {
            next[i] = kFarGaussianConst * half_exp[i] * integral + e[i];
          }
        } else {
          // min(tau_i, tau_j): tau_j below the diagonal, tau_i above it.
          std::vector<double> suffix(t_size + 1, 0.0);
          for (std::size_t j = t_size; j-- > 0;) suffix[j] = suffix[j + 1] + w[j] * y[j];
          double prefix = 0.0;
          for (std::size_t i = 0; i < t_size; ++i) {
            prefix += w[i] * grid[i] * y[i];
            next[i] = kFarWienerConst * (prefix + grid[i] * suffix[i + 1]) + e[i];
          }
        }
        std::swap(y, next);
        emit(t, y);
      }
      break;
    }
    default: throw InvalidArgument("internal: not a functional family");
  }
  return out;
}

/// W_p(df, I) by the Bartlett decomposition.
inline Matrix wishart_identity(SimRng& rng, std::size_t p, double df) {
  const auto pp = static_cast<Eigen::Index>(p);
  Matrix a = Matrix::Zero(pp, pp);
  for (Eigen::Index i = 0; i < pp; ++i) {
    a(i, i) = std::sqrt(rng.chi_squared(df - static_cast<double>(i)));
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  return a * a.transpose();
}

inline Matrix symmetrised(const Matrix& m) { return 0.5 * (m + m.transpose()); }

inline ObjectSeries gen_caw(const DgpSpec& s, SimRng& rng) {
  const std::size_t p = s.dim;
  const auto pp = static_cast<Eigen::Index>(p);
  const std::size_t burn = effective_burn_in(s);
  const Matrix identity = Matrix::Identity(pp, pp);
  // A = 0.7 I, B = 0.5 I, C = I.
  Matrix sigma = identity;
  Matrix y = sigma;
  std::vector<SpdObject> out;
  out.reserve(s.n);
  for (std::size_t t = 0; t < s.n + burn; ++t) {
    sigma = symmetrised(identity + s.rho * 0.49 * y + s.rho * 0.25 * sigma);
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) throw NumericalFailure("CAW: Sigma_t lost definiteness");
    const Matrix l = llt.matrixL();
    const Matrix eps = wishart_identity(rng, p, kWishartDf);
    y = symmetrised(l * eps * l.transpose() / kWishartDf);
    try {
      require_spd(y, "CAW");
    } catch (const NotSpd& e) {
      throw NumericalFailure(e.what());
    }
    if (t >= burn) out.push_back(SpdObject{y});
  }
  return out;
}

/// beta (.) T on the grid.
inline std::vector<double> atm_scale(const std::vector<double>& grid, const std::vector<double>& t,
                                     double beta) {
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid[j];
    if (beta > 0.0) {
      out[j] = x + beta * (t[j] - x);
    } else if (beta == 0.0) {
      out[j] = x;
    } else {
      out[j] = x + beta * (x - invert(grid, t, x));
    }
  }
  return out;
}

/// (first (+) second)(x) = second(first(x)).
inline std::vector<double> atm_compose(const std::vector<double>& grid,
                                       const std::vector<double>& first,
                                       const std::vector<double>& second) {
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out[j] = interp(grid, second, first[j]);
  return out;
}

/// Random increasing map eps_t of [0,1] built from g and a U(-1,1) draw xi:
/// h(x) = ((1 - xi) g(x) + (1 + xi) x) / 2 and
/// eps(x) = ((1 + xi) g(h^{-1}(x)) + (1 - xi) h^{-1}(x)) / 2.
inline std::vector<double> atm_noise(SimRng& rng, const std::vector<double>& grid) {
  const NaturalCubicSpline& g = spline_g();
  const double xi = rng.uniform(-1.0, 1.0);
  std::vector<double> h(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    h[j] = 0.5 * ((1.0 - xi) * g(grid[j]) + (1.0 + xi) * grid[j]);
  }
  std::vector<double> eps(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double hi = invert(grid, h, grid[j]);
    eps[j] = 0.5 * ((1.0 + xi) * g(hi) + (1.0 - xi) * hi);
  }
  return eps;
}

inline void require_monotone_map(std::vector<double>& t) {
  constexpr double kSlack = 1e-12;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (j > 0 && t[j] < t[j - 1]) {
      if (t[j] < t[j - 1] - kSlack) throw NumericalFailure("ATM: transport map not monotone");
      t[j] = t[j - 1];
    }
    t[j] = std::clamp(t[j], 0.0, 1.0);
  }
}

inline ObjectSeries gen_atm(const DgpSpec& s, SimRng& rng) {
  const std::vector<double> beta = atm_coefficients(s);
  const std::size_t order = beta.size();
  const std::vector<double> grid = unit_grid(effective_grid_size(s));
  const std::size_t burn = effective_burn_in(s);

  // history[0] = T_{t-1}, history[1] = T_{t-2}, ...
  std::vector<std::vector<double>> history(order, grid);
  std::vector<DistributionObject> out;
  out.reserve(s.n);
  for (std::size_t t = 0; t < s.n + burn; ++t) {
    std::vector<double> cur = grid;  // identity
    for (std::size_t lag = order; lag-- > 0;) {
      cur = atm_compose(grid, cur, atm_scale(grid, history[lag], beta[lag]));
    }
    cur = atm_compose(grid, cur, atm_noise(rng, grid));
    require_monotone_map(cur);
    if (order > 0) {
      std::rotate(history.rbegin(), history.rbegin() + 1, history.rend());
      history[0] = cur;
    }
    if (t >= burn) {
      std::vector<double> cdf(grid.size());
      for (std::size_t j = 0; j < grid.size(); ++j) {
        cdf[j] = std::clamp(invert(grid, cur, grid[j]), 0.0, 1.0);
      }
      out.push_back(DistributionObject{grid, cur, std::move(cdf), std::nullopt});
    }
  }
  return out;
}

}  // namespace detail

/// Draws one series of length n. Pure function of (spec, seed). A CAW
/// replicate that loses definiteness numerically is redrawn from the next
/// attempt stream and reported through `info`.
inline ObjectSeries generate(const DgpSpec& spec, std::uint64_t seed,
                             GenerationInfo* info = nullptr) {
  validate(spec);
  constexpr std::uint32_t kMaxAttempts = 16;
  for (std::uint32_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    detail::SimRng rng(seed, attempt);
    try {
      ObjectSeries series = [&]() -> ObjectSeries {
        switch (spec.family) {
          case DgpFamily::UnivIID:
          case DgpFamily::UnivNMA2:
          case DgpFamily::UnivARCH2:
          case DgpFamily::UnivTAR1: return detail::gen_univariate(spec, rng);
          case DgpFamily::BivIID:
          case DgpFamily::BivNMA2:
          case DgpFamily::BivARCH2:
          case DgpFamily::BivMAR2:
          case DgpFamily::VAR1: return detail::gen_multivariate(spec, rng);
          case DgpFamily::FuncBM:
          case DgpFamily::FuncBB:
          case DgpFamily::FuncFARCH:
          case DgpFamily::FuncFNMA:
          case DgpFamily::FuncFAR: return detail::gen_functional(spec, rng);
          case DgpFamily::CAW: return detail::gen_caw(spec, rng);
          case DgpFamily::ATM: return detail::gen_atm(spec, rng);
        }
        throw InvalidArgument("unknown family");
      }();
      if (info) {
        info->attempts = attempt + 1;
        info->regenerated = attempt > 0;
      }
      return series;
    } catch (const NumericalFailure&) {
      if (spec.family != DgpFamily::CAW) throw;
    }
  }
  throw NumericalFailure("CAW: no SPD replicate after repeated attempts");
}

}  // namespace metricnoise
