#pragma once

// Object kinds, their validation, and the distance metrics defined on them.
//
// Every metric is evaluated in two steps: `prepare` maps an object to the
// feature representation the metric needs (log-matrix, Cholesky factor,
// clipped log-density, ...) and `prepared_distance` combines two prepared
// objects. Pairwise distance matrices reuse the prepared features, so the
// O(n^2) loop never repeats an eigendecomposition per object.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "metricnoise/error.hpp"
#include "metricnoise/linalg.hpp"

namespace metricnoise {

inline constexpr double kDensityFloor = 1e-12;

struct VectorObject {
  std::vector<double> values;
};

struct CurveObject {
  std::vector<double> grid;
  std::vector<double> values;
};

struct SpdObject {
  Matrix matrix;
};

/// A distribution on [0,1] tabulated on one grid. The grid doubles as the
/// probability levels of the quantile function and the support points of the
/// CDF and density.
struct DistributionObject {
  std::vector<double> grid;
  std::optional<std::vector<double>> quantile;
  std::optional<std::vector<double>> cdf;
  std::optional<std::vector<double>> density;
};

using Object = std::variant<VectorObject, CurveObject, SpdObject, DistributionObject>;

using ObjectSeries = std::variant<std::vector<VectorObject>, std::vector<CurveObject>,
                                  std::vector<SpdObject>, std::vector<DistributionObject>>;

enum class ObjectKind { Vector, Curve, Spd, Distribution };

enum class MetricKind {
  VectorEuclidean,
  CurveL2,
  SpdFrobenius,
  SpdLogEuclidean,
  SpdCholesky,
  SpdRiemann,
  DistW1,
  DistW2,
  DistKS,
  DistKL,
  DistIS,
  DistLS,
};

inline constexpr MetricKind kAllMetrics[] = {
    MetricKind::VectorEuclidean, MetricKind::CurveL2,         MetricKind::SpdFrobenius,
    MetricKind::SpdLogEuclidean, MetricKind::SpdCholesky,     MetricKind::SpdRiemann,
    MetricKind::DistW1,          MetricKind::DistW2,          MetricKind::DistKS,
    MetricKind::DistKL,          MetricKind::DistIS,          MetricKind::DistLS,
};

inline std::string_view to_string(MetricKind m) {
  switch (m) {
    case MetricKind::VectorEuclidean: return "VectorEuclidean";
    case MetricKind::CurveL2: return "CurveL2";
    case MetricKind::SpdFrobenius: return "SpdFrobenius";
    case MetricKind::SpdLogEuclidean: return "SpdLogEuclidean";
    case MetricKind::SpdCholesky: return "SpdCholesky";
    case MetricKind::SpdRiemann: return "SpdRiemann";
    case MetricKind::DistW1: return "DistW1";
    case MetricKind::DistW2: return "DistW2";
    case MetricKind::DistKS: return "DistKS";
    case MetricKind::DistKL: return "DistKL";
    case MetricKind::DistIS: return "DistIS";
    case MetricKind::DistLS: return "DistLS";
  }
  return "?";
}

inline std::string_view to_string(ObjectKind k) {
  switch (k) {
    case ObjectKind::Vector: return "vector";
    case ObjectKind::Curve: return "curve";
    case ObjectKind::Spd: return "spd";
    case ObjectKind::Distribution: return "distribution";
  }
  return "?";
}

namespace detail {
inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}
}  // namespace detail

/// Accepts the canonical names (case-insensitive) and the short names used in
/// the simulation tables ("euc", "log-euc", "chol", "riemann", "w1", ...).
inline MetricKind metric_from_string(std::string_view name) {
  const std::string s = detail::lower(name);
  for (MetricKind m : kAllMetrics) {
    if (detail::lower(to_string(m)) == s) return m;
  }
  if (s == "euclidean" || s == "vector") return MetricKind::VectorEuclidean;
  if (s == "l2") return MetricKind::CurveL2;
  if (s == "euc" || s == "frobenius") return MetricKind::SpdFrobenius;
  if (s == "log-euc" || s == "logeuclidean" || s == "log-euclidean") return MetricKind::SpdLogEuclidean;
  if (s == "chol" || s == "cholesky") return MetricKind::SpdCholesky;
  if (s == "riemann") return MetricKind::SpdRiemann;
  if (s == "w1") return MetricKind::DistW1;
  if (s == "w2") return MetricKind::DistW2;
  if (s == "ks") return MetricKind::DistKS;
  if (s == "kl") return MetricKind::DistKL;
  if (s == "is") return MetricKind::DistIS;
  if (s == "ls") return MetricKind::DistLS;
  throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

inline ObjectKind object_kind_from_string(std::string_view name) {
  const std::string s = detail::lower(name);
  if (s == "vector") return ObjectKind::Vector;
  if (s == "curve") return ObjectKind::Curve;
  if (s == "spd") return ObjectKind::Spd;
  if (s == "distribution") return ObjectKind::Distribution;
  throw InvalidArgument("unknown object kind '" + std::string(name) + "'");
}

inline ObjectKind metric_object_kind(MetricKind m) {
  switch (m) {
    case MetricKind::VectorEuclidean: return ObjectKind::Vector;
    case MetricKind::CurveL2: return ObjectKind::Curve;
    case MetricKind::SpdFrobenius:
    case MetricKind::SpdLogEuclidean:
    case MetricKind::SpdCholesky:
    case MetricKind::SpdRiemann: return ObjectKind::Spd;
    default: return ObjectKind::Distribution;
  }
}

/// KL, IS and LS are divergences; the independence characterisation is not
/// established for them.
inline bool metric_theory_unverified(MetricKind m) {
  return m == MetricKind::DistKL || m == MetricKind::DistIS || m == MetricKind::DistLS;
}

template <class Obj>
constexpr ObjectKind kind_of() {
  if constexpr (std::is_same_v<Obj, VectorObject>) return ObjectKind::Vector;
  else if constexpr (std::is_same_v<Obj, CurveObject>) return ObjectKind::Curve;
  else if constexpr (std::is_same_v<Obj, SpdObject>) return ObjectKind::Spd;
  else return ObjectKind::Distribution;
}

inline ObjectKind series_kind(const ObjectSeries& s) {
  return std::visit(
      [](const auto& v) { return kind_of<typename std::decay_t<decltype(v)>::value_type>(); }, s);
}

inline std::size_t series_length(const ObjectSeries& s) {
  return std::visit([](const auto& v) { return v.size(); }, s);
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

inline bool nondecreasing(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::greater<>()) == v.end();
}

inline void check_unit_grid(const std::vector<double>& grid, std::size_t min_size,
                            const char* who) {
  if (grid.size() < min_size) {
    throw InvalidArgument(std::string(who) + ": grid needs at least " +
                          std::to_string(min_size) + " points");
  }
  if (!all_finite(grid)) throw InvalidArgument(std::string(who) + ": non-finite grid point");
  if (grid.front() < 0.0 || grid.back() > 1.0) {
    throw InvalidArgument(std::string(who) + ": grid must lie in [0,1]");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw InvalidArgument(std::string(who) + ": grid not strictly increasing at index " +
                            std::to_string(i));
    }
  }
}

}  // namespace detail

inline void validate(const VectorObject& v) {
  if (v.values.empty()) throw InvalidArgument("vector object: empty");
  if (!detail::all_finite(v.values)) throw InvalidArgument("vector object: non-finite entry");
}

inline void validate(const CurveObject& c) {
  detail::check_unit_grid(c.grid, 2, "curve object");
  if (c.values.size() != c.grid.size()) {
    throw InvalidArgument("curve object: values and grid differ in length");
  }
  if (!detail::all_finite(c.values)) throw InvalidArgument("curve object: non-finite value");
}

inline void validate(const SpdObject& s) { require_spd(s.matrix, "spd object"); }

inline void validate(const DistributionObject& d) {
  detail::check_unit_grid(d.grid, 2, "distribution object");
  const std::size_t g = d.grid.size();
  if (!d.quantile && !d.cdf && !d.density) {
    throw InvalidArgument("distribution object: needs quantile, cdf or density");
  }
  if (d.quantile) {
    if (d.quantile->size() != g) throw InvalidArgument("distribution object: quantile length");
    if (!detail::all_finite(*d.quantile) || !detail::nondecreasing(*d.quantile)) {
      throw InvalidArgument("distribution object: quantile must be finite and nondecreasing");
    }
  }
  if (d.cdf) {
    if (d.cdf->size() != g) throw InvalidArgument("distribution object: cdf length");
    if (!detail::all_finite(*d.cdf) || !detail::nondecreasing(*d.cdf) ||
        d.cdf->front() < 0.0 || d.cdf->back() > 1.0) {
      throw InvalidArgument("distribution object: cdf must be nondecreasing within [0,1]");
    }
  }
  if (d.density) {
    if (d.density->size() != g) throw InvalidArgument("distribution object: density length");
    if (!detail::all_finite(*d.density) ||
        std::any_of(d.density->begin(), d.density->end(), [](double x) { return x < 0.0; })) {
      throw InvalidArgument("distribution object: density must be finite and nonnegative");
    }
  }
}

/// Density from the CDF by centred differences in the interior and
/// second-order one-sided differences at the two ends, clipped below at
/// kDensityFloor and not renormalised.
inline DistributionObject derive_density(DistributionObject d) {
  if (!d.cdf) throw InvalidArgument("derive_density: cdf absent");
  const auto& x = d.grid;
  const auto& f = *d.cdf;
  const std::size_t g = x.size();
  if (g < 2 || f.size() != g) throw InvalidArgument("derive_density: bad grid/cdf sizes");
  std::vector<double> dens(g);
  if (g == 2) {
    const double slope = (f[1] - f[0]) / (x[1] - x[0]);
    dens[0] = dens[1] = slope;
  } else {
    for (std::size_t j = 1; j + 1 < g; ++j) {
      dens[j] = (f[j + 1] - f[j - 1]) / (x[j + 1] - x[j - 1]);
    }
    // Three-point one-sided derivative on a possibly non-uniform grid.
    auto one_sided = [](double x0, double x1, double x2, double f0, double f1, double f2) {
      const double h1 = x1 - x0;
      const double h2 = x2 - x0;
      return (-(h1 + h2) / (h1 * h2)) * f0 + (h2 / (h1 * (h2 - h1))) * f1 -
             (h1 / (h2 * (h2 - h1))) * f2;
    };
    dens[0] = one_sided(x[0], x[1], x[2], f[0], f[1], f[2]);
    dens[g - 1] = one_sided(x[g - 1], x[g - 2], x[g - 3], f[g - 1], f[g - 2], f[g - 3]);
  }
  for (double& v : dens) v = std::max(v, kDensityFloor);
  d.density = std::move(dens);
  return d;
}

// ---------------------------------------------------------------------------
// Metric evaluation

/// Shared per-series data: quadrature weights of the common grid.
struct MetricContext {
  MetricKind metric = MetricKind::VectorEuclidean;
  std::vector<double> grid;
  std::vector<double> weights;  // trapezoid weights on `grid`
  double span = 1.0;            // grid.back() - grid.front()
};

/// Metric-specific representation of a single object.
struct Prepared {
  std::vector<double> values;
  std::vector<double> logs;
  Matrix matrix;
  Matrix inv_sqrt;
};

inline std::vector<double> trapezoid_weights(const std::vector<double>& grid) {
  const std::size_t g = grid.size();
  std::vector<double> w(g, 0.0);
  for (std::size_t j = 0; j + 1 < g; ++j) {
    const double h = 0.5 * (grid[j + 1] - grid[j]);
    w[j] += h;
    w[j + 1] += h;
  }
  return w;
}

namespace detail {

inline void require_metric_for(ObjectKind kind, MetricKind m) {
  if (metric_object_kind(m) != kind) {
    throw InvalidArgument("metric " + std::string(to_string(m)) +
                          " is not defined for " + std::string(to_string(kind)) + " objects");
  }
}

inline std::vector<double> flatten(const Matrix& m) {
  return std::vector<double>(m.data(), m.data() + m.size());
}

inline void require_same_grid(const std::vector<double>& expected,
                              const std::vector<double>& grid) {
  if (grid != expected) throw InvalidArgument("grid mismatch between objects");
}

}  // namespace detail

inline MetricContext make_context(const VectorObject&, MetricKind m) {
  detail::require_metric_for(ObjectKind::Vector, m);
  return MetricContext{m, {}, {}, 1.0};
}

inline MetricContext make_context(const SpdObject&, MetricKind m) {
  detail::require_metric_for(ObjectKind::Spd, m);
  return MetricContext{m, {}, {}, 1.0};
}

inline MetricContext make_context(const CurveObject& c, MetricKind m) {
  detail::require_metric_for(ObjectKind::Curve, m);
  validate(c);
  return MetricContext{m, c.grid, trapezoid_weights(c.grid), c.grid.back() - c.grid.front()};
}

inline MetricContext make_context(const DistributionObject& d, MetricKind m) {
  detail::require_metric_for(ObjectKind::Distribution, m);
  detail::check_unit_grid(d.grid, 2, "distribution object");
  return MetricContext{m, d.grid, trapezoid_weights(d.grid), d.grid.back() - d.grid.front()};
}

inline Prepared prepare(const VectorObject& v, const MetricContext&) {
  validate(v);
  return Prepared{v.values, {}, {}, {}};
}

inline Prepared prepare(const CurveObject& c, const MetricContext& ctx) {
  validate(c);
  detail::require_same_grid(ctx.grid, c.grid);
  return Prepared{c.values, {}, {}, {}};
}

inline Prepared prepare(const SpdObject& s, const MetricContext& ctx) {
  const SymEig e = require_spd(s.matrix, "spd object");
  Prepared p;
  switch (ctx.metric) {
    case MetricKind::SpdFrobenius: p.values = detail::flatten(s.matrix); break;
    case MetricKind::SpdLogEuclidean:
      p.values = detail::flatten(apply_spectral(e, [](double x) { return std::log(x); }));
      break;
    case MetricKind::SpdCholesky: p.values = detail::flatten(cholesky_lower(s.matrix)); break;
    case MetricKind::SpdRiemann:
      p.matrix = s.matrix;
      p.inv_sqrt = apply_spectral(e, [](double x) { return 1.0 / std::sqrt(x); });
      break;
    default: detail::require_metric_for(ObjectKind::Spd, ctx.metric);
  }
  return p;
}

inline Prepared prepare(const DistributionObject& d, const MetricContext& ctx) {
  validate(d);
  detail::require_same_grid(ctx.grid, d.grid);
  Prepared p;
  switch (ctx.metric) {
    case MetricKind::DistW1:
    case MetricKind::DistW2:
      if (!d.quantile) throw InvalidArgument("W1/W2 require the quantile representation");
      p.values = *d.quantile;
      break;
    case MetricKind::DistKS:
      if (!d.cdf) throw InvalidArgument("KS distance requires the cdf representation");
      p.values = *d.cdf;
      break;
    case MetricKind::DistKL:
    case MetricKind::DistIS:
    case MetricKind::DistLS: {
      std::vector<double> dens;
      if (d.density) {
        dens = *d.density;
      } else if (d.cdf) {
        dens = *derive_density(d).density;
      } else {
        throw InvalidArgument("KL/IS/LS require a density or a cdf");
      }
      for (double& v : dens) v = std::max(v, kDensityFloor);
      double mass = 0.0;
      for (std::size_t j = 0; j < dens.size(); ++j) mass += ctx.weights[j] * dens[j];
      if (!(mass > kDensityFloor * ctx.span * 2.0)) {
        throw InvalidArgument("degenerate density: zero everywhere after clipping floor");
      }
      p.logs.resize(dens.size());
      std::transform(dens.begin(), dens.end(), p.logs.begin(),
                     [](double v) { return std::log(v); });
      p.values = std::move(dens);
      break;
    }
    default: detail::require_metric_for(ObjectKind::Distribution, ctx.metric);
  }
  return p;
}

namespace detail {

inline bool lex_less(const Matrix& a, const Matrix& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

inline double riemann(const Prepared& a, const Prepared& b) {
  if (a.matrix.rows() != b.matrix.rows()) throw InvalidArgument("SPD dimension mismatch");
  // Evaluate in a canonical argument order so d(a,b) == d(b,a) bit for bit.
  const bool swap = lex_less(b.matrix, a.matrix);
  const Prepared& first = swap ? b : a;
  const Prepared& second = swap ? a : b;
  if (first.matrix == second.matrix) return 0.0;
  Matrix c = first.inv_sqrt * second.matrix * first.inv_sqrt;
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(c, Eigen::EigenvaluesOnly);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lam = solver.eigenvalues()(i);
    if (!(lam > 0.0)) throw NotSpd("riemann: congruence lost positive definiteness");
    const double l = std::log(lam);
    acc += l * l;
  }
  return std::sqrt(acc);
}

}  // namespace detail

inline double prepared_distance(const Prepared& a, const Prepared& b, const MetricContext& ctx) {
  const auto& x = a.values;
  const auto& y = b.values;
  if (ctx.metric != MetricKind::SpdRiemann && x.size() != y.size()) {
    throw InvalidArgument("dimension mismatch between objects");
  }
  const std::size_t len = x.size();
  const auto& w = ctx.weights;
  switch (ctx.metric) {
    case MetricKind::VectorEuclidean:
    case MetricKind::SpdFrobenius:
    case MetricKind::SpdLogEuclidean:
    case MetricKind::SpdCholesky: {
      double acc = 0.0;
      for (std::size_t j = 0; j < len; ++j) {
        const double d = x[j] - y[j];
        acc += d * d;
      }
      return std::sqrt(acc);
    }
    case MetricKind::CurveL2:
    case MetricKind::DistW2: {
      double acc = 0.0;
      for (std::size_t j = 0; j < len; ++j) {
        const double d = x[j] - y[j];
        acc += w[j] * d * d;
      }
      return std::sqrt(acc);
    }
    case MetricKind::DistW1: {
      double acc = 0.0;
      for (std::size_t j = 0; j < len; ++j) acc += w[j] * std::abs(x[j] - y[j]);
      return acc;
    }
    case MetricKind::DistKS: {
      double best = 0.0;
      for (std::size_t j = 0; j < len; ++j) best = std::max(best, std::abs(x[j] - y[j]));
      return best;
    }
    case MetricKind::DistKL: {
      // 1/2 [int f log(f/g) + int g log(g/f)] = 1/2 int (f-g)(log f - log g)
      double acc = 0.0;
      for (std::size_t j = 0; j < len; ++j) {
        acc += w[j] * (x[j] - y[j]) * (a.logs[j] - b.logs[j]);
      }
      return 0.5 * acc;
    }
    case MetricKind::DistIS: {
      // f/g - log(f/g) - 1 + g/f - log(g/f) - 1 = (f-g)^2 / (f g)
      double acc = 0.0;
      for (std::size_t j = 0; j < len; ++j) {
        const double d = x[j] - y[j];
        acc += w[j] * d * d / (x[j] * y[j]);
      }
      return acc / (2.0 * ctx.span);
    }
    case MetricKind::DistLS: {
      constexpr double kDecibel = 10.0 / std::numbers::ln10;
      double acc = 0.0;
      for (std::size_t j = 0; j < len; ++j) {
        const double d = kDecibel * (a.logs[j] - b.logs[j]);
        acc += w[j] * d * d;
      }
      return std::sqrt(acc / ctx.span);
    }
    case MetricKind::SpdRiemann: return detail::riemann(a, b);
  }
  throw InvalidArgument("unhandled metric");
}

template <class Obj>
double distance(const Obj& a, const Obj& b, MetricKind m) {
  const MetricContext ctx = make_context(a, m);
  return prepared_distance(prepare(a, ctx), prepare(b, ctx), ctx);
}

inline double distance(const Object& a, const Object& b, MetricKind m) {
  if (a.index() != b.index()) throw InvalidArgument("objects of different kinds");
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        return distance(x, std::get<T>(b), m);
      },
      a);
}

}  // namespace metricnoise
