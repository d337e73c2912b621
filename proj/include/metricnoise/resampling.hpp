#pragma once

// Calibration of the spectral statistics: wild bootstrap, permutation,
// add-one p-values and the rejection rule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "metricnoise/adcv.hpp"
#include "metricnoise/error.hpp"
#include "metricnoise/objects.hpp"
#include "metricnoise/parallel.hpp"
#include "metricnoise/random.hpp"
#include "metricnoise/spectral.hpp"

namespace metricnoise {

enum class ResamplingMethod { WildBootstrap, Permutation };

/// Multiplier law of the wild bootstrap. UnitConstant (w == 1) is a test
/// hook that reproduces the observed statistic in every draw.
enum class WeightLaw { Rademacher, StandardNormal, UnitConstant };

inline std::string_view to_string(ResamplingMethod m) {
  return m == ResamplingMethod::WildBootstrap ? "WildBootstrap" : "Permutation";
}

inline std::string_view to_string(WeightLaw w) {
  switch (w) {
    case WeightLaw::Rademacher: return "Rademacher";
    case WeightLaw::StandardNormal: return "StandardNormal";
    case WeightLaw::UnitConstant: return "UnitConstant";
  }
  return "?";
}

inline ResamplingMethod method_from_string(std::string_view s) {
  const std::string l = detail::lower(s);
  if (l == "wildbootstrap" || l == "bootstrap" || l == "boot" || l == "b") {
    return ResamplingMethod::WildBootstrap;
  }
  if (l == "permutation" || l == "permt" || l == "p") return ResamplingMethod::Permutation;
  throw InvalidArgument("unknown resampling method '" + std::string(s) + "'");
}

inline WeightLaw weight_law_from_string(std::string_view s) {
  const std::string l = detail::lower(s);
  if (l == "rademacher") return WeightLaw::Rademacher;
  if (l == "standardnormal" || l == "normal") return WeightLaw::StandardNormal;
  if (l == "unitconstant") return WeightLaw::UnitConstant;
  throw InvalidArgument("unknown weight law '" + std::string(s) + "'");
}

struct ResamplingConfig {
  ResamplingMethod method = ResamplingMethod::WildBootstrap;
  std::size_t B = 300;
  WeightLaw weight_law = WeightLaw::Rademacher;
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

inline void validate(const ResamplingConfig& cfg) {
  if (cfg.B < 1) throw InvalidArgument("B: must be at least 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw InvalidArgument("alpha: must lie in (0, 1)");
}

// ---------------------------------------------------------------------------
// Weights and permutations

/// Weight vector w^{(b)}(k) of length m, a pure function of (seed, b, k).
inline void fill_weights(double* out, std::size_t m, WeightLaw law, std::uint64_t seed,
                         std::size_t draw, std::size_t lag) {
  CounterStream stream(seed, StreamDomain::BootstrapWeights, static_cast<std::uint32_t>(draw),
                       static_cast<std::uint32_t>(lag));
  switch (law) {
    case WeightLaw::UnitConstant: std::fill(out, out + m, 1.0); return;
    case WeightLaw::Rademacher: {
      std::uint32_t bits = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (i % 32 == 0) bits = stream.next_u32();
        out[i] = (bits & 1u) ? 1.0 : -1.0;
        bits >>= 1;
      }
      return;
    }
    case WeightLaw::StandardNormal: {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (std::size_t i = 0; i < m; ++i) out[i] = normal(stream);
      return;
    }
  }
}

/// Uniform random permutation of {0..n-1}, a pure function of (seed, b).
inline std::vector<std::size_t> draw_permutation(std::size_t n, std::uint64_t seed,
                                                 std::size_t draw) {
  std::vector<std::size_t> tau(n);
  std::iota(tau.begin(), tau.end(), std::size_t{0});
  CounterStream stream(seed, StreamDomain::Permutation, static_cast<std::uint32_t>(draw), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(tau[i - 1], tau[pick(stream)]);
  }
  return tau;
}

using PermutationSource = std::function<std::vector<std::size_t>(std::size_t n, std::size_t b)>;

// ---------------------------------------------------------------------------
// Resampled ADCVs

/// K x B matrix of bootstrapped ADCVs V*_n(k)^{(b)}. Per lag the product
/// matrix P(k) = a~(k) o b~(k) is built once and all B quadratic forms
/// w^T P w are evaluated as one matrix product.
inline Matrix wild_bootstrap_adcv(const DistanceMatrix& d, std::size_t max_lag,
                                  const ResamplingConfig& cfg, std::size_t threads = 1) {
  validate(cfg);
  const std::size_t n = d.size();
  if (n < 5 || max_lag < 1 || max_lag > n - 4) throw InvalidArgument("max_lag outside [1, n-4]");
  const auto b_count = static_cast<Eigen::Index>(cfg.B);
  Matrix vstar(static_cast<Eigen::Index>(max_lag), b_count);
  parallel_for(max_lag, threads, [&](std::size_t idx) {
    const std::size_t k = idx + 1;
    const std::size_t m = n - k;
    const Matrix p = lag_product(d, k);
    Matrix w(static_cast<Eigen::Index>(m), b_count);
    for (Eigen::Index b = 0; b < b_count; ++b) {
      fill_weights(w.col(b).data(), m, cfg.weight_law, cfg.seed, static_cast<std::size_t>(b), k);
    }
    const Matrix pw = p * w;
    vstar.row(static_cast<Eigen::Index>(idx)) =
        w.cwiseProduct(pw).colwise().sum() * adcv_normaliser(m);
  });
  return vstar;
}

/// K x B matrix of ADCVs recomputed on permuted series.
inline Matrix permutation_adcv(const DistanceMatrix& d, std::size_t max_lag,
                               const ResamplingConfig& cfg, std::size_t threads = 1,
                               const PermutationSource& source = {}) {
  validate(cfg);
  const std::size_t n = d.size();
  if (n < 5 || max_lag < 1 || max_lag > n - 4) throw InvalidArgument("max_lag outside [1, n-4]");
  Matrix vstar(static_cast<Eigen::Index>(max_lag), static_cast<Eigen::Index>(cfg.B));
  parallel_for(cfg.B, threads, [&](std::size_t b) {
    const std::vector<std::size_t> tau = source ? source(n, b) : draw_permutation(n, cfg.seed, b);
    if (tau.size() != n) throw InvalidArgument("permutation source returned wrong length");
    const Matrix dp = d.permuted(tau);
    const std::vector<double> v = adcv_all_expanded(dp, max_lag);
    for (std::size_t k = 0; k < max_lag; ++k) {
      vstar(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(b)) = v[k];
    }
  });
  return vstar;
}

struct ResampledStatistics {
  std::vector<double> cvm;
  std::vector<double> ks;
};

/// CvM and KS draws from one set of resampled ADCVs.
inline ResampledStatistics resampled_statistics(const DistanceMatrix& d, std::size_t max_lag,
                                                const ResamplingConfig& cfg,
                                                const SpectralBasis& basis,
                                                std::size_t threads = 1,
                                                const PermutationSource& source = {}) {
  const Matrix vstar = cfg.method == ResamplingMethod::WildBootstrap
                           ? wild_bootstrap_adcv(d, max_lag, cfg, threads)
                           : permutation_adcv(d, max_lag, cfg, threads, source);
  ResampledStatistics out;
  basis.statistics(vstar, d.size(), out.cvm, out.ks);
  return out;
}

inline std::vector<double> wild_bootstrap_draws(const DistanceMatrix& d, std::size_t max_lag,
                                                StatisticKind kind, ResamplingConfig cfg,
                                                const SpectralConfig& spectral = {},
                                                std::size_t threads = 1) {
  cfg.method = ResamplingMethod::WildBootstrap;
  const SpectralBasis basis(max_lag, spectral.ks_grid_size);
  auto s = resampled_statistics(d, max_lag, cfg, basis, threads);
  return kind == StatisticKind::CvM ? s.cvm : s.ks;
}

inline std::vector<double> permutation_draws(const DistanceMatrix& d, std::size_t max_lag,
                                             StatisticKind kind, ResamplingConfig cfg,
                                             const SpectralConfig& spectral = {},
                                             std::size_t threads = 1,
                                             const PermutationSource& source = {}) {
  cfg.method = ResamplingMethod::Permutation;
  const SpectralBasis basis(max_lag, spectral.ks_grid_size);
  auto s = resampled_statistics(d, max_lag, cfg, basis, threads, source);
  return kind == StatisticKind::CvM ? s.cvm : s.ks;
}

// ---------------------------------------------------------------------------
// Decision

/// (1 + #{draws >= observed}) / (B + 1).
inline double p_value(double observed, const std::vector<double>& draws) {
  if (draws.empty()) throw InvalidArgument("p_value: no draws");
  const auto extreme = std::count_if(draws.begin(), draws.end(),
                                     [&](double d) { return d >= observed; });
  return (1.0 + static_cast<double>(extreme)) / (static_cast<double>(draws.size()) + 1.0);
}

/// Rank r = B + 1 - floor(alpha (B + 1)) of the empirical (1 - alpha)
/// quantile, i.e. ceil((1 - alpha)(B + 1)). With this rank,
/// observed > critical_value  <=>  p_value <= alpha.
inline std::size_t critical_rank(std::size_t b, double alpha) {
  const double scaled = alpha * static_cast<double>(b + 1);
  const auto fl = static_cast<std::size_t>(std::floor(scaled + 1e-9 * std::max(1.0, scaled)));
  return b + 1 - fl;
}

/// r-th order statistic of the draws; +inf when r exceeds B (never reject).
inline double critical_value(std::vector<double> draws, double alpha) {
  if (draws.empty()) throw InvalidArgument("critical_value: no draws");
  const std::size_t r = critical_rank(draws.size(), alpha);
  if (r > draws.size()) return std::numeric_limits<double>::infinity();
  std::nth_element(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(r - 1), draws.end());
  return draws[r - 1];
}

inline constexpr std::string_view kFlagDegenerate = "degenerate_sample";
inline constexpr std::string_view kFlagTheoryUnverified = "metric_theory_unverified";
inline constexpr std::string_view kFlagKsEmpirical = "ks_without_limit_theory";

struct TestOptions {
  ResamplingConfig resampling;
  SpectralConfig spectral;
  std::size_t threads = 1;
};

struct TestResult {
  StatisticValue statistic;
  std::vector<double> draws;
  double p_value = 1.0;
  bool reject = false;
  double critical_value = 0.0;
  std::vector<std::string> flags;
  AdcvSequence adcv;
  std::size_t ks_grid_points = 0;

  bool has_flag(std::string_view f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
  }
};

/// Both statistics of one sample, calibrated from a single set of draws.
struct CalibratedTests {
  TestResult cvm;
  TestResult ks;

  const TestResult& get(StatisticKind k) const { return k == StatisticKind::CvM ? cvm : ks; }
};

inline std::size_t resolve_max_lag(std::size_t n, const SpectralConfig& spectral) {
  if (n < 8) throw InvalidArgument("series length must be at least 8, got " + std::to_string(n));
  const std::size_t kmax = spectral.max_lag.value_or(n - 4);
  if (kmax < 1 || kmax > n - 4) {
    throw InvalidArgument("max_lag: must lie in [1, n-4] = [1, " + std::to_string(n - 4) + "]");
  }
  return kmax;
}

inline CalibratedTests calibrate(const DistanceMatrix& d, const TestOptions& opt,
                                 const PermutationSource& source = {}) {
  validate(opt.resampling);
  const std::size_t n = d.size();
  const std::size_t kmax = resolve_max_lag(n, opt.spectral);
  const SpectralBasis basis(kmax, opt.spectral.ks_grid_size);

  AdcvSequence adcv = adcv_all(d, kmax, opt.threads);
  const ResampledStatistics draws =
      resampled_statistics(d, kmax, opt.resampling, basis, opt.threads, source);

  std::vector<std::string> flags;
  if (d.degenerate()) flags.emplace_back(kFlagDegenerate);

  auto finish = [&](StatisticKind kind, double observed, std::vector<double> stats) {
    TestResult r;
    r.statistic = {kind, observed};
    r.p_value = p_value(observed, stats);
    r.critical_value = critical_value(stats, opt.resampling.alpha);
    r.reject = observed > r.critical_value;
    r.draws = std::move(stats);
    r.flags = flags;
    if (kind == StatisticKind::KS) r.flags.emplace_back(kFlagKsEmpirical);
    r.adcv = adcv;
    r.ks_grid_points = basis.grid().size();
    return r;
  };

  std::vector<double> obs_cvm, obs_ks;
  Matrix v(static_cast<Eigen::Index>(kmax), 1);
  for (std::size_t k = 0; k < kmax; ++k) v(static_cast<Eigen::Index>(k), 0) = adcv.v[k];
  basis.statistics(v, n, obs_cvm, obs_ks);

  return CalibratedTests{finish(StatisticKind::CvM, obs_cvm[0], draws.cvm),
                         finish(StatisticKind::KS, obs_ks[0], draws.ks)};
}

inline TestResult run_test(const ObjectSeries& series, MetricKind metric, StatisticKind kind,
                           const TestOptions& opt) {
  resolve_max_lag(series_length(series), opt.spectral);
  const DistanceMatrix d = pairwise_distances(series, metric, opt.threads);
  CalibratedTests both = calibrate(d, opt);
  TestResult r = kind == StatisticKind::CvM ? std::move(both.cvm) : std::move(both.ks);
  if (metric_theory_unverified(metric)) r.flags.emplace_back(kFlagTheoryUnverified);
  return r;
}

}  // namespace metricnoise
