#pragma once

// Monte Carlo rejection-rate experiments. Every requested (metric, statistic,
// method) cell is evaluated on the same simulated datasets.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "metricnoise/adcv.hpp"
#include "metricnoise/dgp.hpp"
#include "metricnoise/error.hpp"
#include "metricnoise/parallel.hpp"
#include "metricnoise/random.hpp"
#include "metricnoise/resampling.hpp"
#include "metricnoise/spectral.hpp"

namespace metricnoise {

struct ExperimentSpec {
  DgpSpec dgp;
  std::vector<MetricKind> metrics;
  std::vector<StatisticKind> statistics{StatisticKind::CvM};
  std::vector<ResamplingMethod> methods{ResamplingMethod::WildBootstrap,
                                        ResamplingMethod::Permutation};
  std::size_t M = 200;
  std::size_t B = 300;
  double alpha = 0.05;
  std::uint64_t base_seed = 0;
  WeightLaw weight_law = WeightLaw::Rademacher;
  SpectralConfig spectral;
};

inline ObjectKind dgp_object_kind(DgpFamily f) {
  switch (f) {
    case DgpFamily::FuncBM:
    case DgpFamily::FuncBB:
    case DgpFamily::FuncFARCH:
    case DgpFamily::FuncFNMA:
    case DgpFamily::FuncFAR: return ObjectKind::Curve;
    case DgpFamily::CAW: return ObjectKind::Spd;
    case DgpFamily::ATM: return ObjectKind::Distribution;
    default: return ObjectKind::Vector;
  }
}

inline void validate(const ExperimentSpec& s) {
  validate(s.dgp);
  if (s.M < 1) throw InvalidArgument("M: must be at least 1");
  if (s.metrics.empty()) throw InvalidArgument("metrics: at least one metric required");
  if (s.statistics.empty()) throw InvalidArgument("statistics: at least one statistic required");
  if (s.methods.empty()) throw InvalidArgument("methods: at least one method required");
  const ObjectKind kind = dgp_object_kind(s.dgp.family);
  for (MetricKind m : s.metrics) {
    if (metric_object_kind(m) != kind) {
      throw InvalidArgument("metrics: " + std::string(to_string(m)) + " does not apply to " +
                            std::string(to_string(kind)) + " objects");
    }
  }
  ResamplingConfig rc;
  rc.B = s.B;
  rc.alpha = s.alpha;
  validate(rc);
  if (s.spectral.ks_grid_size < 2) throw InvalidArgument("ks_grid_size: must be at least 2");
  resolve_max_lag(s.dgp.n, s.spectral);
}

/// Dataset m uses seed base_seed XOR m; its resampling draws use a derived
/// seed so they never share a stream with the simulation.
inline std::uint64_t dataset_seed(std::uint64_t base, std::size_t m) {
  return base ^ static_cast<std::uint64_t>(m);
}
inline std::uint64_t resampling_seed(std::uint64_t dataset) { return mix_seed(dataset); }

struct ExperimentCell {
  MetricKind metric{};
  StatisticKind statistic{};
  ResamplingMethod method{};
  std::size_t completed = 0;
  std::size_t failures = 0;
  std::size_t rejections = 0;
  double rate = 0.0;
  double mc_se = 0.0;
  /// Seconds spent on distances and calibration for this (metric, method),
  /// summed over replicates; the statistics of one calibration share it.
  double seconds = 0.0;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<ExperimentCell> cells;
  std::size_t regenerated = 0;  // CAW replicates redrawn after losing definiteness
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

inline ExperimentReport run_experiment(const ExperimentSpec& spec, std::size_t threads = 1,
                                       const ProgressFn& progress = {}) {
  validate(spec);
  const std::size_t n_metric = spec.metrics.size();
  const std::size_t n_method = spec.methods.size();
  const std::size_t n_stat = spec.statistics.size();
  const std::size_t n_cells = n_metric * n_method * n_stat;
  auto cell_index = [&](std::size_t mi, std::size_t me, std::size_t st) {
    return (mi * n_method + me) * n_stat + st;
  };

  // outcome[m * n_cells + c]: -1 failed, 0 accepted, 1 rejected.
  std::vector<signed char> outcome(spec.M * n_cells, -1);
  std::vector<double> seconds(spec.M * n_metric * n_method, 0.0);
  std::vector<unsigned char> regenerated(spec.M, 0);
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  parallel_for(spec.M, threads, [&](std::size_t rep) {
    const std::uint64_t seed = dataset_seed(spec.base_seed, rep);
    signed char* out = outcome.data() + rep * n_cells;
    try {
      GenerationInfo info;
      const ObjectSeries series = generate(spec.dgp, seed, &info);
      regenerated[rep] = info.regenerated ? 1 : 0;
      for (std::size_t mi = 0; mi < n_metric; ++mi) {
        const auto t0 = std::chrono::steady_clock::now();
        DistanceMatrix d;
        try {
          d = pairwise_distances(series, spec.metrics[mi], 1);
        } catch (const Error&) {
          continue;
        }
        const double dist_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (std::size_t me = 0; me < n_method; ++me) {
          const auto t1 = std::chrono::steady_clock::now();
          TestOptions opt;
          opt.resampling.method = spec.methods[me];
          opt.resampling.B = spec.B;
          opt.resampling.alpha = spec.alpha;
          opt.resampling.weight_law = spec.weight_law;
          opt.resampling.seed = resampling_seed(seed);
          opt.spectral = spec.spectral;
          opt.threads = 1;
          try {
            const CalibratedTests both = calibrate(d, opt);
            for (std::size_t st = 0; st < n_stat; ++st) {
              out[cell_index(mi, me, st)] = both.get(spec.statistics[st]).reject ? 1 : 0;
            }
          } catch (const Error&) {
          }
          seconds[(rep * n_metric + mi) * n_method + me] =
              dist_seconds / static_cast<double>(n_method) +
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
        }
      }
    } catch (const Error&) {
      // generation failed: every cell of this replicate stays failed
    }
    const std::size_t finished = ++done;
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(finished, spec.M);
    }
  });

  ExperimentReport report{spec, {}, 0};
  for (unsigned char r : regenerated) report.regenerated += r;
  for (std::size_t mi = 0; mi < n_metric; ++mi) {
    for (std::size_t me = 0; me < n_method; ++me) {
      double secs = 0.0;
      for (std::size_t rep = 0; rep < spec.M; ++rep) {
        secs += seconds[(rep * n_metric + mi) * n_method + me];
      }
      for (std::size_t st = 0; st < n_stat; ++st) {
        ExperimentCell cell;
        cell.metric = spec.metrics[mi];
        cell.method = spec.methods[me];
        cell.statistic = spec.statistics[st];
        const std::size_t c = cell_index(mi, me, st);
        for (std::size_t rep = 0; rep < spec.M; ++rep) {
          const signed char o = outcome[rep * n_cells + c];
          if (o < 0) {
            ++cell.failures;
          } else {
            ++cell.completed;
            cell.rejections += static_cast<std::size_t>(o);
          }
        }
        if (cell.completed > 0) {
          const double completed = static_cast<double>(cell.completed);
          cell.rate = static_cast<double>(cell.rejections) / completed;
          cell.mc_se = std::sqrt(cell.rate * (1.0 - cell.rate) / completed);
        }
        cell.seconds = secs;
        report.cells.push_back(cell);
      }
    }
  }
  return report;
}

}  // namespace metricnoise
