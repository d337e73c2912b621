#pragma once

// Subcommand bodies of the metricnoise executable. Each returns the process
// exit code: 0 success, 2 success on a degenerate sample, 1 error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "metricnoise/adcv.hpp"
#include "metricnoise/config.hpp"
#include "metricnoise/dgp.hpp"
#include "metricnoise/harness.hpp"
#include "metricnoise/io.hpp"
#include "metricnoise/parallel.hpp"
#include "metricnoise/report.hpp"
#include "metricnoise/resampling.hpp"
#include "metricnoise/spectral.hpp"

namespace metricnoise::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDegenerate = 2;

struct CommonArgs {
  std::string input;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
};

namespace detail {

inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write '" + path + "'");
  f << text;
  if (!f) throw InvalidArgument("write failed for '" + path + "'");
}

inline Json double_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline RunConfig load_run_config(const CommonArgs& a) {
  if (a.config.empty()) throw InvalidArgument("--config is required");
  RunConfig c = run_config_from_json(load_json_file(a.config));
  if (a.seed) c.resampling.seed = *a.seed;
  return c;
}

inline ObjectSeries load_input(const CommonArgs& a, const RunConfig& c) {
  if (a.input.empty()) throw InvalidArgument("--input is required");
  ObjectSeries s = read_series(a.input, c.layout());
  const std::size_t n = series_length(s);
  if (n < 8) {
    throw InvalidArgument(a.input + ": " + std::to_string(n) +
                          " observations; at least 8 are required");
  }
  if (c.spectral.max_lag && *c.spectral.max_lag > n - 4) {
    throw InvalidArgument("max_lag: " + std::to_string(*c.spectral.max_lag) +
                          " exceeds n - 4 = " + std::to_string(n - 4) + " for this input");
  }
  return s;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace detail

inline Json result_json(const TestResult& r, const RunConfig& c) {
  Json j;
  j["statistic_kind"] = to_string(r.statistic.kind);
  j["statistic_value"] = r.statistic.value;
  j["p_value"] = r.p_value;
  j["reject"] = r.reject;
  j["critical_value"] = detail::double_or_null(r.critical_value);
  j["n"] = r.adcv.n;
  j["B"] = r.draws.size();
  j["ks_grid_points"] = r.ks_grid_points;
  j["adcv"] = r.adcv.v;
  j["flags"] = r.flags;
  j["config_echo"] = to_json(c);
  return j;
}

inline int cmd_test(const CommonArgs& a, const std::string& dump_process,
                    std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const RunConfig c = detail::load_run_config(a);
    const ObjectSeries series = detail::load_input(a, c);
    TestOptions opt;
    opt.resampling = c.resampling;
    opt.spectral = c.spectral;
    opt.threads = resolve_threads(a.threads);
    const TestResult r = run_test(series, c.metric, c.statistic, opt);

    const std::string out = !a.out.empty() ? a.out : c.output_path.value_or("");
    detail::write_text(out, result_json(r, c).dump(2) + "\n");

    if (!dump_process.empty()) {
      const std::vector<double> grid = ks_grid(c.spectral.ks_grid_size);
      const std::vector<double> sn = sn_process(r.adcv, grid);
      std::ostringstream csv;
      csv << "zeta,sn\n";
      for (std::size_t i = 0; i < grid.size(); ++i) {
        csv << format_double(grid[i]) << ',' << format_double(sn[i]) << '\n';
      }
      detail::write_text(dump_process, csv.str());
    }
    return r.has_flag(kFlagDegenerate) ? kExitDegenerate : kExitOk;
  });
}

inline int cmd_adcv(const CommonArgs& a, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const RunConfig c = detail::load_run_config(a);
    const ObjectSeries series = detail::load_input(a, c);
    const std::size_t threads = resolve_threads(a.threads);
    const std::size_t n = series_length(series);
    const std::size_t kmax = resolve_max_lag(n, c.spectral);
    const DistanceMatrix d = pairwise_distances(series, c.metric, threads);
    const AdcvSequence v = adcv_all(d, kmax, threads);
    std::ostringstream csv;
    csv << "k,adcv\n";
    for (std::size_t k = 1; k <= kmax; ++k) csv << k << ',' << format_double(v.v[k - 1]) << '\n';
    detail::write_text(a.out, csv.str());
    return d.degenerate() ? kExitDegenerate : kExitOk;
  });
}

/// The config is a DGP spec, either bare or under a "dgp" key.
inline int cmd_simulate(const CommonArgs& a, const std::string& representation,
                        std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    if (a.config.empty()) throw InvalidArgument("--config is required");
    const Json j = load_json_file(a.config);
    const bool nested = j.is_object() && j.contains("dgp") && j.size() == 1;
    const DgpSpec spec = dgp_spec_from_json(nested ? j.at("dgp") : j, "dgp");
    const ObjectSeries s = generate(spec, a.seed.value_or(0));
    std::ostringstream csv;
    write_series(csv, s, representation_from_string(representation));
    detail::write_text(a.out, csv.str());
    return kExitOk;
  });
}

/// Writes <prefix>.csv, <prefix>.json and <prefix>.timing.csv.
inline int cmd_experiment(const CommonArgs& a, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    if (a.config.empty()) throw InvalidArgument("--config is required");
    if (a.out.empty()) throw InvalidArgument("--out (report prefix) is required");
    ExperimentSpec spec = experiment_spec_from_json(load_json_file(a.config));
    if (a.seed) spec.base_seed = *a.seed;
    const std::size_t threads = resolve_threads(a.threads);
    const std::size_t step = std::max<std::size_t>(1, spec.M / 20);
    const ExperimentReport r = run_experiment(spec, threads, [&](std::size_t done, std::size_t total) {
      if (done % step == 0 || done == total) {
        err << "experiment " << to_string(spec.dgp.family) << ": " << done << "/" << total
            << " replicates\n";
      }
    });
    std::ostringstream csv, json, timing;
    write_report_csv(csv, r);
    write_report_json(json, r);
    write_timing_csv(timing, r);
    detail::write_text(a.out + ".csv", csv.str());
    detail::write_text(a.out + ".json", json.str());
    detail::write_text(a.out + ".timing.csv", timing.str());
    return kExitOk;
  });
}

}  // namespace metricnoise::cli
