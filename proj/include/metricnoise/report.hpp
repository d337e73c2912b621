#pragma once

// Report files of an experiment. The CSV and JSON reports depend only on the
// spec and the outcomes, so they are byte-identical across thread counts;
// wall times go to a separate timing file.

#include <ostream>
#include <string>

#include "metricnoise/config.hpp"
#include "metricnoise/harness.hpp"
#include "metricnoise/io.hpp"

namespace metricnoise {

inline void write_report_csv(std::ostream& out, const ExperimentReport& r) {
  out << "dgp,metric,statistic,method,M,completed,failures,rejections,rate,mc_se\n";
  for (const ExperimentCell& c : r.cells) {
    out << to_string(r.spec.dgp.family) << ',' << to_string(c.metric) << ','
        << to_string(c.statistic) << ',' << to_string(c.method) << ',' << r.spec.M << ','
        << c.completed << ',' << c.failures << ',' << c.rejections << ','
        << format_double(c.rate) << ',' << format_double(c.mc_se) << '\n';
  }
}

inline Json report_json(const ExperimentReport& r) {
  Json j;
  j["spec"] = to_json(r.spec);
  j["regenerated_replicates"] = r.regenerated;
  j["cells"] = Json::array();
  for (const ExperimentCell& c : r.cells) {
    Json cell;
    cell["metric"] = to_string(c.metric);
    cell["statistic"] = to_string(c.statistic);
    cell["method"] = to_string(c.method);
    cell["completed"] = c.completed;
    cell["failures"] = c.failures;
    cell["rejections"] = c.rejections;
    cell["rate"] = c.rate;
    cell["mc_se"] = c.mc_se;
    if (metric_theory_unverified(c.metric)) cell["flags"].push_back(kFlagTheoryUnverified);
    if (c.statistic == StatisticKind::KS) cell["flags"].push_back(kFlagKsEmpirical);
    j["cells"].push_back(std::move(cell));
  }
  return j;
}

inline void write_report_json(std::ostream& out, const ExperimentReport& r) {
  out << report_json(r).dump(2) << '\n';
}

inline void write_timing_csv(std::ostream& out, const ExperimentReport& r) {
  out << "dgp,metric,statistic,method,seconds\n";
  for (const ExperimentCell& c : r.cells) {
    out << to_string(r.spec.dgp.family) << ',' << to_string(c.metric) << ','
        << to_string(c.statistic) << ',' << to_string(c.method) << ','
        << format_double(c.seconds) << '\n';
  }
}

}  // namespace metricnoise
