#pragma once

// JSON configuration documents: test runs, DGP specs and experiment specs.
// Parse errors carry the dotted path of the offending field.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "metricnoise/dgp.hpp"
#include "metricnoise/error.hpp"
#include "metricnoise/harness.hpp"
#include "metricnoise/io.hpp"
#include "metricnoise/resampling.hpp"
#include "metricnoise/spectral.hpp"

namespace metricnoise {

using Json = nlohmann::json;

struct RunConfig {
  ObjectKind object_kind = ObjectKind::Vector;
  MetricKind metric = MetricKind::VectorEuclidean;
  StatisticKind statistic = StatisticKind::CvM;
  ResamplingConfig resampling;
  SpectralConfig spectral;
  std::optional<std::size_t> spd_dim;
  Representation representation = Representation::Quantile;
  std::optional<std::string> output_path;

  InputLayout layout() const { return InputLayout{object_kind, spd_dim, representation}; }
};

namespace detail {

/// Typed access to one JSON object that remembers its path and rejects
/// unknown keys.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "config" : path_, "expected a JSON object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw InvalidArgument(path + ": " + what);
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }
  const Json& raw(const std::string& key) const {
    seen_.insert(key);
    return j_.at(key);
  }

  template <class F>
  auto convert(const std::string& key, F&& f) const {
    try {
      return f(raw(key));
    } catch (const nlohmann::json::exception&) {
      fail(at(key), "wrong type");
    } catch (const InvalidArgument& e) {
      const std::string msg = e.what();
      // validators already prefix the field name; keep the full path instead
      const std::string prefix = key + ": ";
      fail(at(key), msg.rfind(prefix, 0) == 0 ? msg.substr(prefix.size()) : msg);
    }
  }

  std::string str(const std::string& key) const {
    return convert(key, [](const Json& v) {
      if (!v.is_string()) throw InvalidArgument("expected string");
      return v.get<std::string>();
    });
  }
  double real(const std::string& key) const {
    return convert(key, [](const Json& v) {
      if (!v.is_number()) throw InvalidArgument("expected number");
      return v.get<double>();
    });
  }
  std::uint64_t uint(const std::string& key) const {
    return convert(key, [&](const Json& v) -> std::uint64_t {
      if (v.is_number_unsigned()) return v.get<std::uint64_t>();
      if (v.is_number_integer()) {
        if (v.get<std::int64_t>() < 0) throw InvalidArgument("must be nonnegative");
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
      }
      throw InvalidArgument("expected integer");
    });
  }
  std::size_t size(const std::string& key) const { return static_cast<std::size_t>(uint(key)); }

  template <class E, class Parse>
  std::vector<E> list(const std::string& key, Parse parse) const {
    const Json& v = raw(key);
    std::vector<E> out;
    if (v.is_string()) {
      out.push_back(convert(key, [&](const Json& s) { return parse(s.get<std::string>()); }));
      return out;
    }
    if (!v.is_array()) fail(at(key), "expected a string or an array of strings");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string p = at(key) + "[" + std::to_string(i) + "]";
      if (!v[i].is_string()) fail(p, "expected a string");
      try {
        out.push_back(parse(v[i].get<std::string>()));
      } catch (const InvalidArgument& e) {
        fail(p, e.what());
      }
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail(at(key), "unknown field");
    }
  }

 private:
  const Json& j_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

inline void apply_spectral(const Fields& f, SpectralConfig& s) {
  if (f.has("ks_grid_size")) {
    s.ks_grid_size = f.size("ks_grid_size");
    if (s.ks_grid_size < 2) Fields::fail(f.at("ks_grid_size"), "must be at least 2");
  }
  if (f.has("max_lag")) {
    s.max_lag = f.size("max_lag");
    if (*s.max_lag < 1) Fields::fail(f.at("max_lag"), "must be at least 1");
  }
}

inline void apply_resampling(const Fields& f, ResamplingConfig& r) {
  if (f.has("method")) r.method = f.convert("method", [](const Json& v) {
    return method_from_string(v.get<std::string>());
  });
  if (f.has("B")) r.B = f.size("B");
  if (f.has("alpha")) r.alpha = f.real("alpha");
  if (f.has("weight_law")) r.weight_law = f.convert("weight_law", [](const Json& v) {
    return weight_law_from_string(v.get<std::string>());
  });
  if (f.has("seed")) r.seed = f.uint("seed");
  if (r.B < 1) Fields::fail(f.at("B"), "must be at least 1");
  if (!(r.alpha > 0.0 && r.alpha < 1.0)) Fields::fail(f.at("alpha"), "must lie in (0, 1)");
}

}  // namespace detail

inline RunConfig run_config_from_json(const Json& j) {
  const detail::Fields f(j, "");
  RunConfig c;
  if (f.has("object_kind")) c.object_kind = f.convert("object_kind", [](const Json& v) {
    return object_kind_from_string(v.get<std::string>());
  });
  if (!f.has("metric")) detail::Fields::fail("metric", "required");
  c.metric = f.convert("metric", [](const Json& v) { return metric_from_string(v.get<std::string>()); });
  if (!f.has("object_kind")) c.object_kind = metric_object_kind(c.metric);
  if (metric_object_kind(c.metric) != c.object_kind) {
    detail::Fields::fail("metric", std::string(to_string(c.metric)) + " does not apply to " +
                                       std::string(to_string(c.object_kind)) + " objects");
  }
  if (f.has("statistic")) c.statistic = f.convert("statistic", [](const Json& v) {
    return statistic_from_string(v.get<std::string>());
  });
  detail::apply_resampling(f, c.resampling);
  detail::apply_spectral(f, c.spectral);
  if (f.has("p")) {
    c.spd_dim = f.size("p");
    if (*c.spd_dim < 1) detail::Fields::fail("p", "must be at least 1");
  }
  if (f.has("representation")) c.representation = f.convert("representation", [](const Json& v) {
    return representation_from_string(v.get<std::string>());
  });
  if (f.has("output_path")) c.output_path = f.str("output_path");
  f.reject_unknown();
  return c;
}

inline Json to_json(const RunConfig& c) {
  Json j;
  j["object_kind"] = to_string(c.object_kind);
  j["metric"] = to_string(c.metric);
  j["statistic"] = to_string(c.statistic);
  j["method"] = to_string(c.resampling.method);
  j["B"] = c.resampling.B;
  j["alpha"] = c.resampling.alpha;
  j["weight_law"] = to_string(c.resampling.weight_law);
  j["seed"] = c.resampling.seed;
  j["ks_grid_size"] = c.spectral.ks_grid_size;
  j["max_lag"] = c.spectral.max_lag ? Json(*c.spectral.max_lag) : Json(nullptr);
  if (c.object_kind == ObjectKind::Spd) j["p"] = c.spd_dim ? Json(*c.spd_dim) : Json(nullptr);
  if (c.object_kind == ObjectKind::Distribution) j["representation"] = to_string(c.representation);
  if (c.output_path) j["output_path"] = *c.output_path;
  return j;
}

inline DgpSpec dgp_spec_from_json(const Json& j, const std::string& path = "dgp") {
  const detail::Fields f(j, path);
  DgpSpec s;
  if (!f.has("family")) detail::Fields::fail(f.at("family"), "required");
  s.family = f.convert("family", [](const Json& v) { return family_from_string(v.get<std::string>()); });
  if (f.has("n")) s.n = f.size("n");
  if (f.has("rho")) s.rho = f.real("rho");
  if (f.has("dim")) s.dim = f.size("dim");
  if (f.has("grid_size")) s.grid_size = f.size("grid_size");
  if (f.has("burn_in")) s.burn_in = f.size("burn_in");
  if (f.has("noise")) s.noise = f.convert("noise", [](const Json& v) {
    return noise_from_string(v.get<std::string>());
  });
  if (f.has("kernel")) s.kernel = f.convert("kernel", [](const Json& v) {
    return kernel_from_string(v.get<std::string>());
  });
  if (f.has("order")) s.order = f.size("order");
  if (f.has("beta")) s.beta = f.convert("beta", [](const Json& v) {
    if (!v.is_array()) throw InvalidArgument("expected array");
    return v.get<std::vector<double>>();
  });
  f.reject_unknown();
  try {
    validate(s);
  } catch (const InvalidArgument& e) {
    detail::Fields::fail(path, e.what());
  }
  return s;
}

inline Json to_json(const DgpSpec& s) {
  Json j;
  j["family"] = to_string(s.family);
  j["n"] = s.n;
  j["rho"] = s.rho;
  j["dim"] = s.dim;
  j["grid_size"] = effective_grid_size(s);
  j["burn_in"] = effective_burn_in(s);
  j["noise"] = to_string(s.noise);
  j["kernel"] = to_string(s.kernel);
  j["order"] = s.order;
  j["beta"] = s.family == DgpFamily::ATM ? atm_coefficients(s) : s.beta;
  return j;
}

inline ExperimentSpec experiment_spec_from_json(const Json& j) {
  const detail::Fields f(j, "");
  ExperimentSpec s;
  if (!f.has("dgp")) detail::Fields::fail("dgp", "required");
  s.dgp = dgp_spec_from_json(f.raw("dgp"), "dgp");
  if (!f.has("metrics")) detail::Fields::fail("metrics", "required");
  s.metrics = f.list<MetricKind>("metrics", [](const std::string& v) { return metric_from_string(v); });
  if (f.has("statistics")) {
    s.statistics = f.list<StatisticKind>("statistics",
                                         [](const std::string& v) { return statistic_from_string(v); });
  }
  if (f.has("methods")) {
    s.methods = f.list<ResamplingMethod>("methods",
                                         [](const std::string& v) { return method_from_string(v); });
  }
  if (f.has("M")) s.M = f.size("M");
  if (f.has("B")) s.B = f.size("B");
  if (f.has("alpha")) s.alpha = f.real("alpha");
  if (f.has("base_seed")) s.base_seed = f.uint("base_seed");
  if (f.has("weight_law")) s.weight_law = f.convert("weight_law", [](const Json& v) {
    return weight_law_from_string(v.get<std::string>());
  });
  detail::apply_spectral(f, s.spectral);
  f.reject_unknown();
  if (s.M < 1) detail::Fields::fail("M", "must be at least 1");
  if (s.B < 1) detail::Fields::fail("B", "must be at least 1");
  if (!(s.alpha > 0.0 && s.alpha < 1.0)) detail::Fields::fail("alpha", "must lie in (0, 1)");
  try {
    validate(s);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("experiment: ") + e.what());
  }
  return s;
}

inline Json to_json(const ExperimentSpec& s) {
  Json j;
  j["dgp"] = to_json(s.dgp);
  for (MetricKind m : s.metrics) j["metrics"].push_back(to_string(m));
  for (StatisticKind k : s.statistics) j["statistics"].push_back(to_string(k));
  for (ResamplingMethod m : s.methods) j["methods"].push_back(to_string(m));
  j["M"] = s.M;
  j["B"] = s.B;
  j["alpha"] = s.alpha;
  j["base_seed"] = s.base_seed;
  j["weight_law"] = to_string(s.weight_law);
  j["ks_grid_size"] = s.spectral.ks_grid_size;
  j["max_lag"] = s.spectral.max_lag ? Json(*s.spectral.max_lag) : Json(nullptr);
  return j;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(path + ": invalid JSON: " + e.what());
  }
}

}  // namespace metricnoise
