#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "metricnoise/metricnoise.hpp"

namespace mn = metricnoise;

namespace testutil {

inline mn::CounterStream stream(std::uint64_t seed, std::uint32_t a = 0, std::uint32_t b = 0) {
  return mn::CounterStream(seed, mn::StreamDomain::Test, a, b);
}

inline std::vector<double> normals(std::size_t n, std::uint64_t seed, std::uint32_t a = 0) {
  auto s = stream(seed, a);
  std::normal_distribution<double> nd;
  std::vector<double> out(n);
  for (double& v : out) v = nd(s);
  return out;
}

inline mn::ObjectSeries scalar_series(const std::vector<double>& x) {
  std::vector<mn::VectorObject> out;
  for (double v : x) out.push_back(mn::VectorObject{{v}});
  return out;
}

inline mn::DistanceMatrix scalar_distances(const std::vector<double>& x) {
  return mn::pairwise_distances(scalar_series(x), mn::MetricKind::VectorEuclidean);
}

/// Random symmetric matrix with zero diagonal and nonnegative entries.
inline mn::Matrix random_dissimilarity(std::size_t n, std::uint64_t seed) {
  auto s = stream(seed, 7);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  mn::Matrix d = mn::Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < d.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) d(i, j) = d(j, i) = u(s);
  return d;
}

inline mn::Matrix random_spd(std::size_t p, std::uint64_t seed, std::uint32_t a = 0) {
  auto s = stream(seed, a, 11);
  std::normal_distribution<double> nd;
  const auto pp = static_cast<Eigen::Index>(p);
  mn::Matrix g(pp, pp);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = nd(s);
  mn::Matrix a_ = g * g.transpose() + 0.5 * mn::Matrix::Identity(pp, pp);
  return 0.5 * (a_ + a_.transpose());
}

inline double sample_variance(const std::vector<double>& x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size() - 1);
}

}  // namespace testutil
