#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"

using mn::Philox4x32;

TEST(Philox, KnownAnswerZero) {
  const auto r = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(r, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto r = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                   {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(r, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  const auto r = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                   {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(r, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(CounterStream, ReproducibleAndAddressable) {
  mn::CounterStream a(42, mn::StreamDomain::BootstrapWeights, 3, 5);
  mn::CounterStream b(42, mn::StreamDomain::BootstrapWeights, 3, 5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(CounterStream, DistinctStreamsDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint32_t a = 0; a < 4; ++a)
    for (std::uint32_t b = 0; b < 4; ++b)
      for (auto d : {mn::StreamDomain::Simulation, mn::StreamDomain::BootstrapWeights,
                     mn::StreamDomain::Permutation}) {
        mn::CounterStream s(7, d, a, b);
        firsts.insert(s());
      }
  EXPECT_EQ(firsts.size(), 48u);
}

TEST(CounterStream, SeedHighBitsMatter) {
  mn::CounterStream a(1, mn::StreamDomain::Test, 0, 0);
  mn::CounterStream b(1 + (std::uint64_t{1} << 32), mn::StreamDomain::Test, 0, 0);
  EXPECT_NE(a(), b());
}

TEST(CounterStream, UniformMoments) {
  auto s = testutil::stream(99);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sum2 / n - mean * mean, 1.0 / 12.0, 2e-3);
}

TEST(MixSeed, SplitMixReference) {
  // First output of SplitMix64 seeded with 0 and with 1234567.
  EXPECT_EQ(mn::mix_seed(0), 0xe220a8397b1dcdafull);
  EXPECT_EQ(mn::mix_seed(1234567), 0x599ed017fb08fc85ull);
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  std::vector<double> a(1000), b(1000);
  mn::parallel_for(a.size(), 1, [&](std::size_t i) { a[i] = std::sin(static_cast<double>(i)); });
  mn::parallel_for(b.size(), 4, [&](std::size_t i) { b[i] = std::sin(static_cast<double>(i)); });
  EXPECT_EQ(a, b);
}

TEST(Parallel, PropagatesFirstFailingIndex) {
  try {
    mn::parallel_for(100, 3, [&](std::size_t i) {
      if (i == 17 || i == 60) throw mn::InvalidArgument("bad " + std::to_string(i));
    });
    FAIL() << "no exception";
  } catch (const mn::InvalidArgument& e) {
    EXPECT_STREQ(e.what(), "bad 17");
  }
}

TEST(Parallel, ThreadEnvFallback) {
  setenv("METRICNOISE_THREADS", "3", 1);
  EXPECT_EQ(mn::resolve_threads(std::nullopt), 3u);
  EXPECT_EQ(mn::resolve_threads(5), 5u);
  unsetenv("METRICNOISE_THREADS");
}
