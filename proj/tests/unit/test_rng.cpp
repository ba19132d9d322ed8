#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "netstab/rng.hpp"

using namespace netstab;

// Reference words from numpy.random.Philox with the same key and counter.
TEST(Philox, MatchesReferenceWords) {
  const auto a = philox4x64({3, 0, 0, 0}, {7, 1});
  EXPECT_EQ(a[0], 0xdb61af86da1e1891ULL);
  EXPECT_EQ(a[1], 0x5b230021951134ebULL);
  EXPECT_EQ(a[2], 0xf2b10923d95145c6ULL);
  EXPECT_EQ(a[3], 0x49c05d09b7f63783ULL);
  const auto b = philox4x64({5, 9, 2, 0}, {123456789, 3});
  EXPECT_EQ(b[0], 0x07e2a198e6c608edULL);
  EXPECT_EQ(b[1], 0x4f2f2af57fd6ad20ULL);
  EXPECT_EQ(b[2], 0x502075588aea12c0ULL);
  EXPECT_EQ(b[3], 0x7ffa0a63280ebc86ULL);
}

TEST(Philox, KeyedWordsArePure) {
  EXPECT_EQ(keyed_words(11, Stream::shock, {1, 2, 3, 4}), keyed_words(11, Stream::shock, {1, 2, 3, 4}));
  EXPECT_NE(keyed_words(11, Stream::shock, {1, 2, 3, 4}), keyed_words(11, Stream::position, {1, 2, 3, 4}));
}

TEST(DeriveSeed, DistinctAcrossIndicesAndStreams) {
  EXPECT_EQ(derive_seed(5, Stream::replication, 3), derive_seed(5, Stream::replication, 3));
  EXPECT_NE(derive_seed(5, Stream::replication, 3), derive_seed(5, Stream::replication, 4));
  EXPECT_NE(derive_seed(5, Stream::replication, 3), derive_seed(5, Stream::branching, 3));
}

TEST(RngStream, OpenUnitInterval) {
  EXPECT_GT(to_open_unit(0), 0.0);
  EXPECT_LT(to_open_unit(~0ULL), 1.0);
}

TEST(RngStream, ReproducibleSequence) {
  RngStream a(42, Stream::monte_carlo, 7), b(42, Stream::monte_carlo, 7);
  for (int k = 0; k < 50; ++k) EXPECT_EQ(a(), b());
}

TEST(RngStream, DistributionMoments) {
  RngStream rng(1, Stream::monte_carlo);
  const int m = 200000;
  double su = 0, sn = 0, sn2 = 0, se = 0, sp = 0;
  for (int k = 0; k < m; ++k) {
    su += rng.uniform();
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    se += rng.exponential();
    sp += static_cast<double>(rng.poisson(3.5));
  }
  EXPECT_NEAR(su / m, 0.5, 0.005);
  EXPECT_NEAR(sn / m, 0.0, 0.01);
  EXPECT_NEAR(sn2 / m, 1.0, 0.02);
  EXPECT_NEAR(se / m, 1.0, 0.01);
  EXPECT_NEAR(sp / m, 3.5, 0.02);
}

TEST(RngStream, LargePoissonMean) {
  RngStream rng(2, Stream::poisson_count);
  const int m = 20000;
  double s = 0, s2 = 0;
  for (int k = 0; k < m; ++k) {
    const double x = static_cast<double>(rng.poisson(4000.0));
    s += x;
    s2 += x * x;
  }
  const double mean = s / m;
  EXPECT_NEAR(mean, 4000.0, 2.0);
  EXPECT_NEAR(s2 / m - mean * mean, 4000.0, 200.0);
}

TEST(RngStream, BelowIsUniform) {
  RngStream rng(3, Stream::sign_flip);
  std::vector<int> counts(7, 0);
  for (int k = 0; k < 70000; ++k) ++counts[rng.below(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 400);
}
