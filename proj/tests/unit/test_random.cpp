#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "suf/random.hpp"

using suf::Rng;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, MatchesMt19937Reference) {
  // 10000th output of a default-seeded mt19937_64 is fixed by the C++ standard.
  Rng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next_u64();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, UniformStaysInRange) {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double x = rng.uniform(-0.25, 0.25);
    ASSERT_GE(x, -0.25);
    ASSERT_LE(x, 0.25);
  }
}

TEST(Rng, IndexIsUnbiasedEnough) {
  Rng rng(3);
  std::vector<int> hist(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++hist[rng.index(7)];
  // Binomial(70000, 1/7): std ~ 92.6; allow 5 sigma.
  for (int h : hist) EXPECT_NEAR(h, 10000, 463);
}

TEST(Rng, NormalMoments) {
  Rng rng(9);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(var, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(Rng, ShuffleIsPermutation) {
  Rng rng(5);
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  rng.shuffle(std::span<int>(w));
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

TEST(Rng, MixSeedSeparatesStreams) {
  EXPECT_NE(suf::mix_seed(7, 0), suf::mix_seed(7, 1));
  EXPECT_NE(suf::mix_seed(7, 0), suf::mix_seed(8, 0));
  EXPECT_EQ(suf::mix_seed(7, 3), suf::mix_seed(7, 3));
}
