#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "suf/error.hpp"
#include "suf/eval.hpp"

using namespace suf::eval;
using suf::ErrorCode;

namespace {

std::pair<std::vector<int>, std::vector<int>> random_pairs(std::size_t n, int k, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> lab(0, k - 1);
  std::bernoulli_distribution agree(0.6);
  std::vector<int> t(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = lab(gen);
    p[i] = agree(gen) ? t[i] : lab(gen);
  }
  return {t, p};
}

}  // namespace

TEST(Confusion, HandCount) {
  const std::vector<int> t = {0, 0, 1}, p = {0, 1, 1};
  const auto c = confusion(t, p, 2);
  EXPECT_EQ(c.counts, (std::vector<long long>{1, 1, 0, 1}));
  EXPECT_EQ(c.row_normalized(), (std::vector<std::vector<double>>{{0.5, 0.5}, {0, 1}}));
}

TEST(Confusion, AllCorrectIsDiagonal) {
  const std::vector<int> t = {0, 1, 2, 2, 1};
  const auto c = confusion(t, t, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) EXPECT_EQ(c.at(i, j), 0);
    }
  }
  EXPECT_EQ(c.total(), 5);
}

TEST(Confusion, Errors) {
  const std::vector<int> a = {0, 1}, b = {0}, bad = {0, 3};
  try {
    confusion(a, b, 2);
    FAIL();
  } catch (const suf::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
  try {
    confusion(a, bad, 3);
    FAIL();
  } catch (const suf::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LabelOutOfRange);
  }
}

TEST(Metrics, PublishedF1) {
  EXPECT_NEAR(f1_score(0.9474, 0.9476), 0.9475, 5e-5);
  EXPECT_EQ(f1_score(0, 0), 0.0);
}

TEST(Metrics, PerfectBinary) {
  const std::vector<int> t = {1, 0};
  const auto r = metrics_from_confusion(confusion(t, t, 2));
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.macro.f1, 1.0);
}

TEST(Metrics, NeverPredictedClassHasZeroPrecision) {
  const std::vector<int> t = {0, 1, 2}, p = {0, 0, 0};
  const auto r = metrics_from_confusion(confusion(t, p, 3));
  EXPECT_EQ(r.per_class[1].precision, 0.0);
  EXPECT_EQ(r.per_class[2].precision, 0.0);
  EXPECT_EQ(r.per_class[1].f1, 0.0);
}

TEST(Metrics, EmptyMatrix) {
  try {
    metrics_from_confusion(ConfusionCounts{2, {0, 0, 0, 0}});
    FAIL();
  } catch (const suf::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyMatrix);
  }
}

TEST(Metrics, MatchBruteForceOracle) {
  for (int k : {2, 3, 6}) {
    const auto [t, p] = random_pairs(1000, k, static_cast<std::uint64_t>(k));
    const auto oracle = suf::oracle::brute_force_metrics(t, p, k);
    const auto c = confusion(t, p, static_cast<std::size_t>(k));
    const auto r = metrics_from_confusion(c);
    EXPECT_EQ(r.accuracy, oracle.accuracy);
    double macro_p = 0, macro_r = 0, macro_f = 0, weighted_f = 0;
    for (int i = 0; i < k; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      for (int j = 0; j < k; ++j) EXPECT_EQ(c.at(ui, static_cast<std::size_t>(j)), oracle.confusion[ui][static_cast<std::size_t>(j)]);
      EXPECT_EQ(r.per_class[ui].precision, oracle.precision[ui]);
      EXPECT_EQ(r.per_class[ui].recall, oracle.recall[ui]);
      const double pr = oracle.precision[ui], rc = oracle.recall[ui];
      const double f = pr + rc == 0 ? 0 : 2 * pr * rc / (pr + rc);
      EXPECT_NEAR(r.per_class[ui].f1, f, 1e-15);
      macro_p += pr / k;
      macro_r += rc / k;
      macro_f += f / k;
      weighted_f += f * static_cast<double>(std::count(t.begin(), t.end(), i)) / static_cast<double>(t.size());
    }
    EXPECT_NEAR(r.macro.precision, macro_p, 1e-12);
    EXPECT_NEAR(r.macro.recall, macro_r, 1e-12);
    EXPECT_NEAR(r.macro.f1, macro_f, 1e-12);
    EXPECT_NEAR(r.weighted.f1, weighted_f, 1e-12);
    for (const auto& row : r.normalized) {
      EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-9);
    }
  }
}

TEST(Metrics, MacroF1PermutationInvariant) {
  auto [t, p] = random_pairs(500, 4, 9);
  const double base = metrics_from_confusion(confusion(t, p, 4)).macro.f1;
  std::vector<int> perm = {0, 1, 2, 3};
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<int> t2, p2;
    for (int x : t) t2.push_back(perm[static_cast<std::size_t>(x)]);
    for (int x : p) p2.push_back(perm[static_cast<std::size_t>(x)]);
    EXPECT_NEAR(metrics_from_confusion(confusion(t2, p2, 4)).macro.f1, base, 1e-12);
  }
}

TEST(Metrics, BinaryReducesToTpFpFn) {
  const auto [t, p] = random_pairs(300, 2, 5);
  double tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 1 && p[i] == 1) ++tp;
    if (t[i] == 0 && p[i] == 0) ++tn;
    if (t[i] == 0 && p[i] == 1) ++fp;
    if (t[i] == 1 && p[i] == 0) ++fn;
  }
  const auto r = metrics_from_confusion(confusion(t, p, 2));
  EXPECT_EQ(r.accuracy, (tp + tn) / (tp + tn + fp + fn));
  EXPECT_EQ(r.per_class[1].precision, tp / (tp + fp));
  EXPECT_EQ(r.per_class[1].recall, tp / (tp + fn));
}

TEST(Report, RendersFourDecimals) {
  const std::vector<int> t = {0, 0, 1}, p = {0, 1, 1};
  const auto r = metrics_from_confusion(confusion(t, p, 2));
  const auto labels = suf::dataset::LabelMap::standard().truncated(2);
  const auto text = render_text(r, labels);
  EXPECT_NE(text.find("0.5000"), std::string::npos);
  EXPECT_NE(text.find("DoS"), std::string::npos);
  EXPECT_FALSE(render_csv(r, labels).empty());
}
