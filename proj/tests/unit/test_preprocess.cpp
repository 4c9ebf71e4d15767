#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "suf/error.hpp"
#include "suf/preprocess.hpp"

using namespace suf::preprocess;
using suf::ErrorCode;
using suf::dataset::LabeledTable;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const suf::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected suf::Error";
  return ErrorCode::UsageError;
}

LabeledTable table(std::vector<std::string> names, std::vector<std::vector<double>> rows,
                   std::vector<int> labels = {}) {
  LabeledTable t;
  t.feature_names = std::move(names);
  t.rows = std::move(rows);
  t.labels = labels.empty() ? std::vector<int>(t.rows.size(), 0) : std::move(labels);
  return t;
}

}  // namespace

TEST(MinMax, FitRecordsMinMax) {
  auto p = fit_minmax(table({"x"}, {{2}, {4}, {6}}));
  EXPECT_EQ(p.data_min, std::vector<double>{2});
  EXPECT_EQ(p.data_max, std::vector<double>{6});
  p = fit_minmax(table({"x"}, {{5}, {5}}));
  EXPECT_EQ(p.data_min, std::vector<double>{5});
  EXPECT_EQ(p.data_max, std::vector<double>{5});
  p = fit_minmax(table({"x", "y"}, {{1, -3}, {7, 9}}));
  EXPECT_EQ(p.data_min, (std::vector<double>{1, -3}));
  EXPECT_EQ(p.data_max, (std::vector<double>{7, 9}));
}

TEST(MinMax, EmptyTable) {
  EXPECT_EQ(code_of([] { fit_minmax(table({"x"}, {})); }), ErrorCode::EmptyTable);
}

TEST(MinMax, TransformExamples) {
  const auto t = table({"x"}, {{2}, {4}, {6}});
  const auto s = transform(fit_minmax(t), t);
  EXPECT_EQ(s.rows, (std::vector<std::vector<double>>{{0}, {0.5}, {1}}));

  const auto c = table({"x"}, {{5}, {5}, {5}});
  const auto sc = transform(fit_minmax(c), c);
  for (const auto& r : sc.rows) EXPECT_EQ(r[0], 0.0);

  const auto unseen = transform(fit_minmax(t), table({"x"}, {{8}, {-1}}));
  EXPECT_EQ(unseen.rows[0][0], 1.0);
  EXPECT_EQ(unseen.rows[1][0], 0.0);
}

TEST(MinMax, FeatureMismatch) {
  const auto p = fit_minmax(table({"x"}, {{1}, {2}}));
  EXPECT_EQ(code_of([&] { transform(p, table({"y"}, {{1}})); }), ErrorCode::FeatureMismatch);
}

TEST(MinMax, TrainingValuesInRangeAndOrderPreserved) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> dist(-1e9, 1e9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> rows(50, std::vector<double>(4));
    for (auto& r : rows) {
      for (double& v : r) v = std::round(dist(gen));
    }
    rows[3][2] = rows[0][2];
    const auto t = table({"a", "b", "c", "d"}, rows);
    const auto s = transform(fit_minmax(t), t);
    for (std::size_t f = 0; f < 4; ++f) {
      const auto raw = t.column(f);
      const auto scaled = s.column(f);
      for (double v : scaled) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      for (std::size_t i = 0; i < raw.size(); ++i) {
        for (std::size_t j = 0; j < raw.size(); ++j) {
          if (raw[i] < raw[j]) EXPECT_LE(scaled[i], scaled[j]);
        }
      }
    }
  }
}

TEST(ZScore, OptionalMode) {
  const auto t = table({"x", "c"}, {{1, 3}, {2, 3}, {3, 3}});
  const auto p = fit_zscore(t);
  EXPECT_EQ(p.kind, ScalerKind::ZScore);
  const auto s = transform(p, t);
  EXPECT_DOUBLE_EQ(s.rows[0][0], -1.0);
  EXPECT_DOUBLE_EQ(s.rows[2][0], 1.0);
  EXPECT_EQ(s.rows[1][1], 0.0);
}

TEST(Sequences, Rendering) {
  EXPECT_EQ(format_value(0.5), "0.500000");
  EXPECT_EQ(format_value(-0.0), "0.000000");
  auto seqs = make_sequences(table({"a", "b"}, {{0.5, 0.25}, {0, 1}}, {3, 4}));
  ASSERT_EQ(seqs.size(), 2u);
  EXPECT_EQ(seqs[0].text, "0.500000 0.250000");
  EXPECT_EQ(seqs[0].label, 3);
  EXPECT_EQ(seqs[1].text, "0.000000 1.000000");
}

TEST(Sequences, WindowTwo) {
  auto seqs = make_sequences(table({"a", "b"}, {{0.5, 0.25}, {0, 1}, {1, 1}}, {0, 1, 2}), 2);
  ASSERT_EQ(seqs.size(), 2u);
  EXPECT_EQ(seqs[0].text, "0.500000 0.250000 0.000000 1.000000");
  EXPECT_EQ(seqs[0].label, 1);
  EXPECT_EQ(seqs[1].label, 2);
}

TEST(Vocabulary, SortedIndices) {
  const auto v = build_vocabulary(std::vector<std::string>{"0.5 0.25"});
  EXPECT_EQ(v.chars(), " .025");
  EXPECT_EQ(v.index_of(' '), 1);
  EXPECT_EQ(v.index_of('.'), 2);
  EXPECT_EQ(v.index_of('0'), 3);
  EXPECT_EQ(v.index_of('2'), 4);
  EXPECT_EQ(v.index_of('5'), 5);
  EXPECT_EQ(v.index_of('9'), 0);
}

TEST(Vocabulary, DigitsCorpusSize) {
  const auto v = build_vocabulary(std::vector<std::string>{"0.123456 0.789000", "1.000000"});
  EXPECT_GE(v.size(), 10u);
  EXPECT_LE(v.size(), 12u);
}

TEST(Vocabulary, DuplicatesAndPermutationsIrrelevant) {
  std::vector<std::string> corpus = {"0.1 0.2", "0.345", "1.000000 0.678900", "0.9"};
  const auto base = build_vocabulary(corpus);
  auto dup = corpus;
  dup.insert(dup.end(), corpus.begin(), corpus.end());
  EXPECT_EQ(build_vocabulary(dup), base);
  std::mt19937_64 gen(1);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(corpus.begin(), corpus.end(), gen);
    EXPECT_EQ(build_vocabulary(corpus), base);
  }
}

TEST(Vocabulary, EmptyCorpus) {
  EXPECT_EQ(code_of([] { build_vocabulary(std::vector<std::string>{}); }), ErrorCode::EmptyCorpus);
}

TEST(Encode, RoundTripAndUnknown) {
  const auto v = build_vocabulary(std::vector<std::string>{"0.123456 0.789000"});
  for (const std::string text : {"0.123456", "9.876543 0.000000", " ", "0.5"}) {
    EXPECT_EQ(decode(v, encode(v, text)), text);
  }
  try {
    encode(v, "0.1-2");
    FAIL();
  } catch (const suf::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownCharacter);
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
}

TEST(Pad, RightPadsWithZero) {
  const auto b = pad_batch({{1, 2, 3}, {4, 5, 6, 7, 8}});
  EXPECT_EQ(b.rows, 2u);
  EXPECT_EQ(b.max_len, 5u);
  EXPECT_EQ(b.lengths, (std::vector<std::size_t>{3, 5}));
  EXPECT_EQ(b.indices, (std::vector<int>{1, 2, 3, 0, 0, 4, 5, 6, 7, 8}));
  const auto sel = pad_batch({{1, 2, 3}, {4, 5, 6, 7, 8}, {9}}, {2, 0});
  EXPECT_EQ(sel.lengths, (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(sel.indices, (std::vector<int>{9, 0, 0, 1, 2, 3}));
}
