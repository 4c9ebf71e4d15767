#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "suf/checkpoint.hpp"
#include "suf/error.hpp"

using namespace suf::checkpoint;
using suf::ErrorCode;

namespace {

Checkpoint sample() {
  Checkpoint c;
  c.config = suf::oracle::toy_config(2);
  c.config.dropout_p = 0.1;
  c.window = 2;
  c.params = suf::model::init_params(c.config, 77);
  // Values that stress shortest round-trip printing.
  c.params.embedding(1, 0) = 0.1 + 0.2;
  c.params.embedding(2, 1) = 4.9406564584124654e-324;
  c.params.embedding(3, 2) = -1.7976931348623157e308;
  c.params.head_bias(0) = 1.0 / 3.0;
  c.scaler.feature_names = {"cpu-cycles", "instructions"};
  c.scaler.data_min = {422464162, 423369339};
  c.scaler.data_max = {1067247088.5, 1581925852};
  c.vocabulary = suf::preprocess::Vocabulary(".0123");
  c.labels = suf::dataset::LabelMap::standard().truncated(3);
  c.history.epochs = {{0.9, 0.8, 0.5}, {0.4, 0.35, 0.875}};
  c.history.best_epoch = 1;
  c.train_accuracy = 0.9;
  c.source_accuracy = 0.88;
  return c;
}

bool bitwise_equal(const suf::model::GruParameters& a, const suf::model::GruParameters& b) {
  std::vector<std::span<const double>> sa, sb;
  a.for_each([&](const std::string&, std::span<const double> s) { sa.push_back(s); });
  b.for_each([&](const std::string&, std::span<const double> s) { sb.push_back(s); });
  if (sa.size() != sb.size()) return false;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (sa[i].size() != sb[i].size()) return false;
    if (std::memcmp(sa[i].data(), sb[i].data(), sa[i].size_bytes()) != 0) return false;
  }
  return true;
}

ErrorCode load_code(const std::string& text) {
  try {
    from_string(text);
  } catch (const suf::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected suf::Error";
  return ErrorCode::UsageError;
}

}  // namespace

TEST(Checkpoint, RoundTripIsBitwise) {
  const auto c = sample();
  const auto text = to_string(c);
  const auto back = from_string(text);
  EXPECT_TRUE(bitwise_equal(back.params, c.params));
  EXPECT_EQ(back.config, c.config);
  EXPECT_EQ(back.window, 2u);
  EXPECT_EQ(back.scaler, c.scaler);
  EXPECT_EQ(back.vocabulary, c.vocabulary);
  EXPECT_EQ(back.labels, c.labels);
  EXPECT_EQ(back.history.best_epoch, 1u);
  ASSERT_EQ(back.history.epochs.size(), 2u);
  EXPECT_EQ(back.history.epochs[1].val_accuracy, 0.875);
  EXPECT_EQ(back.train_accuracy, 0.9);
  EXPECT_EQ(back.source_accuracy, 0.88);
  EXPECT_EQ(to_string(back), text);
}

TEST(Checkpoint, FileRoundTripPredictsIdentically) {
  const auto c = sample();
  const auto path = std::filesystem::temp_directory_path() / "suf_ckpt_test.json";
  save_checkpoint(c, path);
  const auto back = load_checkpoint(path);
  std::filesystem::remove(path);
  const auto batch = suf::oracle::toy_batch();
  EXPECT_EQ(suf::model::forward(back.params, batch), suf::model::forward(c.params, batch));
}

TEST(Checkpoint, VersionMismatch) {
  auto text = to_string(sample());
  const auto pos = text.find("\"format_version\": 1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 19, "\"format_version\": 2");
  EXPECT_EQ(load_code(text), ErrorCode::VersionMismatch);
}

TEST(Checkpoint, TruncatedIsCorrupt) {
  const auto text = to_string(sample());
  EXPECT_EQ(load_code(text.substr(0, text.size() / 2)), ErrorCode::CorruptDocument);
  EXPECT_EQ(load_code(""), ErrorCode::CorruptDocument);
  EXPECT_EQ(load_code("{\"format\": \"something-else\", \"format_version\": 1}"), ErrorCode::CorruptDocument);
}

TEST(Checkpoint, ShapeTamperingIsCorrupt) {
  auto text = to_string(sample());
  const auto pos = text.find("\"rows\": 6");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 9, "\"rows\": 7");
  EXPECT_EQ(load_code(text), ErrorCode::CorruptDocument);
}

TEST(Checkpoint, MissingFile) {
  try {
    load_checkpoint("/nonexistent/ckpt.json");
    FAIL();
  } catch (const suf::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoFailure);
  }
}
