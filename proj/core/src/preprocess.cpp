#include "suf/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "suf/error.hpp"
#include "suf/stats.hpp"

namespace suf::preprocess {

ScalerParams fit_minmax(const dataset::LabeledTable& train, double range_min, double range_max) {
  if (train.size() == 0) fail(ErrorCode::EmptyTable, "cannot fit a scaler on an empty table");
  if (!(range_min < range_max)) fail(ErrorCode::UsageError, "scaler range must satisfy min < max");
  ScalerParams p;
  p.feature_names = train.feature_names;
  p.range_min = range_min;
  p.range_max = range_max;
  p.data_min.assign(train.width(), 0.0);
  p.data_max.assign(train.width(), 0.0);
  for (std::size_t f = 0; f < train.width(); ++f) {
    const auto col = train.column(f);
    auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    p.data_min[f] = *lo;
    p.data_max[f] = *hi;
  }
  return p;
}

ScalerParams fit_zscore(const dataset::LabeledTable& train) {
  if (train.size() == 0) fail(ErrorCode::EmptyTable, "cannot fit a scaler on an empty table");
  ScalerParams p;
  p.kind = ScalerKind::ZScore;
  p.feature_names = train.feature_names;
  p.data_min.assign(train.width(), 0.0);
  p.data_max.assign(train.width(), 0.0);
  for (std::size_t f = 0; f < train.width(); ++f) {
    const auto col = train.column(f);
    if (col.size() < 2) {
      p.data_min[f] = col.front();
      continue;
    }
    const auto s = stats::describe(col);
    p.data_min[f] = s.mean;
    p.data_max[f] = s.std;
  }
  return p;
}

dataset::LabeledTable transform(const ScalerParams& params, const dataset::LabeledTable& table) {
  if (params.feature_names != table.feature_names) {
    fail(ErrorCode::FeatureMismatch, "table features do not match the fitted scaler");
  }
  dataset::LabeledTable out = table;
  const double span = params.range_max - params.range_min;
  for (auto& row : out.rows) {
    for (std::size_t f = 0; f < row.size(); ++f) {
      const double a = params.data_min[f];
      const double b = params.data_max[f];
      double y;
      if (params.kind == ScalerKind::ZScore) {
        y = b > 0.0 ? (row[f] - a) / b : 0.0;
      } else if (b > a) {
        y = (row[f] - a) / (b - a) * span + params.range_min;
        y = std::clamp(y, params.range_min, params.range_max);
      } else {
        y = params.range_min;
      }
      row[f] = y;
    }
  }
  return out;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::vector<Sequence> make_sequences(const dataset::LabeledTable& scaled, std::size_t window) {
  if (window < 1) fail(ErrorCode::UsageError, "window must be >= 1");
  if (scaled.size() < window) {
    fail(ErrorCode::TooFewRows, "table has fewer rows than the window length");
  }
  std::vector<std::string> rendered;
  rendered.reserve(scaled.size());
  for (const auto& row : scaled.rows) {
    std::string text;
    for (std::size_t f = 0; f < row.size(); ++f) {
      if (f) text += ' ';
      text += format_value(row[f]);
    }
    rendered.push_back(std::move(text));
  }
  std::vector<Sequence> out;
  out.reserve(scaled.size() - window + 1);
  for (std::size_t end = window; end <= scaled.size(); ++end) {
    std::string text = rendered[end - window];
    for (std::size_t k = end - window + 1; k < end; ++k) {
      text += ' ';
      text += rendered[k];
    }
    out.push_back({std::move(text), scaled.labels[end - 1]});
  }
  return out;
}

Vocabulary::Vocabulary(std::string chars) : chars_(std::move(chars)) {
  index_.fill(0);
  std::sort(chars_.begin(), chars_.end());
  chars_.erase(std::unique(chars_.begin(), chars_.end()), chars_.end());
  for (std::size_t i = 0; i < chars_.size(); ++i) {
    index_[static_cast<unsigned char>(chars_[i])] = static_cast<int>(i) + 1;
  }
}

char Vocabulary::char_at(int index) const {
  if (index < 1 || static_cast<std::size_t>(index) > chars_.size()) {
    fail(ErrorCode::IndexOutOfVocabulary, "index " + std::to_string(index) + " not in vocabulary");
  }
  return chars_[static_cast<std::size_t>(index) - 1];
}

Vocabulary build_vocabulary(const std::vector<std::string>& texts) {
  std::array<bool, 256> seen{};
  bool any = false;
  for (const auto& t : texts) {
    for (char c : t) {
      seen[static_cast<unsigned char>(c)] = true;
      any = true;
    }
  }
  if (!any) fail(ErrorCode::EmptyCorpus, "vocabulary corpus contains no characters");
  std::string chars;
  for (int c = 0; c < 256; ++c) {
    if (seen[static_cast<std::size_t>(c)]) chars.push_back(static_cast<char>(c));
  }
  return Vocabulary(std::move(chars));
}

Vocabulary build_vocabulary(const std::vector<Sequence>& sequences) {
  std::vector<std::string> texts;
  texts.reserve(sequences.size());
  for (const auto& s : sequences) texts.push_back(s.text);
  return build_vocabulary(texts);
}

std::vector<int> encode(const Vocabulary& vocab, std::string_view text) {
  std::vector<int> out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const int idx = vocab.index_of(text[i]);
    if (idx == 0) {
      fail(ErrorCode::UnknownCharacter,
           "character '" + std::string(1, text[i]) + "' at position " + std::to_string(i) +
               " is not in the vocabulary");
    }
    out.push_back(idx);
  }
  return out;
}

std::string decode(const Vocabulary& vocab, const std::vector<int>& indices) {
  std::string out;
  out.reserve(indices.size());
  for (int idx : indices) out.push_back(vocab.char_at(idx));
  return out;
}

EncodedBatch pad_batch(const std::vector<std::vector<int>>& encoded,
                       const std::vector<std::size_t>& selection) {
  EncodedBatch batch;
  batch.rows = selection.size();
  for (std::size_t i : selection) batch.max_len = std::max(batch.max_len, encoded.at(i).size());
  batch.indices.assign(batch.rows * batch.max_len, 0);
  batch.lengths.reserve(batch.rows);
  for (std::size_t r = 0; r < selection.size(); ++r) {
    const auto& seq = encoded[selection[r]];
    if (seq.empty()) fail(ErrorCode::ShapeMismatch, "cannot batch an empty sequence");
    std::copy(seq.begin(), seq.end(), batch.indices.begin() + static_cast<long>(r * batch.max_len));
    batch.lengths.push_back(seq.size());
  }
  return batch;
}

EncodedBatch pad_batch(const std::vector<std::vector<int>>& encoded) {
  std::vector<std::size_t> all(encoded.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return pad_batch(encoded, all);
}

}  // namespace suf::preprocess
