#pragma once

// Turns scaled counter rows into the character sequences the GRU consumes:
// MinMax scaling, six-decimal text rendering, character vocabulary, index
// encoding and right padding.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "suf/dataset.hpp"

namespace suf::preprocess {

enum class ScalerKind { MinMax, ZScore };

/// Per-feature scaling state, always fitted on training rows only.
///
/// MinMax: x -> (x - data_min) / (data_max - data_min) * (range_max - range_min) + range_min,
/// clipped to [range_min, range_max]; a constant feature maps to range_min.
/// ZScore (optional, not part of the default pipeline): x -> (x - mean) / std,
/// 0 when std == 0. `data_min`/`data_max` then hold mean/std.
struct ScalerParams {
  ScalerKind kind = ScalerKind::MinMax;
  std::vector<std::string> feature_names;
  std::vector<double> data_min;
  std::vector<double> data_max;
  double range_min = 0.0;
  double range_max = 1.0;

  bool operator==(const ScalerParams&) const = default;
};

ScalerParams fit_minmax(const dataset::LabeledTable& train, double range_min = 0.0,
                        double range_max = 1.0);
ScalerParams fit_zscore(const dataset::LabeledTable& train);

dataset::LabeledTable transform(const ScalerParams& params, const dataset::LabeledTable& table);

struct Sequence {
  std::string text;
  int label = 0;

  bool operator==(const Sequence&) const = default;
};

/// Fixed six-decimal rendering, e.g. 0.5 -> "0.500000".
std::string format_value(double v);

/// One sequence per window of `window` consecutive rows (sliding, stride 1);
/// the label is that of the last row in the window.
std::vector<Sequence> make_sequences(const dataset::LabeledTable& scaled, std::size_t window = 1);

/// Sorted distinct characters mapped to 1..V; index 0 is padding.
class Vocabulary {
 public:
  Vocabulary() { index_.fill(0); }
  explicit Vocabulary(std::string chars);

  std::size_t size() const { return chars_.size(); }
  const std::string& chars() const { return chars_; }
  /// 0 when absent.
  int index_of(char c) const { return index_[static_cast<unsigned char>(c)]; }
  char char_at(int index) const;

  bool operator==(const Vocabulary& other) const { return chars_ == other.chars_; }

 private:
  std::string chars_;
  std::array<int, 256> index_{};
};

Vocabulary build_vocabulary(const std::vector<Sequence>& sequences);
Vocabulary build_vocabulary(const std::vector<std::string>& texts);

std::vector<int> encode(const Vocabulary& vocab, std::string_view text);
std::string decode(const Vocabulary& vocab, const std::vector<int>& indices);

/// Row-major index matrix (rows x max_len), zero-padded on the right.
struct EncodedBatch {
  std::size_t rows = 0;
  std::size_t max_len = 0;
  std::vector<int> indices;
  std::vector<std::size_t> lengths;

  int at(std::size_t row, std::size_t pos) const { return indices[row * max_len + pos]; }
};

EncodedBatch pad_batch(const std::vector<std::vector<int>>& encoded);
/// Pads the selected rows of `encoded` (in the given order).
EncodedBatch pad_batch(const std::vector<std::vector<int>>& encoded,
                       const std::vector<std::size_t>& selection);

}  // namespace suf::preprocess
