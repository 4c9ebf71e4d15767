#pragma once

// Self-contained model checkpoint: everything `predict` needs.
//
// On disk this is a JSON document:
//   format            "suf-gru-checkpoint"
//   format_version    1
//   config            {vocab_size, hidden_dim, num_layers, num_classes, dropout_p, window}
//   parameters        [{name, rows, cols, values[]}...] in GruParameters::for_each order,
//                     values column-major
//   scaler            {kind, feature_names[], data_min[], data_max[], range_min, range_max}
//   vocabulary        {chars}
//   labels            [class names, index = label id]
//   history           {epochs[{train_loss, val_loss, val_accuracy}], best_epoch,
//                      train_accuracy, source_accuracy}
// Doubles are written in shortest round-trip decimal form, so load(save(x))
// reproduces every parameter bit.

#include <filesystem>
#include <string>
#include <string_view>

#include "suf/dataset.hpp"
#include "suf/model.hpp"
#include "suf/preprocess.hpp"
#include "suf/training.hpp"

namespace suf::checkpoint {

inline constexpr int kFormatVersion = 1;

struct Checkpoint {
  int format_version = kFormatVersion;
  model::GruConfig config;
  std::size_t window = 1;
  model::GruParameters params;
  preprocess::ScalerParams scaler;
  preprocess::Vocabulary vocabulary;
  dataset::LabelMap labels;
  training::TrainHistory history;
  double train_accuracy = 0.0;   // best weights on the training split
  double source_accuracy = 0.0;  // best weights on every row the model was trained from
};

std::string to_string(const Checkpoint& ckpt);
Checkpoint from_string(std::string_view text);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace suf::checkpoint
