#pragma once

// End-to-end experiment: split, scale, render, encode, train, evaluate.

#include <cstdint>
#include <vector>

#include "suf/checkpoint.hpp"
#include "suf/dataset.hpp"
#include "suf/eval.hpp"
#include "suf/model.hpp"
#include "suf/training.hpp"

namespace suf::pipeline {

struct ExperimentConfig {
  model::GruConfig gru;  // vocab_size and num_classes are filled in from the data
  training::TrainConfig train;
  double val_fraction = 0.2;
  std::size_t window = 1;
  std::uint64_t seed = 0;  // split seed; also copied into train.seed
};

struct ExperimentResult {
  checkpoint::Checkpoint checkpoint;
  eval::MetricsReport val_report;
  std::vector<int> val_truth;
  std::vector<int> val_predicted;
};

/// Scaled, windowed and encoded view of a table under a fitted checkpoint.
training::EncodedSet encode_table(const checkpoint::Checkpoint& ckpt, const dataset::LabeledTable& table);

/// K = max label + 1 (at least 2); `labels` is truncated to K names.
ExperimentResult run_experiment(const dataset::LabeledTable& table, const dataset::LabelMap& labels,
                                const ExperimentConfig& config, const training::TrainHooks& hooks = {});

/// One prediction per window (n - window + 1 of them), in row order.
std::vector<int> predict_table(const checkpoint::Checkpoint& ckpt, const dataset::LabeledTable& table);

struct Evaluation {
  eval::MetricsReport report;
  std::vector<int> truth;
  std::vector<int> predicted;
};

Evaluation evaluate_table(const checkpoint::Checkpoint& ckpt, const dataset::LabeledTable& table);

}  // namespace suf::pipeline
