#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "suf/model.hpp"

namespace suf::training {

struct TrainConfig {
  double learning_rate = 0.001;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 100;
  std::size_t patience = 3;
  double min_delta = 0.0;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

struct AdamState {
  model::GruParameters m;
  model::GruParameters v;
  std::uint64_t step = 0;

  static AdamState for_params(const model::GruParameters& params);
};

/// One bias-corrected Adam update, elementwise over every tensor.
void adam_step(model::GruParameters& params, const model::GruParameters& grads, AdamState& state,
               const TrainConfig& config);

struct EpochRecord {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 0-based index into `epochs`

  double best_val_loss() const { return epochs.at(best_epoch).val_loss; }
};

struct EncodedSet {
  std::vector<std::vector<int>> sequences;
  std::vector<int> labels;

  std::size_t size() const { return sequences.size(); }
};

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
  std::vector<int> predictions;
};

/// Batched, dropout-free evaluation in dataset order.
Evaluation evaluate(const model::GruParameters& params, const EncodedSet& data,
                    std::size_t batch_size = 256);

struct TrainHooks {
  /// Replaces the built-in validation pass (epoch is 0-based).
  std::function<EpochRecord(const model::GruParameters&, std::size_t epoch)> validate;
  /// Called after each epoch's validation with the current weights.
  std::function<void(std::size_t epoch, const model::GruParameters&, const EpochRecord&)> on_epoch_end;
};

struct TrainResult {
  model::GruParameters params;  // weights of the best epoch
  TrainHistory history;
};

/// Mini-batch Adam with a seeded per-epoch shuffle (last partial batch kept),
/// early stopping on validation loss and best-epoch weight restoration.
TrainResult train(const EncodedSet& train_set, const EncodedSet& val_set,
                  const model::GruConfig& gru_config, const TrainConfig& config,
                  const TrainHooks& hooks = {});

}  // namespace suf::training
