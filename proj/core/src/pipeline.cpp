#include "suf/pipeline.hpp"

#include <algorithm>

#include "suf/error.hpp"
#include "suf/preprocess.hpp"

namespace suf::pipeline {
namespace {

training::EncodedSet encode_sequences(const preprocess::Vocabulary& vocab,
                                      const std::vector<preprocess::Sequence>& seqs) {
  training::EncodedSet out;
  out.sequences.reserve(seqs.size());
  out.labels.reserve(seqs.size());
  for (const auto& s : seqs) {
    out.sequences.push_back(preprocess::encode(vocab, s.text));
    out.labels.push_back(s.label);
  }
  return out;
}

}  // namespace

training::EncodedSet encode_table(const checkpoint::Checkpoint& ckpt, const dataset::LabeledTable& table) {
  const auto scaled = preprocess::transform(ckpt.scaler, table);
  return encode_sequences(ckpt.vocabulary, preprocess::make_sequences(scaled, ckpt.window));
}

ExperimentResult run_experiment(const dataset::LabeledTable& table, const dataset::LabelMap& labels,
                                const ExperimentConfig& config, const training::TrainHooks& hooks) {
  if (table.size() == 0) fail(ErrorCode::EmptyDataset, "no rows to train on");
  const int max_label = *std::max_element(table.labels.begin(), table.labels.end());
  const std::size_t k = std::max<std::size_t>(2, static_cast<std::size_t>(max_label) + 1);
  if (k > labels.size()) {
    fail(ErrorCode::LabelOutOfRange, "label " + std::to_string(max_label) + " has no class name");
  }

  auto [train_table, val_table] = dataset::split_train_val(table, config.val_fraction, config.seed);

  checkpoint::Checkpoint ckpt;
  ckpt.window = config.window;
  ckpt.scaler = preprocess::fit_minmax(train_table);
  ckpt.labels = labels.truncated(k);

  const auto train_seqs = preprocess::make_sequences(preprocess::transform(ckpt.scaler, train_table), config.window);
  const auto val_seqs = preprocess::make_sequences(preprocess::transform(ckpt.scaler, val_table), config.window);
  ckpt.vocabulary = preprocess::build_vocabulary(train_seqs);
  const auto train_set = encode_sequences(ckpt.vocabulary, train_seqs);
  const auto val_set = encode_sequences(ckpt.vocabulary, val_seqs);

  ckpt.config = config.gru;
  ckpt.config.vocab_size = ckpt.vocabulary.size();
  ckpt.config.num_classes = k;
  auto train_cfg = config.train;
  train_cfg.seed = config.seed;

  auto result = training::train(train_set, val_set, ckpt.config, train_cfg, hooks);
  ckpt.params = std::move(result.params);
  ckpt.history = std::move(result.history);
  ckpt.train_accuracy = training::evaluate(ckpt.params, train_set).accuracy;

  const auto source = evaluate_table(ckpt, table);
  ckpt.source_accuracy = source.report.accuracy;

  ExperimentResult out;
  const auto val_eval = training::evaluate(ckpt.params, val_set);
  out.val_truth = val_set.labels;
  out.val_predicted = val_eval.predictions;
  out.val_report = eval::metrics_from_confusion(eval::confusion(out.val_truth, out.val_predicted, k));
  out.checkpoint = std::move(ckpt);
  return out;
}

std::vector<int> predict_table(const checkpoint::Checkpoint& ckpt, const dataset::LabeledTable& table) {
  return training::evaluate(ckpt.params, encode_table(ckpt, table)).predictions;
}

Evaluation evaluate_table(const checkpoint::Checkpoint& ckpt, const dataset::LabeledTable& table) {
  const auto set = encode_table(ckpt, table);
  Evaluation out;
  out.truth = set.labels;
  out.predicted = training::evaluate(ckpt.params, set).predictions;
  out.report = eval::metrics_from_confusion(eval::confusion(out.truth, out.predicted, ckpt.config.num_classes));
  return out;
}

}  // namespace suf::pipeline
