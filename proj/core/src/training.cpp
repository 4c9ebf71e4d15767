#include "suf/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "suf/error.hpp"
#include "suf/random.hpp"

namespace suf::training {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) fail(ErrorCode::UsageError, "learning_rate must be > 0");
  if (batch_size < 1) fail(ErrorCode::UsageError, "batch_size must be >= 1");
  if (patience < 1) fail(ErrorCode::UsageError, "patience must be >= 1");
  if (max_epochs < 1) fail(ErrorCode::UsageError, "max_epochs must be >= 1");
  if (min_delta < 0.0) fail(ErrorCode::UsageError, "min_delta must be >= 0");
}

AdamState AdamState::for_params(const model::GruParameters& params) {
  const auto cfg = model::config_of(params);
  return {model::GruParameters::zeros(cfg), model::GruParameters::zeros(cfg), 0};
}

void adam_step(model::GruParameters& params, const model::GruParameters& grads, AdamState& state,
               const TrainConfig& config) {
  std::vector<std::span<double>> p, m, v;
  std::vector<std::span<const double>> g;
  params.for_each([&](const std::string&, std::span<double> s) { p.push_back(s); });
  state.m.for_each([&](const std::string&, std::span<double> s) { m.push_back(s); });
  state.v.for_each([&](const std::string&, std::span<double> s) { v.push_back(s); });
  grads.for_each([&](const std::string&, std::span<const double> s) { g.push_back(s); });
  if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
    fail(ErrorCode::ShapeMismatch, "adam: tensor count mismatch");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (g[i].size() != p[i].size() || m[i].size() != p[i].size() || v[i].size() != p[i].size()) {
      fail(ErrorCode::ShapeMismatch, "adam: tensor " + std::to_string(i) + " shape mismatch");
    }
  }

  ++state.step;
  const double b1 = config.beta1;
  const double b2 = config.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p[i].size(); ++j) {
      const double gj = g[i][j];
      m[i][j] = b1 * m[i][j] + (1.0 - b1) * gj;
      v[i][j] = b2 * v[i][j] + (1.0 - b2) * gj * gj;
      const double m_hat = m[i][j] / c1;
      const double v_hat = v[i][j] / c2;
      p[i][j] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
}

Evaluation evaluate(const model::GruParameters& params, const EncodedSet& data, std::size_t batch_size) {
  if (data.size() == 0) fail(ErrorCode::EmptyDataset, "cannot evaluate an empty dataset");
  batch_size = std::max<std::size_t>(batch_size, 1);
  Evaluation ev;
  ev.predictions.reserve(data.size());
  double loss_sum = 0.0;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < data.size(); start += batch_size) {
    const std::size_t end = std::min(start + batch_size, data.size());
    std::vector<std::size_t> sel(end - start);
    std::iota(sel.begin(), sel.end(), start);
    const auto batch = preprocess::pad_batch(data.sequences, sel);
    const std::span<const int> labels(data.labels.data() + start, end - start);
    const model::Matrix logits = model::forward(params, batch);
    loss_sum += model::cross_entropy(logits, labels) * static_cast<double>(end - start);
    const auto pred = model::argmax_rows(logits);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      correct += pred[i] == labels[i] ? 1 : 0;
      ev.predictions.push_back(pred[i]);
    }
  }
  ev.loss = loss_sum / static_cast<double>(data.size());
  ev.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  return ev;
}

TrainResult train(const EncodedSet& train_set, const EncodedSet& val_set,
                  const model::GruConfig& gru_config, const TrainConfig& config,
                  const TrainHooks& hooks) {
  config.validate();
  gru_config.validate();
  if (train_set.size() == 0) fail(ErrorCode::EmptyDataset, "training set is empty");
  if (!hooks.validate && val_set.size() == 0) fail(ErrorCode::EmptyDataset, "validation set is empty");
  if (train_set.labels.size() != train_set.size() || val_set.labels.size() != val_set.size()) {
    fail(ErrorCode::ShapeMismatch, "sequence and label counts differ");
  }
  for (const EncodedSet* set : {&train_set, &val_set}) {
    for (const auto& seq : set->sequences) {
      for (int c : seq) {
        if (c < 1 || static_cast<std::size_t>(c) > gru_config.vocab_size) {
          fail(ErrorCode::VocabularyMismatch, "encoded index " + std::to_string(c) +
                                                  " exceeds vocabulary size " +
                                                  std::to_string(gru_config.vocab_size));
        }
      }
    }
  }

  model::GruParameters params = model::init_params(gru_config, mix_seed(config.seed, 0));
  AdamState adam = AdamState::for_params(params);

  TrainResult result;
  result.params = params;
  double best = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    Rng shuffle_rng(mix_seed(config.seed, 1000 + epoch));
    shuffle_rng.shuffle(std::span<std::size_t>(order));

    double loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(start + config.batch_size, order.size());
      std::vector<std::size_t> sel(order.begin() + static_cast<long>(start),
                                   order.begin() + static_cast<long>(end));
      const auto batch = preprocess::pad_batch(train_set.sequences, sel);
      std::vector<int> labels;
      labels.reserve(sel.size());
      for (auto i : sel) labels.push_back(train_set.labels[i]);

      model::ForwardOptions fo;
      fo.training = true;
      fo.dropout_p = gru_config.dropout_p;
      fo.dropout_seed = mix_seed(mix_seed(config.seed, 2000 + epoch), batch_index);
      auto lg = model::loss_and_gradient(params, batch, labels, fo);
      if (!std::isfinite(lg.loss)) {
        fail(ErrorCode::UsageError, "training diverged (non-finite loss) in epoch " +
                                        std::to_string(epoch + 1));
      }
      loss_sum += lg.loss * static_cast<double>(sel.size());
      adam_step(params, lg.grad, adam, config);
    }

    EpochRecord rec;
    if (hooks.validate) {
      rec = hooks.validate(params, epoch);
    } else {
      const auto ev = evaluate(params, val_set, std::max<std::size_t>(config.batch_size, 256));
      rec.val_loss = ev.loss;
      rec.val_accuracy = ev.accuracy;
    }
    rec.train_loss = loss_sum / static_cast<double>(train_set.size());
    result.history.epochs.push_back(rec);
    if (hooks.on_epoch_end) hooks.on_epoch_end(epoch, params, rec);

    if (rec.val_loss < best - config.min_delta) {
      best = rec.val_loss;
      result.history.best_epoch = epoch;
      result.params = params;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  return result;
}

}  // namespace suf::training
