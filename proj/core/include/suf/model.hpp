#pragma once

// Character-level GRU classifier: embedding -> stacked GRU layers -> (dropout)
// -> affine head. All arithmetic is double precision.
//
// Gate convention (reset applied to the recurrent candidate term):
//   r   = sigmoid(W_r x + b_ir + U_r h + b_hr)
//   z   = sigmoid(W_z x + b_iz + U_z h + b_hz)
//   n   = tanh(W_n x + b_in + r * (U_n h + b_hn))
//   h'  = (1 - z) * n + z * h
// with h_0 = 0 for every sequence and layer.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "suf/preprocess.hpp"

namespace suf::model {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct GruConfig {
  std::size_t vocab_size = 0;  // real characters; the embedding has vocab_size + 1 rows
  std::size_t hidden_dim = 128;
  std::size_t num_layers = 1;
  std::size_t num_classes = 2;
  double dropout_p = 0.0;

  void validate() const;
  bool operator==(const GruConfig&) const = default;
};

struct GruLayer {
  Matrix w_r, w_z, w_n;  // H x H_in
  Matrix u_r, u_z, u_n;  // H x H
  Vector b_ir, b_iz, b_in, b_hr, b_hz, b_hn;
};

struct GruParameters {
  Matrix embedding;    // (V + 1) x H, row 0 is padding
  std::vector<GruLayer> layers;
  Matrix head_weight;  // K x H
  Vector head_bias;    // K

  static GruParameters zeros(const GruConfig& config);

  /// Visits every tensor in declared order as (name, contiguous storage).
  template <typename F>
  void for_each(F&& fn) {
    visit(*this, fn);
  }
  template <typename F>
  void for_each(F&& fn) const {
    visit(*this, fn);
  }

  std::size_t parameter_count() const;
  bool operator==(const GruParameters& other) const;

 private:
  template <typename Self, typename F>
  static void visit(Self& p, F& fn) {
    auto view = [](auto& m) {
      using Scalar = std::remove_pointer_t<decltype(m.data())>;
      return std::span<Scalar>(m.data(), static_cast<std::size_t>(m.size()));
    };
    fn(std::string("embedding"), view(p.embedding));
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
      auto& L = p.layers[l];
      const std::string pre = "layers." + std::to_string(l) + ".";
      fn(pre + "w_r", view(L.w_r));
      fn(pre + "w_z", view(L.w_z));
      fn(pre + "w_n", view(L.w_n));
      fn(pre + "u_r", view(L.u_r));
      fn(pre + "u_z", view(L.u_z));
      fn(pre + "u_n", view(L.u_n));
      fn(pre + "b_ir", view(L.b_ir));
      fn(pre + "b_iz", view(L.b_iz));
      fn(pre + "b_in", view(L.b_in));
      fn(pre + "b_hr", view(L.b_hr));
      fn(pre + "b_hz", view(L.b_hz));
      fn(pre + "b_hn", view(L.b_hn));
    }
    fn(std::string("head_weight"), view(p.head_weight));
    fn(std::string("head_bias"), view(p.head_bias));
  }
};

/// Dimensions recovered from parameter shapes (dropout_p is not stored there).
GruConfig config_of(const GruParameters& params);

/// Every value drawn uniformly from [-1/sqrt(H), 1/sqrt(H)].
GruParameters init_params(const GruConfig& config, std::uint64_t seed);

/// Single-step reference cell.
Vector gru_cell(const Vector& x, const Vector& h_prev, const GruLayer& layer);

struct ForwardOptions {
  bool training = false;
  double dropout_p = 0.0;
  std::uint64_t dropout_seed = 0;
};

/// Logits, batch x K. Padding positions are never processed.
Matrix forward(const GruParameters& params, const preprocess::EncodedBatch& batch,
               const ForwardOptions& options = {});

/// Mean negative log-softmax of the true class (max-subtracted log-sum-exp).
double cross_entropy(const Matrix& logits, std::span<const int> labels);

struct LossAndGradient {
  double loss = 0.0;
  Matrix logits;
  GruParameters grad;
};

/// Exact gradient of cross_entropy(forward(...)) by backpropagation through time.
LossAndGradient loss_and_gradient(const GruParameters& params, const preprocess::EncodedBatch& batch,
                                  std::span<const int> labels, const ForwardOptions& options = {});

GruParameters backward(const GruParameters& params, const preprocess::EncodedBatch& batch,
                       std::span<const int> labels, const ForwardOptions& options = {});

/// Row-wise argmax; ties resolve to the lowest class index.
std::vector<int> argmax_rows(const Matrix& logits);

std::vector<int> predict(const GruParameters& params, const preprocess::EncodedBatch& batch);

}  // namespace suf::model
