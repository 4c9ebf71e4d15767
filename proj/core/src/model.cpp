#include "suf/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "suf/error.hpp"
#include "suf/random.hpp"

namespace suf::model {
namespace {

using Eigen::Index;

Matrix sigmoid(const Matrix& x) {
  return (1.0 / (1.0 + (-x.array()).exp())).matrix();
}

struct Stacked {
  Matrix wi;  // 3H x H_in
  Matrix uh;  // 3H x H
  Vector bi;  // 3H
  Vector bh;  // 3H
};

Stacked stack(const GruLayer& L) {
  const Index H = L.u_r.rows();
  Stacked s;
  s.wi.resize(3 * H, L.w_r.cols());
  s.wi << L.w_r, L.w_z, L.w_n;
  s.uh.resize(3 * H, H);
  s.uh << L.u_r, L.u_z, L.u_n;
  s.bi.resize(3 * H);
  s.bi << L.b_ir, L.b_iz, L.b_in;
  s.bh.resize(3 * H);
  s.bh << L.b_hr, L.b_hz, L.b_hn;
  return s;
}

void unstack_add(const Stacked& d, GruLayer& L) {
  const Index H = L.u_r.rows();
  L.w_r += d.wi.middleRows(0, H);
  L.w_z += d.wi.middleRows(H, H);
  L.w_n += d.wi.middleRows(2 * H, H);
  L.u_r += d.uh.middleRows(0, H);
  L.u_z += d.uh.middleRows(H, H);
  L.u_n += d.uh.middleRows(2 * H, H);
  L.b_ir += d.bi.segment(0, H);
  L.b_iz += d.bi.segment(H, H);
  L.b_in += d.bi.segment(2 * H, H);
  L.b_hr += d.bh.segment(0, H);
  L.b_hz += d.bh.segment(H, H);
  L.b_hn += d.bh.segment(2 * H, H);
}

// Activations kept for backpropagation, one entry per time step.
struct LayerTape {
  std::vector<Matrix> h;  // T + 1 entries, h[0] = 0
  std::vector<Matrix> r, z, n, ghn;
};

struct Tape {
  std::vector<LayerTape> layers;
  std::vector<std::vector<bool>> active;  // [t][b]
  Matrix final_hidden;                    // H x B, before dropout
  Matrix dropout_mask;                    // H x B (empty when dropout is off)
};

void check_batch(const GruParameters& p, const preprocess::EncodedBatch& batch) {
  const auto rows = static_cast<std::size_t>(p.embedding.rows());
  if (batch.lengths.size() != batch.rows || batch.indices.size() != batch.rows * batch.max_len) {
    fail(ErrorCode::ShapeMismatch, "inconsistent encoded batch");
  }
  for (std::size_t b = 0; b < batch.rows; ++b) {
    if (batch.lengths[b] < 1 || batch.lengths[b] > batch.max_len) {
      fail(ErrorCode::ShapeMismatch, "invalid sequence length in batch");
    }
    for (std::size_t t = 0; t < batch.lengths[b]; ++t) {
      const int c = batch.at(b, t);
      if (c < 1 || static_cast<std::size_t>(c) >= rows) {
        fail(ErrorCode::IndexOutOfVocabulary,
             "index " + std::to_string(c) + " outside embedding of " + std::to_string(rows) + " rows");
      }
    }
  }
}

// Runs the network; fills `tape` when non-null. Returns logits as K x B.
Matrix run(const GruParameters& p, const preprocess::EncodedBatch& batch, const ForwardOptions& opt,
           Tape* tape) {
  check_batch(p, batch);
  const Index B = static_cast<Index>(batch.rows);
  const Index H = p.embedding.cols();
  const std::size_t L = p.layers.size();
  std::size_t T = 0;
  for (auto len : batch.lengths) T = std::max(T, len);

  std::vector<std::vector<bool>> active(T, std::vector<bool>(batch.rows));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t b = 0; b < batch.rows; ++b) active[t][b] = t < batch.lengths[b];
  }

  // Outputs of the layer below, per step (layer 0 reads the embedding instead).
  std::vector<Matrix> below;
  Matrix h;
  if (tape) tape->layers.resize(L);

  for (std::size_t l = 0; l < L; ++l) {
    const Stacked s = stack(p.layers[l]);
    Matrix table;  // layer 0: input projection of every vocabulary entry, 3H x (V+1)
    if (l == 0) table = (s.wi * p.embedding.transpose()).colwise() + s.bi;

    std::vector<Matrix> outputs;
    if (l + 1 < L) outputs.reserve(T);
    h = Matrix::Zero(H, B);
    LayerTape* lt = tape ? &tape->layers[l] : nullptr;
    if (lt) {
      // Sized once and assigned in place, so a reused tape does not reallocate.
      for (auto* v : {&lt->r, &lt->z, &lt->n, &lt->ghn}) v->resize(T);
      lt->h.resize(T + 1);
      lt->h[0] = h;
    }
    Matrix gi(3 * H, B);
    Matrix gh(3 * H, B);
    for (std::size_t t = 0; t < T; ++t) {
      if (l == 0) {
        for (Index b = 0; b < B; ++b) {
          if (active[t][static_cast<std::size_t>(b)]) {
            gi.col(b) = table.col(batch.at(static_cast<std::size_t>(b), t));
          } else {
            gi.col(b).setZero();
          }
        }
      } else {
        gi.noalias() = s.wi * below[t];
        gi.colwise() += s.bi;
      }
      gh.noalias() = s.uh * h;
      gh.colwise() += s.bh;

      Matrix r = sigmoid(gi.topRows(H) + gh.topRows(H));
      Matrix z = sigmoid(gi.middleRows(H, H) + gh.middleRows(H, H));
      Matrix ghn = gh.bottomRows(H);
      Matrix n = (gi.bottomRows(H).array() + r.array() * ghn.array()).tanh().matrix();
      Matrix h_new = ((1.0 - z.array()) * n.array() + z.array() * h.array()).matrix();
      for (Index b = 0; b < B; ++b) {
        if (!active[t][static_cast<std::size_t>(b)]) h_new.col(b) = h.col(b);
      }
      h = std::move(h_new);
      if (lt) {
        lt->r[t] = r;
        lt->z[t] = z;
        lt->n[t] = n;
        lt->ghn[t] = ghn;
        lt->h[t + 1] = h;
      }
      if (l + 1 < L) outputs.push_back(h);
    }
    below = std::move(outputs);
  }

  Matrix features = h;
  Matrix mask;
  if (opt.training && opt.dropout_p > 0.0) {
    if (opt.dropout_p >= 1.0) fail(ErrorCode::UsageError, "dropout_p must be < 1");
    Rng rng(opt.dropout_seed);
    const double keep_scale = 1.0 / (1.0 - opt.dropout_p);
    mask.resize(H, B);
    for (Index j = 0; j < mask.cols(); ++j) {
      for (Index i = 0; i < mask.rows(); ++i) {
        mask(i, j) = rng.uniform01() >= opt.dropout_p ? keep_scale : 0.0;
      }
    }
    features = (features.array() * mask.array()).matrix();
  }
  if (tape) {
    tape->active = std::move(active);
    tape->final_hidden = h;
    tape->dropout_mask = std::move(mask);
  }
  Matrix logits = p.head_weight * features;
  logits.colwise() += p.head_bias;
  return logits;
}

void check_labels(std::span<const int> labels, std::size_t rows, std::size_t k) {
  if (labels.size() != rows) fail(ErrorCode::ShapeMismatch, "label count does not match batch rows");
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= k) {
      fail(ErrorCode::LabelOutOfRange, "label " + std::to_string(y) + " outside [0, " +
                                           std::to_string(k) + ")");
    }
  }
}

}  // namespace

void GruConfig::validate() const {
  if (vocab_size < 1) fail(ErrorCode::UsageError, "vocab_size must be >= 1");
  if (hidden_dim < 1) fail(ErrorCode::UsageError, "hidden_dim must be >= 1");
  if (num_layers < 1) fail(ErrorCode::UsageError, "num_layers must be >= 1");
  if (num_classes < 2) fail(ErrorCode::UsageError, "num_classes must be >= 2");
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) fail(ErrorCode::UsageError, "dropout_p must lie in [0, 1)");
}

GruParameters GruParameters::zeros(const GruConfig& c) {
  c.validate();
  const auto V = static_cast<Index>(c.vocab_size);
  const auto H = static_cast<Index>(c.hidden_dim);
  const auto K = static_cast<Index>(c.num_classes);
  GruParameters p;
  p.embedding = Matrix::Zero(V + 1, H);
  p.layers.resize(c.num_layers);
  for (auto& L : p.layers) {
    for (Matrix* m : {&L.w_r, &L.w_z, &L.w_n, &L.u_r, &L.u_z, &L.u_n}) *m = Matrix::Zero(H, H);
    for (Vector* v : {&L.b_ir, &L.b_iz, &L.b_in, &L.b_hr, &L.b_hz, &L.b_hn}) *v = Vector::Zero(H);
  }
  p.head_weight = Matrix::Zero(K, H);
  p.head_bias = Vector::Zero(K);
  return p;
}

std::size_t GruParameters::parameter_count() const {
  std::size_t n = 0;
  for_each([&](const std::string&, std::span<const double> s) { n += s.size(); });
  return n;
}

bool GruParameters::operator==(const GruParameters& other) const {
  std::vector<std::span<const double>> mine, theirs;
  for_each([&](const std::string&, std::span<const double> s) { mine.push_back(s); });
  other.for_each([&](const std::string&, std::span<const double> s) { theirs.push_back(s); });
  if (mine.size() != theirs.size()) return false;
  if (embedding.rows() != other.embedding.rows() || embedding.cols() != other.embedding.cols() ||
      head_weight.rows() != other.head_weight.rows()) {
    return false;
  }
  for (std::size_t i = 0; i < mine.size(); ++i) {
    if (!std::equal(mine[i].begin(), mine[i].end(), theirs[i].begin(), theirs[i].end())) return false;
  }
  return true;
}

GruConfig config_of(const GruParameters& p) {
  GruConfig c;
  c.vocab_size = static_cast<std::size_t>(p.embedding.rows()) - 1;
  c.hidden_dim = static_cast<std::size_t>(p.embedding.cols());
  c.num_layers = p.layers.size();
  c.num_classes = static_cast<std::size_t>(p.head_weight.rows());
  return c;
}

GruParameters init_params(const GruConfig& config, std::uint64_t seed) {
  GruParameters p = GruParameters::zeros(config);
  const double bound = 1.0 / std::sqrt(static_cast<double>(config.hidden_dim));
  Rng rng(seed);
  p.for_each([&](const std::string&, std::span<double> s) {
    for (double& v : s) v = rng.uniform(-bound, bound);
  });
  return p;
}

Vector gru_cell(const Vector& x, const Vector& h_prev, const GruLayer& L) {
  if (x.size() != L.w_r.cols() || h_prev.size() != L.u_r.cols()) {
    fail(ErrorCode::DimensionMismatch, "gru_cell input dimensions do not match layer weights");
  }
  auto sig = [](const Vector& v) -> Vector { return (1.0 / (1.0 + (-v.array()).exp())).matrix(); };
  const Vector r = sig(L.w_r * x + L.b_ir + L.u_r * h_prev + L.b_hr);
  const Vector z = sig(L.w_z * x + L.b_iz + L.u_z * h_prev + L.b_hz);
  const Vector n =
      (L.w_n * x + L.b_in + (r.array() * (L.u_n * h_prev + L.b_hn).array()).matrix()).array().tanh().matrix();
  return ((1.0 - z.array()) * n.array() + z.array() * h_prev.array()).matrix();
}

Matrix forward(const GruParameters& params, const preprocess::EncodedBatch& batch,
               const ForwardOptions& options) {
  return run(params, batch, options, nullptr).transpose();
}

double cross_entropy(const Matrix& logits, std::span<const int> labels) {
  const auto rows = static_cast<std::size_t>(logits.rows());
  if (rows == 0) fail(ErrorCode::EmptyDataset, "cross entropy of an empty batch");
  check_labels(labels, rows, static_cast<std::size_t>(logits.cols()));
  double total = 0.0;
  for (Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    const double lse = m + std::log((logits.row(i).array() - m).exp().sum());
    total += lse - logits(i, labels[static_cast<std::size_t>(i)]);
  }
  return total / static_cast<double>(rows);
}

LossAndGradient loss_and_gradient(const GruParameters& p, const preprocess::EncodedBatch& batch,
                                  std::span<const int> labels, const ForwardOptions& opt) {
  thread_local Tape tape;
  const Matrix logits_kb = run(p, batch, opt, &tape);
  const Index K = logits_kb.rows();
  const Index B = logits_kb.cols();
  const Index H = p.embedding.cols();
  const std::size_t L = p.layers.size();
  const std::size_t T = tape.active.size();

  LossAndGradient out;
  out.logits = logits_kb.transpose();
  out.loss = cross_entropy(out.logits, labels);
  out.grad = GruParameters::zeros(config_of(p));
  GruParameters& g = out.grad;

  // d loss / d logits = (softmax - onehot) / B
  Matrix dlogits(K, B);
  for (Index b = 0; b < B; ++b) {
    const double m = logits_kb.col(b).maxCoeff();
    Vector e = (logits_kb.col(b).array() - m).exp().matrix();
    dlogits.col(b) = e / e.sum();
    dlogits(labels[static_cast<std::size_t>(b)], b) -= 1.0;
  }
  dlogits /= static_cast<double>(B);

  Matrix features = tape.final_hidden;
  if (tape.dropout_mask.size()) features = (features.array() * tape.dropout_mask.array()).matrix();
  g.head_weight.noalias() = dlogits * features.transpose();
  g.head_bias = dlogits.rowwise().sum();
  Matrix dh_top = p.head_weight.transpose() * dlogits;
  if (tape.dropout_mask.size()) dh_top = (dh_top.array() * tape.dropout_mask.array()).matrix();

  // Gradient w.r.t. this layer's output at each step, coming from the layer above.
  std::vector<Matrix> d_from_above;
  for (std::size_t li = L; li-- > 0;) {
    const Stacked s = stack(p.layers[li]);
    const LayerTape& lt = tape.layers[li];
    Stacked d;
    d.wi = Matrix::Zero(s.wi.rows(), s.wi.cols());
    d.uh = Matrix::Zero(s.uh.rows(), s.uh.cols());
    d.bi = Vector::Zero(3 * H);
    d.bh = Vector::Zero(3 * H);
    Matrix dtable;
    if (li == 0) dtable = Matrix::Zero(3 * H, p.embedding.rows());
    std::vector<Matrix> d_below;
    if (li > 0) d_below.assign(T, Matrix());

    Matrix dh = (li + 1 == L) ? dh_top : Matrix::Zero(H, B);
    Matrix dgi(3 * H, B), dgh(3 * H, B);
    for (std::size_t t = T; t-- > 0;) {
      if (li + 1 < L) dh += d_from_above[t];
      const Matrix& h_prev = lt.h[t];
      const auto r = lt.r[t].array();
      const auto z = lt.z[t].array();
      const auto n = lt.n[t].array();
      const auto ghn = lt.ghn[t].array();
      const auto dha = dh.array();

      const Eigen::ArrayXXd dn_pre = dha * (1.0 - z) * (1.0 - n * n);
      const Eigen::ArrayXXd dz_pre = dha * (h_prev.array() - n) * z * (1.0 - z);
      const Eigen::ArrayXXd dr_pre = dn_pre * ghn * r * (1.0 - r);
      dgi.topRows(H) = dr_pre.matrix();
      dgi.middleRows(H, H) = dz_pre.matrix();
      dgi.bottomRows(H) = dn_pre.matrix();
      dgh.topRows(H) = dr_pre.matrix();
      dgh.middleRows(H, H) = dz_pre.matrix();
      dgh.bottomRows(H) = (dn_pre * r).matrix();

      Matrix dh_prev = (dha * z).matrix();
      for (Index b = 0; b < B; ++b) {
        if (!tape.active[t][static_cast<std::size_t>(b)]) {
          dgi.col(b).setZero();
          dgh.col(b).setZero();
          dh_prev.col(b) = dh.col(b);
        }
      }
      d.uh.noalias() += dgh * h_prev.transpose();
      d.bh += dgh.rowwise().sum();
      dh_prev.noalias() += s.uh.transpose() * dgh;

      if (li == 0) {
        for (Index b = 0; b < B; ++b) {
          if (tape.active[t][static_cast<std::size_t>(b)]) {
            dtable.col(batch.at(static_cast<std::size_t>(b), t)) += dgi.col(b);
          }
        }
      } else {
        const Matrix& x = tape.layers[li - 1].h[t + 1];
        d.wi.noalias() += dgi * x.transpose();
        d.bi += dgi.rowwise().sum();
        d_below[t].noalias() = s.wi.transpose() * dgi;
      }
      dh = std::move(dh_prev);
    }
    if (li == 0) {
      // table = Wi * E^T + bi, so dWi = dtable * E, dbi = rowsum, dE = dtable^T * Wi.
      d.wi.noalias() = dtable * p.embedding;
      d.bi = dtable.rowwise().sum();
      g.embedding.noalias() = dtable.transpose() * s.wi;
    }
    unstack_add(d, g.layers[li]);
    d_from_above = std::move(d_below);
  }
  return out;
}

GruParameters backward(const GruParameters& params, const preprocess::EncodedBatch& batch,
                       std::span<const int> labels, const ForwardOptions& options) {
  return loss_and_gradient(params, batch, labels, options).grad;
}

std::vector<int> argmax_rows(const Matrix& logits) {
  std::vector<int> out(static_cast<std::size_t>(logits.rows()), 0);
  for (Index i = 0; i < logits.rows(); ++i) {
    Index best = 0;
    for (Index k = 1; k < logits.cols(); ++k) {
      if (logits(i, k) > logits(i, best)) best = k;
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

std::vector<int> predict(const GruParameters& params, const preprocess::EncodedBatch& batch) {
  return argmax_rows(forward(params, batch));
}

}  // namespace suf::model
