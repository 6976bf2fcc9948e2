/*
 * Copyright 2026 The Lacuna Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "model/transformer.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "common/error.hpp"

namespace lacuna::model {

// Layout ---------------------------------------------------------------------

Slot ParameterLayout::add(std::string name, int rows, int cols, bool is_bias, bool is_gain) {
  Slot slot{total_, rows, cols};
  total_ += slot.size();
  tensors_.push_back({std::move(name), slot, is_bias, is_gain});
  return slot;
}

ParameterLayout::ParameterLayout(const ModelConfig& config) {
  const int v = config.vocab_size;
  const int d = config.d_model;
  const int f = config.d_ff;
  token_embedding = add("embeddings.token", v, d);
  position_embedding = add("embeddings.position", config.max_seq_len, d);
  embedding_gain = add("embeddings.norm.gain", 1, d, false, true);
  embedding_bias = add("embeddings.norm.bias", 1, d, true);
  for (int l = 0; l < config.n_layers; ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    LayerSlots s;
    s.wq = add(p + "attention.query.weight", d, d);
    s.bq = add(p + "attention.query.bias", 1, d, true);
    s.wk = add(p + "attention.key.weight", d, d);
    s.bk = add(p + "attention.key.bias", 1, d, true);
    s.wv = add(p + "attention.value.weight", d, d);
    s.bv = add(p + "attention.value.bias", 1, d, true);
    s.wo = add(p + "attention.output.weight", d, d);
    s.bo = add(p + "attention.output.bias", 1, d, true);
    s.ln1_gain = add(p + "attention.norm.gain", 1, d, false, true);
    s.ln1_bias = add(p + "attention.norm.bias", 1, d, true);
    s.w1 = add(p + "ffn.in.weight", d, f);
    s.b1 = add(p + "ffn.in.bias", 1, f, true);
    s.w2 = add(p + "ffn.out.weight", f, d);
    s.b2 = add(p + "ffn.out.bias", 1, d, true);
    s.ln2_gain = add(p + "ffn.norm.gain", 1, d, false, true);
    s.ln2_bias = add(p + "ffn.norm.bias", 1, d, true);
    layers.push_back(s);
  }
  head_weight = add("head.transform.weight", d, d);
  head_bias = add("head.transform.bias", 1, d, true);
  head_gain = add("head.norm.gain", 1, d, false, true);
  head_norm_bias = add("head.norm.bias", 1, d, true);
  output_bias = add("head.output.bias", 1, v, true);
}

namespace {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using Column = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using ConstMap = Eigen::Map<const Matrix<T>>;
template <typename T>
using MutMap = Eigen::Map<Matrix<T>>;

constexpr double kNormEpsilon = 1e-5;

template <typename T>
T gelu(T x) {
  return T(0.5) * x * (T(1) + std::erf(x * T(0.70710678118654752440)));
}

template <typename T>
T gelu_grad(T x) {
  const T cdf = T(0.5) * (T(1) + std::erf(x * T(0.70710678118654752440)));
  const T pdf = std::exp(T(-0.5) * x * x) * T(0.39894228040143267794);
  return cdf + x * pdf;
}

template <typename T>
struct NormCache {
  Matrix<T> xhat;
  Column<T> rstd;
};

template <typename T>
Matrix<T> norm_forward(const Matrix<T>& x, const ConstMap<T>& gain, const ConstMap<T>& bias,
                       NormCache<T>& cache) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  cache.xhat.resize(n, d);
  cache.rstd.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const T mean = x.row(i).mean();
    const Eigen::Array<T, 1, Eigen::Dynamic> centered = x.row(i).array() - mean;
    const T variance = centered.square().sum() / static_cast<T>(d);
    const T rstd = T(1) / std::sqrt(variance + T(kNormEpsilon));
    cache.xhat.row(i) = (centered * rstd).matrix();
    cache.rstd(i) = rstd;
  }
  Matrix<T> y = (cache.xhat.array().rowwise() * gain.row(0).array()).matrix();
  y.rowwise() += bias.row(0);
  return y;
}

template <typename T>
Matrix<T> norm_backward(const Matrix<T>& dy, const ConstMap<T>& gain, const NormCache<T>& cache,
                        MutMap<T> dgain, MutMap<T> dbias) {
  dgain.row(0) += dy.cwiseProduct(cache.xhat).colwise().sum();
  dbias.row(0) += dy.colwise().sum();
  const Matrix<T> dxhat = (dy.array().rowwise() * gain.row(0).array()).matrix();
  Matrix<T> dx(dy.rows(), dy.cols());
  for (Eigen::Index i = 0; i < dy.rows(); ++i) {
    const T m1 = dxhat.row(i).mean();
    const T m2 = dxhat.row(i).cwiseProduct(cache.xhat.row(i)).mean();
    dx.row(i) =
        (cache.rstd(i) * (dxhat.row(i).array() - m1 - cache.xhat.row(i).array() * m2)).matrix();
  }
  return dx;
}

template <typename T>
Matrix<T> dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng) {
  Matrix<T> mask(rows, cols);
  const T keep = static_cast<T>(1.0 / (1.0 - p));
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = rng.bernoulli(p) ? T(0) : keep;
  return mask;
}

template <typename T>
void softmax_rows(Matrix<T>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const T peak = m.row(i).maxCoeff();
    m.row(i) = (m.row(i).array() - peak).exp().matrix();
    m.row(i) /= m.row(i).sum();
  }
}

template <typename T>
struct LayerCache {
  Matrix<T> input, q, k, v, context;
  std::vector<Matrix<T>> probs;
  Matrix<T> attention_dropout;
  NormCache<T> norm1;
  Matrix<T> y1, pre_activation, activation;
  Matrix<T> ffn_dropout;
  NormCache<T> norm2;
};

template <typename T>
struct EncoderCache {
  std::vector<TokenId> ids;
  std::vector<int> positions;
  NormCache<T> norm0;
  Matrix<T> embedding_dropout;
  std::vector<LayerCache<T>> layers;
};

template <typename T>
struct HeadCache {
  Matrix<T> rows, pre_activation, z;
  NormCache<T> norm;
};

// One sequence through the encoder and the MLM head, forward and backward.
template <typename T>
class Pass {
 public:
  Pass(const ModelConfig& config, const ParameterLayout& layout, std::span<const T> params)
      : config_(config), layout_(layout), params_(params) {}

  ConstMap<T> p(const Slot& s) const { return ConstMap<T>(params_.data() + s.offset, s.rows, s.cols); }
  static MutMap<T> g(std::span<T> grad, const Slot& s) {
    return MutMap<T>(grad.data() + s.offset, s.rows, s.cols);
  }

  Matrix<T> encode(EncoderCache<T>& cache, Rng* dropout) const {
    const auto n = static_cast<Eigen::Index>(cache.ids.size());
    const int d = config_.d_model;
    const double rate = dropout ? config_.dropout : 0.0;
    const ConstMap<T> tok = p(layout_.token_embedding);
    const ConstMap<T> pos = p(layout_.position_embedding);
    Matrix<T> x(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      x.row(i) = tok.row(cache.ids[i]) + pos.row(cache.positions[i]);
    }
    x = norm_forward(x, p(layout_.embedding_gain), p(layout_.embedding_bias), cache.norm0);
    cache.embedding_dropout.resize(0, 0);
    if (rate > 0.0) {
      cache.embedding_dropout = dropout_mask<T>(n, d, rate, *dropout);
      x = x.cwiseProduct(cache.embedding_dropout);
    }

    const int heads = config_.n_heads;
    const int dh = d / heads;
    const T scale = T(1) / std::sqrt(static_cast<T>(dh));
    cache.layers.resize(layout_.layers.size());
    for (std::size_t l = 0; l < layout_.layers.size(); ++l) {
      const LayerSlots& s = layout_.layers[l];
      LayerCache<T>& c = cache.layers[l];
      c.input = x;
      c.q = x * p(s.wq);
      c.q.rowwise() += p(s.bq).row(0);
      c.k = x * p(s.wk);
      c.k.rowwise() += p(s.bk).row(0);
      c.v = x * p(s.wv);
      c.v.rowwise() += p(s.bv).row(0);
      c.context.resize(n, d);
      c.probs.resize(static_cast<std::size_t>(heads));
      for (int h = 0; h < heads; ++h) {
        Matrix<T> scores = c.q.middleCols(h * dh, dh) * c.k.middleCols(h * dh, dh).transpose();
        scores *= scale;
        softmax_rows(scores);
        c.context.middleCols(h * dh, dh) = scores * c.v.middleCols(h * dh, dh);
        c.probs[static_cast<std::size_t>(h)] = std::move(scores);
      }
      Matrix<T> attended = c.context * p(s.wo);
      attended.rowwise() += p(s.bo).row(0);
      c.attention_dropout.resize(0, 0);
      if (rate > 0.0) {
        c.attention_dropout = dropout_mask<T>(n, d, rate, *dropout);
        attended = attended.cwiseProduct(c.attention_dropout);
      }
      c.y1 = norm_forward(Matrix<T>(x + attended), p(s.ln1_gain), p(s.ln1_bias), c.norm1);
      c.pre_activation = c.y1 * p(s.w1);
      c.pre_activation.rowwise() += p(s.b1).row(0);
      c.activation = c.pre_activation.unaryExpr([](T value) { return gelu(value); });
      Matrix<T> ffn = c.activation * p(s.w2);
      ffn.rowwise() += p(s.b2).row(0);
      c.ffn_dropout.resize(0, 0);
      if (rate > 0.0) {
        c.ffn_dropout = dropout_mask<T>(n, d, rate, *dropout);
        ffn = ffn.cwiseProduct(c.ffn_dropout);
      }
      x = norm_forward(Matrix<T>(c.y1 + ffn), p(s.ln2_gain), p(s.ln2_bias), c.norm2);
    }
    return x;
  }

  Matrix<T> head(const Matrix<T>& rows, HeadCache<T>& cache) const {
    cache.rows = rows;
    cache.pre_activation = rows * p(layout_.head_weight);
    cache.pre_activation.rowwise() += p(layout_.head_bias).row(0);
    const Matrix<T> activated = cache.pre_activation.unaryExpr([](T value) { return gelu(value); });
    cache.z = norm_forward(activated, p(layout_.head_gain), p(layout_.head_norm_bias), cache.norm);
    Matrix<T> logits = cache.z * p(layout_.token_embedding).transpose();
    logits.rowwise() += p(layout_.output_bias).row(0);
    return logits;
  }

  Matrix<T> head_backward(const Matrix<T>& dlogits, const HeadCache<T>& cache,
                          std::span<T> grad) const {
    const ConstMap<T> tok = p(layout_.token_embedding);
    g(grad, layout_.token_embedding).noalias() += dlogits.transpose() * cache.z;
    g(grad, layout_.output_bias).row(0) += dlogits.colwise().sum();
    const Matrix<T> dz = dlogits * tok;
    const Matrix<T> dactivated = norm_backward(dz, p(layout_.head_gain), cache.norm,
                                               g(grad, layout_.head_gain),
                                               g(grad, layout_.head_norm_bias));
    const Matrix<T> dpre = dactivated.cwiseProduct(
        cache.pre_activation.unaryExpr([](T value) { return gelu_grad(value); }));
    g(grad, layout_.head_weight).noalias() += cache.rows.transpose() * dpre;
    g(grad, layout_.head_bias).row(0) += dpre.colwise().sum();
    return dpre * p(layout_.head_weight).transpose();
  }

  void encode_backward(const Matrix<T>& dhidden, const EncoderCache<T>& cache,
                       std::span<T> grad) const {
    const int d = config_.d_model;
    const int heads = config_.n_heads;
    const int dh = d / heads;
    const T scale = T(1) / std::sqrt(static_cast<T>(dh));
    const Eigen::Index n = dhidden.rows();

    Matrix<T> dx = dhidden;
    for (std::size_t li = layout_.layers.size(); li-- > 0;) {
      const LayerSlots& s = layout_.layers[li];
      const LayerCache<T>& c = cache.layers[li];

      const Matrix<T> dr2 =
          norm_backward(dx, p(s.ln2_gain), c.norm2, g(grad, s.ln2_gain), g(grad, s.ln2_bias));
      Matrix<T> dffn = dr2;
      if (c.ffn_dropout.size() > 0) dffn = dffn.cwiseProduct(c.ffn_dropout);
      g(grad, s.w2).noalias() += c.activation.transpose() * dffn;
      g(grad, s.b2).row(0) += dffn.colwise().sum();
      const Matrix<T> dpre = (dffn * p(s.w2).transpose())
                                 .cwiseProduct(c.pre_activation.unaryExpr(
                                     [](T value) { return gelu_grad(value); }));
      g(grad, s.w1).noalias() += c.y1.transpose() * dpre;
      g(grad, s.b1).row(0) += dpre.colwise().sum();
      Matrix<T> dy1 = dr2;
      dy1.noalias() += dpre * p(s.w1).transpose();

      const Matrix<T> dr1 =
          norm_backward(dy1, p(s.ln1_gain), c.norm1, g(grad, s.ln1_gain), g(grad, s.ln1_bias));
      Matrix<T> dattended = dr1;
      if (c.attention_dropout.size() > 0) dattended = dattended.cwiseProduct(c.attention_dropout);
      g(grad, s.wo).noalias() += c.context.transpose() * dattended;
      g(grad, s.bo).row(0) += dattended.colwise().sum();
      const Matrix<T> dcontext = dattended * p(s.wo).transpose();

      Matrix<T> dq(n, d), dk(n, d), dv(n, d);
      for (int h = 0; h < heads; ++h) {
        const Matrix<T>& probs = c.probs[static_cast<std::size_t>(h)];
        const auto dctx = dcontext.middleCols(h * dh, dh);
        const Matrix<T> dprobs = dctx * c.v.middleCols(h * dh, dh).transpose();
        dv.middleCols(h * dh, dh) = probs.transpose() * dctx;
        const Column<T> row_dot = dprobs.cwiseProduct(probs).rowwise().sum();
        Matrix<T> dscores = probs.cwiseProduct(Matrix<T>(dprobs.colwise() - row_dot));
        dscores *= scale;
        dq.middleCols(h * dh, dh) = dscores * c.k.middleCols(h * dh, dh);
        dk.middleCols(h * dh, dh) = dscores.transpose() * c.q.middleCols(h * dh, dh);
      }
      g(grad, s.wq).noalias() += c.input.transpose() * dq;
      g(grad, s.bq).row(0) += dq.colwise().sum();
      g(grad, s.wk).noalias() += c.input.transpose() * dk;
      g(grad, s.bk).row(0) += dk.colwise().sum();
      g(grad, s.wv).noalias() += c.input.transpose() * dv;
      g(grad, s.bv).row(0) += dv.colwise().sum();

      dx = dr1;
      dx.noalias() += dq * p(s.wq).transpose();
      dx.noalias() += dk * p(s.wk).transpose();
      dx.noalias() += dv * p(s.wv).transpose();
    }

    if (cache.embedding_dropout.size() > 0) dx = dx.cwiseProduct(cache.embedding_dropout);
    const Matrix<T> de = norm_backward(dx, p(layout_.embedding_gain), cache.norm0,
                                       g(grad, layout_.embedding_gain),
                                       g(grad, layout_.embedding_bias));
    MutMap<T> dtok = g(grad, layout_.token_embedding);
    MutMap<T> dpos = g(grad, layout_.position_embedding);
    for (Eigen::Index i = 0; i < n; ++i) {
      dtok.row(cache.ids[static_cast<std::size_t>(i)]) += de.row(i);
      dpos.row(cache.positions[static_cast<std::size_t>(i)]) += de.row(i);
    }
  }

 private:
  const ModelConfig& config_;
  const ParameterLayout& layout_;
  std::span<const T> params_;
};

// Keeps real positions of one row, remembering where they came from.
template <typename T>
EncoderCache<T> compact_row(std::span<const TokenId> ids, std::span<const std::uint8_t> attention) {
  EncoderCache<T> cache;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (attention.empty() || attention[i]) {
      cache.ids.push_back(ids[i]);
      cache.positions.push_back(static_cast<int>(i));
    }
  }
  return cache;
}

template <typename T>
Matrix<T> gather_rows(const Matrix<T>& m, const std::vector<int>& rows) {
  Matrix<T> out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = m.row(rows[r]);
  return out;
}

}  // namespace

// Model ----------------------------------------------------------------------

template <typename T>
BasicModel<T>::BasicModel(const ModelConfig& config, std::uint64_t seed)
    : config_(config), layout_((config.validate(), config)) {
  parameters_.assign(layout_.total(), T(0));
  Rng rng(seed);
  for (const NamedSlot& tensor : layout_.tensors()) {
    T* data = parameters_.data() + tensor.slot.offset;
    const std::size_t size = tensor.slot.size();
    if (tensor.is_bias) continue;
    if (tensor.is_gain) {
      std::fill(data, data + size, T(1));
      continue;
    }
    const bool embedding = &tensor.slot == &layout_.tensors()[0].slot ||
                           tensor.name.rfind("embeddings.", 0) == 0;
    const double bound =
        embedding ? 0.02 * std::sqrt(3.0)
                  : std::sqrt(6.0 / static_cast<double>(tensor.slot.rows + tensor.slot.cols));
    for (std::size_t i = 0; i < size; ++i) {
      data[i] = static_cast<T>((2.0 * rng.uniform01() - 1.0) * bound);
    }
  }
}

template <typename T>
BasicModel<T>::BasicModel(const ModelConfig& config, std::vector<T> parameters)
    : config_(config), layout_((config.validate(), config)), parameters_(std::move(parameters)) {
  if (parameters_.size() != layout_.total()) {
    fail(ErrorCode::kCorruptFile, "parameter buffer has " + std::to_string(parameters_.size()) +
                                      " values, layout needs " + std::to_string(layout_.total()));
  }
}

template <typename T>
void BasicModel<T>::check_ids(std::span<const TokenId> ids) const {
  if (ids.size() > static_cast<std::size_t>(config_.max_seq_len)) {
    fail(ErrorCode::kSequenceTooLong, "sequence of " + std::to_string(ids.size()) +
                                          " tokens exceeds max_seq_len " +
                                          std::to_string(config_.max_seq_len));
  }
  for (TokenId id : ids) {
    if (id < 0 || id >= config_.vocab_size) {
      fail(ErrorCode::kUnknownId, "token id " + std::to_string(id) + " outside the vocabulary");
    }
  }
}

template <typename T>
BatchLogits BasicModel<T>::forward(const Grid<TokenId>& ids,
                                   const Grid<std::uint8_t>& attention) const {
  if (attention.rows != ids.rows || attention.cols != ids.cols) {
    fail(ErrorCode::kInvalidArgument, "attention mask shape differs from ids");
  }
  BatchLogits out;
  out.batch = ids.rows;
  out.seq = ids.cols;
  out.vocab = config_.vocab_size;
  out.values.assign(static_cast<std::size_t>(ids.rows) * ids.cols * config_.vocab_size, 0.0f);
  const Pass<T> pass(config_, layout_, parameters_);
  for (int b = 0; b < ids.rows; ++b) {
    check_ids(ids.row(b));
    EncoderCache<T> cache = compact_row<T>(ids.row(b), attention.row(b));
    if (cache.ids.empty()) continue;
    const Matrix<T> hidden = pass.encode(cache, nullptr);
    HeadCache<T> head_cache;
    const Matrix<T> logits = pass.head(hidden, head_cache);
    for (std::size_t r = 0; r < cache.positions.size(); ++r) {
      float* dst = out.values.data() +
                   (static_cast<std::size_t>(b) * ids.cols + cache.positions[r]) * config_.vocab_size;
      for (int v = 0; v < config_.vocab_size; ++v) {
        dst[v] = static_cast<float>(logits(static_cast<Eigen::Index>(r), v));
      }
    }
  }
  return out;
}

template <typename T>
std::vector<LogDistribution> BasicModel<T>::predict_masked(std::span<const TokenId> ids) const {
  check_ids(ids);
  std::vector<int> masks;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == tokenizer::kMask) masks.push_back(static_cast<int>(i));
  }
  if (masks.empty()) fail(ErrorCode::kNoMaskedPositions, "input has no [MASK] token");
  const Pass<T> pass(config_, layout_, parameters_);
  EncoderCache<T> cache = compact_row<T>(ids, {});
  const Matrix<T> hidden = pass.encode(cache, nullptr);
  HeadCache<T> head_cache;
  const Matrix<T> logits = pass.head(gather_rows(hidden, masks), head_cache);
  std::vector<LogDistribution> out;
  out.reserve(masks.size());
  std::vector<float> row(static_cast<std::size_t>(config_.vocab_size));
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    for (int v = 0; v < config_.vocab_size; ++v) row[static_cast<std::size_t>(v)] = static_cast<float>(logits(r, v));
    out.push_back(log_softmax(row));
  }
  return out;
}

template <typename T>
LossAndGradient BasicModel<T>::loss_and_gradient(const MaskedBatch& batch, std::span<T> gradient,
                                                 Rng* dropout) const {
  if (gradient.size() != parameters_.size()) {
    fail(ErrorCode::kInvalidArgument, "gradient buffer has the wrong size");
  }
  std::size_t total = 0;
  for (TokenId label : batch.labels.data) total += label != kIgnoreLabel;
  if (total == 0) fail(ErrorCode::kNoMaskedPositions, "batch has no masked positions");

  const Pass<T> pass(config_, layout_, parameters_);
  const T inv_total = T(1) / static_cast<T>(total);
  double loss_sum = 0.0;
  for (int b = 0; b < batch.input_ids.rows; ++b) {
    check_ids(batch.input_ids.row(b));
    EncoderCache<T> cache = compact_row<T>(batch.input_ids.row(b), batch.attention_mask.row(b));
    std::vector<int> targets;
    std::vector<TokenId> labels;
    for (std::size_t r = 0; r < cache.positions.size(); ++r) {
      const TokenId label = batch.labels.at(b, cache.positions[r]);
      if (label != kIgnoreLabel) {
        targets.push_back(static_cast<int>(r));
        labels.push_back(label);
      }
    }
    if (targets.empty()) continue;
    const Matrix<T> hidden = pass.encode(cache, dropout);
    HeadCache<T> head_cache;
    Matrix<T> logits = pass.head(gather_rows(hidden, targets), head_cache);
    // logits -> d loss / d logits, in place.
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
      const T peak = logits.row(r).maxCoeff();
      logits.row(r) = (logits.row(r).array() - peak).exp().matrix();
      const T sum = logits.row(r).sum();
      const TokenId label = labels[static_cast<std::size_t>(r)];
      const T p_label = logits(r, label) / sum;
      loss_sum -= std::log(static_cast<double>(p_label));
      logits.row(r) *= inv_total / sum;
      logits(r, label) -= inv_total;
    }
    const Matrix<T> drows = pass.head_backward(logits, head_cache, gradient);
    Matrix<T> dhidden = Matrix<T>::Zero(hidden.rows(), hidden.cols());
    for (std::size_t r = 0; r < targets.size(); ++r) {
      dhidden.row(targets[r]) += drows.row(static_cast<Eigen::Index>(r));
    }
    pass.encode_backward(dhidden, cache, gradient);
  }
  return {loss_sum / static_cast<double>(total), total};
}

template <typename T>
double BasicModel<T>::loss(const MaskedBatch& batch) const {
  return mlm_loss(forward(batch.input_ids, batch.attention_mask), batch.labels);
}

template class BasicModel<float>;
template class BasicModel<double>;

LogDistribution log_softmax(std::span<const float> logits) {
  LogDistribution out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double peak = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (double value : out) sum += std::exp(value - peak);
  const double log_z = peak + std::log(sum);
  for (double& value : out) value -= log_z;
  return out;
}

double mlm_loss(const BatchLogits& logits, const Grid<TokenId>& labels) {
  if (labels.rows != logits.batch || labels.cols != logits.seq) {
    fail(ErrorCode::kInvalidArgument, "labels shape differs from logits");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (int b = 0; b < labels.rows; ++b) {
    for (int s = 0; s < labels.cols; ++s) {
      const TokenId label = labels.at(b, s);
      if (label == kIgnoreLabel) continue;
      if (label < 0 || label >= logits.vocab) fail(ErrorCode::kUnknownId, "label outside the vocabulary");
      sum -= log_softmax(logits.position(b, s))[static_cast<std::size_t>(label)];
      ++count;
    }
  }
  if (count == 0) fail(ErrorCode::kNoMaskedPositions, "no labelled positions");
  return sum / static_cast<double>(count);
}

}  // namespace lacuna::model
