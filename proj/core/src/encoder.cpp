// SPDX-License-Identifier: Apache-2.0
#include "rrg/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "rrg/error.hpp"
#include "rrg/ops.hpp"

namespace rrg {

namespace {

constexpr double kCosFloor = 1e-8;

Tensor uniform_param(Shape shape, std::size_t fan_in, SplitMix64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(fan_in, 1)));
  return Tensor::uniform(std::move(shape), -bound, bound, rng, true);
}

}  // namespace

void EncoderConfig::validate() const {
  if (image_side == 0 || patch_size == 0 || image_side % patch_size != 0) {
    throw ConfigError("encoder: image side " + std::to_string(image_side) +
                      " is not a multiple of patch size " +
                      std::to_string(patch_size));
  }
  if (heads == 0 || d_model % heads != 0) {
    throw ConfigError("encoder: d_model " + std::to_string(d_model) +
                      " is not divisible by " + std::to_string(heads) + " heads");
  }
  if (gpsa_heads == 0 || d_model % gpsa_heads != 0) {
    throw ConfigError("encoder: d_model " + std::to_string(d_model) +
                      " is not divisible by " + std::to_string(gpsa_heads) +
                      " gpsa heads");
  }
  if (feature_dim == 0 || ffn_dim == 0) {
    throw ConfigError("encoder: feature_dim and ffn_dim must be positive");
  }
}

Tensor patch_embed(const Tensor& image, const PatchEmbedderParams& params) {
  if (image.rank() != 2 || image.rows() != image.cols()) {
    throw ConfigError("patch_embed: image must be square, got " +
                      shape_str(image.shape()));
  }
  const std::size_t side = image.rows();
  const std::size_t ps = params.patch_size;
  if (ps == 0 || side % ps != 0) {
    throw ConfigError("patch_embed: image side " + std::to_string(side) +
                      " is not a multiple of patch size " + std::to_string(ps));
  }
  const std::size_t grid = side / ps;
  const std::size_t num_patches = grid * grid;
  const std::size_t patch_px = ps * ps;
  if (params.projection.rows() != patch_px) {
    throw ConfigError("patch_embed: projection expects " +
                      std::to_string(params.projection.rows()) +
                      " pixels per patch, image provides " +
                      std::to_string(patch_px));
  }
  if (params.positional_table.rows() != num_patches) {
    throw ConfigError("patch_embed: positional table has " +
                      std::to_string(params.positional_table.rows()) +
                      " rows, image yields " + std::to_string(num_patches) +
                      " patches");
  }

  // Raster order over patches, raster order within each patch. The image is
  // data, not a differentiated input.
  std::vector<double> patches(num_patches * patch_px);
  for (std::size_t gy = 0; gy < grid; ++gy)
    for (std::size_t gx = 0; gx < grid; ++gx) {
      const std::size_t p = gy * grid + gx;
      for (std::size_t y = 0; y < ps; ++y)
        for (std::size_t x = 0; x < ps; ++x)
          patches[p * patch_px + y * ps + x] =
              image.data()[(gy * ps + y) * side + (gx * ps + x)];
    }
  Tensor patch_matrix({num_patches, patch_px}, std::move(patches));
  return ops::add(ops::matmul(patch_matrix, params.projection),
                  params.positional_table);
}

std::vector<Tensor> gpsa_mixed_attention(const Tensor& seq,
                                         const GpsaBlockParams& params) {
  const std::size_t s = seq.rows();
  const std::size_t d = seq.cols();
  if (params.positional_scores.rows() != s) {
    throw ConfigError("gpsa_block: sequence length " + std::to_string(s) +
                      " does not match positional table side " +
                      std::to_string(params.positional_scores.rows()));
  }
  const std::size_t heads = params.heads;
  const std::size_t dk = d / heads;
  const double inv = 1.0 / std::sqrt(static_cast<double>(dk));

  Tensor q = ops::matmul(seq, params.wq);
  Tensor k = ops::matmul(seq, params.wk);
  Tensor pos_attn = ops::softmax(params.positional_scores);
  Tensor one = Tensor::scalar(1.0);

  std::vector<Tensor> mixed;
  mixed.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    Tensor qh = ops::col_slice(q, h * dk, dk);
    Tensor kh = ops::col_slice(k, h * dk, dk);
    Tensor content = ops::softmax(ops::scale(ops::matmul(qh, ops::transpose(kh)), inv));
    Tensor gate = ops::sigmoid(ops::slice(params.gates, h, 1));
    mixed.push_back(ops::add(ops::scale(content, ops::sub(one, gate)),
                             ops::scale(pos_attn, gate)));
  }
  return mixed;
}

Tensor gpsa_block(const Tensor& seq, const GpsaBlockParams& params) {
  const std::size_t heads = params.heads;
  const std::size_t dk = seq.cols() / heads;

  std::vector<Tensor> mixed = gpsa_mixed_attention(seq, params);
  Tensor v = ops::matmul(seq, params.wv);
  std::vector<Tensor> head_outs;
  head_outs.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    head_outs.push_back(ops::matmul(mixed[h], ops::col_slice(v, h * dk, dk)));
  }
  Tensor attn = ops::matmul(ops::concat(head_outs, 1), params.wo);
  Tensor x = ops::add(seq, attn);

  Tensor hidden = ops::gelu(ops::add_rowwise(ops::matmul(x, params.ffn_w1),
                                             params.ffn_b1));
  Tensor ffn = ops::add_rowwise(ops::matmul(hidden, params.ffn_w2), params.ffn_b2);
  return ops::add(x, ffn);
}

MultiHeadAttentionOutput multi_head_attention(const Tensor& x,
                                              const MultiHeadAttentionParams& params) {
  const std::size_t n = params.heads();
  if (n == 0) throw ConfigError("multi_head_attention: no heads configured");
  const std::size_t d = x.cols();
  if (n * params.head_dim() != d) {
    throw ConfigError("multi_head_attention: d_model " + std::to_string(d) +
                      " != heads " + std::to_string(n) + " x d_k " +
                      std::to_string(params.head_dim()));
  }
  MultiHeadAttentionOutput out;
  out.head_outputs.reserve(n);
  out.attention.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Tensor q = ops::matmul(x, params.wq[j]);
    Tensor k = ops::matmul(x, params.wk[j]);
    Tensor v = ops::matmul(x, params.wv[j]);
    const double inv = 1.0 / std::sqrt(static_cast<double>(q.cols()));
    Tensor attn = ops::softmax(ops::scale(ops::matmul(q, ops::transpose(k)), inv));
    out.attention.push_back(attn);
    out.head_outputs.push_back(ops::matmul(attn, v));
  }
  out.concat_output = ops::matmul(ops::concat(out.head_outputs, 1), params.wo);
  return out;
}

std::vector<double> update_head_weights(const std::vector<double>& w_prev) {
  if (w_prev.empty()) throw ContractError("update_head_weights: empty weight vector");
  const double n = static_cast<double>(w_prev.size());
  double mx = w_prev[0];
  for (double v : w_prev) mx = std::max(mx, v);
  std::vector<double> out(w_prev.size());
  double z = 0.0;
  for (std::size_t i = 0; i < w_prev.size(); ++i) z += (out[i] = std::exp(w_prev[i] - mx));
  for (double& v : out) v = v / z * n;
  return out;
}

std::vector<Tensor> apply_head_weights(const std::vector<double>& w,
                                       const std::vector<Tensor>& heads) {
  if (w.size() != heads.size()) {
    throw ContractError("apply_head_weights: " + std::to_string(w.size()) +
                        " weights for " + std::to_string(heads.size()) + " heads");
  }
  std::vector<Tensor> out;
  out.reserve(heads.size());
  for (std::size_t j = 0; j < heads.size(); ++j)
    out.push_back(ops::scale(heads[j], w[j]));
  return out;
}

std::vector<Tensor> apply_head_weights(const Tensor& w,
                                       const std::vector<Tensor>& heads) {
  if (w.size() != heads.size()) {
    throw ContractError("apply_head_weights: " + std::to_string(w.size()) +
                        " weights for " + std::to_string(heads.size()) + " heads");
  }
  std::vector<Tensor> out;
  out.reserve(heads.size());
  for (std::size_t j = 0; j < heads.size(); ++j)
    out.push_back(ops::scale(heads[j], ops::slice(w, j, 1)));
  return out;
}

std::size_t select_base_head(const std::vector<double>& w_a) {
  if (w_a.empty()) throw ContractError("select_base_head: empty weight vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < w_a.size(); ++i)
    if (w_a[i] > w_a[best]) best = i;
  return best;
}

std::vector<double> cosine_head_weights(
    const std::vector<std::vector<std::vector<double>>>& batch_heads,
    std::size_t base_index) {
  if (batch_heads.empty()) throw ContractError("cosine_head_weights: empty batch");
  const std::size_t n = batch_heads[0].size();
  if (base_index >= n) {
    throw ContractError("cosine_head_weights: base index " +
                        std::to_string(base_index) + " out of range for " +
                        std::to_string(n) + " heads");
  }
  std::vector<double> w(n, 0.0);
  for (const auto& sample : batch_heads) {
    if (sample.size() != n)
      throw ContractError("cosine_head_weights: inconsistent head count in batch");
    const std::vector<double>& base = sample[base_index];
    double base_norm = 0.0;
    for (double v : base) base_norm += v * v;
    base_norm = std::sqrt(base_norm);
    for (std::size_t j = 0; j < n; ++j) {
      const std::vector<double>& h = sample[j];
      double dot = 0.0, norm = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        dot += h[i] * base[i];
        norm += h[i] * h[i];
      }
      const double denom = std::max(std::sqrt(norm) * base_norm, 1e-12);
      w[j] += dot / denom;
    }
  }
  const double inv = 1.0 / static_cast<double>(batch_heads.size());
  for (double& v : w) v *= inv;
  return w;
}

std::vector<double> cold_start_cosine(std::size_t heads) {
  return std::vector<double>(heads, 1.0);
}

DualWeights dual_weight(const std::vector<double>& w_cos) {
  if (w_cos.empty()) throw ContractError("dual_weight: empty cosine vector");
  const std::size_t n = w_cos.size();
  double log_sum = 0.0;
  for (double v : w_cos) log_sum += std::log(std::max(std::fabs(v), kCosFloor));
  DualWeights out;
  out.beta = std::exp(log_sum / static_cast<double>(n));
  out.w_dwa.resize(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out.w_dwa[j] = std::max(out.beta - w_cos[j], 0.0);
    total += out.w_dwa[j];
  }
  if (total == 0.0) {
    // Identical-similarity degeneracy would annihilate the encoder output.
    out.fallback = true;
    std::fill(out.w_dwa.begin(), out.w_dwa.end(), 1.0 / static_cast<double>(n));
  }
  return out;
}

EncoderOutput encode(const Tensor& image, const EncoderParams& params,
                     const std::vector<double>& w_cos, bool single_weight) {
  Tensor seq = patch_embed(image, params.patch);
  for (const GpsaBlockParams& block : params.blocks) seq = gpsa_block(seq, block);

  Tensor with_class = ops::concat({seq, params.class_token}, 0);
  Tensor class_row = ops::row(with_class, with_class.rows() - 1);
  Tensor class_feature =
      ops::add(ops::matmul(class_row, params.feature_w), params.feature_b);

  MultiHeadAttentionOutput mha = multi_head_attention(with_class, params.mha);

  EncoderOutput out;
  out.state.head_outputs = mha.head_outputs;
  out.state.w_a = params.w_a.data();
  out.state.base_index = select_base_head(out.state.w_a);
  if (single_weight) {
    out.state.w_cos.clear();
    out.state.beta = 0.0;
    out.state.w_dwa.assign(params.mha.heads(), 1.0);
    out.state.fallback = false;
  } else {
    if (w_cos.size() != params.mha.heads()) {
      throw ContractError("encode: " + std::to_string(w_cos.size()) +
                          " cosine weights for " +
                          std::to_string(params.mha.heads()) + " heads");
    }
    DualWeights dw = dual_weight(w_cos);
    out.state.w_cos = w_cos;
    out.state.beta = dw.beta;
    out.state.w_dwa = dw.w_dwa;
    out.state.fallback = dw.fallback;
  }

  std::vector<Tensor> weighted = apply_head_weights(params.w_a, mha.head_outputs);
  weighted = apply_head_weights(out.state.w_dwa, weighted);
  out.weighted_sequence = ops::matmul(ops::concat(weighted, 1), params.mha.wo);
  out.weighted_attention = ops::mean_rows(out.weighted_sequence);
  out.class_feature = class_feature;
  return out;
}

EncoderParams init_encoder(const EncoderConfig& cfg, SplitMix64& rng) {
  cfg.validate();
  const std::size_t p = cfg.num_patches();
  const std::size_t px = cfg.patch_size * cfg.patch_size;
  const std::size_t dk = cfg.d_model / cfg.heads;

  EncoderParams params;
  params.patch.patch_size = cfg.patch_size;
  params.patch.projection = uniform_param({px, cfg.d_model}, px, rng);
  params.patch.positional_table = uniform_param({p, cfg.d_model}, cfg.d_model, rng);

  params.blocks.resize(cfg.gpsa_blocks);
  for (GpsaBlockParams& b : params.blocks) {
    b.heads = cfg.gpsa_heads;
    b.wq = uniform_param({cfg.d_model, cfg.d_model}, cfg.d_model, rng);
    b.wk = uniform_param({cfg.d_model, cfg.d_model}, cfg.d_model, rng);
    b.wv = uniform_param({cfg.d_model, cfg.d_model}, cfg.d_model, rng);
    b.wo = uniform_param({cfg.d_model, cfg.d_model}, cfg.d_model, rng);
    b.gates = Tensor::zeros({cfg.gpsa_heads}, true);  // start at an even blend
    b.positional_scores = uniform_param({p, p}, p, rng);
    b.ffn_w1 = uniform_param({cfg.d_model, cfg.ffn_dim}, cfg.d_model, rng);
    b.ffn_b1 = Tensor::zeros({cfg.ffn_dim}, true);
    b.ffn_w2 = uniform_param({cfg.ffn_dim, cfg.d_model}, cfg.ffn_dim, rng);
    b.ffn_b2 = Tensor::zeros({cfg.d_model}, true);
  }

  params.class_token = uniform_param({1, cfg.d_model}, cfg.d_model, rng);
  params.feature_w = uniform_param({cfg.d_model, cfg.feature_dim}, cfg.d_model, rng);
  params.feature_b = Tensor::zeros({cfg.feature_dim}, true);

  params.mha.wq.reserve(cfg.heads);
  for (std::size_t j = 0; j < cfg.heads; ++j) {
    params.mha.wq.push_back(uniform_param({cfg.d_model, dk}, cfg.d_model, rng));
    params.mha.wk.push_back(uniform_param({cfg.d_model, dk}, cfg.d_model, rng));
    params.mha.wv.push_back(uniform_param({cfg.d_model, dk}, cfg.d_model, rng));
  }
  params.mha.wo = uniform_param({cfg.d_model, cfg.d_model}, cfg.d_model, rng);

  // Uniform initial head weights; Eq-style renormalization keeps the sum at N.
  params.w_a = Tensor::full({cfg.heads}, 1.0, true);
  return params;
}

void collect_params(const EncoderParams& params,
                    std::vector<std::pair<std::string, Tensor>>& out) {
  out.emplace_back("encoder.patch.projection", params.patch.projection);
  out.emplace_back("encoder.patch.positional", params.patch.positional_table);
  for (std::size_t i = 0; i < params.blocks.size(); ++i) {
    const GpsaBlockParams& b = params.blocks[i];
    const std::string p = "encoder.gpsa" + std::to_string(i) + ".";
    out.emplace_back(p + "wq", b.wq);
    out.emplace_back(p + "wk", b.wk);
    out.emplace_back(p + "wv", b.wv);
    out.emplace_back(p + "wo", b.wo);
    out.emplace_back(p + "gates", b.gates);
    out.emplace_back(p + "positional_scores", b.positional_scores);
    out.emplace_back(p + "ffn_w1", b.ffn_w1);
    out.emplace_back(p + "ffn_b1", b.ffn_b1);
    out.emplace_back(p + "ffn_w2", b.ffn_w2);
    out.emplace_back(p + "ffn_b2", b.ffn_b2);
  }
  out.emplace_back("encoder.class_token", params.class_token);
  out.emplace_back("encoder.feature_w", params.feature_w);
  out.emplace_back("encoder.feature_b", params.feature_b);
  for (std::size_t j = 0; j < params.mha.heads(); ++j) {
    const std::string p = "encoder.mha.h" + std::to_string(j) + ".";
    out.emplace_back(p + "wq", params.mha.wq[j]);
    out.emplace_back(p + "wk", params.mha.wk[j]);
    out.emplace_back(p + "wv", params.mha.wv[j]);
  }
  out.emplace_back("encoder.mha.wo", params.mha.wo);
  out.emplace_back("encoder.w_a", params.w_a);
}

}  // namespace rrg
