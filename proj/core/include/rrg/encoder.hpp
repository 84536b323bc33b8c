// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rrg/tensor.hpp"

namespace rrg {

// Image-to-feature encoder: patch embedding, gated positional self-attention
// blocks, class-token projection, and dual-weight multi-head attention.

struct EncoderConfig {
  std::size_t image_side = 32;
  std::size_t patch_size = 8;
  std::size_t d_model = 64;
  std::size_t heads = 8;       // dual-weight attention heads
  std::size_t gpsa_heads = 2;  // per-block gates
  std::size_t gpsa_blocks = 2;
  std::size_t ffn_dim = 128;
  std::size_t feature_dim = 512;

  std::size_t num_patches() const {
    const std::size_t side = image_side / patch_size;
    return side * side;
  }
  void validate() const;  // ConfigError on any violated constraint
};

struct PatchEmbedderParams {
  std::size_t patch_size = 0;
  Tensor projection;        // {patch_px, d_model}
  Tensor positional_table;  // {num_patches, d_model}
};

struct GpsaBlockParams {
  std::size_t heads = 1;
  Tensor wq, wk, wv, wo;    // {d_model, d_model}
  Tensor gates;             // {heads}, pre-sigmoid
  Tensor positional_scores; // {num_patches, num_patches}
  Tensor ffn_w1;            // {d_model, ffn_dim}
  Tensor ffn_b1;            // {ffn_dim}
  Tensor ffn_w2;            // {ffn_dim, d_model}
  Tensor ffn_b2;            // {d_model}
};

struct MultiHeadAttentionParams {
  std::vector<Tensor> wq, wk, wv;  // per head, {d_model, d_k}
  Tensor wo;                       // {d_model, d_model}
  std::size_t heads() const { return wq.size(); }
  std::size_t head_dim() const { return wq.empty() ? 0 : wq[0].cols(); }
};

struct MultiHeadAttentionOutput {
  std::vector<Tensor> head_outputs;  // each {S, d_k}
  std::vector<Tensor> attention;     // each {S, S}, row-stochastic
  Tensor concat_output;              // {S, d_model}: Concat(heads) * W
};

// Per-pass record of both weight vectors of the dual-weight mechanism.
struct DualAttentionState {
  std::vector<Tensor> head_outputs;  // current pass, each {S, d_k}
  std::vector<double> w_a;           // learnable head weights (values)
  std::vector<double> w_cos;         // batch-mean cosine weights used
  double beta = 0.0;
  std::vector<double> w_dwa;         // rectified dual weights applied
  bool fallback = false;             // uniform fallback triggered
  std::size_t base_index = 0;
};

struct EncoderParams {
  PatchEmbedderParams patch;
  std::vector<GpsaBlockParams> blocks;
  Tensor class_token;  // {1, d_model}, appended as the last row
  Tensor feature_w;    // {d_model, feature_dim}
  Tensor feature_b;    // {feature_dim}
  MultiHeadAttentionParams mha;
  Tensor w_a;          // {heads}, learnable, renormalized each iteration
};

struct EncoderOutput {
  Tensor weighted_attention;  // {d_model}: dual-weighted heads pooled over positions
  Tensor class_feature;       // {feature_dim}
  Tensor weighted_sequence;   // {S, d_model}: input to the context block
  DualAttentionState state;
};

// image {side,side} with pixels in [0,1] -> {num_patches, d_model}.
// Patch k is the k-th raster-order block; each row is
// projection(flattened patch) + positional row.
Tensor patch_embed(const Tensor& image, const PatchEmbedderParams& params);

// Per head: (1-sigmoid(gate))*softmax(content) + sigmoid(gate)*softmax(pos),
// then value mixing, output projection, and a GeLU FFN, with residuals
// around both sublayers.
Tensor gpsa_block(const Tensor& seq, const GpsaBlockParams& params);

// The per-head blended attention matrices gpsa_block mixes with; each row
// sums to 1.
std::vector<Tensor> gpsa_mixed_attention(const Tensor& seq,
                                         const GpsaBlockParams& params);

MultiHeadAttentionOutput multi_head_attention(const Tensor& x,
                                              const MultiHeadAttentionParams& params);

// w_a(i) = softmax(w_a(i-1)) * N; result sums to N.
std::vector<double> update_head_weights(const std::vector<double>& w_prev);

// Head j scaled elementwise by w[j]. The tensor overload keeps the scale
// differentiable so the learnable weights receive gradients.
std::vector<Tensor> apply_head_weights(const std::vector<double>& w,
                                       const std::vector<Tensor>& heads);
std::vector<Tensor> apply_head_weights(const Tensor& w,
                                       const std::vector<Tensor>& heads);

// argmax of w_a; ties break to the lowest index.
std::size_t select_base_head(const std::vector<double>& w_a);

// batch_heads[sample][head] = flattened head output from the previous
// iteration. Entry j = batch mean of cos(head j, head base_index).
std::vector<double> cosine_head_weights(
    const std::vector<std::vector<std::vector<double>>>& batch_heads,
    std::size_t base_index);

// No previous iteration exists at step 0; all-ones cosine weights trigger
// the uniform fallback downstream.
std::vector<double> cold_start_cosine(std::size_t heads);

struct DualWeights {
  double beta = 0.0;
  std::vector<double> w_dwa;
  bool fallback = false;
};

// beta = geometric mean of |w_cos| (entries floored at 1e-8);
// w_dwa = relu(beta - w_cos), with a uniform 1/N substitute when every
// rectified entry is zero.
DualWeights dual_weight(const std::vector<double>& w_cos);

// Full pipeline: patch_embed -> GPSA stack -> class token -> feature
// projection -> multi-head attention -> learnable + dual weights. `w_cos`
// carries the previous-iteration cosine weights (cold_start_cosine at step
// 0); single_weight skips the dual-weight computation entirely.
EncoderOutput encode(const Tensor& image, const EncoderParams& params,
                     const std::vector<double>& w_cos,
                     bool single_weight = false);

EncoderParams init_encoder(const EncoderConfig& cfg, SplitMix64& rng);

// Appends (name, tensor) pairs for every trainable tensor, names prefixed
// with "encoder.".
void collect_params(const EncoderParams& params,
                    std::vector<std::pair<std::string, Tensor>>& out);

}  // namespace rrg
