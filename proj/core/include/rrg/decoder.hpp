// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rrg/tensor.hpp"

namespace rrg {

// Parallel-LSTM network: an encoding LSTM over the dual-attention features
// and two stacked decoding LSTMs, each emitting a vocabulary distribution,
// plus greedy and beam-search inference over the second head.

struct LstmCellParams {
  std::size_t hidden = 0;
  // Fused gate blocks in order: input, forget, output, candidate.
  Tensor w;  // {4*hidden, input_len}
  Tensor u;  // {4*hidden, hidden}
  Tensor b;  // {4*hidden}
  std::size_t input_len() const { return w.cols(); }
};

struct LstmState {
  Tensor h;  // {hidden}, tanh-bounded
  Tensor c;  // {hidden}
};

LstmState zero_state(std::size_t hidden);

// Standard gate equations over the concatenation of `inputs`.
LstmState lstm_step(const std::vector<Tensor>& inputs, const LstmState& prev,
                    const LstmCellParams& params);

// Static per-sample context embeddings feeding the two decoder LSTMs.
struct ContextEmbedding {
  Tensor t1;  // {emb}
  Tensor t2;  // {emb}
};

struct VocabProjection {
  Tensor w_fc1;      // {hidden, vocab}
  Tensor w_fc2;      // {hidden, vocab}
  Tensor embedding;  // {vocab, emb}
  std::size_t vocab_size() const { return embedding.rows(); }
};

struct DecoderConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 512;
  std::size_t hidden_size = 512;
  std::size_t context_len = 0;  // encoder feature vector length
  void validate() const;
};

struct DecoderParams {
  LstmCellParams enc_cell;  // over [T1, context]
  LstmCellParams cell2;     // over [T1, h1, embed(prev token)], self-recurrent
  LstmCellParams cell3;     // over [T2, h2, embed(prev token)], stateless
  VocabProjection vocab;
  std::size_t hidden = 0;
};

// h1_t = LSTM(T1, context) with carried state.
LstmState encoder_lstm(const Tensor& t1, const Tensor& context,
                       const LstmState& prev, const LstmCellParams& params);

struct DecoderStepResult {
  LstmState s2;
  Tensor h3;
  Tensor p1;  // softmax(W_FC1 h2)
  Tensor p2;  // softmax(W_FC2 h3)
};

// One teacher-forced or decoding step. The second decoding LSTM carries no
// state of its own; each step it is driven by h2 alone.
DecoderStepResult decoder_step(const Tensor& h1, const LstmState& prev2,
                               std::size_t token_prev,
                               const ContextEmbedding& ctx,
                               const DecoderParams& params);

// Per-timestep record of the unrolled network.
struct DecoderTrace {
  std::vector<Tensor> h1, h2, h3;
  std::vector<Tensor> p1, p2;
  std::size_t steps() const { return p1.size(); }
};

// Unrolls over `targets` with teacher forcing: step t consumes target[t-1]
// (begin-of-sequence at t = 0) and emits distributions for target[t].
// Records exactly targets.size() distributions per head.
DecoderTrace teacher_force(const Tensor& context, const ContextEmbedding& ctx,
                           const std::vector<std::size_t>& targets,
                           const DecoderParams& params);

// Everything inference needs for one sample.
struct DecodeInput {
  Tensor context;        // encoder feature vector
  ContextEmbedding ctx;  // T1 / T2
};

// Argmax over p2 from begin-of-sequence until end-of-sequence or max_len.
// Ties break to the lowest token id. The returned sequence excludes the
// begin/end markers.
std::vector<std::size_t> greedy_decode(const DecodeInput& input,
                                       const DecoderParams& params,
                                       std::size_t max_len);

// Length-normalized log-probability beam search over p2. Completed
// hypotheses leave the active beam; ties break by (score, token id).
std::vector<std::size_t> beam_search(const DecodeInput& input,
                                     const DecoderParams& params,
                                     std::size_t width, std::size_t max_len);

LstmCellParams init_lstm_cell(std::size_t input_len, std::size_t hidden,
                              SplitMix64& rng);
DecoderParams init_decoder(const DecoderConfig& cfg, SplitMix64& rng);

void collect_params(const DecoderParams& params,
                    std::vector<std::pair<std::string, Tensor>>& out);

// Single-layer transformer-style context block producing T1/T2 from the
// encoder output rows (optionally extended with corpus token embeddings).
struct ContextBlockParams {
  Tensor wq, wk, wv, wo;  // {d_model, d_model}
  Tensor ffn_w1;          // {d_model, ffn}
  Tensor ffn_b1;          // {ffn}
  Tensor ffn_w2;          // {ffn, d_model}
  Tensor ffn_b2;          // {d_model}
  Tensor t1_proj;         // {d_model, emb}
  Tensor t2_proj;         // {d_model, emb}
};

ContextEmbedding context_block(const Tensor& rows,
                               const ContextBlockParams& params);

ContextBlockParams init_context_block(std::size_t d_model, std::size_t ffn_dim,
                                      std::size_t embed_dim, SplitMix64& rng);

void collect_params(const ContextBlockParams& params,
                    std::vector<std::pair<std::string, Tensor>>& out);

}  // namespace rrg
