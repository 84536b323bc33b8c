// SPDX-License-Identifier: Apache-2.0
#include "rrg/decoder.hpp"

#include <algorithm>
#include <cmath>

#include "rrg/error.hpp"
#include "rrg/ops.hpp"
#include "rrg/tokens.hpp"

namespace rrg {

namespace {

Tensor uniform_param(Shape shape, std::size_t fan_in, SplitMix64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(fan_in, 1)));
  return Tensor::uniform(std::move(shape), -bound, bound, rng, true);
}

Tensor embed_token(const VocabProjection& vocab, std::size_t token) {
  if (token >= vocab.vocab_size()) {
    throw ContractError("decoder: token id " + std::to_string(token) +
                        " outside vocabulary of size " +
                        std::to_string(vocab.vocab_size()));
  }
  return ops::row(vocab.embedding, token);
}

// Precomputed h1 chain: the encoding LSTM sees the same inputs every step,
// so its states do not depend on emitted tokens.
std::vector<Tensor> h1_chain(const Tensor& context, const ContextEmbedding& ctx,
                             const DecoderParams& params, std::size_t steps) {
  std::vector<Tensor> chain;
  chain.reserve(steps);
  LstmState s1 = zero_state(params.hidden);
  for (std::size_t t = 0; t < steps; ++t) {
    s1 = encoder_lstm(ctx.t1, context, s1, params.enc_cell);
    chain.push_back(s1.h);
  }
  return chain;
}

struct Hypothesis {
  std::vector<std::size_t> tokens;
  double log_prob = 0.0;
  LstmState s2;

  double score() const {
    return log_prob / static_cast<double>(std::max<std::size_t>(tokens.size(), 1));
  }
};

bool better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score() != b.score()) return a.score() > b.score();
  return a.tokens < b.tokens;
}

}  // namespace

void DecoderConfig::validate() const {
  if (vocab_size == 0) throw ConfigError("decoder: vocabulary is empty");
  if (embed_dim == 0 || hidden_size == 0) {
    throw ConfigError("decoder: embed_dim and hidden_size must be positive");
  }
}

LstmState zero_state(std::size_t hidden) {
  return {Tensor::zeros({hidden}), Tensor::zeros({hidden})};
}

LstmState lstm_step(const std::vector<Tensor>& inputs, const LstmState& prev,
                    const LstmCellParams& params) {
  if (inputs.empty()) throw ContractError("lstm_step: no inputs");
  Tensor x = inputs.size() == 1 ? inputs[0] : ops::concat(inputs, 0);
  if (x.size() != params.input_len()) {
    throw ContractError("lstm_step: input length " + std::to_string(x.size()) +
                        " does not match cell input " +
                        std::to_string(params.input_len()));
  }
  const std::size_t h = params.hidden;
  Tensor z = ops::add(ops::add(ops::matmul(params.w, x), ops::matmul(params.u, prev.h)),
                      params.b);
  Tensor gi = ops::sigmoid(ops::slice(z, 0, h));
  Tensor gf = ops::sigmoid(ops::slice(z, h, h));
  Tensor go = ops::sigmoid(ops::slice(z, 2 * h, h));
  Tensor gc = ops::tanh(ops::slice(z, 3 * h, h));
  Tensor c = ops::add(ops::mul(gf, prev.c), ops::mul(gi, gc));
  return {ops::mul(go, ops::tanh(c)), c};
}

LstmState encoder_lstm(const Tensor& t1, const Tensor& context,
                       const LstmState& prev, const LstmCellParams& params) {
  return lstm_step({t1, context}, prev, params);
}

DecoderStepResult decoder_step(const Tensor& h1, const LstmState& prev2,
                               std::size_t token_prev,
                               const ContextEmbedding& ctx,
                               const DecoderParams& params) {
  if (params.vocab.w_fc1.cols() != params.vocab.w_fc2.cols()) {
    throw ContractError("decoder: the two vocabulary projections disagree on size");
  }
  Tensor emb = embed_token(params.vocab, token_prev);

  DecoderStepResult out;
  out.s2 = lstm_step({ctx.t1, h1, emb}, prev2, params.cell2);
  out.p1 = ops::softmax(ops::matmul(out.s2.h, params.vocab.w_fc1));

  LstmState s3 = lstm_step({ctx.t2, out.s2.h, emb}, zero_state(params.hidden),
                           params.cell3);
  out.h3 = s3.h;
  out.p2 = ops::softmax(ops::matmul(out.h3, params.vocab.w_fc2));
  return out;
}

DecoderTrace teacher_force(const Tensor& context, const ContextEmbedding& ctx,
                           const std::vector<std::size_t>& targets,
                           const DecoderParams& params) {
  if (targets.empty()) throw ContractError("teacher_force: empty target sequence");
  DecoderTrace trace;
  const std::size_t steps = targets.size();
  trace.h1 = h1_chain(context, ctx, params, steps);
  LstmState s2 = zero_state(params.hidden);
  std::size_t prev = kBosId;
  for (std::size_t t = 0; t < steps; ++t) {
    DecoderStepResult step = decoder_step(trace.h1[t], s2, prev, ctx, params);
    s2 = step.s2;
    trace.h2.push_back(step.s2.h);
    trace.h3.push_back(step.h3);
    trace.p1.push_back(step.p1);
    trace.p2.push_back(step.p2);
    prev = targets[t];
  }
  return trace;
}

std::vector<std::size_t> greedy_decode(const DecodeInput& input,
                                       const DecoderParams& params,
                                       std::size_t max_len) {
  if (max_len == 0) throw ContractError("greedy_decode: max_len must be >= 1");
  NoGradGuard pause;
  std::vector<Tensor> h1 = h1_chain(input.context, input.ctx, params, max_len);
  LstmState s2 = zero_state(params.hidden);
  std::vector<std::size_t> out;
  std::size_t prev = kBosId;
  for (std::size_t t = 0; t < max_len; ++t) {
    DecoderStepResult step = decoder_step(h1[t], s2, prev, input.ctx, params);
    s2 = step.s2;
    std::size_t best = 0;
    for (std::size_t i = 1; i < step.p2.size(); ++i)
      if (step.p2.at(i) > step.p2.at(best)) best = i;
    if (best == kEosId) break;
    out.push_back(best);
    prev = best;
  }
  return out;
}

std::vector<std::size_t> beam_search(const DecodeInput& input,
                                     const DecoderParams& params,
                                     std::size_t width, std::size_t max_len) {
  if (width < 1) throw ContractError("beam_search: width must be >= 1");
  if (max_len == 0) throw ContractError("beam_search: max_len must be >= 1");
  NoGradGuard pause;

  std::vector<Tensor> h1 = h1_chain(input.context, input.ctx, params, max_len);

  std::vector<Hypothesis> active(1);
  active[0].s2 = zero_state(params.hidden);
  std::vector<Hypothesis> finished;

  for (std::size_t t = 0; t < max_len && !active.empty(); ++t) {
    std::vector<Hypothesis> candidates;
    candidates.reserve(active.size() * params.vocab.vocab_size());
    for (const Hypothesis& hyp : active) {
      const std::size_t prev = hyp.tokens.empty() ? kBosId : hyp.tokens.back();
      DecoderStepResult step = decoder_step(h1[t], hyp.s2, prev, input.ctx, params);
      for (std::size_t tok = 0; tok < step.p2.size(); ++tok) {
        Hypothesis next;
        next.tokens = hyp.tokens;
        next.tokens.push_back(tok);
        next.log_prob = hyp.log_prob + std::log(step.p2.at(tok));
        next.s2 = step.s2;
        candidates.push_back(std::move(next));
      }
    }
    std::sort(candidates.begin(), candidates.end(), better);
    // Keep the top `width` candidates; completed ones leave the active beam.
    const std::size_t take = std::min<std::size_t>(width, candidates.size());
    active.clear();
    for (std::size_t i = 0; i < take; ++i) {
      Hypothesis& cand = candidates[i];
      if (cand.tokens.back() == kEosId) {
        finished.push_back(std::move(cand));
      } else {
        active.push_back(std::move(cand));
      }
    }
  }

  // Hypotheses still active at the length cap count as finished.
  for (Hypothesis& hyp : active) finished.push_back(std::move(hyp));
  if (finished.empty()) return {};
  const Hypothesis& best =
      *std::max_element(finished.begin(), finished.end(),
                        [](const Hypothesis& a, const Hypothesis& b) {
                          return better(b, a);
                        });
  std::vector<std::size_t> out = best.tokens;
  if (!out.empty() && out.back() == kEosId) out.pop_back();
  return out;
}

LstmCellParams init_lstm_cell(std::size_t input_len, std::size_t hidden,
                              SplitMix64& rng) {
  LstmCellParams cell;
  cell.hidden = hidden;
  cell.w = uniform_param({4 * hidden, input_len}, input_len, rng);
  cell.u = uniform_param({4 * hidden, hidden}, hidden, rng);
  cell.b = Tensor::zeros({4 * hidden}, true);
  // Forget gate opens at init so cell state can persist early in training.
  for (std::size_t i = hidden; i < 2 * hidden; ++i) cell.b.mutable_data()[i] = 1.0;
  return cell;
}

DecoderParams init_decoder(const DecoderConfig& cfg, SplitMix64& rng) {
  cfg.validate();
  DecoderParams params;
  params.hidden = cfg.hidden_size;
  params.enc_cell =
      init_lstm_cell(cfg.embed_dim + cfg.context_len, cfg.hidden_size, rng);
  params.cell2 = init_lstm_cell(cfg.embed_dim + cfg.hidden_size + cfg.embed_dim,
                                cfg.hidden_size, rng);
  params.cell3 = init_lstm_cell(cfg.embed_dim + cfg.hidden_size + cfg.embed_dim,
                                cfg.hidden_size, rng);
  params.vocab.w_fc1 = uniform_param({cfg.hidden_size, cfg.vocab_size},
                                     cfg.hidden_size, rng);
  params.vocab.w_fc2 = uniform_param({cfg.hidden_size, cfg.vocab_size},
                                     cfg.hidden_size, rng);
  params.vocab.embedding = uniform_param({cfg.vocab_size, cfg.embed_dim},
                                         cfg.embed_dim, rng);
  return params;
}

namespace {

void collect_cell(const std::string& prefix, const LstmCellParams& cell,
                  std::vector<std::pair<std::string, Tensor>>& out) {
  out.emplace_back(prefix + ".w", cell.w);
  out.emplace_back(prefix + ".u", cell.u);
  out.emplace_back(prefix + ".b", cell.b);
}

}  // namespace

void collect_params(const DecoderParams& params,
                    std::vector<std::pair<std::string, Tensor>>& out) {
  collect_cell("decoder.enc_cell", params.enc_cell, out);
  collect_cell("decoder.cell2", params.cell2, out);
  collect_cell("decoder.cell3", params.cell3, out);
  out.emplace_back("decoder.w_fc1", params.vocab.w_fc1);
  out.emplace_back("decoder.w_fc2", params.vocab.w_fc2);
  out.emplace_back("decoder.embedding", params.vocab.embedding);
}

ContextEmbedding context_block(const Tensor& rows,
                               const ContextBlockParams& params) {
  const double inv = 1.0 / std::sqrt(static_cast<double>(rows.cols()));
  Tensor q = ops::matmul(rows, params.wq);
  Tensor k = ops::matmul(rows, params.wk);
  Tensor v = ops::matmul(rows, params.wv);
  Tensor attn = ops::softmax(ops::scale(ops::matmul(q, ops::transpose(k)), inv));
  Tensor mixed = ops::add(rows, ops::matmul(ops::matmul(attn, v), params.wo));
  Tensor hidden = ops::gelu(ops::add_rowwise(ops::matmul(mixed, params.ffn_w1),
                                             params.ffn_b1));
  Tensor ffn = ops::add_rowwise(ops::matmul(hidden, params.ffn_w2), params.ffn_b2);
  Tensor pooled = ops::mean_rows(ops::add(mixed, ffn));
  return {ops::matmul(pooled, params.t1_proj), ops::matmul(pooled, params.t2_proj)};
}

ContextBlockParams init_context_block(std::size_t d_model, std::size_t ffn_dim,
                                      std::size_t embed_dim, SplitMix64& rng) {
  ContextBlockParams p;
  p.wq = uniform_param({d_model, d_model}, d_model, rng);
  p.wk = uniform_param({d_model, d_model}, d_model, rng);
  p.wv = uniform_param({d_model, d_model}, d_model, rng);
  p.wo = uniform_param({d_model, d_model}, d_model, rng);
  p.ffn_w1 = uniform_param({d_model, ffn_dim}, d_model, rng);
  p.ffn_b1 = Tensor::zeros({ffn_dim}, true);
  p.ffn_w2 = uniform_param({ffn_dim, d_model}, ffn_dim, rng);
  p.ffn_b2 = Tensor::zeros({d_model}, true);
  p.t1_proj = uniform_param({d_model, embed_dim}, d_model, rng);
  p.t2_proj = uniform_param({d_model, embed_dim}, d_model, rng);
  return p;
}

void collect_params(const ContextBlockParams& params,
                    std::vector<std::pair<std::string, Tensor>>& out) {
  out.emplace_back("context.wq", params.wq);
  out.emplace_back("context.wk", params.wk);
  out.emplace_back("context.wv", params.wv);
  out.emplace_back("context.wo", params.wo);
  out.emplace_back("context.ffn_w1", params.ffn_w1);
  out.emplace_back("context.ffn_b1", params.ffn_b1);
  out.emplace_back("context.ffn_w2", params.ffn_w2);
  out.emplace_back("context.ffn_b2", params.ffn_b2);
  out.emplace_back("context.t1_proj", params.t1_proj);
  out.emplace_back("context.t2_proj", params.t2_proj);
}

}  // namespace rrg
