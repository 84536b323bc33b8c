// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rrg/decoder.hpp"
#include "rrg/tensor.hpp"

namespace rrg {

// Label enhancement: a category-prediction LSTM over the embedded generated
// report, producing a multi-label distribution used as an auxiliary training
// signal.

struct LabelVocabulary {
  std::vector<std::string> names;
  std::size_t size() const { return names.size(); }
  void validate() const;  // unique, nonempty
};

enum class EmbedMode {
  kSoft,    // expected embedding per step; keeps the training path differentiable
  kArgmax,  // embedding of the most likely token (inference)
};

// p2_sequence rows are vocabulary distributions; returns one embedding
// vector per report position.
std::vector<Tensor> embed_report(const std::vector<Tensor>& p2_sequence,
                                 const Tensor& embedding_table, EmbedMode mode);

struct LabelPredictorParams {
  Tensor embedding;     // {vocab, emb}: the module's own report embedding
  LstmCellParams cell;  // category-prediction LSTM over embeddings
  Tensor w_t;           // {hidden, n}
  Tensor b_t;           // {n}
  std::size_t label_count() const { return b_t.size(); }
};

// softmax(W_t * LSTM(rp) + b_t) from the final hidden state; length n.
Tensor predict_labels(const std::vector<Tensor>& rp,
                      const LabelPredictorParams& params);

struct LabelPredictorConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 32;
  std::size_t hidden_size = 64;
  std::size_t label_count = 0;
  void validate() const;
};

LabelPredictorParams init_label_predictor(const LabelPredictorConfig& cfg,
                                          SplitMix64& rng);

void collect_params(const LabelPredictorParams& params,
                    std::vector<std::pair<std::string, Tensor>>& out);

}  // namespace rrg
