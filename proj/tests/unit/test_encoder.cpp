// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "rrg/autodiff.hpp"
#include "rrg/encoder.hpp"
#include "rrg/error.hpp"
#include "rrg/ops.hpp"
#include "rrg/rng.hpp"

using namespace rrg;

namespace {

EncoderConfig toy_config() {
  EncoderConfig cfg;
  cfg.image_side = 16;
  cfg.patch_size = 8;
  cfg.d_model = 8;
  cfg.heads = 2;
  cfg.gpsa_heads = 2;
  cfg.gpsa_blocks = 1;
  cfg.ffn_dim = 16;
  cfg.feature_dim = 8;
  return cfg;
}

double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("patch_embed produces one vector per raster patch") {
  SplitMix64 rng(3);
  PatchEmbedderParams p;
  p.patch_size = 8;
  p.projection = Tensor::uniform({64, 8}, -1.0, 1.0, rng);
  p.positional_table = Tensor::zeros({4, 8});
  Tensor image = Tensor::uniform({16, 16}, 0.0, 1.0, rng);

  Tensor seq = patch_embed(image, p);
  CHECK(seq.rows() == 4);
  CHECK(seq.cols() == 8);

  // Block-extraction reference: patch k from raster index arithmetic.
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t gy = k / 2, gx = k % 2;
    std::vector<double> flat(64);
    for (std::size_t y = 0; y < 8; ++y)
      for (std::size_t x = 0; x < 8; ++x)
        flat[y * 8 + x] = image.at(gy * 8 + y, gx * 8 + x);
    for (std::size_t c = 0; c < 8; ++c) {
      double want = 0.0;
      for (std::size_t i = 0; i < 64; ++i) want += flat[i] * p.projection.at(i, c);
      CHECK(seq.at(k, c) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("patch_embed of a zero image with zero positions is zero") {
  SplitMix64 rng(4);
  PatchEmbedderParams p;
  p.patch_size = 8;
  p.projection = Tensor::uniform({64, 8}, -1.0, 1.0, rng);
  p.positional_table = Tensor::zeros({4, 8});
  Tensor seq = patch_embed(Tensor::zeros({16, 16}), p);
  for (double v : seq.data()) CHECK(v == 0.0);
}

TEST_CASE("patch_embed rejects a non-divisible image side") {
  PatchEmbedderParams p;
  p.patch_size = 8;
  p.projection = Tensor::zeros({64, 8});
  p.positional_table = Tensor::zeros({4, 8});
  CHECK_THROWS_AS(patch_embed(Tensor::zeros({17, 17}), p), ConfigError);
}

namespace {

GpsaBlockParams random_gpsa(std::size_t s, std::size_t d, std::size_t heads,
                            SplitMix64& rng) {
  GpsaBlockParams b;
  b.heads = heads;
  b.wq = Tensor::uniform({d, d}, -0.5, 0.5, rng);
  b.wk = Tensor::uniform({d, d}, -0.5, 0.5, rng);
  b.wv = Tensor::uniform({d, d}, -0.5, 0.5, rng);
  b.wo = Tensor::uniform({d, d}, -0.5, 0.5, rng);
  b.gates = Tensor::zeros({heads});
  b.positional_scores = Tensor::uniform({s, s}, -1.0, 1.0, rng);
  b.ffn_w1 = Tensor::uniform({d, 2 * d}, -0.5, 0.5, rng);
  b.ffn_b1 = Tensor::zeros({2 * d});
  b.ffn_w2 = Tensor::uniform({2 * d, d}, -0.5, 0.5, rng);
  b.ffn_b2 = Tensor::zeros({d});
  return b;
}

}  // namespace

TEST_CASE("gpsa gate limits select pure content or pure positional attention") {
  SplitMix64 rng(5);
  const std::size_t s = 4, d = 8, heads = 2, dk = d / heads;
  GpsaBlockParams b = random_gpsa(s, d, heads, rng);
  Tensor seq = Tensor::uniform({s, d}, -1.0, 1.0, rng);

  // Content-only reference computed independently of the gate path.
  Tensor q = ops::matmul(seq, b.wq);
  Tensor k = ops::matmul(seq, b.wk);
  const double inv = 1.0 / std::sqrt(static_cast<double>(dk));
  std::vector<Tensor> content;
  for (std::size_t h = 0; h < heads; ++h) {
    Tensor qh = ops::col_slice(q, h * dk, dk);
    Tensor kh = ops::col_slice(k, h * dk, dk);
    content.push_back(ops::softmax(ops::scale(ops::matmul(qh, ops::transpose(kh)), inv)));
  }
  Tensor positional = ops::softmax(b.positional_scores);

  b.gates = Tensor::full({heads}, -1e3);  // sigmoid -> 0
  std::vector<Tensor> mixed = gpsa_mixed_attention(seq, b);
  for (std::size_t h = 0; h < heads; ++h)
    for (std::size_t i = 0; i < s * s; ++i)
      CHECK(mixed[h].data()[i] == doctest::Approx(content[h].data()[i]).epsilon(1e-15));

  b.gates = Tensor::full({heads}, 1e3);  // sigmoid -> 1
  mixed = gpsa_mixed_attention(seq, b);
  for (std::size_t h = 0; h < heads; ++h)
    for (std::size_t i = 0; i < s * s; ++i)
      CHECK(mixed[h].data()[i] == doctest::Approx(positional.data()[i]).epsilon(1e-15));
}

TEST_CASE("gpsa mixed attention rows sum to one") {
  SplitMix64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t s = 4, d = 8;
    GpsaBlockParams b = random_gpsa(s, d, 2, rng);
    b.gates = Tensor::uniform({2}, -3.0, 3.0, rng);
    Tensor seq = Tensor::uniform({s, d}, -1.0, 1.0, rng);
    for (const Tensor& m : gpsa_mixed_attention(seq, b)) {
      for (std::size_t r = 0; r < s; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < s; ++c) sum += m.at(r, c);
        CHECK(std::fabs(sum - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("gpsa rejects a sequence/positional length mismatch") {
  SplitMix64 rng(7);
  GpsaBlockParams b = random_gpsa(4, 8, 2, rng);
  CHECK_THROWS_AS(gpsa_block(Tensor::zeros({5, 8}), b), ConfigError);
}

namespace {

MultiHeadAttentionParams random_mha(std::size_t d, std::size_t heads,
                                    SplitMix64& rng) {
  MultiHeadAttentionParams p;
  const std::size_t dk = d / heads;
  for (std::size_t j = 0; j < heads; ++j) {
    p.wq.push_back(Tensor::uniform({d, dk}, -0.5, 0.5, rng));
    p.wk.push_back(Tensor::uniform({d, dk}, -0.5, 0.5, rng));
    p.wv.push_back(Tensor::uniform({d, dk}, -0.5, 0.5, rng));
  }
  p.wo = Tensor::uniform({d, d}, -0.5, 0.5, rng);
  return p;
}

}  // namespace

TEST_CASE("multi-head attention on a single token returns its value projection") {
  SplitMix64 rng(8);
  MultiHeadAttentionParams p = random_mha(8, 2, rng);
  Tensor x = Tensor::uniform({1, 8}, -1.0, 1.0, rng);
  MultiHeadAttentionOutput out = multi_head_attention(x, p);
  for (std::size_t j = 0; j < 2; ++j) {
    Tensor v = ops::matmul(x, p.wv[j]);
    CHECK(out.attention[j].at(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t c = 0; c < 4; ++c)
      CHECK(out.head_outputs[j].at(0, c) == doctest::Approx(v.at(0, c)).epsilon(1e-14));
  }
}

TEST_CASE("multi-head attention with identity projections matches hand softmax") {
  // One head, d_model = d_k = 4, identity Q/K/V on orthogonal one-hot tokens:
  // scores are I/2, so each attention row is softmax of (0.5 at self, 0 else).
  MultiHeadAttentionParams p;
  std::vector<double> eye(16, 0.0);
  for (int i = 0; i < 4; ++i) eye[i * 4 + i] = 1.0;
  p.wq.push_back(Tensor({4, 4}, eye));
  p.wk.push_back(Tensor({4, 4}, eye));
  p.wv.push_back(Tensor({4, 4}, eye));
  p.wo = Tensor({4, 4}, eye);
  Tensor x({4, 4}, eye);

  MultiHeadAttentionOutput out = multi_head_attention(x, p);
  const double self_w = std::exp(0.5) / (std::exp(0.5) + 3.0);
  const double other_w = 1.0 / (std::exp(0.5) + 3.0);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      const double want = r == c ? self_w : other_w;
      CHECK(out.attention[0].at(r, c) == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("multi-head attention rows sum to one on random input") {
  SplitMix64 rng(9);
  MultiHeadAttentionParams p = random_mha(8, 4, rng);
  Tensor x = Tensor::uniform({5, 8}, -2.0, 2.0, rng);
  MultiHeadAttentionOutput out = multi_head_attention(x, p);
  for (const Tensor& a : out.attention)
    for (std::size_t r = 0; r < 5; ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < 5; ++c) sum += a.at(r, c);
      CHECK(std::fabs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("update_head_weights maps uniform weights to all ones") {
  std::vector<double> w(8, 1.0 / 8.0);
  std::vector<double> out = update_head_weights(w);
  for (double v : out) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("update_head_weights matches the analytic two-head softmax") {
  std::vector<double> out = update_head_weights({1.0, 0.0});
  const double e = std::exp(1.0);
  CHECK(out[0] == doctest::Approx(2.0 * e / (e + 1.0)).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(2.0 / (e + 1.0)).epsilon(1e-15));
  CHECK(out[0] == doctest::Approx(1.4621).epsilon(1e-4));
  CHECK(out[1] == doctest::Approx(0.5379).epsilon(1e-4));
}

TEST_CASE("update_head_weights output always sums to N") {
  SplitMix64 rng(10);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.next_below(12);
    std::vector<double> w(n);
    for (double& v : w) v = rng.uniform(-4.0, 4.0);
    std::vector<double> out = update_head_weights(w);
    const double sum = std::accumulate(out.begin(), out.end(), 0.0);
    CHECK(std::fabs(sum - static_cast<double>(n)) < 1e-9);
  }
  CHECK_THROWS_AS(update_head_weights({}), ContractError);
}

TEST_CASE("apply_head_weights scales head norms exactly") {
  SplitMix64 rng(11);
  std::vector<Tensor> heads = {Tensor::uniform({3, 4}, -1.0, 1.0, rng),
                               Tensor::uniform({3, 4}, -1.0, 1.0, rng)};
  SUBCASE("all ones is identity") {
    std::vector<Tensor> out = apply_head_weights(std::vector<double>{1.0, 1.0}, heads);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t i = 0; i < 12; ++i)
        CHECK(out[j].data()[i] == heads[j].data()[i]);
  }
  SUBCASE("all zeros annihilates") {
    std::vector<Tensor> out = apply_head_weights(std::vector<double>{0.0, 0.0}, heads);
    for (std::size_t j = 0; j < 2; ++j)
      for (double v : out[j].data()) CHECK(v == 0.0);
  }
  SUBCASE("norms scale by the weights") {
    std::vector<Tensor> out = apply_head_weights(std::vector<double>{2.0, 0.5}, heads);
    CHECK(vec_norm(out[0].data()) ==
          doctest::Approx(2.0 * vec_norm(heads[0].data())).epsilon(1e-12));
    CHECK(vec_norm(out[1].data()) ==
          doctest::Approx(0.5 * vec_norm(heads[1].data())).epsilon(1e-12));
  }
  SUBCASE("length mismatch is rejected") {
    CHECK_THROWS_AS(apply_head_weights(std::vector<double>{1.0}, heads), ContractError);
  }
}

TEST_CASE("select_base_head takes the argmax with ties to the lowest index") {
  CHECK(select_base_head({1.0, 1.0, 1.0}) == 0);
  CHECK(select_base_head({0.9, 3.1, 0.9, 0.9}) == 1);

  SplitMix64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(6);
    for (double& v : w) v = rng.uniform(0.0, 2.0);
    const std::size_t base = select_base_head(w);
    // Rotate and confirm the selection follows the permutation.
    std::vector<double> rotated(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) rotated[(i + 2) % w.size()] = w[i];
    const std::size_t rotated_base = select_base_head(rotated);
    if (std::count(w.begin(), w.end(), w[base]) == 1) {
      CHECK(rotated_base == (base + 2) % w.size());
    }
  }
}

TEST_CASE("cosine_head_weights averages per-sample similarities") {
  std::vector<double> a = {1.0, 2.0, 3.0};
  std::vector<double> orth = {0.0, 0.0, 0.0};

  SUBCASE("identical heads give all ones") {
    std::vector<std::vector<std::vector<double>>> batch = {{a, a, a}, {a, a, a}};
    std::vector<double> w = cosine_head_weights(batch, 0);
    for (double v : w) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("orthogonal head gives zero") {
    std::vector<double> b = {2.0, -1.0, 0.0};  // a . b == 0
    std::vector<std::vector<std::vector<double>>> batch = {{a, b}, {a, b}};
    std::vector<double> w = cosine_head_weights(batch, 0);
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("mean of similarities one and zero is a half") {
    std::vector<double> b = {2.0, -1.0, 0.0};
    std::vector<std::vector<std::vector<double>>> batch = {{a, a}, {a, b}};
    std::vector<double> w = cosine_head_weights(batch, 0);
    CHECK(w[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("empty batch is rejected") {
    CHECK_THROWS_AS(cosine_head_weights({}, 0), ContractError);
  }
  (void)orth;
}

TEST_CASE("dual_weight hand-computed two-head case") {
  DualWeights dw = dual_weight({1.0, 0.5});
  CHECK(dw.beta == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(dw.beta == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(dw.w_dwa[0] == 0.0);
  CHECK(dw.w_dwa[1] == doctest::Approx(0.20711).epsilon(1e-5));
  CHECK_FALSE(dw.fallback);
}

TEST_CASE("dual_weight falls back to uniform on identical similarities") {
  for (double c : {0.3, 0.8, 1.0}) {
    DualWeights dw = dual_weight({c, c, c, c});
    CHECK(dw.beta == doctest::Approx(c).epsilon(1e-12));
    CHECK(dw.fallback);
    for (double v : dw.w_dwa) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
  }
}

TEST_CASE("dual_weight is monotone, rectified, beta-bounded, and equivariant") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.next_below(7);
    std::vector<double> w(n);
    for (double& v : w) v = rng.uniform(-1.0, 1.0);
    DualWeights dw = dual_weight(w);

    double lo = 1.0, hi = 0.0;
    for (double v : w) {
      const double f = std::max(std::fabs(v), 1e-8);
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    CHECK(dw.beta >= lo - 1e-15);
    CHECK(dw.beta <= hi + 1e-15);

    for (double v : dw.w_dwa) CHECK(v >= 0.0);
    CHECK(std::accumulate(dw.w_dwa.begin(), dw.w_dwa.end(), 0.0) > 0.0);

    if (!dw.fallback) {
      // Weakly decreasing in w_cos: lower similarity -> no smaller weight.
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (w[i] < w[j]) CHECK(dw.w_dwa[i] >= dw.w_dwa[j]);
    }

    // Permutation equivariance under rotation by one.
    std::vector<double> rot(n);
    for (std::size_t i = 0; i < n; ++i) rot[(i + 1) % n] = w[i];
    DualWeights dwr = dual_weight(rot);
    CHECK(dwr.beta == doctest::Approx(dw.beta).epsilon(1e-12));
    if (!dw.fallback && !dwr.fallback) {
      for (std::size_t i = 0; i < n; ++i)
        CHECK(dwr.w_dwa[(i + 1) % n] == doctest::Approx(dw.w_dwa[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("encode cold start triggers the uniform fallback") {
  SplitMix64 rng(14);
  EncoderConfig cfg = toy_config();
  EncoderParams params = init_encoder(cfg, rng);
  Tensor image = Tensor::uniform({16, 16}, 0.0, 1.0, rng);
  EncoderOutput out = encode(image, params, cold_start_cosine(cfg.heads));
  CHECK(out.state.fallback);
  for (double v : out.state.w_dwa) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out.weighted_attention.size() == cfg.d_model);
  CHECK(out.weighted_sequence.rows() == cfg.num_patches() + 1);
}

TEST_CASE("encode emits a 512-wide class feature under the default config") {
  SplitMix64 rng(15);
  EncoderConfig cfg;  // defaults
  EncoderParams params = init_encoder(cfg, rng);
  Tensor image = Tensor::uniform({cfg.image_side, cfg.image_side}, 0.0, 1.0, rng);
  NoGradGuard pause;
  EncoderOutput out = encode(image, params, cold_start_cosine(cfg.heads));
  CHECK(out.class_feature.size() == 512);
}

TEST_CASE("full encode is differentiable at toy dims") {
  SplitMix64 rng(16);
  EncoderConfig cfg = toy_config();
  EncoderParams params = init_encoder(cfg, rng);
  Tensor image = Tensor::uniform({16, 16}, 0.0, 1.0, rng);
  // Non-degenerate cosine weights exercise the rectified dual-weight path.
  const std::vector<double> w_cos = {0.9, 0.4};

  std::vector<std::pair<std::string, Tensor>> named;
  collect_params(params, named);
  std::vector<Tensor> flat;
  for (auto& [name, t] : named) flat.push_back(t);

  Tensor probe_att, probe_cf;
  {
    NoGradGuard pause;
    EncoderOutput out = encode(image, params, w_cos);
    probe_att = Tensor::uniform(out.weighted_attention.shape(), -1.0, 1.0, rng);
    probe_cf = Tensor::uniform(out.class_feature.shape(), -1.0, 1.0, rng);
  }
  auto fn = [&](const std::vector<Tensor>&) {
    EncoderOutput out = encode(image, params, w_cos);
    return ops::add(ops::sum(ops::mul(out.weighted_attention, probe_att)),
                    ops::sum(ops::mul(out.class_feature, probe_cf)));
  };
  CHECK(grad_check(fn, flat, 1e-5) < 1e-4);
}
