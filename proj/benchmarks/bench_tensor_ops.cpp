// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "rrg/autodiff.hpp"
#include "rrg/ops.hpp"
#include "rrg/rng.hpp"

namespace {

using namespace rrg;

void BM_MatmulForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SplitMix64 rng(1);
  Tensor a = Tensor::uniform({n, n}, -1.0, 1.0, rng);
  Tensor b = Tensor::uniform({n, n}, -1.0, 1.0, rng);
  NoGradGuard pause;
  for (auto _ : state) {
    Tensor c = ops::matmul(a, b);
    benchmark::DoNotOptimize(c.data().data());
  }
  state.SetItemsProcessed(state.iterations() * 2 * n * n * n);
}
BENCHMARK(BM_MatmulForward)->Arg(32)->Arg(64)->Arg(128);

void BM_SoftmaxRows(benchmark::State& state) {
  SplitMix64 rng(2);
  Tensor x = Tensor::uniform({64, 64}, -4.0, 4.0, rng);
  NoGradGuard pause;
  for (auto _ : state) {
    Tensor y = ops::softmax(x);
    benchmark::DoNotOptimize(y.data().data());
  }
}
BENCHMARK(BM_SoftmaxRows);

void BM_AffineBackward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SplitMix64 rng(3);
  Tensor w = Tensor::uniform({n, n}, -0.5, 0.5, rng, true);
  Tensor b = Tensor::uniform({n}, -0.5, 0.5, rng, true);
  Tensor x = Tensor::uniform({n}, -1.0, 1.0, rng);
  for (auto _ : state) {
    zero_grads({w, b});
    Tensor loss = ops::mean(ops::gelu(ops::add(ops::matmul(w, x), b)));
    backward(loss);
    benchmark::DoNotOptimize(w.mutable_grad().data());
  }
}
BENCHMARK(BM_AffineBackward)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
