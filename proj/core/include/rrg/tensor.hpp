// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rrg/rng.hpp"

namespace rrg {

using Shape = std::vector<std::size_t>;

std::string shape_str(const Shape& s);

namespace detail {

struct TensorImpl {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;  // allocated on first accumulation
  bool requires_grad = false;

  // Reverse-mode linkage, set on op results while recording is enabled.
  const char* op = nullptr;
  std::vector<std::shared_ptr<TensorImpl>> parents;
  std::function<void(TensorImpl&)> backward_fn;

  void ensure_grad() {
    if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
  }
};

}  // namespace detail

// Dense 64-bit float tensor, value-semantic handle over a shared payload.
// Operations in ops.hpp record a reverse-mode tape on their results whenever
// an input requires gradients; backward() in autodiff.hpp replays it. The
// graph is rebuilt on every forward pass; a graph and its tensors belong to
// one thread at a time.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, std::vector<double> data, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor uniform(Shape shape, double lo, double hi, SplitMix64& rng,
                        bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const { return impl_->shape; }
  std::size_t rank() const { return impl_->shape.size(); }
  std::size_t size() const { return impl_->data.size(); }
  std::size_t rows() const;  // 2-D only
  std::size_t cols() const;  // 2-D only

  const std::vector<double>& data() const { return impl_->data; }
  // Direct writes bypass the tape; reserved for optimizers and loaders.
  std::vector<double>& mutable_data() { return impl_->data; }

  double value() const;                // scalar tensors
  double at(std::size_t i) const { return impl_->data[i]; }
  double at(std::size_t r, std::size_t c) const;

  bool requires_grad() const { return impl_->requires_grad; }
  void set_requires_grad(bool value) { impl_->requires_grad = value; }

  bool has_grad() const { return !impl_->grad.empty(); }
  const std::vector<double>& grad() const;
  std::vector<double>& mutable_grad();
  void zero_grad();

  // Same values, detached from any recorded graph.
  Tensor detached() const;

  const std::shared_ptr<detail::TensorImpl>& impl() const { return impl_; }

 private:
  explicit Tensor(std::shared_ptr<detail::TensorImpl> impl)
      : impl_(std::move(impl)) {}
  std::shared_ptr<detail::TensorImpl> impl_;

  friend Tensor make_op_result(const char* op, Shape shape,
                               std::vector<double> data,
                               const std::vector<Tensor>& inputs,
                               std::function<void(detail::TensorImpl&)> bwd);
};

// Internal factory used by every catalog op: wires parents and the backward
// rule onto the result when recording is active and an input requires grad.
Tensor make_op_result(const char* op, Shape shape, std::vector<double> data,
                      const std::vector<Tensor>& inputs,
                      std::function<void(detail::TensorImpl&)> bwd);

// Suspends graph recording on this thread while alive (inference paths,
// finite-difference probes).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool prev_;
};

bool grad_recording_enabled();

}  // namespace rrg
