// SPDX-License-Identifier: Apache-2.0
#include "rrg/tensor.hpp"

#include <numeric>
#include <sstream>
#include <utility>

#include "rrg/error.hpp"

namespace rrg {

namespace {
thread_local bool g_grad_recording = true;

std::size_t shape_numel(const Shape& s) {
  std::size_t n = 1;
  for (std::size_t d : s) n *= d;
  return n;
}
}  // namespace

std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ",";
    os << s[i];
  }
  os << "}";
  return os.str();
}

Tensor::Tensor(Shape shape, std::vector<double> data, bool requires_grad) {
  for (std::size_t d : shape) {
    if (d == 0) throw ShapeError("tensor: zero extent in shape " + shape_str(shape));
  }
  if (shape_numel(shape) != data.size()) {
    throw ShapeError("tensor: shape " + shape_str(shape) + " does not match " +
                     std::to_string(data.size()) + " data values");
  }
  impl_ = std::make_shared<detail::TensorImpl>();
  impl_->shape = std::move(shape);
  impl_->data = std::move(data);
  impl_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  std::vector<double> d(shape_numel(shape), 0.0);
  return Tensor(std::move(shape), std::move(d), requires_grad);
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  std::vector<double> d(shape_numel(shape), value);
  return Tensor(std::move(shape), std::move(d), requires_grad);
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return Tensor(Shape{1}, std::vector<double>{value}, requires_grad);
}

Tensor Tensor::uniform(Shape shape, double lo, double hi, SplitMix64& rng,
                       bool requires_grad) {
  std::vector<double> d(shape_numel(shape));
  for (double& v : d) v = rng.uniform(lo, hi);
  return Tensor(std::move(shape), std::move(d), requires_grad);
}

std::size_t Tensor::rows() const {
  if (rank() != 2) throw ShapeError("rows: tensor is not 2-D: " + shape_str(shape()));
  return impl_->shape[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw ShapeError("cols: tensor is not 2-D: " + shape_str(shape()));
  return impl_->shape[1];
}

double Tensor::value() const {
  if (size() != 1) {
    throw ContractError("value: tensor " + shape_str(shape()) + " is not scalar");
  }
  return impl_->data[0];
}

double Tensor::at(std::size_t r, std::size_t c) const {
  return impl_->data[r * cols() + c];
}

const std::vector<double>& Tensor::grad() const {
  if (impl_->grad.empty()) {
    throw ContractError("grad: no gradient recorded for this tensor");
  }
  return impl_->grad;
}

std::vector<double>& Tensor::mutable_grad() {
  impl_->ensure_grad();
  return impl_->grad;
}

void Tensor::zero_grad() { impl_->grad.assign(impl_->data.size(), 0.0); }

Tensor Tensor::detached() const {
  return Tensor(impl_->shape, impl_->data, false);
}

Tensor make_op_result(const char* op, Shape shape, std::vector<double> data,
                      const std::vector<Tensor>& inputs,
                      std::function<void(detail::TensorImpl&)> bwd) {
  bool needs_grad = false;
  if (g_grad_recording) {
    for (const Tensor& t : inputs) {
      if (t.requires_grad()) {
        needs_grad = true;
        break;
      }
    }
  }
  Tensor out(std::move(shape), std::move(data), needs_grad);
  if (needs_grad) {
    auto& impl = *out.impl();
    impl.op = op;
    impl.parents.reserve(inputs.size());
    for (const Tensor& t : inputs) impl.parents.push_back(t.impl());
    impl.backward_fn = std::move(bwd);
  }
  return out;
}

NoGradGuard::NoGradGuard() : prev_(g_grad_recording) { g_grad_recording = false; }
NoGradGuard::~NoGradGuard() { g_grad_recording = prev_; }

bool grad_recording_enabled() { return g_grad_recording; }

}  // namespace rrg
