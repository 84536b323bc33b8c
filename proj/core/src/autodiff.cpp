// SPDX-License-Identifier: Apache-2.0
#include "rrg/autodiff.hpp"

#include <cmath>
#include <unordered_set>

#include "rrg/error.hpp"

namespace rrg {

namespace {

using detail::TensorImpl;

// Iterative post-order DFS; recorded graphs from unrolled RNNs can be deep.
std::vector<TensorImpl*> topo_order(TensorImpl* root) {
  std::vector<TensorImpl*> order;
  std::unordered_set<TensorImpl*> seen;
  std::vector<std::pair<TensorImpl*, std::size_t>> stack;
  stack.emplace_back(root, 0);
  seen.insert(root);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      TensorImpl* p = node->parents[next++].get();
      if (p->requires_grad && !seen.count(p)) {
        seen.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  return order;  // parents precede children
}

}  // namespace

void backward(const Tensor& loss) {
  if (loss.size() != 1) {
    throw ContractError("backward: loss must be scalar, got " +
                        shape_str(loss.shape()));
  }
  TensorImpl* root = loss.impl().get();
  root->ensure_grad();
  root->grad[0] += 1.0;  // d(loss)/d(loss) == 1
  if (!root->requires_grad) return;  // constant graph, nothing to propagate

  std::vector<TensorImpl*> order = topo_order(root);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    TensorImpl* node = *it;
    if (node->backward_fn) {
      node->ensure_grad();
      node->backward_fn(*node);
    }
  }
}

void zero_grads(const std::vector<Tensor>& params) {
  for (const Tensor& p : params) const_cast<Tensor&>(p).zero_grad();
}

double grad_check(const std::function<Tensor(const std::vector<Tensor>&)>& fn,
                  const std::vector<Tensor>& params, double step) {
  if (step <= 0.0) throw ContractError("grad_check: step must be positive");

  zero_grads(params);
  Tensor out = fn(params);
  if (!std::isfinite(out.value())) {
    throw NumericError("grad_check: non-finite function value at base point");
  }
  backward(out);

  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (const Tensor& p : params) {
    analytic.push_back(p.has_grad() ? p.grad()
                                    : std::vector<double>(p.size(), 0.0));
  }

  NoGradGuard pause;
  double worst = 0.0;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Tensor p = params[pi];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double saved = p.data()[i];
      p.mutable_data()[i] = saved + step;
      const double up = fn(params).value();
      p.mutable_data()[i] = saved - step;
      const double down = fn(params).value();
      p.mutable_data()[i] = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw NumericError("grad_check: non-finite function value at param #" +
                           std::to_string(pi) + " entry " + std::to_string(i));
      }
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[pi][i];
      const double err = std::fabs(a - numeric) / std::max(1.0, std::fabs(a));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace rrg
