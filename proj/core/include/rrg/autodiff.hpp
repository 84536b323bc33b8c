// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "rrg/tensor.hpp"

namespace rrg {

// Reverse-mode sweep from a scalar loss. Visits each recorded node exactly
// once in reverse topological order; gradients sum across fan-out. Repeated
// calls accumulate into existing grads; callers zero them between steps.
void backward(const Tensor& loss);

void zero_grads(const std::vector<Tensor>& params);

// Central-difference check of d(fn)/d(params). Returns the max over all
// parameter entries of |analytic - numeric| / max(1, |analytic|).
double grad_check(const std::function<Tensor(const std::vector<Tensor>&)>& fn,
                  const std::vector<Tensor>& params, double step = 1e-5);

}  // namespace rrg
