// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rrg/tensor.hpp"

namespace rrg::ops {

// Elementwise, same shape.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);

Tensor scale(const Tensor& x, double c);
Tensor scale(const Tensor& x, const Tensor& s);  // s: single-element tensor

// {m,n} + {n}: adds b to every row.
Tensor add_rowwise(const Tensor& x, const Tensor& b);

// {m,k}x{k,n} -> {m,n}; {m,k}x{k} -> {m}; {k}x{k,n} -> {n}.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& x);

// Concatenate along `axis`; 1-D tensors on axis 0, 2-D on axis 0 or 1.
Tensor concat(const std::vector<Tensor>& xs, std::size_t axis);
// 1-D contiguous slice.
Tensor slice(const Tensor& x, std::size_t start, std::size_t len);
// Row i of a 2-D tensor as a vector.
Tensor row(const Tensor& x, std::size_t i);
// Columns [start, start+len) of a 2-D tensor.
Tensor col_slice(const Tensor& x, std::size_t start, std::size_t len);

Tensor sum(const Tensor& x);        // -> scalar
Tensor mean(const Tensor& x);       // -> scalar
Tensor mean_rows(const Tensor& x);  // {m,n} -> {n}

Tensor exp(const Tensor& x);
Tensor log(const Tensor& x);   // DomainError on x <= 0
Tensor sqrt(const Tensor& x);  // DomainError on x < 0
Tensor abs(const Tensor& x);
Tensor clamp_min(const Tensor& x, double lo);

// Softmax over the last axis; rows sum to 1.
Tensor softmax(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);
Tensor relu(const Tensor& x);
Tensor gelu(const Tensor& x);  // tanh approximation

// cos(u, v) with the denominator floored at 1e-12, so zero vectors map to 0.
Tensor cosine_similarity(const Tensor& u, const Tensor& v);

// One entry of the op catalog: a tag, canned input shapes, and the
// application, used by the catalog-wide gradient and purity sweeps. Input
// values are drawn from [domain_lo, domain_hi]; `kinked` ops need inputs held
// away from the derivative discontinuity.
struct CatalogOp {
  std::string name;
  std::vector<Shape> input_shapes;
  double domain_lo;
  double domain_hi;
  bool kinked;
  std::function<Tensor(const std::vector<Tensor>&)> apply;
};

// Every primitive the model math needs, in one sweepable table.
const std::vector<CatalogOp>& op_catalog();

}  // namespace rrg::ops
