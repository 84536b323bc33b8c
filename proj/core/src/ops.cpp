// SPDX-License-Identifier: Apache-2.0
#include "rrg/ops.hpp"

#include <cmath>
#include <cstddef>

#include "rrg/error.hpp"

namespace rrg::ops {

namespace {

using detail::TensorImpl;

constexpr double kCosineFloor = 1e-12;

void check_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                     " vs " + shape_str(b.shape()));
  }
}

void accum_all(TensorImpl& p, const std::vector<double>& g) {
  p.ensure_grad();
  for (std::size_t i = 0; i < g.size(); ++i) p.grad[i] += g[i];
}

// Elementwise op with y = f(x), dy/dx derived from saved x and y.
Tensor unary_op(const char* name, const Tensor& x,
                const std::function<double(double)>& f,
                std::function<double(double x, double y)> dfdx) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(x.data()[i]);
  return make_op_result(
      name, x.shape(), std::move(out), {x},
      [dfdx = std::move(dfdx)](TensorImpl& o) {
        TensorImpl& x = *o.parents[0];
        if (!x.requires_grad) return;
        x.ensure_grad();
        for (std::size_t i = 0; i < o.data.size(); ++i) {
          x.grad[i] += o.grad[i] * dfdx(x.data[i], o.data[i]);
        }
      });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape("add", a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] + b.data()[i];
  return make_op_result("add", a.shape(), std::move(out), {a, b},
                        [](TensorImpl& o) {
                          for (int k = 0; k < 2; ++k) {
                            TensorImpl& p = *o.parents[k];
                            if (p.requires_grad) accum_all(p, o.grad);
                          }
                        });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_same_shape("sub", a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] - b.data()[i];
  return make_op_result("sub", a.shape(), std::move(out), {a, b},
                        [](TensorImpl& o) {
                          TensorImpl& a = *o.parents[0];
                          TensorImpl& b = *o.parents[1];
                          if (a.requires_grad) accum_all(a, o.grad);
                          if (b.requires_grad) {
                            b.ensure_grad();
                            for (std::size_t i = 0; i < o.grad.size(); ++i)
                              b.grad[i] -= o.grad[i];
                          }
                        });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_shape("mul", a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] * b.data()[i];
  return make_op_result("mul", a.shape(), std::move(out), {a, b},
                        [](TensorImpl& o) {
                          TensorImpl& a = *o.parents[0];
                          TensorImpl& b = *o.parents[1];
                          if (a.requires_grad) {
                            a.ensure_grad();
                            for (std::size_t i = 0; i < o.grad.size(); ++i)
                              a.grad[i] += o.grad[i] * b.data[i];
                          }
                          if (b.requires_grad) {
                            b.ensure_grad();
                            for (std::size_t i = 0; i < o.grad.size(); ++i)
                              b.grad[i] += o.grad[i] * a.data[i];
                          }
                        });
}

Tensor scale(const Tensor& x, double c) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.data()[i] * c;
  return make_op_result("scale", x.shape(), std::move(out), {x},
                        [c](TensorImpl& o) {
                          TensorImpl& x = *o.parents[0];
                          if (!x.requires_grad) return;
                          x.ensure_grad();
                          for (std::size_t i = 0; i < o.grad.size(); ++i)
                            x.grad[i] += o.grad[i] * c;
                        });
}

Tensor scale(const Tensor& x, const Tensor& s) {
  if (s.size() != 1) {
    throw ShapeError("scale: scale factor must be a single element, got " +
                     shape_str(s.shape()));
  }
  const double c = s.data()[0];
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.data()[i] * c;
  return make_op_result("scale", x.shape(), std::move(out), {x, s},
                        [](TensorImpl& o) {
                          TensorImpl& x = *o.parents[0];
                          TensorImpl& s = *o.parents[1];
                          const double c = s.data[0];
                          if (x.requires_grad) {
                            x.ensure_grad();
                            for (std::size_t i = 0; i < o.grad.size(); ++i)
                              x.grad[i] += o.grad[i] * c;
                          }
                          if (s.requires_grad) {
                            s.ensure_grad();
                            double acc = 0.0;
                            for (std::size_t i = 0; i < o.grad.size(); ++i)
                              acc += o.grad[i] * x.data[i];
                            s.grad[0] += acc;
                          }
                        });
}

Tensor add_rowwise(const Tensor& x, const Tensor& b) {
  if (x.rank() != 2 || b.rank() != 1 || x.cols() != b.size()) {
    throw ShapeError("add_rowwise: shape mismatch " + shape_str(x.shape()) +
                     " vs " + shape_str(b.shape()));
  }
  const std::size_t m = x.rows(), n = x.cols();
  std::vector<double> out(x.size());
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c)
      out[r * n + c] = x.data()[r * n + c] + b.data()[c];
  return make_op_result("add_rowwise", x.shape(), std::move(out), {x, b},
                        [m, n](TensorImpl& o) {
                          TensorImpl& x = *o.parents[0];
                          TensorImpl& b = *o.parents[1];
                          if (x.requires_grad) accum_all(x, o.grad);
                          if (b.requires_grad) {
                            b.ensure_grad();
                            for (std::size_t r = 0; r < m; ++r)
                              for (std::size_t c = 0; c < n; ++c)
                                b.grad[c] += o.grad[r * n + c];
                          }
                        });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  // Case tags: 0 = {m,k}x{k,n}, 1 = {m,k}x{k}, 2 = {k}x{k,n}.
  int kind;
  std::size_t m, k, n;
  if (a.rank() == 2 && b.rank() == 2) {
    kind = 0, m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
    if (b.shape()[0] != k)
      throw ShapeError("matmul: shape mismatch " + shape_str(a.shape()) + " x " +
                       shape_str(b.shape()));
  } else if (a.rank() == 2 && b.rank() == 1) {
    kind = 1, m = a.shape()[0], k = a.shape()[1], n = 1;
    if (b.size() != k)
      throw ShapeError("matmul: shape mismatch " + shape_str(a.shape()) + " x " +
                       shape_str(b.shape()));
  } else if (a.rank() == 1 && b.rank() == 2) {
    kind = 2, m = 1, k = a.size(), n = b.shape()[1];
    if (b.shape()[0] != k)
      throw ShapeError("matmul: shape mismatch " + shape_str(a.shape()) + " x " +
                       shape_str(b.shape()));
  } else {
    throw ShapeError("matmul: unsupported ranks " + shape_str(a.shape()) + " x " +
                     shape_str(b.shape()));
  }

  std::vector<double> out(m * n, 0.0);
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      const double av = pa[i * k + l];
      if (av == 0.0) continue;
      const double* brow = pb + l * n;
      double* orow = out.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }

  Shape out_shape = kind == 0 ? Shape{m, n} : (kind == 1 ? Shape{m} : Shape{n});
  return make_op_result(
      "matmul", std::move(out_shape), std::move(out), {a, b},
      [kind, m, k, n](TensorImpl& o) {
        TensorImpl& a = *o.parents[0];
        TensorImpl& b = *o.parents[1];
        (void)kind;
        if (a.requires_grad) {
          a.ensure_grad();
          // dA = G * B^T
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t l = 0; l < k; ++l) {
              double acc = 0.0;
              for (std::size_t j = 0; j < n; ++j)
                acc += o.grad[i * n + j] * b.data[l * n + j];
              a.grad[i * k + l] += acc;
            }
        }
        if (b.requires_grad) {
          b.ensure_grad();
          // dB = A^T * G
          for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < n; ++j) {
              double acc = 0.0;
              for (std::size_t i = 0; i < m; ++i)
                acc += a.data[i * k + l] * o.grad[i * n + j];
              b.grad[l * n + j] += acc;
            }
        }
      });
}

Tensor transpose(const Tensor& x) {
  if (x.rank() != 2)
    throw ShapeError("transpose: tensor is not 2-D: " + shape_str(x.shape()));
  const std::size_t m = x.rows(), n = x.cols();
  std::vector<double> out(x.size());
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) out[c * m + r] = x.data()[r * n + c];
  return make_op_result("transpose", Shape{n, m}, std::move(out), {x},
                        [m, n](TensorImpl& o) {
                          TensorImpl& x = *o.parents[0];
                          if (!x.requires_grad) return;
                          x.ensure_grad();
                          for (std::size_t r = 0; r < m; ++r)
                            for (std::size_t c = 0; c < n; ++c)
                              x.grad[r * n + c] += o.grad[c * m + r];
                        });
}

Tensor concat(const std::vector<Tensor>& xs, std::size_t axis) {
  if (xs.empty()) throw ContractError("concat: empty input list");
  const std::size_t rank = xs[0].rank();
  if (rank == 1) {
    if (axis != 0) throw ShapeError("concat: axis 0 required for 1-D inputs");
    std::size_t total = 0;
    for (const Tensor& t : xs) {
      if (t.rank() != 1)
        throw ShapeError("concat: rank mismatch, expected 1-D, got " +
                         shape_str(t.shape()));
      total += t.size();
    }
    std::vector<double> out;
    out.reserve(total);
    for (const Tensor& t : xs) out.insert(out.end(), t.data().begin(), t.data().end());
    return make_op_result("concat", Shape{total}, std::move(out), xs,
                          [](TensorImpl& o) {
                            std::size_t off = 0;
                            for (auto& p : o.parents) {
                              if (p->requires_grad) {
                                p->ensure_grad();
                                for (std::size_t i = 0; i < p->data.size(); ++i)
                                  p->grad[i] += o.grad[off + i];
                              }
                              off += p->data.size();
                            }
                          });
  }
  if (rank != 2 || axis > 1)
    throw ShapeError("concat: only 1-D and 2-D inputs on axis 0/1 supported");
  if (axis == 0) {
    const std::size_t n = xs[0].cols();
    std::size_t m = 0;
    for (const Tensor& t : xs) {
      if (t.rank() != 2 || t.cols() != n)
        throw ShapeError("concat: column mismatch " + shape_str(xs[0].shape()) +
                         " vs " + shape_str(t.shape()));
      m += t.rows();
    }
    std::vector<double> out;
    out.reserve(m * n);
    for (const Tensor& t : xs) out.insert(out.end(), t.data().begin(), t.data().end());
    return make_op_result("concat", Shape{m, n}, std::move(out), xs,
                          [](TensorImpl& o) {
                            std::size_t off = 0;
                            for (auto& p : o.parents) {
                              if (p->requires_grad) {
                                p->ensure_grad();
                                for (std::size_t i = 0; i < p->data.size(); ++i)
                                  p->grad[i] += o.grad[off + i];
                              }
                              off += p->data.size();
                            }
                          });
  }
  // axis == 1
  const std::size_t m = xs[0].rows();
  std::size_t n = 0;
  for (const Tensor& t : xs) {
    if (t.rank() != 2 || t.rows() != m)
      throw ShapeError("concat: row mismatch " + shape_str(xs[0].shape()) + " vs " +
                       shape_str(t.shape()));
    n += t.cols();
  }
  std::vector<double> out(m * n);
  std::size_t off = 0;
  for (const Tensor& t : xs) {
    const std::size_t tc = t.cols();
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < tc; ++c)
        out[r * n + off + c] = t.data()[r * tc + c];
    off += tc;
  }
  return make_op_result("concat", Shape{m, n}, std::move(out), xs,
                        [m, n](TensorImpl& o) {
                          std::size_t off = 0;
                          for (auto& p : o.parents) {
                            const std::size_t tc = p->shape[1];
                            if (p->requires_grad) {
                              p->ensure_grad();
                              for (std::size_t r = 0; r < m; ++r)
                                for (std::size_t c = 0; c < tc; ++c)
                                  p->grad[r * tc + c] += o.grad[r * n + off + c];
                            }
                            off += tc;
                          }
                        });
}

Tensor slice(const Tensor& x, std::size_t start, std::size_t len) {
  if (x.rank() != 1)
    throw ShapeError("slice: tensor is not 1-D: " + shape_str(x.shape()));
  if (len == 0 || start + len > x.size()) {
    throw ShapeError("slice: range [" + std::to_string(start) + ", " +
                     std::to_string(start + len) + ") out of bounds for " +
                     shape_str(x.shape()));
  }
  std::vector<double> out(x.data().begin() + start, x.data().begin() + start + len);
  return make_op_result("slice", Shape{len}, std::move(out), {x},
                        [start, len](TensorImpl& o) {
                          TensorImpl& x = *o.parents[0];
                          if (!x.requires_grad) return;
                          x.ensure_grad();
                          for (std::size_t i = 0; i < len; ++i)
                            x.grad[start + i] += o.grad[i];
                        });
}

Tensor row(const Tensor& x, std::size_t i) {
  if (x.rank() != 2)
    throw ShapeError("row: tensor is not 2-D: " + shape_str(x.shape()));
  if (i >= x.rows())
    throw ShapeError("row: index " + std::to_string(i) + " out of bounds for " +
                     shape_str(x.shape()));
  const std::size_t n = x.cols();
  std::vector<double> out(x.data().begin() + i * n, x.data().begin() + (i + 1) * n);
  return make_op_result("row", Shape{n}, std::move(out), {x},
                        [i, n](TensorImpl& o) {
                          TensorImpl& x = *o.parents[0];
                          if (!x.requires_grad) return;
                          x.ensure_grad();
                          for (std::size_t c = 0; c < n; ++c)
                            x.grad[i * n + c] += o.grad[c];
                        });
}

Tensor col_slice(const Tensor& x, std::size_t start, std::size_t len) {
  if (x.rank() != 2)
    throw ShapeError("col_slice: tensor is not 2-D: " + shape_str(x.shape()));
  if (len == 0 || start + len > x.cols()) {
    throw ShapeError("col_slice: range [" + std::to_string(start) + ", " +
                     std::to_string(start + len) + ") out of bounds for " +
                     shape_str(x.shape()));
  }
  const std::size_t m = x.rows(), n = x.cols();
  std::vector<double> out(m * len);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < len; ++c)
      out[r * len + c] = x.data()[r * n + start + c];
  return make_op_result("col_slice", Shape{m, len}, std::move(out), {x},
                        [m, n, start, len](TensorImpl& o) {
                          TensorImpl& x = *o.parents[0];
                          if (!x.requires_grad) return;
                          x.ensure_grad();
                          for (std::size_t r = 0; r < m; ++r)
                            for (std::size_t c = 0; c < len; ++c)
                              x.grad[r * n + start + c] += o.grad[r * len + c];
                        });
}

Tensor sum(const Tensor& x) {
  double acc = 0.0;
  for (double v : x.data()) acc += v;
  return make_op_result("sum", Shape{1}, {acc}, {x}, [](TensorImpl& o) {
    TensorImpl& x = *o.parents[0];
    if (!x.requires_grad) return;
    x.ensure_grad();
    for (double& g : x.grad) g += o.grad[0];
  });
}

Tensor mean(const Tensor& x) {
  double acc = 0.0;
  for (double v : x.data()) acc += v;
  const double inv = 1.0 / static_cast<double>(x.size());
  return make_op_result("mean", Shape{1}, {acc * inv}, {x}, [inv](TensorImpl& o) {
    TensorImpl& x = *o.parents[0];
    if (!x.requires_grad) return;
    x.ensure_grad();
    for (double& g : x.grad) g += o.grad[0] * inv;
  });
}

Tensor mean_rows(const Tensor& x) {
  if (x.rank() != 2)
    throw ShapeError("mean_rows: tensor is not 2-D: " + shape_str(x.shape()));
  const std::size_t m = x.rows(), n = x.cols();
  std::vector<double> out(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) out[c] += x.data()[r * n + c];
  const double inv = 1.0 / static_cast<double>(m);
  for (double& v : out) v *= inv;
  return make_op_result("mean_rows", Shape{n}, std::move(out), {x},
                        [m, n, inv](TensorImpl& o) {
                          TensorImpl& x = *o.parents[0];
                          if (!x.requires_grad) return;
                          x.ensure_grad();
                          for (std::size_t r = 0; r < m; ++r)
                            for (std::size_t c = 0; c < n; ++c)
                              x.grad[r * n + c] += o.grad[c] * inv;
                        });
}

Tensor exp(const Tensor& x) {
  return unary_op("exp", x, [](double v) { return std::exp(v); },
                  [](double, double y) { return y; });
}

Tensor log(const Tensor& x) {
  for (double v : x.data()) {
    if (v <= 0.0)
      throw DomainError("log: non-positive input " + std::to_string(v));
  }
  return unary_op("log", x, [](double v) { return std::log(v); },
                  [](double xv, double) { return 1.0 / xv; });
}

Tensor sqrt(const Tensor& x) {
  for (double v : x.data()) {
    if (v < 0.0) throw DomainError("sqrt: negative input " + std::to_string(v));
  }
  return unary_op("sqrt", x, [](double v) { return std::sqrt(v); },
                  [](double, double y) { return 0.5 / y; });
}

Tensor abs(const Tensor& x) {
  return unary_op("abs", x, [](double v) { return std::fabs(v); },
                  [](double xv, double) { return xv > 0.0 ? 1.0 : (xv < 0.0 ? -1.0 : 0.0); });
}

Tensor clamp_min(const Tensor& x, double lo) {
  return unary_op("clamp_min", x,
                  [lo](double v) { return v < lo ? lo : v; },
                  [lo](double xv, double) { return xv > lo ? 1.0 : 0.0; });
}

Tensor softmax(const Tensor& x) {
  if (x.rank() > 2)
    throw ShapeError("softmax: only 1-D and 2-D supported: " + shape_str(x.shape()));
  const std::size_t rows = x.rank() == 2 ? x.rows() : 1;
  const std::size_t n = x.rank() == 2 ? x.cols() : x.size();
  std::vector<double> out(x.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* in = x.data().data() + r * n;
    double* o = out.data() + r * n;
    double mx = in[0];
    for (std::size_t c = 1; c < n; ++c) mx = std::max(mx, in[c]);
    double z = 0.0;
    for (std::size_t c = 0; c < n; ++c) z += (o[c] = std::exp(in[c] - mx));
    for (std::size_t c = 0; c < n; ++c) o[c] /= z;
  }
  return make_op_result("softmax", x.shape(), std::move(out), {x},
                        [rows, n](TensorImpl& o) {
                          TensorImpl& x = *o.parents[0];
                          if (!x.requires_grad) return;
                          x.ensure_grad();
                          for (std::size_t r = 0; r < rows; ++r) {
                            const double* y = o.data.data() + r * n;
                            const double* g = o.grad.data() + r * n;
                            double dot = 0.0;
                            for (std::size_t c = 0; c < n; ++c) dot += g[c] * y[c];
                            for (std::size_t c = 0; c < n; ++c)
                              x.grad[r * n + c] += y[c] * (g[c] - dot);
                          }
                        });
}

Tensor sigmoid(const Tensor& x) {
  return unary_op("sigmoid", x,
                  [](double v) { return 1.0 / (1.0 + std::exp(-v)); },
                  [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& x) {
  return unary_op("tanh", x, [](double v) { return std::tanh(v); },
                  [](double, double y) { return 1.0 - y * y; });
}

Tensor relu(const Tensor& x) {
  return unary_op("relu", x, [](double v) { return v > 0.0 ? v : 0.0; },
                  [](double xv, double) { return xv > 0.0 ? 1.0 : 0.0; });
}

Tensor gelu(const Tensor& x) {
  // 0.5 x (1 + tanh(sqrt(2/pi) (x + 0.044715 x^3)))
  constexpr double kC = 0.7978845608028654;  // sqrt(2/pi)
  constexpr double kA = 0.044715;
  return unary_op(
      "gelu", x,
      [](double v) {
        const double u = kC * (v + kA * v * v * v);
        return 0.5 * v * (1.0 + std::tanh(u));
      },
      [](double v, double) {
        const double u = kC * (v + kA * v * v * v);
        const double t = std::tanh(u);
        const double du = kC * (1.0 + 3.0 * kA * v * v);
        return 0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * du;
      });
}

Tensor cosine_similarity(const Tensor& u, const Tensor& v) {
  check_same_shape("cosine_similarity", u, v);
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u.data()[i] * v.data()[i];
    nu += u.data()[i] * u.data()[i];
    nv += v.data()[i] * v.data()[i];
  }
  nu = std::sqrt(nu);
  nv = std::sqrt(nv);
  const double raw = nu * nv;
  const double denom = std::max(raw, kCosineFloor);
  const double c = dot / denom;
  const bool floored = raw < kCosineFloor;
  return make_op_result(
      "cosine_similarity", Shape{1}, {c}, {u, v},
      [nu, nv, denom, c, floored](TensorImpl& o) {
        if (floored) return;  // flat at the floored zero-vector case
        TensorImpl& u = *o.parents[0];
        TensorImpl& v = *o.parents[1];
        const double g = o.grad[0];
        if (u.requires_grad) {
          u.ensure_grad();
          for (std::size_t i = 0; i < u.data.size(); ++i)
            u.grad[i] += g * (v.data[i] / denom - c * u.data[i] / (nu * nu));
        }
        if (v.requires_grad) {
          v.ensure_grad();
          for (std::size_t i = 0; i < v.data.size(); ++i)
            v.grad[i] += g * (u.data[i] / denom - c * v.data[i] / (nv * nv));
        }
      });
}

const std::vector<CatalogOp>& op_catalog() {
  static const std::vector<CatalogOp> catalog = {
      {"add", {{2, 3}, {2, 3}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return add(in[0], in[1]); }},
      {"sub", {{2, 3}, {2, 3}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return sub(in[0], in[1]); }},
      {"mul", {{2, 3}, {2, 3}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return mul(in[0], in[1]); }},
      {"scalar_mul", {{5}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return scale(in[0], 1.7); }},
      {"scale_by_tensor", {{2, 3}, {1}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return scale(in[0], in[1]); }},
      {"add_rowwise", {{3, 4}, {4}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return add_rowwise(in[0], in[1]); }},
      {"matmul", {{3, 4}, {4, 2}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return matmul(in[0], in[1]); }},
      {"matvec", {{3, 4}, {4}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return matmul(in[0], in[1]); }},
      {"vecmat", {{3}, {3, 4}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return matmul(in[0], in[1]); }},
      {"transpose", {{3, 4}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return transpose(in[0]); }},
      {"concat_rows", {{2, 3}, {4, 3}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return concat({in[0], in[1]}, 0); }},
      {"concat_cols", {{2, 3}, {2, 2}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return concat({in[0], in[1]}, 1); }},
      {"concat_vec", {{3}, {4}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return concat({in[0], in[1]}, 0); }},
      {"slice", {{6}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return slice(in[0], 1, 4); }},
      {"row", {{3, 4}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return row(in[0], 1); }},
      {"col_slice", {{3, 4}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return col_slice(in[0], 1, 2); }},
      {"sum", {{2, 3}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return sum(in[0]); }},
      {"mean", {{2, 3}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return mean(in[0]); }},
      {"mean_rows", {{3, 4}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return mean_rows(in[0]); }},
      {"exp", {{5}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return exp(in[0]); }},
      {"log", {{5}}, 0.05, 2.0, false,
       [](const std::vector<Tensor>& in) { return log(in[0]); }},
      {"sqrt", {{5}}, 0.05, 2.0, false,
       [](const std::vector<Tensor>& in) { return sqrt(in[0]); }},
      {"abs", {{5}}, -2.0, 2.0, true,
       [](const std::vector<Tensor>& in) { return abs(in[0]); }},
      {"clamp_min", {{5}}, -2.0, 2.0, true,
       [](const std::vector<Tensor>& in) { return clamp_min(in[0], 0.25); }},
      {"softmax", {{3, 4}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return softmax(in[0]); }},
      {"sigmoid", {{5}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return sigmoid(in[0]); }},
      {"tanh", {{5}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return tanh(in[0]); }},
      {"relu", {{5}}, -2.0, 2.0, true,
       [](const std::vector<Tensor>& in) { return relu(in[0]); }},
      {"gelu", {{5}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) { return gelu(in[0]); }},
      {"cosine_similarity", {{6}, {6}}, -2.0, 2.0, false,
       [](const std::vector<Tensor>& in) {
         return cosine_similarity(in[0], in[1]);
       }},
  };
  return catalog;
}

}  // namespace rrg::ops
