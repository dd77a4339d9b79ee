/* Copyright 2026 The SCS Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "scs/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scs/errors.hpp"
#include "scs/numerics/kernels.hpp"

namespace scs::ops {
namespace {

[[noreturn]] void shape_error(const char* op, const Shape& a, const Shape& b) {
  throw DimensionError(std::string(op) + ": incompatible shapes " + shape_to_string(a) + " and " +
                       shape_to_string(b));
}

void accumulate(Tensor& dst, const Tensor& src) {
  auto d = dst.data();
  auto s = src.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

std::size_t leading(const Shape& s, std::size_t trailing) {
  std::size_t n = 1;
  for (std::size_t i = 0; i + trailing < s.size(); ++i) n *= s[i];
  return n;
}

bool is_suffix(const Shape& whole, const Shape& tail) {
  if (tail.size() > whole.size()) return false;
  return std::equal(tail.begin(), tail.end(), whole.end() - static_cast<std::ptrdiff_t>(tail.size()));
}

template <typename F>
Var unary(const Var& x, F&& fwd_and_deriv) {
  const Tensor& xv = x.value();
  Tensor out(xv.shape());
  Tensor deriv(xv.shape());
  for (std::size_t i = 0; i < xv.size(); ++i) {
    auto [y, dy] = fwd_and_deriv(xv[i]);
    out[i] = y;
    deriv[i] = dy;
  }
  return make_op(std::move(out), {x},
                 [deriv = std::move(deriv)](const Tensor& g, std::vector<Tensor*>& in) {
                   if (!in[0]) return;
                   for (std::size_t i = 0; i < g.size(); ++i) (*in[0])[i] += g[i] * deriv[i];
                 });
}

}  // namespace

Var matmul(const Var& a, const Var& b) {
  const Shape& as = a.shape();
  const Shape& bs = b.shape();
  if (as.size() == 2 && bs.size() == 2) {
    if (as[1] != bs[0]) shape_error("matmul", as, bs);
    const std::size_t m = as[0], k = as[1], p = bs[1];
    Tensor out({m, p});
    kernels::gemm_nn(m, k, p, a.value().data().data(), b.value().data().data(),
                     out.data().data(), false);
    return make_op(std::move(out), {a, b}, [a, b, m, k, p](const Tensor& g, std::vector<Tensor*>& in) {
      if (in[0]) kernels::gemm_nt(m, p, k, g.data().data(), b.value().data().data(), in[0]->data().data(), true);
      if (in[1]) kernels::gemm_tn_acc(m, k, p, a.value().data().data(), g.data().data(), in[1]->data().data());
    });
  }
  if (as.size() == 3 && bs.size() == 2) return linear(a, b);
  if (as.size() >= 3 && as.size() == bs.size()) {
    if (!std::equal(as.begin(), as.end() - 2, bs.begin()) || as.back() != bs[bs.size() - 2]) {
      shape_error("matmul", as, bs);
    }
    const std::size_t batch = leading(as, 2), m = as[as.size() - 2], k = as.back(), p = bs.back();
    Shape os(as.begin(), as.end() - 1);
    os.push_back(p);
    Tensor out(os);
    for (std::size_t i = 0; i < batch; ++i) {
      kernels::gemm_nn(m, k, p, a.value().data().data() + i * m * k,
                       b.value().data().data() + i * k * p, out.data().data() + i * m * p, false);
    }
    return make_op(std::move(out), {a, b},
                   [a, b, batch, m, k, p](const Tensor& g, std::vector<Tensor*>& in) {
                     for (std::size_t i = 0; i < batch; ++i) {
                       const double* gi = g.data().data() + i * m * p;
                       if (in[0]) {
                         kernels::gemm_nt(m, p, k, gi, b.value().data().data() + i * k * p,
                                          in[0]->data().data() + i * m * k, true);
                       }
                       if (in[1]) {
                         kernels::gemm_tn_acc(m, k, p, a.value().data().data() + i * m * k, gi,
                                              in[1]->data().data() + i * k * p);
                       }
                     }
                   });
  }
  shape_error("matmul", as, bs);
}

Var matmul_nt(const Var& a, const Var& b) {
  const Shape& as = a.shape();
  const Shape& bs = b.shape();
  if (as.size() < 2 || as.size() != bs.size() || as.back() != bs.back() ||
      !std::equal(as.begin(), as.end() - 2, bs.begin())) {
    shape_error("matmul_nt", as, bs);
  }
  const std::size_t batch = leading(as, 2);
  const std::size_t n = as[as.size() - 2], k = as.back(), m = bs[bs.size() - 2];
  Shape os(as.begin(), as.end() - 1);
  os.push_back(m);
  Tensor out(os);
  for (std::size_t i = 0; i < batch; ++i) {
    kernels::gemm_nt(n, k, m, a.value().data().data() + i * n * k,
                     b.value().data().data() + i * m * k, out.data().data() + i * n * m, false);
  }
  return make_op(std::move(out), {a, b}, [a, b, batch, n, k, m](const Tensor& g, std::vector<Tensor*>& in) {
    for (std::size_t i = 0; i < batch; ++i) {
      const double* gi = g.data().data() + i * n * m;
      // dA = G * B, dB = G^T * A
      if (in[0]) {
        kernels::gemm_nn(n, m, k, gi, b.value().data().data() + i * m * k,
                         in[0]->data().data() + i * n * k, true);
      }
      if (in[1]) {
        kernels::gemm_tn_acc(n, m, k, gi, a.value().data().data() + i * n * k,
                             in[1]->data().data() + i * m * k);
      }
    }
  });
}

Var linear(const Var& x, const Var& w) {
  const Shape& xs = x.shape();
  const Shape& ws = w.shape();
  if (xs.empty() || ws.size() != 2 || xs.back() != ws[0]) shape_error("linear", xs, ws);
  const std::size_t rows = leading(xs, 1), k = ws[0], p = ws[1];
  Shape os = xs;
  os.back() = p;
  Tensor out(os);
  kernels::gemm_nn(rows, k, p, x.value().data().data(), w.value().data().data(), out.data().data(), false);
  return make_op(std::move(out), {x, w}, [x, w, rows, k, p](const Tensor& g, std::vector<Tensor*>& in) {
    if (in[0]) kernels::gemm_nt(rows, p, k, g.data().data(), w.value().data().data(), in[0]->data().data(), true);
    if (in[1]) kernels::gemm_tn_acc(rows, k, p, x.value().data().data(), g.data().data(), in[1]->data().data());
  });
}

Var linear(const Var& x, const Var& w, const Var& bias) {
  if (bias.rank() != 1 || bias.dim(0) != w.shape().back()) shape_error("linear bias", w.shape(), bias.shape());
  return add_broadcast(linear(x, w), bias);
}

Var add(const Var& a, const Var& b) {
  if (a.shape() != b.shape()) shape_error("add", a.shape(), b.shape());
  Tensor out = a.value();
  accumulate(out, b.value());
  return make_op(std::move(out), {a, b}, [](const Tensor& g, std::vector<Tensor*>& in) {
    if (in[0]) accumulate(*in[0], g);
    if (in[1]) accumulate(*in[1], g);
  });
}

Var sub(const Var& a, const Var& b) {
  if (a.shape() != b.shape()) shape_error("sub", a.shape(), b.shape());
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.value()[i];
  return make_op(std::move(out), {a, b}, [](const Tensor& g, std::vector<Tensor*>& in) {
    if (in[0]) accumulate(*in[0], g);
    if (in[1]) {
      for (std::size_t i = 0; i < g.size(); ++i) (*in[1])[i] -= g[i];
    }
  });
}

Var mul(const Var& a, const Var& b) {
  if (a.shape() != b.shape()) shape_error("mul", a.shape(), b.shape());
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.value()[i];
  return make_op(std::move(out), {a, b}, [a, b](const Tensor& g, std::vector<Tensor*>& in) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (in[0]) (*in[0])[i] += g[i] * b.value()[i];
      if (in[1]) (*in[1])[i] += g[i] * a.value()[i];
    }
  });
}

Var scale(const Var& a, double s) {
  Tensor out = a.value();
  for (auto& v : out.data()) v *= s;
  return make_op(std::move(out), {a}, [s](const Tensor& g, std::vector<Tensor*>& in) {
    if (!in[0]) return;
    for (std::size_t i = 0; i < g.size(); ++i) (*in[0])[i] += s * g[i];
  });
}

Var add_broadcast(const Var& x, const Var& y) {
  if (!is_suffix(x.shape(), y.shape())) shape_error("add_broadcast", x.shape(), y.shape());
  const std::size_t inner = y.value().size();
  const std::size_t outer = inner ? x.value().size() / inner : 0;
  Tensor out = x.value();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) out[o * inner + i] += y.value()[i];
  }
  return make_op(std::move(out), {x, y}, [outer, inner](const Tensor& g, std::vector<Tensor*>& in) {
    if (in[0]) accumulate(*in[0], g);
    if (in[1]) {
      for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < inner; ++i) (*in[1])[i] += g[o * inner + i];
      }
    }
  });
}

Var gelu(const Var& x) {
  // tanh approximation; smooth everywhere so finite differences apply.
  constexpr double c = 0.7978845608028654;  // sqrt(2 / pi)
  constexpr double k = 0.044715;
  return unary(x, [](double v) {
    const double u = c * (v + k * v * v * v);
    const double t = std::tanh(u);
    const double y = 0.5 * v * (1.0 + t);
    const double dy = 0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * c * (1.0 + 3.0 * k * v * v);
    return std::pair{y, dy};
  });
}

Var sigmoid(const Var& x) {
  return unary(x, [](double v) {
    const double y = v >= 0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
    return std::pair{y, y * (1.0 - y)};
  });
}

namespace {

Var softmax_impl(const Var& x, const Tensor* mask) {
  const Tensor& xv = x.value();
  if (xv.rank() == 0) throw DimensionError("softmax on a scalar");
  const std::size_t cols = xv.shape().back();
  const std::size_t rows = cols ? xv.size() / cols : 0;
  std::size_t mask_rows = 1;
  if (mask) {
    if (mask->rank() == 0 || !is_suffix(xv.shape(), mask->shape())) {
      shape_error("masked_softmax", xv.shape(), mask->shape());
    }
    mask_rows = mask->size() / cols;
  }
  Tensor out(xv.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* in = xv.data().data() + r * cols;
    double* y = out.data().data() + r * cols;
    const double* m = mask ? mask->data().data() + (r % mask_rows) * cols : nullptr;
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cols; ++j) {
      if (!m || m[j] != 0.0) peak = std::max(peak, in[j]);
    }
    if (peak == -std::numeric_limits<double>::infinity()) {
      throw DegenerateRowError("masked_softmax: row " + std::to_string(r) + " has no unmasked entry");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double e = (!m || m[j] != 0.0) ? std::exp(in[j] - peak) : 0.0;
      y[j] = e;
      total += e;
    }
    const double inv = 1.0 / total;
    for (std::size_t j = 0; j < cols; ++j) y[j] *= inv;
  }
  Tensor saved = out;
  return make_op(std::move(out), {x}, [saved = std::move(saved), rows, cols](const Tensor& g, std::vector<Tensor*>& in) {
    if (!in[0]) return;
    for (std::size_t r = 0; r < rows; ++r) {
      const double* y = saved.data().data() + r * cols;
      const double* gr = g.data().data() + r * cols;
      double dot = 0.0;
      for (std::size_t j = 0; j < cols; ++j) dot += gr[j] * y[j];
      double* dx = in[0]->data().data() + r * cols;
      for (std::size_t j = 0; j < cols; ++j) dx[j] += y[j] * (gr[j] - dot);
    }
  });
}

}  // namespace

Var masked_softmax(const Var& x, const Tensor& mask) { return softmax_impl(x, &mask); }
Var softmax(const Var& x) { return softmax_impl(x, nullptr); }

Var layernorm(const Var& x, double eps) {
  const Tensor& xv = x.value();
  if (xv.rank() == 0 || xv.shape().back() == 0) throw DimensionError("layernorm needs D >= 1");
  const std::size_t d = xv.shape().back();
  const std::size_t rows = xv.size() / d;
  Tensor out(xv.shape());
  std::vector<double> inv_std(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* in = xv.data().data() + r * d;
    double mu = 0.0;
    for (std::size_t j = 0; j < d; ++j) mu += in[j];
    mu /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t j = 0; j < d; ++j) var += (in[j] - mu) * (in[j] - mu);
    var /= static_cast<double>(d);
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std[r] = is;
    double* y = out.data().data() + r * d;
    for (std::size_t j = 0; j < d; ++j) y[j] = (in[j] - mu) * is;
  }
  Tensor normed = out;
  return make_op(std::move(out), {x},
                 [normed = std::move(normed), inv_std = std::move(inv_std), rows, d](
                     const Tensor& g, std::vector<Tensor*>& in) {
                   if (!in[0]) return;
                   const double inv_d = 1.0 / static_cast<double>(d);
                   for (std::size_t r = 0; r < rows; ++r) {
                     const double* y = normed.data().data() + r * d;
                     const double* gr = g.data().data() + r * d;
                     double mean_g = 0.0, mean_gy = 0.0;
                     for (std::size_t j = 0; j < d; ++j) {
                       mean_g += gr[j];
                       mean_gy += gr[j] * y[j];
                     }
                     mean_g *= inv_d;
                     mean_gy *= inv_d;
                     double* dx = in[0]->data().data() + r * d;
                     for (std::size_t j = 0; j < d; ++j) {
                       dx[j] += inv_std[r] * (gr[j] - mean_g - y[j] * mean_gy);
                     }
                   }
                 });
}

Var affine(const Var& x, const Var& gamma, const Var& beta) {
  const std::size_t d = x.shape().back();
  if (gamma.shape() != Shape{d} || beta.shape() != Shape{d}) shape_error("affine", x.shape(), gamma.shape());
  const std::size_t rows = x.value().size() / d;
  Tensor out = x.value();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      out[r * d + j] = out[r * d + j] * gamma.value()[j] + beta.value()[j];
    }
  }
  return make_op(std::move(out), {x, gamma, beta}, [x, gamma, rows, d](const Tensor& g, std::vector<Tensor*>& in) {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < d; ++j) {
        const double gv = g[r * d + j];
        if (in[0]) (*in[0])[r * d + j] += gv * gamma.value()[j];
        if (in[1]) (*in[1])[j] += gv * x.value()[r * d + j];
        if (in[2]) (*in[2])[j] += gv;
      }
    }
  });
}

Var mean_pool(const Var& x) {
  if (x.rank() != 3 || x.dim(1) == 0) throw DimensionError("mean_pool expects [B x N x D] with N >= 1, got " + shape_to_string(x.shape()));
  const std::size_t b = x.dim(0), n = x.dim(1), d = x.dim(2);
  Tensor out({b, d});
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t j = 0; j < d; ++j) out[i * d + j] += x.value()[(i * n + t) * d + j];
    }
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] *= inv;
  }
  return make_op(std::move(out), {x}, [b, n, d, inv](const Tensor& g, std::vector<Tensor*>& in) {
    if (!in[0]) return;
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t j = 0; j < d; ++j) (*in[0])[(i * n + t) * d + j] += g[i * d + j] * inv;
      }
    }
  });
}

Var split_heads(const Var& x, std::size_t heads) {
  if (x.rank() != 3 || heads == 0 || x.dim(2) % heads != 0) {
    throw DimensionError("split_heads: " + shape_to_string(x.shape()) + " into " + std::to_string(heads) + " heads");
  }
  const std::size_t b = x.dim(0), n = x.dim(1), d = x.dim(2), dk = d / heads;
  Tensor out({b, heads, n, dk});
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t h = 0; h < heads; ++h)
        for (std::size_t j = 0; j < dk; ++j)
          out[((i * heads + h) * n + t) * dk + j] = x.value()[(i * n + t) * d + h * dk + j];
  return make_op(std::move(out), {x}, [b, n, d, dk, heads](const Tensor& g, std::vector<Tensor*>& in) {
    if (!in[0]) return;
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t t = 0; t < n; ++t)
        for (std::size_t h = 0; h < heads; ++h)
          for (std::size_t j = 0; j < dk; ++j)
            (*in[0])[(i * n + t) * d + h * dk + j] += g[((i * heads + h) * n + t) * dk + j];
  });
}

Var merge_heads(const Var& x) {
  if (x.rank() != 4) throw DimensionError("merge_heads expects [B x H x N x dk], got " + shape_to_string(x.shape()));
  const std::size_t b = x.dim(0), heads = x.dim(1), n = x.dim(2), dk = x.dim(3), d = heads * dk;
  Tensor out({b, n, d});
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t h = 0; h < heads; ++h)
      for (std::size_t t = 0; t < n; ++t)
        for (std::size_t j = 0; j < dk; ++j)
          out[(i * n + t) * d + h * dk + j] = x.value()[((i * heads + h) * n + t) * dk + j];
  return make_op(std::move(out), {x}, [b, n, d, dk, heads](const Tensor& g, std::vector<Tensor*>& in) {
    if (!in[0]) return;
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t h = 0; h < heads; ++h)
        for (std::size_t t = 0; t < n; ++t)
          for (std::size_t j = 0; j < dk; ++j)
            (*in[0])[((i * heads + h) * n + t) * dk + j] += g[(i * n + t) * d + h * dk + j];
  });
}

Var mix(const Var& gamma, const std::vector<Var>& ys) {
  if (gamma.rank() != 2 || gamma.dim(1) != ys.size() || ys.empty()) {
    throw DimensionError("mix: gate " + shape_to_string(gamma.shape()) + " for " + std::to_string(ys.size()) + " branches");
  }
  const std::size_t b = gamma.dim(0), g_count = ys.size();
  const Shape& ys0 = ys[0].shape();
  if (ys0.empty() || ys0[0] != b) shape_error("mix", gamma.shape(), ys0);
  for (const auto& y : ys) {
    if (y.shape() != ys0) shape_error("mix", ys0, y.shape());
  }
  const std::size_t per = ys[0].value().size() / b;
  Tensor out(ys0);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t g = 0; g < g_count; ++g) {
      const double w = gamma.value()[i * g_count + g];
      const double* src = ys[g].value().data().data() + i * per;
      double* dst = out.data().data() + i * per;
      for (std::size_t j = 0; j < per; ++j) dst[j] += w * src[j];
    }
  }
  std::vector<Var> inputs{gamma};
  inputs.insert(inputs.end(), ys.begin(), ys.end());
  return make_op(std::move(out), inputs, [gamma, ys, b, g_count, per](const Tensor& gr, std::vector<Tensor*>& in) {
    for (std::size_t i = 0; i < b; ++i) {
      const double* go = gr.data().data() + i * per;
      for (std::size_t g = 0; g < g_count; ++g) {
        if (in[0]) {
          const double* y = ys[g].value().data().data() + i * per;
          double s = 0.0;
          for (std::size_t j = 0; j < per; ++j) s += go[j] * y[j];
          (*in[0])[i * g_count + g] += s;
        }
        if (in[1 + g]) {
          const double w = gamma.value()[i * g_count + g];
          double* dy = in[1 + g]->data().data() + i * per;
          for (std::size_t j = 0; j < per; ++j) dy[j] += w * go[j];
        }
      }
    }
  });
}

Var weighted_sum(const Var& w, const std::vector<Var>& ys) {
  if (w.rank() != 1 || w.dim(0) != ys.size() || ys.empty()) {
    throw DimensionError("weighted_sum: weights " + shape_to_string(w.shape()) + " for " + std::to_string(ys.size()) + " tensors");
  }
  const Shape& s0 = ys[0].shape();
  for (const auto& y : ys) {
    if (y.shape() != s0) shape_error("weighted_sum", s0, y.shape());
  }
  Tensor out(s0);
  for (std::size_t l = 0; l < ys.size(); ++l) {
    const double wl = w.value()[l];
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += wl * ys[l].value()[j];
  }
  std::vector<Var> inputs{w};
  inputs.insert(inputs.end(), ys.begin(), ys.end());
  return make_op(std::move(out), inputs, [w, ys](const Tensor& g, std::vector<Tensor*>& in) {
    for (std::size_t l = 0; l < ys.size(); ++l) {
      if (in[0]) {
        double s = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) s += g[j] * ys[l].value()[j];
        (*in[0])[l] += s;
      }
      if (in[1 + l]) {
        const double wl = w.value()[l];
        for (std::size_t j = 0; j < g.size(); ++j) (*in[1 + l])[j] += wl * g[j];
      }
    }
  });
}

Var concat_tokens(const Var& a, const Var& b) {
  if (a.rank() != 3 || b.rank() != 3 || a.dim(0) != b.dim(0) || a.dim(2) != b.dim(2)) {
    shape_error("concat_tokens", a.shape(), b.shape());
  }
  const std::size_t bs = a.dim(0), n1 = a.dim(1), n2 = b.dim(1), d = a.dim(2), n = n1 + n2;
  Tensor out({bs, n, d});
  for (std::size_t i = 0; i < bs; ++i) {
    std::copy_n(a.value().data().data() + i * n1 * d, n1 * d, out.data().data() + i * n * d);
    std::copy_n(b.value().data().data() + i * n2 * d, n2 * d, out.data().data() + (i * n + n1) * d);
  }
  return make_op(std::move(out), {a, b}, [bs, n1, n2, n, d](const Tensor& g, std::vector<Tensor*>& in) {
    for (std::size_t i = 0; i < bs; ++i) {
      if (in[0]) {
        for (std::size_t j = 0; j < n1 * d; ++j) (*in[0])[i * n1 * d + j] += g[i * n * d + j];
      }
      if (in[1]) {
        for (std::size_t j = 0; j < n2 * d; ++j) (*in[1])[i * n2 * d + j] += g[(i * n + n1) * d + j];
      }
    }
  });
}

Var embedding(const Var& table, const std::vector<std::vector<int>>& ids) {
  if (table.rank() != 2) throw DimensionError("embedding table must be [V x D], got " + shape_to_string(table.shape()));
  const std::size_t vocab = table.dim(0), d = table.dim(1), b = ids.size();
  const std::size_t len = b ? ids[0].size() : 0;
  for (const auto& row : ids) {
    if (row.size() != len) throw DimensionError("embedding: id sequences in a batch must have equal length");
    for (int id : row) {
      if (id < 0 || static_cast<std::size_t>(id) >= vocab) {
        throw DimensionError("embedding: token id " + std::to_string(id) + " outside vocabulary of size " + std::to_string(vocab));
      }
    }
  }
  Tensor out({b, len, d});
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t t = 0; t < len; ++t)
      std::copy_n(table.value().data().data() + static_cast<std::size_t>(ids[i][t]) * d, d,
                  out.data().data() + (i * len + t) * d);
  return make_op(std::move(out), {table}, [ids, d, len](const Tensor& g, std::vector<Tensor*>& in) {
    if (!in[0]) return;
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t t = 0; t < len; ++t)
        for (std::size_t j = 0; j < d; ++j)
          (*in[0])[static_cast<std::size_t>(ids[i][t]) * d + j] += g[(i * len + t) * d + j];
  });
}

Var slice_last(const Var& x, std::size_t start, std::size_t len) {
  if (x.rank() == 0 || start + len > x.shape().back()) {
    throw DimensionError("slice_last: [" + std::to_string(start) + ", " + std::to_string(start + len) +
                         ") out of range for " + shape_to_string(x.shape()));
  }
  const std::size_t f = x.shape().back(), rows = x.value().size() / f;
  Shape os = x.shape();
  os.back() = len;
  Tensor out(os);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < len; ++j) out[r * len + j] = x.value()[r * f + start + j];
  return make_op(std::move(out), {x}, [rows, f, start, len](const Tensor& g, std::vector<Tensor*>& in) {
    if (!in[0]) return;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t j = 0; j < len; ++j) (*in[0])[r * f + start + j] += g[r * len + j];
  });
}

Var reshape(const Var& x, Shape shape) {
  Tensor out = x.value().reshaped(std::move(shape));
  return make_op(std::move(out), {x}, [](const Tensor& g, std::vector<Tensor*>& in) {
    if (in[0]) accumulate(*in[0], g);
  });
}

Var sum(const Var& x) {
  double s = 0.0;
  for (double v : x.value().data()) s += v;
  return make_op(Tensor::scalar(s), {x}, [](const Tensor& g, std::vector<Tensor*>& in) {
    if (!in[0]) return;
    for (auto& v : in[0]->data()) v += g[0];
  });
}

}  // namespace scs::ops
