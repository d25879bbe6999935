// src/autograd.cc

// Copyright 2026  dysaug authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "dysaug/autograd.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace dysaug::autograd {

namespace detail {

struct Node {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;  // empty until first accumulation
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> inputs;
  // Invoked with this node during the reverse pass; adds into inputs' grads.
  std::function<void(Node&)> backprop;
  bool backward_done = false;

  int64_t numel() const {
    int64_t n = 1;
    for (int d : shape) n *= d;
    return n;
  }
  void ensure_grad() {
    if (grad.empty()) grad.assign(data.size(), 0.0);
  }
};

Tensor wrap(std::shared_ptr<Node> n) { return Tensor(std::move(n)); }

}  // namespace detail

using detail::Node;

namespace {

bool g_debug_checks = false;

int64_t numel(const Shape& s) {
  int64_t n = 1;
  for (int d : s) n *= d;
  return n;
}

std::shared_ptr<Node> make_leaf(const Shape& shape, std::vector<double> data,
                                bool requires_grad) {
  if (static_cast<int64_t>(data.size()) != numel(shape))
    throw NumericError("tensor: data length does not match shape");
  auto n = std::make_shared<Node>();
  n->shape = shape;
  n->data = std::move(data);
  n->requires_grad = requires_grad;
  return n;
}

void check_finite(const Node& n) {
  for (double x : n.data)
    if (!std::isfinite(x))
      throw NumericError("op produced a non-finite value (debug check)");
}

// Shared output-node bookkeeping: requires_grad propagation, pruning of the
// recorded graph when nothing upstream needs gradients, debug checks.
Tensor make_node(Shape shape, std::vector<double> data,
                 std::vector<std::shared_ptr<Node>> inputs,
                 std::function<void(Node&)> backprop) {
  auto n = std::make_shared<Node>();
  n->shape = std::move(shape);
  n->data = std::move(data);
  for (const auto& in : inputs)
    if (in->requires_grad) n->requires_grad = true;
  if (n->requires_grad) {
    n->inputs = std::move(inputs);
    n->backprop = std::move(backprop);
  }
  if (g_debug_checks) check_finite(*n);
  return detail::wrap(n);
}

void acc(const std::shared_ptr<Node>& n, size_t i, double g) {
  if (!n->requires_grad) return;
  n->ensure_grad();
  n->grad[i] += g;
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape())
    throw NumericError(std::string(op) + ": shape mismatch");
}

// Elementwise unary op runner: fwd(x) -> y, dfdx(x, y) -> local partial.
template <typename F, typename D>
Tensor unary_op(const Tensor& x, F fwd, D dfdx) {
  auto xn = x.node();
  std::vector<double> out(xn->data.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = fwd(xn->data[i]);
  return make_node(xn->shape, std::move(out), {xn},
                   [xn, dfdx](Node& self) {
                     if (!xn->requires_grad) return;
                     xn->ensure_grad();
                     for (size_t i = 0; i < self.grad.size(); ++i)
                       xn->grad[i] +=
                           self.grad[i] * dfdx(xn->data[i], self.data[i]);
                   });
}

}  // namespace

void set_debug_checks(bool enabled) { g_debug_checks = enabled; }
bool debug_checks_enabled() { return g_debug_checks; }

// ---- Tensor ----

Tensor Tensor::zeros(const Shape& shape, bool requires_grad) {
  return detail::wrap(
      make_leaf(shape, std::vector<double>(numel(shape), 0.0), requires_grad));
}

Tensor Tensor::constant(const Shape& shape, double value, bool requires_grad) {
  return detail::wrap(make_leaf(
      shape, std::vector<double>(numel(shape), value), requires_grad));
}

Tensor Tensor::from_data(const Shape& shape, std::vector<double> data,
                         bool requires_grad) {
  return detail::wrap(make_leaf(shape, std::move(data), requires_grad));
}

Tensor Tensor::scalar(double v, bool requires_grad) {
  return from_data({1}, {v}, requires_grad);
}

Tensor Tensor::randn(const Shape& shape, double stddev, Rng& rng,
                     bool requires_grad) {
  std::vector<double> d(numel(shape));
  for (auto& x : d) x = stddev * rng.gaussian();
  return from_data(shape, std::move(d), requires_grad);
}

const Shape& Tensor::shape() const { return node_->shape; }
int64_t Tensor::size() const { return node_->numel(); }
bool Tensor::requires_grad() const { return node_->requires_grad; }

double Tensor::item() const {
  if (node_->numel() != 1) throw NumericError("item(): tensor is not scalar");
  return node_->data[0];
}

const std::vector<double>& Tensor::data() const { return node_->data; }
std::vector<double>& Tensor::raw_data() { return node_->data; }

bool Tensor::has_grad() const { return node_ && !node_->grad.empty(); }

const std::vector<double>& Tensor::grad() const {
  if (node_->grad.empty())
    throw NumericError("grad(): no gradient has been accumulated");
  return node_->grad;
}

void Tensor::zero_grad() {
  if (node_) node_->grad.assign(node_->data.size(), 0.0);
}

void Tensor::add_grad(std::span<const double> g) {
  if (g.size() != node_->data.size())
    throw NumericError("add_grad: shape mismatch");
  node_->ensure_grad();
  for (size_t i = 0; i < g.size(); ++i) node_->grad[i] += g[i];
}

// ---- elementwise ----

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  auto an = a.node(), bn = b.node();
  std::vector<double> out(an->data.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = an->data[i] + bn->data[i];
  return make_node(an->shape, std::move(out), {an, bn}, [an, bn](Node& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) {
      acc(an, i, self.grad[i]);
      acc(bn, i, self.grad[i]);
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  auto an = a.node(), bn = b.node();
  std::vector<double> out(an->data.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = an->data[i] - bn->data[i];
  return make_node(an->shape, std::move(out), {an, bn}, [an, bn](Node& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) {
      acc(an, i, self.grad[i]);
      acc(bn, i, -self.grad[i]);
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  auto an = a.node(), bn = b.node();
  std::vector<double> out(an->data.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = an->data[i] * bn->data[i];
  return make_node(an->shape, std::move(out), {an, bn}, [an, bn](Node& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) {
      acc(an, i, self.grad[i] * bn->data[i]);
      acc(bn, i, self.grad[i] * an->data[i]);
    }
  });
}

Tensor scale(const Tensor& a, double c) {
  return unary_op(
      a, [c](double x) { return c * x; },
      [c](double, double) { return c; });
}

Tensor add_scalar(const Tensor& a, double c) {
  return unary_op(
      a, [c](double x) { return x + c; },
      [](double, double) { return 1.0; });
}

Tensor relu(const Tensor& x) {
  return unary_op(
      x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Tensor leaky_relu(const Tensor& x, double slope) {
  return unary_op(
      x, [slope](double v) { return v > 0.0 ? v : slope * v; },
      [slope](double v, double) { return v > 0.0 ? 1.0 : slope; });
}

Tensor tanh_t(const Tensor& x) {
  return unary_op(
      x, [](double v) { return std::tanh(v); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor sigmoid(const Tensor& x) {
  return unary_op(
      x, [](double v) { return 1.0 / (1.0 + std::exp(-v)); },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor abs_t(const Tensor& x) {
  return unary_op(
      x, [](double v) { return std::abs(v); },
      [](double v, double) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
}

// ---- linear algebra ----

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.shape().size() != 2 || b.shape().size() != 2 ||
      a.shape()[1] != b.shape()[0])
    throw NumericError("matmul: expects [m,k] x [k,n]");
  auto an = a.node(), bn = b.node();
  int m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  std::vector<double> out(static_cast<size_t>(m) * n, 0.0);
  for (int i = 0; i < m; ++i)
    for (int p = 0; p < k; ++p) {
      double aip = an->data[static_cast<size_t>(i) * k + p];
      if (aip == 0.0) continue;
      for (int j = 0; j < n; ++j)
        out[static_cast<size_t>(i) * n + j] +=
            aip * bn->data[static_cast<size_t>(p) * n + j];
    }
  return make_node({m, n}, std::move(out), {an, bn},
                   [an, bn, m, k, n](Node& self) {
    if (an->requires_grad) {
      an->ensure_grad();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
          double g = self.grad[static_cast<size_t>(i) * n + j];
          if (g == 0.0) continue;
          for (int p = 0; p < k; ++p)
            an->grad[static_cast<size_t>(i) * k + p] +=
                g * bn->data[static_cast<size_t>(p) * n + j];
        }
    }
    if (bn->requires_grad) {
      bn->ensure_grad();
      for (int i = 0; i < m; ++i)
        for (int p = 0; p < k; ++p) {
          double av = an->data[static_cast<size_t>(i) * k + p];
          if (av == 0.0) continue;
          for (int j = 0; j < n; ++j)
            bn->grad[static_cast<size_t>(p) * n + j] +=
                av * self.grad[static_cast<size_t>(i) * n + j];
        }
    }
  });
}

Tensor transpose2d(const Tensor& a) {
  if (a.shape().size() != 2) throw NumericError("transpose2d: expects rank 2");
  auto an = a.node();
  int r = a.shape()[0], c = a.shape()[1];
  std::vector<double> out(an->data.size());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      out[static_cast<size_t>(j) * r + i] = an->data[static_cast<size_t>(i) * c + j];
  return make_node({c, r}, std::move(out), {an}, [an, r, c](Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        an->grad[static_cast<size_t>(i) * c + j] +=
            self.grad[static_cast<size_t>(j) * r + i];
  });
}

Tensor reshape(const Tensor& a, const Shape& shape) {
  if (numel(shape) != a.size())
    throw NumericError("reshape: element count mismatch");
  auto an = a.node();
  std::vector<double> out = an->data;
  return make_node(shape, std::move(out), {an}, [an](Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    for (size_t i = 0; i < self.grad.size(); ++i) an->grad[i] += self.grad[i];
  });
}

Tensor flatten(const Tensor& a) {
  return reshape(a, {static_cast<int>(a.size())});
}

Tensor mean(const Tensor& a) {
  auto an = a.node();
  double s = 0.0;
  for (double x : an->data) s += x;
  double n = static_cast<double>(an->data.size());
  return make_node({1}, {s / n}, {an}, [an, n](Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    double g = self.grad[0] / n;
    for (auto& gx : an->grad) gx += g;
  });
}

Tensor sum(const Tensor& a) {
  auto an = a.node();
  double s = 0.0;
  for (double x : an->data) s += x;
  return make_node({1}, {s}, {an}, [an](Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    for (auto& gx : an->grad) gx += self.grad[0];
  });
}

Tensor mean_axis(const Tensor& a, int axis) {
  const Shape& s = a.shape();
  int rank = static_cast<int>(s.size());
  if (rank < 1 || rank > 3 || axis < 0 || axis >= rank)
    throw NumericError("mean_axis: rank must be 1..3 with a valid axis");
  // Collapse the shape into [outer, axis_len, inner].
  int64_t outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= s[i];
  for (int i = axis + 1; i < rank; ++i) inner *= s[i];
  int64_t alen = s[axis];

  Shape out_shape;
  for (int i = 0; i < rank; ++i)
    if (i != axis) out_shape.push_back(s[i]);
  if (out_shape.empty()) out_shape.push_back(1);

  auto an = a.node();
  std::vector<double> out(static_cast<size_t>(outer * inner), 0.0);
  for (int64_t o = 0; o < outer; ++o)
    for (int64_t k = 0; k < alen; ++k)
      for (int64_t i = 0; i < inner; ++i)
        out[o * inner + i] += an->data[(o * alen + k) * inner + i];
  double norm = 1.0 / static_cast<double>(alen);
  for (auto& x : out) x *= norm;

  return make_node(out_shape, std::move(out), {an},
                   [an, outer, inner, alen, norm](Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    for (int64_t o = 0; o < outer; ++o)
      for (int64_t k = 0; k < alen; ++k)
        for (int64_t i = 0; i < inner; ++i)
          an->grad[(o * alen + k) * inner + i] +=
              self.grad[o * inner + i] * norm;
  });
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  if (w.shape().size() != 2) throw NumericError("linear: W must be [m,k]");
  int m = w.shape()[0], k = w.shape()[1];
  bool batched = x.shape().size() == 2;
  int rows = batched ? x.shape()[0] : 1;
  int xk = batched ? x.shape()[1] : x.shape()[0];
  if (x.shape().size() > 2 || xk != k)
    throw NumericError("linear: input width does not match W");
  if (b.defined() && (b.shape().size() != 1 || b.shape()[0] != m))
    throw NumericError("linear: bias must be [m]");

  auto xn = x.node(), wn = w.node();
  auto bn = b.defined() ? b.node() : nullptr;
  std::vector<double> out(static_cast<size_t>(rows) * m);
  for (int r = 0; r < rows; ++r)
    for (int o = 0; o < m; ++o) {
      double acc_v = bn ? bn->data[o] : 0.0;
      const double* xrow = &xn->data[static_cast<size_t>(r) * k];
      const double* wrow = &wn->data[static_cast<size_t>(o) * k];
      for (int i = 0; i < k; ++i) acc_v += wrow[i] * xrow[i];
      out[static_cast<size_t>(r) * m + o] = acc_v;
    }

  Shape out_shape = batched ? Shape{rows, m} : Shape{m};
  std::vector<std::shared_ptr<Node>> ins{xn, wn};
  if (bn) ins.push_back(bn);
  return make_node(out_shape, std::move(out), std::move(ins),
                   [xn, wn, bn, rows, m, k](Node& self) {
    for (int r = 0; r < rows; ++r) {
      const double* g = &self.grad[static_cast<size_t>(r) * m];
      const double* xrow = &xn->data[static_cast<size_t>(r) * k];
      if (xn->requires_grad) {
        xn->ensure_grad();
        double* gx = &xn->grad[static_cast<size_t>(r) * k];
        for (int o = 0; o < m; ++o) {
          if (g[o] == 0.0) continue;
          const double* wrow = &wn->data[static_cast<size_t>(o) * k];
          for (int i = 0; i < k; ++i) gx[i] += g[o] * wrow[i];
        }
      }
      if (wn->requires_grad) {
        wn->ensure_grad();
        for (int o = 0; o < m; ++o) {
          if (g[o] == 0.0) continue;
          double* gw = &wn->grad[static_cast<size_t>(o) * k];
          for (int i = 0; i < k; ++i) gw[i] += g[o] * xrow[i];
        }
      }
      if (bn && bn->requires_grad) {
        bn->ensure_grad();
        for (int o = 0; o < m; ++o) bn->grad[o] += g[o];
      }
    }
  });
}

// ---- convolution ----

namespace {

struct PadPlan {
  int ph = 0, pw = 0;      // padded dims
  int top = 0, left = 0;   // pad amounts
  // source index per padded cell, -1 for zero padding
  std::vector<int> src;
};

PadPlan plan_padding(int h, int w, int kh, int kw, Padding mode) {
  PadPlan p;
  if (mode == Padding::kReplicate) {
    p.top = (kh - 1) / 2;
    p.left = (kw - 1) / 2;
    p.ph = h + (kh - 1);
    p.pw = w + (kw - 1);
  } else {
    p.ph = h;
    p.pw = w;
  }
  p.src.resize(static_cast<size_t>(p.ph) * p.pw);
  for (int i = 0; i < p.ph; ++i) {
    for (int j = 0; j < p.pw; ++j) {
      int si = i - p.top, sj = j - p.left;
      if (mode == Padding::kReplicate) {
        si = std::clamp(si, 0, h - 1);
        sj = std::clamp(sj, 0, w - 1);
        p.src[static_cast<size_t>(i) * p.pw + j] = si * w + sj;
      } else {
        p.src[static_cast<size_t>(i) * p.pw + j] =
            (si >= 0 && si < h && sj >= 0 && sj < w) ? si * w + sj : -1;
      }
    }
  }
  return p;
}

}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& k, const Tensor& b, int stride_h,
              int stride_w, Padding padding) {
  if (x.shape().size() != 3) throw NumericError("conv2d: x must be [C,H,W]");
  if (k.shape().size() != 4)
    throw NumericError("conv2d: kernel must be [Cout,Cin,kh,kw]");
  if (stride_h < 1 || stride_w < 1)
    throw NumericError("conv2d: strides must be >= 1");
  int cin = x.shape()[0], h = x.shape()[1], w = x.shape()[2];
  int cout = k.shape()[0], kcin = k.shape()[1], kh = k.shape()[2],
      kw = k.shape()[3];
  if (kcin != cin) throw NumericError("conv2d: channel mismatch");
  if (b.defined() && (b.shape().size() != 1 || b.shape()[0] != cout))
    throw NumericError("conv2d: bias must be [Cout]");

  PadPlan pad = plan_padding(h, w, kh, kw, padding);
  int oh = (pad.ph - kh) / stride_h + 1;
  int ow = (pad.pw - kw) / stride_w + 1;
  if (oh <= 0 || ow <= 0)
    throw NumericError("conv2d: kernel larger than padded input");

  auto xn = x.node(), kn = k.node();
  auto bn = b.defined() ? b.node() : nullptr;

  // Materialized padded input, shared with the backward closure.
  auto xp = std::make_shared<std::vector<double>>(
      static_cast<size_t>(cin) * pad.ph * pad.pw);
  for (int c = 0; c < cin; ++c) {
    const double* xc = &xn->data[static_cast<size_t>(c) * h * w];
    double* pc = &(*xp)[static_cast<size_t>(c) * pad.ph * pad.pw];
    for (size_t i = 0; i < pad.src.size(); ++i)
      pc[i] = pad.src[i] >= 0 ? xc[pad.src[i]] : 0.0;
  }

  std::vector<double> out(static_cast<size_t>(cout) * oh * ow, 0.0);
  for (int oc = 0; oc < cout; ++oc) {
    double bias = bn ? bn->data[oc] : 0.0;
    double* oplane = &out[static_cast<size_t>(oc) * oh * ow];
    for (int i = 0; i < oh * ow; ++i) oplane[i] = bias;
    for (int ic = 0; ic < cin; ++ic) {
      const double* pc = &(*xp)[static_cast<size_t>(ic) * pad.ph * pad.pw];
      const double* kk =
          &kn->data[(static_cast<size_t>(oc) * cin + ic) * kh * kw];
      for (int i = 0; i < kh; ++i)
        for (int j = 0; j < kw; ++j) {
          double kv = kk[i * kw + j];
          if (kv == 0.0) continue;
          for (int y = 0; y < oh; ++y) {
            const double* prow = &pc[static_cast<size_t>(y * stride_h + i) * pad.pw + j];
            double* orow = &oplane[static_cast<size_t>(y) * ow];
            for (int z = 0; z < ow; ++z) orow[z] += kv * prow[z * stride_w];
          }
        }
    }
  }

  std::vector<std::shared_ptr<Node>> ins{xn, kn};
  if (bn) ins.push_back(bn);
  auto pad_shared = std::make_shared<PadPlan>(std::move(pad));
  return make_node(
      {cout, oh, ow}, std::move(out), std::move(ins),
      [xn, kn, bn, xp, pad_shared, cin, cout, h, w, kh, kw, oh, ow, stride_h,
       stride_w](Node& self) {
        const PadPlan& pp = *pad_shared;
        if (bn && bn->requires_grad) {
          bn->ensure_grad();
          for (int oc = 0; oc < cout; ++oc) {
            double s = 0.0;
            const double* g = &self.grad[static_cast<size_t>(oc) * oh * ow];
            for (int i = 0; i < oh * ow; ++i) s += g[i];
            bn->grad[oc] += s;
          }
        }
        if (kn->requires_grad) {
          kn->ensure_grad();
          for (int oc = 0; oc < cout; ++oc) {
            const double* g = &self.grad[static_cast<size_t>(oc) * oh * ow];
            for (int ic = 0; ic < cin; ++ic) {
              const double* pc =
                  &(*xp)[static_cast<size_t>(ic) * pp.ph * pp.pw];
              double* gk =
                  &kn->grad[(static_cast<size_t>(oc) * cin + ic) * kh * kw];
              for (int i = 0; i < kh; ++i)
                for (int j = 0; j < kw; ++j) {
                  double s = 0.0;
                  for (int y = 0; y < oh; ++y) {
                    const double* prow =
                        &pc[static_cast<size_t>(y * stride_h + i) * pp.pw + j];
                    const double* grow = &g[static_cast<size_t>(y) * ow];
                    for (int z = 0; z < ow; ++z)
                      s += grow[z] * prow[z * stride_w];
                  }
                  gk[i * kw + j] += s;
                }
            }
          }
        }
        if (xn->requires_grad) {
          xn->ensure_grad();
          // Accumulate into the padded layout, then scatter through the pad map
          // (replicate padding folds edge gradients back onto border samples).
          std::vector<double> gpad(static_cast<size_t>(cin) * pp.ph * pp.pw,
                                   0.0);
          for (int oc = 0; oc < cout; ++oc) {
            const double* g = &self.grad[static_cast<size_t>(oc) * oh * ow];
            for (int ic = 0; ic < cin; ++ic) {
              double* gp = &gpad[static_cast<size_t>(ic) * pp.ph * pp.pw];
              const double* kk =
                  &kn->data[(static_cast<size_t>(oc) * cin + ic) * kh * kw];
              for (int i = 0; i < kh; ++i)
                for (int j = 0; j < kw; ++j) {
                  double kv = kk[i * kw + j];
                  if (kv == 0.0) continue;
                  for (int y = 0; y < oh; ++y) {
                    double* prow =
                        &gp[static_cast<size_t>(y * stride_h + i) * pp.pw + j];
                    const double* grow = &g[static_cast<size_t>(y) * ow];
                    for (int z = 0; z < ow; ++z)
                      prow[z * stride_w] += kv * grow[z];
                  }
                }
            }
          }
          for (int ic = 0; ic < cin; ++ic) {
            double* gx = &xn->grad[static_cast<size_t>(ic) * h * w];
            const double* gp = &gpad[static_cast<size_t>(ic) * pp.ph * pp.pw];
            for (size_t i = 0; i < pp.src.size(); ++i)
              if (pp.src[i] >= 0) gx[pp.src[i]] += gp[i];
          }
        }
      });
}

Tensor zero_pad_flatten(const Tensor& x, int64_t target_len) {
  int64_t n = x.size();
  if (target_len < n)
    throw NumericError("zero_pad_flatten: target shorter than input");
  auto xn = x.node();
  std::vector<double> out(static_cast<size_t>(target_len), 0.0);
  std::copy(xn->data.begin(), xn->data.end(), out.begin());
  return make_node({static_cast<int>(target_len)}, std::move(out), {xn},
                   [xn, n](Node& self) {
                     if (!xn->requires_grad) return;
                     xn->ensure_grad();
                     for (int64_t i = 0; i < n; ++i)
                       xn->grad[i] += self.grad[i];
                   });
}

// ---- softmax family ----

Tensor log_softmax(const Tensor& x) {
  int rank = static_cast<int>(x.shape().size());
  if (rank != 1 && rank != 2) throw NumericError("log_softmax: rank 1 or 2");
  int rows = rank == 2 ? x.shape()[0] : 1;
  int cols = rank == 2 ? x.shape()[1] : x.shape()[0];
  auto xn = x.node();
  std::vector<double> out(xn->data.size());
  for (int r = 0; r < rows; ++r) {
    const double* xi = &xn->data[static_cast<size_t>(r) * cols];
    double* yo = &out[static_cast<size_t>(r) * cols];
    double mx = xi[0];
    for (int j = 1; j < cols; ++j) mx = std::max(mx, xi[j]);
    double lse = 0.0;
    for (int j = 0; j < cols; ++j) lse += std::exp(xi[j] - mx);
    lse = mx + std::log(lse);
    for (int j = 0; j < cols; ++j) yo[j] = xi[j] - lse;
  }
  return make_node(xn->shape, std::move(out), {xn},
                   [xn, rows, cols](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    for (int r = 0; r < rows; ++r) {
      const double* g = &self.grad[static_cast<size_t>(r) * cols];
      const double* y = &self.data[static_cast<size_t>(r) * cols];
      double gsum = 0.0;
      for (int j = 0; j < cols; ++j) gsum += g[j];
      double* gx = &xn->grad[static_cast<size_t>(r) * cols];
      for (int j = 0; j < cols; ++j) gx[j] += g[j] - std::exp(y[j]) * gsum;
    }
  });
}

Tensor cross_entropy(const Tensor& logits, int target_class) {
  if (logits.shape().size() != 1)
    throw NumericError("cross_entropy: logits must be rank 1");
  int n = logits.shape()[0];
  if (target_class < 0 || target_class >= n)
    throw NumericError("cross_entropy: target class out of range");
  auto xn = logits.node();
  double mx = xn->data[0];
  for (int j = 1; j < n; ++j) mx = std::max(mx, xn->data[j]);
  double lse = 0.0;
  for (int j = 0; j < n; ++j) lse += std::exp(xn->data[j] - mx);
  lse = mx + std::log(lse);
  double loss = lse - xn->data[target_class];
  return make_node({1}, {loss}, {xn}, [xn, n, target_class, lse](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    double g = self.grad[0];
    for (int j = 0; j < n; ++j) {
      double p = std::exp(xn->data[j] - lse);
      xn->grad[j] += g * (p - (j == target_class ? 1.0 : 0.0));
    }
  });
}

Tensor bce_loss(const Tensor& pred, const Tensor& target) {
  require_same_shape(pred, target, "bce_loss");
  auto pn = pred.node(), tn = target.node();
  constexpr double kEps = 1e-12;
  size_t n = pn->data.size();
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double p = std::clamp(pn->data[i], kEps, 1.0 - kEps);
    double t = tn->data[i];
    s += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
  }
  double inv_n = 1.0 / static_cast<double>(n);
  return make_node({1}, {s * inv_n}, {pn, tn}, [pn, tn, inv_n](Node& self) {
    double g = self.grad[0] * inv_n;
    constexpr double kE = 1e-12;
    for (size_t i = 0; i < pn->data.size(); ++i) {
      double p = std::clamp(pn->data[i], kE, 1.0 - kE);
      double t = tn->data[i];
      if (pn->requires_grad) {
        pn->ensure_grad();
        pn->grad[i] += g * (p - t) / (p * (1.0 - p));
      }
      if (tn->requires_grad) {
        tn->ensure_grad();
        tn->grad[i] += g * (std::log(1.0 - p) - std::log(p));
      }
    }
  });
}

Tensor bce_with_logits(const Tensor& logits, double target) {
  auto zn = logits.node();
  size_t n = zn->data.size();
  double s = 0.0;
  for (double z : zn->data)
    s += std::max(z, 0.0) - z * target + std::log1p(std::exp(-std::abs(z)));
  double inv_n = 1.0 / static_cast<double>(n);
  return make_node({1}, {s * inv_n}, {zn}, [zn, target, inv_n](Node& self) {
    if (!zn->requires_grad) return;
    zn->ensure_grad();
    double g = self.grad[0] * inv_n;
    for (size_t i = 0; i < zn->data.size(); ++i) {
      double sig = 1.0 / (1.0 + std::exp(-zn->data[i]));
      zn->grad[i] += g * (sig - target);
    }
  });
}

Tensor l1_loss(const Tensor& a, const Tensor& b) {
  return mean(abs_t(sub(a, b)));
}

Tensor make_op_node(
    Shape shape, std::vector<double> data, std::vector<Tensor> inputs,
    std::function<void(std::span<const double>, std::vector<Tensor>&)>
        backward_fn) {
  std::vector<std::shared_ptr<Node>> ins;
  ins.reserve(inputs.size());
  for (const auto& t : inputs) ins.push_back(t.node());
  auto captured = std::make_shared<std::vector<Tensor>>(std::move(inputs));
  return make_node(std::move(shape), std::move(data), std::move(ins),
                   [captured, backward_fn](Node& self) {
                     backward_fn(std::span<const double>(self.grad), *captured);
                   });
}

// ---- backward ----

void backward(const Tensor& loss) {
  auto root = loss.node();
  if (!root) throw NumericError("backward: undefined tensor");
  if (root->numel() != 1) throw NumericError("backward: loss must be scalar");
  if (root->backward_done)
    throw NumericError("backward: called twice without re-running forward");
  root->backward_done = true;
  if (!root->requires_grad) return;  // nothing trainable upstream

  // Iterative DFS post-order gives the topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, size_t>> stack{{root.get(), 0}};
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      Node* child = node->inputs[next++].get();
      if (child->requires_grad && !visited.count(child)) {
        visited.insert(child);
        stack.push_back({child, 0});
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root->ensure_grad();
  root->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backprop && !n->grad.empty()) n->backprop(*n);
  }
}

// ---- optimizers ----

void sgd_step(const std::vector<Tensor>& params, double lr) {
  if (lr <= 0.0) throw ConfigError("sgd_step: lr must be positive");
  for (const Tensor& p : params) {
    Tensor t = p;
    if (!t.has_grad()) continue;
    auto& d = t.raw_data();
    const auto& g = t.grad();
    for (size_t i = 0; i < d.size(); ++i) d[i] -= lr * g[i];
  }
}

Adam::Adam(std::vector<Tensor> params, const AdamConfig& cfg)
    : params_(std::move(params)), cfg_(cfg) {
  if (cfg_.lr <= 0.0) throw ConfigError("adam: lr must be positive");
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    m_.emplace_back(p.size(), 0.0);
    v_.emplace_back(p.size(), 0.0);
  }
}

void Adam::step() {
  ++t_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (size_t pi = 0; pi < params_.size(); ++pi) {
    Tensor p = params_[pi];
    if (!p.has_grad()) continue;
    const auto& g = p.grad();
    auto& d = p.raw_data();
    auto& m = m_[pi];
    auto& v = v_[pi];
    for (size_t i = 0; i < d.size(); ++i) {
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      d[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

// ---- finite differences ----

double finite_diff_check(const std::function<Tensor()>& f,
                         const std::vector<Tensor>& params, double eps,
                         int probes_per_param, Rng& rng) {
  if (eps <= 0.0) throw ConfigError("finite_diff_check: eps must be positive");
  std::vector<Tensor> ps = params;
  for (auto& p : ps) p.zero_grad();
  Tensor loss = f();
  if (loss.size() != 1)
    throw NumericError("finite_diff_check: f must return a scalar");
  backward(loss);

  std::vector<std::vector<double>> analytic;
  analytic.reserve(ps.size());
  for (auto& p : ps)
    analytic.push_back(p.has_grad() ? p.grad()
                                    : std::vector<double>(p.size(), 0.0));

  double max_rel = 0.0;
  for (size_t pi = 0; pi < ps.size(); ++pi) {
    Tensor p = ps[pi];
    int64_t n = p.size();
    std::vector<int64_t> coords;
    if (probes_per_param <= 0 || probes_per_param >= n) {
      coords.resize(static_cast<size_t>(n));
      for (int64_t i = 0; i < n; ++i) coords[static_cast<size_t>(i)] = i;
    } else {
      for (int i = 0; i < probes_per_param; ++i)
        coords.push_back(rng.uniform_int(static_cast<int>(n)));
    }
    for (int64_t c : coords) {
      auto& d = p.raw_data();
      double saved = d[static_cast<size_t>(c)];
      d[static_cast<size_t>(c)] = saved + eps;
      double fp = f().item();
      d[static_cast<size_t>(c)] = saved - eps;
      double fm = f().item();
      d[static_cast<size_t>(c)] = saved;
      double fd = (fp - fm) / (2.0 * eps);
      double a = analytic[pi][static_cast<size_t>(c)];
      double rel =
          std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-12});
      max_rel = std::max(max_rel, rel);
    }
  }
  return max_rel;
}

}  // namespace dysaug::autograd
