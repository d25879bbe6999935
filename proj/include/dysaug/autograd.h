// include/dysaug/autograd.h

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

// Minimal reverse-mode differentiation engine, 64-bit throughout. The operator
// set is exactly what the GAN augmenters and the CTC evaluator need; there is
// no broadcasting beyond that, no views, no parallelism. Each forward call
// records a fresh DAG; backward() walks it once in reverse topological order.

#ifndef DYSAUG_AUTOGRAD_H_
#define DYSAUG_AUTOGRAD_H_

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "dysaug/common.h"

namespace dysaug::autograd {

using Shape = std::vector<int>;

class Tensor;

namespace detail {
struct Node;
Tensor wrap(std::shared_ptr<Node> n);
}  // namespace detail

enum class Padding { kZero, kReplicate };

// Value-semantic handle to a tape node. Leaves created through the factories
// are the trainable parameters; op results reference their inputs, forming the
// tape. A tensor's grad is populated by backward() and accumulates until
// zero_grad().
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(const Shape& shape, bool requires_grad = false);
  static Tensor constant(const Shape& shape, double value,
                         bool requires_grad = false);
  static Tensor from_data(const Shape& shape, std::vector<double> data,
                          bool requires_grad = false);
  static Tensor scalar(double v, bool requires_grad = false);
  static Tensor randn(const Shape& shape, double stddev, Rng& rng,
                      bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const;
  int64_t size() const;
  bool requires_grad() const;
  double item() const;  // scalar tensors only
  const std::vector<double>& data() const;
  // Direct value access outside the tape (initialization, optimizer updates,
  // finite-difference probing). Never records anything.
  std::vector<double>& raw_data();

  bool has_grad() const;
  const std::vector<double>& grad() const;  // throws if absent
  void zero_grad();
  void add_grad(std::span<const double> g);

  std::shared_ptr<detail::Node> node() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<detail::Node> node_;

  friend Tensor detail::wrap(std::shared_ptr<detail::Node> n);
};

// When enabled, every op output is scanned for NaN/Inf and NumericError is
// raised at the op that produced it.
void set_debug_checks(bool enabled);
bool debug_checks_enabled();

// ---- forward ops ----

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double c);
Tensor add_scalar(const Tensor& a, double c);
Tensor relu(const Tensor& x);
Tensor leaky_relu(const Tensor& x, double slope);
Tensor tanh_t(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor abs_t(const Tensor& x);
Tensor matmul(const Tensor& a, const Tensor& b);     // [m,k] x [k,n]
Tensor transpose2d(const Tensor& a);                 // [r,c] -> [c,r]
Tensor reshape(const Tensor& a, const Shape& shape); // same element count
Tensor flatten(const Tensor& a);
Tensor mean(const Tensor& a);    // -> scalar
Tensor sum(const Tensor& a);     // -> scalar
Tensor mean_axis(const Tensor& a, int axis);  // rank <= 3

// x [k] -> [m], or x [r,k] -> [r,m] with the bias broadcast per row.
// W is [m,k]; pass an undefined Tensor as b for no bias.
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);

// x [C_in,H,W], k [C_out,C_in,kh,kw], optional bias [C_out].
// kZero pads nothing (valid convolution); kReplicate edge-pads so stride-1
// output dims equal input dims.
Tensor conv2d(const Tensor& x, const Tensor& k, const Tensor& b, int stride_h,
              int stride_w, Padding padding);

// Flatten then zero-pad up to target_len (target_len >= element count).
Tensor zero_pad_flatten(const Tensor& x, int64_t target_len);

Tensor log_softmax(const Tensor& x);  // 1-D, or row-wise on 2-D
Tensor cross_entropy(const Tensor& logits, int target_class);  // 1-D logits

// Mean binary cross-entropy on probabilities in (0,1); probabilities are
// clamped to [1e-12, 1-1e-12] before the logs.
Tensor bce_loss(const Tensor& pred, const Tensor& target);
// Numerically stable mean BCE on raw logits against a constant target.
Tensor bce_with_logits(const Tensor& logits, double target);

Tensor l1_loss(const Tensor& a, const Tensor& b);  // mean |a - b|

// Extension point for custom ops (CTC) defined outside this translation unit:
// backward_fn receives the output grad and must add into the inputs' grads.
Tensor make_op_node(
    Shape shape, std::vector<double> data, std::vector<Tensor> inputs,
    std::function<void(std::span<const double>, std::vector<Tensor>&)>
        backward_fn);

// Reverse pass from a scalar loss. Visits each reachable node exactly once;
// calling it twice on the same root without re-running the forward raises.
void backward(const Tensor& loss);

// ---- optimizers ----

void sgd_step(const std::vector<Tensor>& params, double lr);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adaptive-moment optimizer with bias-corrected moments.
class Adam {
 public:
  Adam(std::vector<Tensor> params, const AdamConfig& cfg);
  void step();
  void zero_grad();
  int64_t step_count() const { return t_; }

 private:
  std::vector<Tensor> params_;
  AdamConfig cfg_;
  std::vector<std::vector<double>> m_, v_;
  int64_t t_ = 0;
};

// ---- gradient checking ----

// Max over probed coordinates of |analytic - central difference| over
// max(|analytic|, |fd|, 1e-12). f must rebuild its forward graph from the
// params' current values on every call. probes_per_param <= 0 checks every
// coordinate.
double finite_diff_check(const std::function<Tensor()>& f,
                         const std::vector<Tensor>& params, double eps,
                         int probes_per_param, Rng& rng);

}  // namespace dysaug::autograd

#endif  // DYSAUG_AUTOGRAD_H_
