// src/gradcheck.cc

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

#include "dysaug/gradcheck.h"

#include <cmath>
#include <functional>

#include "dysaug/autograd.h"
#include "dysaug/eval.h"

namespace dysaug::autograd {

namespace {

constexpr double kEps = 1e-5;

Tensor away_from_zero(Tensor t, double margin) {
  for (auto& x : t.raw_data())
    x += (x >= 0.0 ? margin : -margin);
  return t;
}

// Scalarizes an op output against fixed weights so every element contributes
// a distinct gradient.
Tensor pin(const Tensor& y, uint64_t salt) {
  Rng wr(salt);
  Tensor w = Tensor::randn(y.shape(), 1.0, wr, false);
  return sum(mul(y, w));
}

}  // namespace

std::vector<GradCheckResult> run_gradient_checks(double tol, int probes,
                                                 uint64_t seed) {
  std::vector<GradCheckResult> results;
  Rng rng(splitmix64(seed) | 1);

  auto check = [&](const std::string& name, const std::function<Tensor()>& f,
                   std::vector<Tensor> params) {
    Rng probe_rng(derive_seed(seed, name));
    GradCheckResult r;
    r.op = name;
    r.max_rel_err = finite_diff_check(f, params, kEps, probes, probe_rng);
    r.pass = r.max_rel_err <= tol;
    results.push_back(r);
  };

  {
    Tensor a = Tensor::randn({4, 3}, 1.0, rng, true);
    Tensor b = Tensor::randn({4, 3}, 1.0, rng, true);
    check("add", [&] { return pin(add(a, b), 1); }, {a, b});
    check("sub", [&] { return pin(sub(a, b), 2); }, {a, b});
    check("mul", [&] { return pin(mul(a, b), 3); }, {a, b});
  }
  {
    Tensor a = Tensor::randn({12}, 1.0, rng, true);
    check("scale", [&] { return pin(scale(a, -1.7), 4); }, {a});
    check("add_scalar", [&] { return pin(add_scalar(a, 0.3), 5); }, {a});
    check("tanh", [&] { return pin(tanh_t(a), 6); }, {a});
    check("sigmoid", [&] { return pin(sigmoid(a), 7); }, {a});
  }
  {
    Tensor a = away_from_zero(Tensor::randn({24}, 1.0, rng, true), 0.05);
    check("relu", [&] { return pin(relu(a), 8); }, {a});
    check("leaky_relu", [&] { return pin(leaky_relu(a, 0.2), 9); }, {a});
    check("abs", [&] { return pin(abs_t(a), 10); }, {a});
  }
  {
    Tensor a = Tensor::randn({4, 5}, 1.0, rng, true);
    Tensor b = Tensor::randn({5, 3}, 1.0, rng, true);
    check("matmul", [&] { return pin(matmul(a, b), 11); }, {a, b});
    check("transpose2d", [&] { return pin(transpose2d(a), 12); }, {a});
    check("reshape", [&] { return pin(reshape(a, {5, 4}), 13); }, {a});
    check("flatten", [&] { return pin(flatten(a), 14); }, {a});
    check("mean", [&] { return mean(a); }, {a});
    check("sum", [&] { return sum(a); }, {a});
  }
  {
    Tensor a = Tensor::randn({2, 3, 4}, 1.0, rng, true);
    check("mean_axis0", [&] { return pin(mean_axis(a, 0), 15); }, {a});
    check("mean_axis1", [&] { return pin(mean_axis(a, 1), 16); }, {a});
    check("mean_axis2", [&] { return pin(mean_axis(a, 2), 17); }, {a});
  }
  {
    Tensor x = Tensor::randn({6}, 1.0, rng, true);
    Tensor w = Tensor::randn({4, 6}, 1.0, rng, true);
    Tensor b = Tensor::randn({4}, 1.0, rng, true);
    check("linear", [&] { return pin(linear(x, w, b), 18); }, {x, w, b});
  }
  {
    Tensor x = Tensor::randn({5, 6}, 1.0, rng, true);
    Tensor w = Tensor::randn({4, 6}, 1.0, rng, true);
    Tensor b = Tensor::randn({4}, 1.0, rng, true);
    check("linear_batched", [&] { return pin(linear(x, w, b), 19); },
          {x, w, b});
  }
  {
    Tensor x = Tensor::randn({2, 6, 7}, 1.0, rng, true);
    Tensor k = Tensor::randn({3, 2, 3, 3}, 0.5, rng, true);
    Tensor b = Tensor::randn({3}, 0.2, rng, true);
    check("conv2d_replicate",
          [&] { return pin(conv2d(x, k, b, 1, 1, Padding::kReplicate), 20); },
          {x, k, b});
    check("conv2d_strided_freq",
          [&] { return pin(conv2d(x, k, b, 2, 1, Padding::kReplicate), 21); },
          {x, k, b});
  }
  {
    Tensor x = Tensor::randn({1, 8, 8}, 1.0, rng, true);
    Tensor k = Tensor::randn({2, 1, 2, 2}, 0.5, rng, true);
    Tensor b = Tensor::randn({2}, 0.2, rng, true);
    check("conv2d_zero_strided",
          [&] { return pin(conv2d(x, k, b, 2, 2, Padding::kZero), 22); },
          {x, k, b});
  }
  {
    Tensor x = Tensor::randn({3, 4}, 1.0, rng, true);
    check("zero_pad_flatten",
          [&] { return pin(zero_pad_flatten(x, 20), 23); }, {x});
    check("log_softmax", [&] { return pin(log_softmax(x), 24); }, {x});
  }
  {
    Tensor x = Tensor::randn({6}, 1.0, rng, true);
    check("cross_entropy", [&] { return cross_entropy(x, 2); }, {x});
    check("bce_with_logits_1", [&] { return bce_with_logits(x, 1.0); }, {x});
    check("bce_with_logits_0", [&] { return bce_with_logits(x, 0.0); }, {x});
  }
  {
    std::vector<double> pv(8), tv(8);
    for (auto& v : pv) v = 0.05 + 0.9 * rng.uniform();
    for (auto& v : tv) v = rng.uniform_int(2);
    Tensor p = Tensor::from_data({8}, pv, true);
    Tensor t = Tensor::from_data({8}, tv, false);
    check("bce_loss", [&] { return bce_loss(p, t); }, {p});
  }
  {
    Tensor a = Tensor::randn({9}, 1.0, rng, true);
    Tensor b = Tensor::randn({9}, 1.0, rng, true);
    for (int i = 0; i < 9; ++i)
      if (std::abs(a.data()[i] - b.data()[i]) < 0.05) a.raw_data()[i] += 0.1;
    check("l1_loss", [&] { return l1_loss(a, b); }, {a, b});
  }
  {
    Tensor logits = Tensor::randn({6, 4}, 1.0, rng, true);
    std::vector<int> labels = {2, 1, 2};
    check("ctc_loss",
          [&] { return eval::ctc_loss(log_softmax(logits), labels); },
          {logits});
  }
  {
    Tensor logits = Tensor::randn({4}, 1.0, rng, true);
    check("severity_loss",
          [&] {
            return eval::severity_loss(logits, align::Severity::kMedium);
          },
          {logits});
  }
  return results;
}

}  // namespace dysaug::autograd
