// tests/autograd_test.cc

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

#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "dysaug/autograd.h"
#include "dysaug/checkpoint.h"

using namespace dysaug;
using namespace dysaug::autograd;

namespace {

// Direct 2-D convolution written independently of the library: explicit
// replicate padding, naive loops.
std::vector<double> reference_conv_same(const std::vector<double>& x, int h,
                                        int w, const std::vector<double>& k,
                                        int kh, int kw) {
  std::vector<double> out(static_cast<size_t>(h) * w, 0.0);
  int ph = (kh - 1) / 2, pw = (kw - 1) / 2;
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      double s = 0.0;
      for (int a = 0; a < kh; ++a)
        for (int b = 0; b < kw; ++b) {
          int si = std::clamp(i + a - ph, 0, h - 1);
          int sj = std::clamp(j + b - pw, 0, w - 1);
          s += x[static_cast<size_t>(si) * w + sj] *
               k[static_cast<size_t>(a) * kw + b];
        }
      out[static_cast<size_t>(i) * w + j] = s;
    }
  return out;
}

Tensor random_tensor(const Shape& shape, Rng& rng, bool rg = true,
                     double keep_away_from_zero = 0.0) {
  Tensor t = Tensor::randn(shape, 1.0, rng, rg);
  if (keep_away_from_zero > 0.0) {
    for (auto& x : t.raw_data())
      x += (x >= 0.0 ? keep_away_from_zero : -keep_away_from_zero);
  }
  return t;
}

// Scalarize an op output against fixed random weights so every output element
// receives a distinct gradient.
Tensor weighted_sum(const Tensor& y, Rng& rng) {
  Tensor w = Tensor::randn(y.shape(), 1.0, rng, false);
  return sum(mul(y, w));
}

}  // namespace

TEST_SUITE_BEGIN("autograd");

TEST_CASE("sum gradient is all ones") {
  Rng rng(1);
  Tensor x = random_tensor({3, 4}, rng);
  Tensor loss = sum(x);
  backward(loss);
  for (double g : x.grad()) CHECK(g == doctest::Approx(1.0));
}

TEST_CASE("sigmoid of w*x at w=0 has slope 0.25") {
  Tensor w = Tensor::scalar(0.0, true);
  Tensor x = Tensor::scalar(1.0);
  Tensor loss = sigmoid(mul(w, x));
  backward(loss);
  CHECK(w.grad()[0] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("leaky_relu slope 0.2 on a negative input") {
  Tensor x = Tensor::scalar(-1.0, true);
  Tensor y = leaky_relu(x, 0.2);
  CHECK(y.item() == doctest::Approx(-0.2));
  backward(y);
  CHECK(x.grad()[0] == doctest::Approx(0.2));
}

TEST_CASE("conv2d with an all-zero kernel maps to zero") {
  Rng rng(2);
  Tensor x = random_tensor({1, 5, 5}, rng, false);
  Tensor k = Tensor::zeros({1, 1, 3, 3});
  Tensor y = conv2d(x, k, Tensor(), 1, 1, Padding::kReplicate);
  for (double v : y.data()) CHECK(v == 0.0);
}

TEST_CASE("conv2d replicate matches the direct convolution reference") {
  Rng rng(3);
  Tensor x = random_tensor({1, 5, 5}, rng, false);
  // 3x3 averaging kernel
  Tensor k = Tensor::constant({1, 1, 3, 3}, 1.0 / 9.0);
  Tensor y = conv2d(x, k, Tensor(), 1, 1, Padding::kReplicate);
  REQUIRE(y.shape() == Shape{1, 5, 5});
  auto ref = reference_conv_same(x.data(), 5, 5, k.data(), 3, 3);
  for (size_t i = 0; i < ref.size(); ++i)
    CHECK(y.data()[i] == doctest::Approx(ref[i]).epsilon(1e-12));
}

TEST_CASE("conv2d replicate padding at stride 1 preserves dimensions") {
  Rng rng(4);
  for (int h : {4, 7, 16})
    for (int kdim : {3, 5}) {
      Tensor x = random_tensor({2, h, h + 1}, rng, false);
      Tensor k = random_tensor({3, 2, kdim, kdim}, rng, false);
      Tensor y = conv2d(x, k, Tensor(), 1, 1, Padding::kReplicate);
      CHECK(y.shape() == Shape{3, h, h + 1});
    }
}

TEST_CASE("conv2d zero padding follows the floor output-size rule") {
  Rng rng(5);
  Tensor x = random_tensor({1, 257, 128}, rng, false);
  Tensor k = random_tensor({8, 1, 2, 2}, rng, false);
  Tensor y = conv2d(x, k, Tensor(), 2, 2, Padding::kZero);
  CHECK(y.shape() == Shape{8, (257 - 2) / 2 + 1, (128 - 2) / 2 + 1});
}

TEST_CASE("conv2d shape errors") {
  Rng rng(6);
  Tensor x = random_tensor({2, 5, 5}, rng, false);
  Tensor k = random_tensor({1, 3, 3, 3}, rng, false);  // wrong Cin
  CHECK_THROWS_AS(conv2d(x, k, Tensor(), 1, 1, Padding::kZero), NumericError);
}

TEST_CASE("every primitive op passes finite differences") {
  Rng rng(7);
  const double kTol = 1e-4, kEps = 1e-5;

  auto check = [&](const char* name, const std::function<Tensor()>& f,
                   std::vector<Tensor> params) {
    Rng probe_rng(fnv1a64(name));
    double err = finite_diff_check(f, params, kEps, 20, probe_rng);
    INFO(name, " max rel err ", err);
    CHECK(err <= kTol);
  };

  {
    Tensor a = random_tensor({4, 3}, rng), b = random_tensor({4, 3}, rng);
    auto f = [&] {
      Rng wr(100);
      return weighted_sum(add(a, b), wr);
    };
    check("add", f, {a, b});
  }
  {
    Tensor a = random_tensor({4, 3}, rng), b = random_tensor({4, 3}, rng);
    auto f = [&] {
      Rng wr(101);
      return weighted_sum(sub(a, b), wr);
    };
    check("sub", f, {a, b});
  }
  {
    Tensor a = random_tensor({4, 3}, rng), b = random_tensor({4, 3}, rng);
    auto f = [&] {
      Rng wr(102);
      return weighted_sum(mul(a, b), wr);
    };
    check("mul", f, {a, b});
  }
  {
    Tensor a = random_tensor({8}, rng);
    auto f = [&] {
      Rng wr(103);
      return weighted_sum(scale(add_scalar(a, 0.7), -1.3), wr);
    };
    check("scale/add_scalar", f, {a});
  }
  {
    Tensor a = random_tensor({24}, rng, true, 0.05);
    auto f = [&] {
      Rng wr(104);
      return weighted_sum(relu(a), wr);
    };
    check("relu", f, {a});
  }
  {
    Tensor a = random_tensor({24}, rng, true, 0.05);
    auto f = [&] {
      Rng wr(105);
      return weighted_sum(leaky_relu(a, 0.2), wr);
    };
    check("leaky_relu", f, {a});
  }
  {
    Tensor a = random_tensor({24}, rng);
    auto f = [&] {
      Rng wr(106);
      return weighted_sum(tanh_t(a), wr);
    };
    check("tanh", f, {a});
  }
  {
    Tensor a = random_tensor({24}, rng);
    auto f = [&] {
      Rng wr(107);
      return weighted_sum(sigmoid(a), wr);
    };
    check("sigmoid", f, {a});
  }
  {
    Tensor a = random_tensor({24}, rng, true, 0.05);
    auto f = [&] {
      Rng wr(108);
      return weighted_sum(abs_t(a), wr);
    };
    check("abs", f, {a});
  }
  {
    Tensor a = random_tensor({4, 5}, rng), b = random_tensor({5, 3}, rng);
    auto f = [&] {
      Rng wr(109);
      return weighted_sum(matmul(a, b), wr);
    };
    check("matmul", f, {a, b});
  }
  {
    Tensor a = random_tensor({4, 5}, rng);
    auto f = [&] {
      Rng wr(110);
      return weighted_sum(transpose2d(a), wr);
    };
    check("transpose2d", f, {a});
  }
  {
    Tensor a = random_tensor({2, 3, 4}, rng);
    auto f = [&] {
      Rng wr(111);
      return weighted_sum(reshape(a, {4, 6}), wr);
    };
    check("reshape", f, {a});
  }
  {
    Tensor a = random_tensor({3, 7}, rng);
    auto f = [&] { return mean(a); };
    check("mean", f, {a});
  }
  {
    Tensor a = random_tensor({2, 3, 4}, rng);
    for (int axis : {0, 1, 2}) {
      auto f = [&, axis] {
        Rng wr(112 + axis);
        return weighted_sum(mean_axis(a, axis), wr);
      };
      check("mean_axis", f, {a});
    }
  }
  {
    Tensor x = random_tensor({6}, rng), w = random_tensor({4, 6}, rng),
           b = random_tensor({4}, rng);
    auto f = [&] {
      Rng wr(116);
      return weighted_sum(linear(x, w, b), wr);
    };
    check("linear-1d", f, {x, w, b});
  }
  {
    Tensor x = random_tensor({5, 6}, rng), w = random_tensor({4, 6}, rng),
           b = random_tensor({4}, rng);
    auto f = [&] {
      Rng wr(117);
      return weighted_sum(linear(x, w, b), wr);
    };
    check("linear-2d", f, {x, w, b});
  }
  {
    Tensor x = random_tensor({2, 6, 7}, rng), k = random_tensor({3, 2, 3, 3}, rng),
           b = random_tensor({3}, rng);
    auto f = [&] {
      Rng wr(118);
      return weighted_sum(conv2d(x, k, b, 1, 1, Padding::kReplicate), wr);
    };
    check("conv2d-replicate", f, {x, k, b});
  }
  {
    Tensor x = random_tensor({1, 8, 8}, rng), k = random_tensor({2, 1, 2, 2}, rng),
           b = random_tensor({2}, rng);
    auto f = [&] {
      Rng wr(119);
      return weighted_sum(conv2d(x, k, b, 2, 2, Padding::kZero), wr);
    };
    check("conv2d-strided", f, {x, k, b});
  }
  {
    Tensor x = random_tensor({2, 3}, rng);
    auto f = [&] {
      Rng wr(120);
      return weighted_sum(zero_pad_flatten(x, 10), wr);
    };
    check("zero_pad_flatten", f, {x});
  }
  {
    Tensor x = random_tensor({5, 4}, rng);
    auto f = [&] {
      Rng wr(121);
      return weighted_sum(log_softmax(x), wr);
    };
    check("log_softmax", f, {x});
  }
  {
    Tensor x = random_tensor({6}, rng);
    auto f = [&] { return cross_entropy(x, 2); };
    check("cross_entropy", f, {x});
  }
  {
    Rng r2(55);
    Tensor p = Tensor::from_data({6}, {0.2, 0.8, 0.5, 0.33, 0.9, 0.11}, true);
    Tensor t = Tensor::from_data({6}, {1, 0, 1, 0, 1, 0}, false);
    auto f = [&] { return bce_loss(p, t); };
    check("bce_loss", f, {p});
  }
  {
    Tensor z = random_tensor({6}, rng);
    auto f = [&] { return bce_with_logits(z, 1.0); };
    check("bce_with_logits", f, {z});
  }
  {
    Tensor a = random_tensor({7}, rng), b = random_tensor({7}, rng, true, 0.0);
    // keep |a-b| away from the abs kink
    for (size_t i = 0; i < 7; ++i) {
      double d = a.raw_data()[i] - b.raw_data()[i];
      if (std::abs(d) < 0.05) a.raw_data()[i] += 0.1;
    }
    auto f = [&] { return l1_loss(a, b); };
    check("l1_loss", f, {a, b});
  }
}

TEST_CASE("four-layer conv net gradient against finite differences") {
  Rng rng(8);
  Tensor x = Tensor::randn({1, 6, 6}, 1.0, rng, false);
  Tensor k1 = Tensor::randn({4, 1, 3, 3}, 0.4, rng, true);
  Tensor b1 = Tensor::randn({4}, 0.1, rng, true);
  Tensor k2 = Tensor::randn({4, 4, 3, 3}, 0.4, rng, true);
  Tensor b2 = Tensor::randn({4}, 0.1, rng, true);
  Tensor k3 = Tensor::randn({4, 4, 3, 3}, 0.4, rng, true);
  Tensor b3 = Tensor::randn({4}, 0.1, rng, true);
  Tensor k4 = Tensor::randn({1, 4, 3, 3}, 0.4, rng, true);
  Tensor b4 = Tensor::randn({1}, 0.1, rng, true);

  auto f = [&] {
    Tensor h1 = tanh_t(conv2d(x, k1, b1, 1, 1, Padding::kReplicate));
    Tensor h2 = tanh_t(conv2d(h1, k2, b2, 1, 1, Padding::kReplicate));
    Tensor h3 = tanh_t(conv2d(h2, k3, b3, 1, 1, Padding::kReplicate));
    Tensor h4 = conv2d(h3, k4, b4, 1, 1, Padding::kReplicate);
    return mean(mul(h4, h4));
  };
  Rng probe(9);
  double err = finite_diff_check(f, {k1, b1, k2, b2, k3, b3, k4, b4}, 1e-5, 20,
                                 probe);
  CHECK(err <= 1e-4);
}

TEST_CASE("backward errors: non-scalar loss and double backward") {
  Rng rng(10);
  Tensor x = random_tensor({3}, rng);
  Tensor y = mul(x, x);
  CHECK_THROWS_AS(backward(y), NumericError);  // non-scalar

  Tensor loss = sum(mul(x, x));
  backward(loss);
  CHECK_THROWS_AS(backward(loss), NumericError);  // re-run without forward
}

TEST_CASE("sgd step") {
  Tensor p = Tensor::scalar(1.0, true);
  Tensor loss = scale(p, 0.5);  // grad = 0.5
  backward(loss);
  sgd_step({p}, 0.1);
  CHECK(p.data()[0] == doctest::Approx(0.95));
}

TEST_CASE("adam first step size is ~lr regardless of gradient scale") {
  for (double g : {1e-6, 1.0, 1e6}) {
    Tensor p = Tensor::scalar(0.0, true);
    AdamConfig cfg;
    cfg.lr = 0.01;
    Adam opt({p}, cfg);
    Tensor loss = scale(p, g);
    backward(loss);
    opt.step();
    CHECK(std::abs(p.data()[0]) == doctest::Approx(0.01).epsilon(1e-3));
  }
}

TEST_CASE("adam descends a quadratic") {
  Tensor p = Tensor::scalar(1.0, true);
  AdamConfig cfg;
  cfg.lr = 0.05;
  Adam opt({p}, cfg);
  for (int i = 0; i < 100; ++i) {
    opt.zero_grad();
    Tensor loss = mul(p, p);
    backward(loss);
    opt.step();
  }
  CHECK(std::abs(p.data()[0]) < 0.1);
}

TEST_CASE("finite_diff_check calibration") {
  SUBCASE("linear functions are exact") {
    Tensor p = Tensor::from_data({4}, {0.3, -0.2, 1.0, 2.0}, true);
    Tensor w = Tensor::from_data({4}, {1.5, -2.0, 0.25, 3.0}, false);
    auto f = [&] { return sum(mul(p, w)); };
    Rng rng(11);
    CHECK(finite_diff_check(f, {p}, 1e-5, 0, rng) <= 1e-9);
  }
  SUBCASE("tanh at 0.3") {
    Tensor p = Tensor::scalar(0.3, true);
    auto f = [&] { return tanh_t(p); };
    Rng rng(12);
    CHECK(finite_diff_check(f, {p}, 1e-5, 0, rng) <= 1e-6);
  }
  SUBCASE("a doubled gradient is flagged at ~0.5 relative error") {
    Tensor p = Tensor::scalar(0.7, true);
    auto f = [&] {
      // y = p^2 with a backward that deliberately doubles the true gradient
      std::vector<Tensor> ins{p};
      double v = p.data()[0];
      return make_op_node(
          {1}, {v * v}, ins,
          [v](std::span<const double> g, std::vector<Tensor>& inputs) {
            std::vector<double> gx{g[0] * 4.0 * v};  // true is 2v
            inputs[0].add_grad(gx);
          });
    };
    Rng rng(13);
    double err = finite_diff_check(f, {p}, 1e-5, 0, rng);
    CHECK(err == doctest::Approx(0.5).epsilon(0.01));
  }
}

TEST_CASE("identical seeds give bit-identical training steps") {
  auto run = [] {
    Rng rng(77);
    Tensor x = Tensor::randn({1, 4, 4}, 1.0, rng, false);
    Tensor k = Tensor::randn({2, 1, 3, 3}, 0.3, rng, true);
    Tensor b = Tensor::randn({2}, 0.1, rng, true);
    AdamConfig cfg;
    cfg.lr = 1e-2;
    Adam opt({k, b}, cfg);
    for (int i = 0; i < 5; ++i) {
      opt.zero_grad();
      Tensor y = conv2d(x, k, b, 1, 1, Padding::kReplicate);
      Tensor loss = mean(mul(y, y));
      backward(loss);
      opt.step();
    }
    return std::make_pair(k.data(), b.data());
  };
  auto [k1, b1] = run();
  auto [k2, b2] = run();
  CHECK(k1 == k2);  // bitwise
  CHECK(b1 == b2);
}

TEST_CASE("debug checks surface non-finite values") {
  set_debug_checks(true);
  Tensor a = Tensor::from_data({2}, {1.0, 0.0}, true);
  Tensor big = Tensor::from_data({2}, {1e308, 1e308}, false);
  CHECK_THROWS_AS(mul(add(big, big), a), NumericError);
  set_debug_checks(false);
}

TEST_CASE("checkpoint text round trip is bit-exact") {
  Rng rng(14);
  Tensor a = Tensor::randn({3, 4}, 1.0, rng, true);
  Tensor b = Tensor::from_data(
      {3}, {1.0 / 3.0, -2.718281828459045e-15, 6.02214076e23}, true);
  std::string path = "/tmp/dysaug_test_ckpt.txt";
  save_checkpoint(path, R"({"arch":"test","seed":14})", {{"a", a}, {"b", b}});
  Checkpoint ck = load_checkpoint(path);
  CHECK(ck.meta == R"({"arch":"test","seed":14})");
  REQUIRE(ck.params.size() == 2);
  CHECK(ck.at("a").shape() == Shape{3, 4});
  CHECK(ck.at("a").data() == a.data());  // bitwise
  CHECK(ck.at("b").data() == b.data());
  CHECK_THROWS_AS(ck.at("missing"), DataError);
  std::remove(path.c_str());
}

TEST_SUITE_END();
