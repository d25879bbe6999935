// tests/gan_test.cc

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
#include <fstream>

#include "dysaug/gan.h"
#include "dysaug/pipeline.h"
#include "dysaug/svd.h"
#include "oracles.h"

using namespace dysaug;
using namespace dysaug::gan;

namespace {

Mat random_mat(int r, int c, Rng& rng, double lo = 0.0, double hi = 1.0) {
  Mat m(r, c);
  for (auto& x : m.v) x = rng.uniform(lo, hi);
  return m;
}

double rel_frobenius_err(const Mat& a, const Mat& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) {
    double d = a.v[i] - b.v[i];
    num += d * d;
    den += a.v[i] * a.v[i];
  }
  return std::sqrt(num / den);
}

void check_orthonormal(const Mat& m, double tol) {
  for (int i = 0; i < m.cols; ++i)
    for (int j = i; j < m.cols; ++j) {
      double dot = 0.0;
      for (int r = 0; r < m.rows; ++r) dot += m.at(r, i) * m.at(r, j);
      CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) <= tol);
    }
}

// Random orthonormal F x k block whose first column has all-positive entries
// (spectral envelopes are nonnegative-ish, and it gives the "negate column 0"
// toy task a robust margin). Remaining columns are random orthonormal fill.
Mat random_basis_block(int f, int k, Rng& rng) {
  Mat u(f, k);
  for (int c = 0; c < k; ++c) {
    std::vector<double> col(f);
    if (c == 0)
      for (auto& x : col) x = 0.2 + std::abs(rng.gaussian());
    else
      for (auto& x : col) x = rng.gaussian();
    for (int p = 0; p < c; ++p) {
      double dot = 0.0;
      for (int r = 0; r < f; ++r) dot += col[r] * u.at(r, p);
      for (int r = 0; r < f; ++r) col[r] -= dot * u.at(r, p);
    }
    double norm = 0.0;
    for (double x : col) norm += x * x;
    norm = std::sqrt(norm);
    for (int r = 0; r < f; ++r) u.at(r, c) = col[r] / norm;
  }
  return u;
}

Mat negate_first_column(Mat u) {
  for (int r = 0; r < u.rows; ++r) u.at(r, 0) = -u.at(r, 0);
  return u;
}

}  // namespace

TEST_SUITE_BEGIN("gan");

TEST_CASE("svd of a rank-1 outer product has one singular value") {
  Rng rng(1);
  int f = 12, t = 9;
  std::vector<double> u(f), v(t);
  for (auto& x : u) x = rng.gaussian();
  for (auto& x : v) x = rng.gaussian();
  Mat spec(f, t);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < t; ++j) spec.at(i, j) = u[i] * v[j];

  SpectralBasis b = svd_bases(spec, std::min(f, t));
  CHECK(b.s[0] > 1e-6);
  for (size_t i = 1; i < b.s.size(); ++i) CHECK(b.s[i] <= 1e-9);
  check_orthonormal(b.u, 1e-8);
  check_orthonormal(b.v, 1e-8);
}

TEST_CASE("svd full-rank reconstruction and k out of range") {
  Rng rng(2);
  Mat spec = random_mat(10, 14, rng);
  SpectralBasis b = svd_bases(spec, 10);
  CHECK(rel_frobenius_err(spec, recompose(b)) <= 1e-6);
  CHECK_THROWS_AS(svd_bases(spec, 0), ConfigError);
  CHECK_THROWS_AS(svd_bases(spec, 11), ConfigError);
}

TEST_CASE("svd singular values match the Jacobi eigensolver oracle") {
  Rng rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    Mat spec = random_mat(8, 8, rng, -1.0, 1.0);
    SpectralBasis b = svd_bases(spec, 8);
    auto ref = oracles::jacobi_singular_values(spec);
    REQUIRE(ref.size() == b.s.size());
    for (size_t i = 0; i < ref.size(); ++i)
      CHECK(std::abs(b.s[i] - ref[i]) <= 1e-8);
  }
}

TEST_CASE("svd invariants on assorted shapes") {
  Rng rng(4);
  for (auto [f, t] : std::vector<std::pair<int, int>>{
           {6, 6}, {16, 5}, {5, 16}, {33, 12}}) {
    Mat spec = random_mat(f, t, rng);
    int full = std::min(f, t);
    SpectralBasis b = svd_bases(spec, full);
    check_orthonormal(b.u, 1e-8);
    check_orthonormal(b.v, 1e-8);
    for (size_t i = 1; i < b.s.size(); ++i) CHECK(b.s[i] <= b.s[i - 1] + 1e-12);
    // reconstruction error nonincreasing in k
    double prev = 1e300;
    for (int k = 1; k <= full; ++k) {
      SpectralBasis bk = svd_bases(spec, k);
      double err = rel_frobenius_err(spec, recompose(bk));
      CHECK(err <= prev + 1e-12);
      prev = err;
    }
  }
}

TEST_CASE("untrained discriminators output probabilities in (0,1)") {
  Rng rng(5);
  DcganDiscriminator d = DcganDiscriminator::random_init(16, 16, rng);
  for (int i = 0; i < 5; ++i) {
    Mat x = random_mat(16, 16, rng, -2.0, 2.0);
    double p = d.prob(autograd::Tensor::from_data({1, 16, 16}, x.v)).item();
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }
  SbganDiscriminator sd = SbganDiscriminator::random_init(24, rng);
  for (int i = 0; i < 5; ++i) {
    autograd::Tensor u = autograd::Tensor::randn({24}, 1.0, rng);
    double p = sd.prob(u).item();
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }
}

TEST_CASE("dcgan generator preserves shape and identity init passes "
          "nonnegative input through") {
  Rng rng(6);
  DcganGenerator g = DcganGenerator::identity();
  for (auto [f, t] : std::vector<std::pair<int, int>>{{16, 16}, {20, 33}}) {
    Mat x = random_mat(f, t, rng, 0.0, 2.0);
    autograd::Tensor y = g.forward(autograd::Tensor::from_data({1, f, t}, x.v));
    REQUIRE(y.shape() == autograd::Shape{1, f, t});
    for (size_t i = 0; i < x.v.size(); ++i)
      CHECK(y.data()[i] == doctest::Approx(x.v[i]).epsilon(1e-12));
  }
  DcganGenerator gr = DcganGenerator::random_init(rng);
  Mat x = random_mat(19, 27, rng);
  autograd::Tensor y = gr.forward(autograd::Tensor::from_data({1, 19, 27}, x.v));
  CHECK(y.shape() == autograd::Shape{1, 19, 27});
}

TEST_CASE("dcgan_transform contracts") {
  Rng rng(7);
  SUBCASE("all-zero kernels give all-zero output") {
    DcganGenerator g;
    g.k1 = autograd::Tensor::zeros({8, 1, 3, 3}, true);
    g.b1 = autograd::Tensor::zeros({8}, true);
    g.k2 = autograd::Tensor::zeros({8, 8, 3, 3}, true);
    g.b2 = autograd::Tensor::zeros({8}, true);
    g.k3 = autograd::Tensor::zeros({8, 8, 3, 3}, true);
    g.b3 = autograd::Tensor::zeros({8}, true);
    g.k4 = autograd::Tensor::zeros({1, 8, 3, 3}, true);
    g.b4 = autograd::Tensor::zeros({1}, true);
    Mat x = random_mat(16, 20, rng);
    Mat y = dcgan_transform(g, x, 16);
    for (double v : y.v) CHECK(v == 0.0);
  }
  SUBCASE("chunked application preserves width and clamps") {
    DcganGenerator g = DcganGenerator::identity();
    g.b4.raw_data()[0] = -0.25;  // push some outputs negative
    int chunk = 16;
    Mat x = random_mat(16, chunk + 1, rng);  // forces a padded tail chunk
    Mat y = dcgan_transform(g, x, chunk);
    CHECK(y.rows == 16);
    CHECK(y.cols == chunk + 1);
    for (size_t i = 0; i < y.v.size(); ++i) {
      CHECK(y.v[i] >= 0.0);
      CHECK(y.v[i] == doctest::Approx(std::max(0.0, x.v[i] - 0.25)));
    }
  }
  SUBCASE("empty input is rejected") {
    DcganGenerator g = DcganGenerator::identity();
    CHECK_THROWS_AS(dcgan_transform(g, Mat(), 16), DataError);
  }
}

TEST_CASE("adversarial value at D == 0.5 is 2 ln 0.5 for arbitrary G") {
  Rng rng(8);
  // zeroed final linear layer forces sigmoid(0) = 0.5 exactly
  DcganDiscriminator d = DcganDiscriminator::random_init(16, 16, rng);
  for (auto& x : d.w.raw_data()) x = 0.0;
  d.b.raw_data()[0] = 0.0;

  DcganGenerator g = DcganGenerator::random_init(rng);
  std::vector<double> d_real, d_fake;
  for (int i = 0; i < 7; ++i) {
    Mat real = random_mat(16, 16, rng);
    Mat ctl = random_mat(16, 16, rng);
    autograd::Tensor fake =
        g.forward(autograd::Tensor::from_data({1, 16, 16}, ctl.v));
    d_real.push_back(d.prob(autograd::Tensor::from_data({1, 16, 16}, real.v)).item());
    d_fake.push_back(d.prob(fake).item());
  }
  double v = adversarial_value(d_real, d_fake);
  CHECK(std::abs(v - 2.0 * std::log(0.5)) <= 1e-12);
}

TEST_CASE("discriminator-only training solves a separable toy task") {
  // G frozen at identity; controls live in [0, 0.4], dysarthric in [0.6, 1].
  Rng rng(9);
  std::vector<SpecPair> pairs;
  for (int i = 0; i < 16; ++i) {
    SpecPair p;
    p.control = random_mat(16, 16, rng, 0.0, 0.4);
    p.dys = random_mat(16, 16, rng, 0.6, 1.0);
    pairs.push_back(std::move(p));
  }
  GanTrainConfig cfg;
  cfg.epochs = 100;
  cfg.batch_size = 8;
  cfg.seed = 0;
  cfg.lr = 1e-3;
  cfg.chunk_frames = 16;
  cfg.train_generator = false;
  DcganModels m = dcgan_train(pairs, cfg);
  CHECK(m.history.back().d_acc > 0.9);
  CHECK(m.history.size() == 100);
}

TEST_CASE("dcgan training is deterministic per seed") {
  Rng rng(10);
  std::vector<SpecPair> pairs;
  for (int i = 0; i < 4; ++i) {
    SpecPair p;
    p.control = random_mat(16, 16, rng, 0.0, 1.0);
    p.dys = p.control;
    for (auto& x : p.dys.v) x += 0.5;
    pairs.push_back(std::move(p));
  }
  GanTrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 2;
  cfg.seed = 3;
  cfg.lr = 2e-3;
  cfg.chunk_frames = 16;
  DcganModels a = dcgan_train(pairs, cfg);
  DcganModels b = dcgan_train(pairs, cfg);
  REQUIRE(a.history.size() == b.history.size());
  for (size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].d_loss == b.history[i].d_loss);  // bitwise
    CHECK(a.history[i].g_loss == b.history[i].g_loss);
    CHECK(a.history[i].d_acc == b.history[i].d_acc);
  }
  CHECK(a.g.k4.data() == b.g.k4.data());
}

TEST_CASE("dcgan learns the +0.5 shift toy task (reduced run)") {
  Rng rng(11);
  auto make_pair = [&](SpecPair& p) {
    p.control = random_mat(16, 16, rng, 0.0, 1.0);
    p.dys = p.control;
    for (auto& x : p.dys.v) x += 0.5;
  };
  std::vector<SpecPair> train(12), held(4);
  for (auto& p : train) make_pair(p);
  for (auto& p : held) make_pair(p);

  GanTrainConfig cfg;
  cfg.epochs = 60;
  cfg.batch_size = 4;
  cfg.seed = 0;
  cfg.lr = 4e-3;
  cfg.chunk_frames = 16;
  DcganModels m = dcgan_train(train, cfg);

  double gan_l1 = 0.0, identity_l1 = 0.0;
  for (const auto& p : held) {
    Mat y = dcgan_transform(m.g, p.control, cfg.chunk_frames);
    for (size_t i = 0; i < y.v.size(); ++i) {
      gan_l1 += std::abs(y.v[i] - p.dys.v[i]);
      identity_l1 += std::abs(p.control.v[i] - p.dys.v[i]);
    }
  }
  CHECK(gan_l1 < identity_l1);
}

TEST_CASE("sbgan zero delta_scale is an exact no-op on bases") {
  Rng rng(12);
  Mat u = random_basis_block(24, 4, rng);
  SbganGenerator g = SbganGenerator::random_init(24, 4, {32, 32}, 0.0, rng);
  Mat d = g.delta(u);
  for (double x : d.v) CHECK(x == 0.0);
}

TEST_CASE("untrained sbgan perturbations lie strictly inside (+-delta_scale)") {
  Rng rng(13);
  double ds = 0.2;
  SbganGenerator g = SbganGenerator::random_init(24, 4, {32, 32}, ds, rng);
  for (int i = 0; i < 4; ++i) {
    Mat u = random_basis_block(24, 4, rng);
    Mat d = g.delta(u);
    for (double x : d.v) {
      CHECK(x > -ds);
      CHECK(x < ds);
    }
  }
}

TEST_CASE("sbgan_augment identities and perturbation bound") {
  Rng rng(14);
  Mat spec = random_mat(24, 18, rng, 0.0, 2.0);

  SUBCASE("zero perturbation at full rank recovers the input") {
    SbganGenerator g = SbganGenerator::random_init(24, 18, {16, 16}, 0.0, rng);
    Mat out = sbgan_augment(g, spec, 18, 0.0);
    CHECK(rel_frobenius_err(spec, out) <= 1e-6);
  }
  SUBCASE("zero perturbation at low rank equals the rank-k reconstruction") {
    int k = 5;
    SbganGenerator g = SbganGenerator::random_init(24, k, {16, 16}, 0.0, rng);
    Mat out = sbgan_augment(g, spec, k, 0.0);
    Mat ref = recompose(svd_bases(spec, k));
    for (auto& x : ref.v) x = std::max(0.0, x);
    for (size_t i = 0; i < out.v.size(); ++i)
      CHECK(out.v[i] == doctest::Approx(ref.v[i]).epsilon(1e-10));
  }
  SUBCASE("small perturbations move the output by at most |dU|_F * sigma_max, "
          "and match direct recomputation") {
    int k = 6;
    SpectralBasis b = svd_bases(spec, k);
    SbganGenerator g = SbganGenerator::random_init(24, k, {16, 16}, 1.0, rng);
    // scale so |dU|_F = 0.01 |U|_F
    Mat d0 = g.delta(b.u);
    double target = 0.01 * frobenius_norm(b.u);
    double ds = target / frobenius_norm(d0);
    Mat out = sbgan_augment(g, spec, k, ds);

    // direct recomputation oracle with independent loops
    Mat du = g.delta(b.u);
    for (auto& x : du.v) x *= ds / 1.0;  // delta() was evaluated at scale 1.0
    Mat ref(24, 18, 0.0);
    for (int i = 0; i < 24; ++i)
      for (int j = 0; j < 18; ++j) {
        double s = 0.0;
        for (int c = 0; c < k; ++c)
          s += (b.u.at(i, c) + du.at(i, c)) * b.s[c] * b.v.at(j, c);
        ref.at(i, j) = std::max(0.0, s);
      }
    for (size_t i = 0; i < out.v.size(); ++i)
      CHECK(out.v[i] == doctest::Approx(ref.v[i]).epsilon(1e-9));

    Mat base = recompose(b);
    for (auto& x : base.v) x = std::max(0.0, x);
    double change = 0.0;
    for (size_t i = 0; i < out.v.size(); ++i) {
      double d = out.v[i] - base.v[i];
      change += d * d;
    }
    CHECK(std::sqrt(change) <= frobenius_norm(du) * b.s[0] + 1e-9);
  }
}

TEST_CASE("sbgan separates negated-column blocks (reduced run)") {
  Rng rng(15);
  int f = 24, k = 4;
  std::vector<Mat> ctl_train, dys_train, dys_held;
  for (int i = 0; i < 24; ++i)
    ctl_train.push_back(random_basis_block(f, k, rng));
  for (int i = 0; i < 24; ++i)
    dys_train.push_back(negate_first_column(random_basis_block(f, k, rng)));
  for (int i = 0; i < 8; ++i)
    dys_held.push_back(negate_first_column(random_basis_block(f, k, rng)));

  GanTrainConfig cfg;
  cfg.epochs = 120;
  cfg.batch_size = 8;
  cfg.seed = 0;
  cfg.lr = 3e-3;
  cfg.k = k;
  cfg.sb_hidden = {64, 64};
  cfg.delta_scale = 0.05;
  SbganModels m = sbgan_train(ctl_train, dys_train, cfg);

  int correct = 0;
  for (const Mat& u : dys_held) {
    double p = m.d.prob(autograd::Tensor::from_data({f * k}, u.v)).item();
    correct += p > 0.5;
  }
  CHECK(static_cast<double>(correct) / dys_held.size() > 0.8);
}

TEST_CASE("sbgan training is deterministic per seed") {
  Rng rng(16);
  std::vector<Mat> ctl, dys;
  for (int i = 0; i < 6; ++i) {
    ctl.push_back(random_basis_block(12, 3, rng));
    dys.push_back(negate_first_column(random_basis_block(12, 3, rng)));
  }
  GanTrainConfig cfg;
  cfg.epochs = 4;
  cfg.batch_size = 2;
  cfg.seed = 9;
  cfg.lr = 1e-3;
  cfg.sb_hidden = {16, 16};
  cfg.delta_scale = 0.1;
  SbganModels a = sbgan_train(ctl, dys, cfg);
  SbganModels b = sbgan_train(ctl, dys, cfg);
  for (size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].d_loss == b.history[i].d_loss);
    CHECK(a.history[i].g_loss == b.history[i].g_loss);
  }
  CHECK(a.g.w3.data() == b.g.w3.data());
  CHECK(a.resolved_delta_scale == b.resolved_delta_scale);
}

TEST_CASE("sbgan auto delta_scale follows the mean column norm rule") {
  Rng rng(17);
  std::vector<Mat> ctl, dys;
  for (int i = 0; i < 3; ++i) {
    ctl.push_back(random_basis_block(12, 3, rng));
    dys.push_back(random_basis_block(12, 3, rng));
  }
  GanTrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 2;
  cfg.sb_hidden = {8, 8};
  cfg.delta_scale = 0.0;  // auto
  SbganModels m = sbgan_train(ctl, dys, cfg);
  // orthonormal columns: mean column norm is 1, so auto scale is 0.1
  CHECK(m.resolved_delta_scale == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("gan history csv format") {
  GanHistory h = {{1, 0.5, 0.25, 0.75}, {2, 0.4, 0.3, 0.8}};
  std::string path = "/tmp/dysaug_test_history.csv";
  history_write_csv(h, path);
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  CHECK(line == "epoch,d_loss,g_loss,d_acc");
  std::getline(f, line);
  CHECK(line.rfind("1,0.5,0.25,0.75", 0) == 0);
  std::remove(path.c_str());
}

TEST_CASE("gan checkpoints round trip") {
  Rng rng(18);
  SUBCASE("dcgan") {
    std::vector<SpecPair> pairs(2);
    pairs[0].control = random_mat(16, 16, rng);
    pairs[0].dys = random_mat(16, 16, rng);
    pairs[1] = pairs[0];
    GanTrainConfig cfg;
    cfg.epochs = 2;
    cfg.batch_size = 2;
    cfg.chunk_frames = 16;
    DcganModels m = dcgan_train(pairs, cfg);
    std::string path = "/tmp/dysaug_test_dcgan.ckpt";
    save_dcgan(path, m, cfg);
    DcganModels r = load_dcgan(path);
    CHECK(r.g.k1.data() == m.g.k1.data());
    CHECK(r.d.w.data() == m.d.w.data());
    CHECK(r.d.input_bins == 16);
    CHECK(r.d.flat_dim == m.d.flat_dim);
    Mat x = random_mat(16, 20, rng);
    Mat ya = dcgan_transform(m.g, x, 16), yb = dcgan_transform(r.g, x, 16);
    CHECK(ya.v == yb.v);
    std::remove(path.c_str());
  }
  SUBCASE("sbgan") {
    std::vector<Mat> ctl, dys;
    for (int i = 0; i < 2; ++i) {
      ctl.push_back(random_basis_block(12, 3, rng));
      dys.push_back(random_basis_block(12, 3, rng));
    }
    GanTrainConfig cfg;
    cfg.epochs = 1;
    cfg.batch_size = 2;
    cfg.sb_hidden = {8, 8};
    SbganModels m = sbgan_train(ctl, dys, cfg);
    std::string path = "/tmp/dysaug_test_sbgan.ckpt";
    save_sbgan(path, m, cfg);
    SbganModels r = load_sbgan(path);
    CHECK(r.g.w1.data() == m.g.w1.data());
    CHECK(r.g.delta_scale == m.resolved_delta_scale);
    CHECK(r.d.input_dim == m.d.input_dim);
    std::remove(path.c_str());
  }
}

TEST_CASE("pipelines: identity generator and duration law") {
  Rng rng(19);
  signal::Waveform w;
  w.sample_rate = 16000;
  w.samples.resize(6000);
  for (size_t i = 0; i < w.samples.size(); ++i)
    w.samples[i] = 0.3 * std::sin(2.0 * M_PI * 300.0 * i / 16000.0) +
                   0.1 * std::sin(2.0 * M_PI * 900.0 * i / 16000.0);

  PipelineConfig cfg;
  cfg.stft.window_len = 256;
  cfg.stft.hop_len = 64;
  cfg.stft.fft_len = 256;
  cfg.chunk_frames = 16;

  SUBCASE("speed GAN with identity G at factor 1 correlates >= 0.99") {
    DcganGenerator g = DcganGenerator::identity();
    signal::Waveform out = pipeline_speed_gan(w, 1.0, g, cfg);
    size_t n = std::min(out.samples.size(), w.samples.size());
    std::vector<double> a(w.samples.begin() + 256, w.samples.begin() + n - 256);
    std::vector<double> b(out.samples.begin() + 256,
                          out.samples.begin() + n - 256);
    CHECK(oracles::correlation(a, b) >= 0.99);
  }
  SUBCASE("factor 0.5 doubles the duration within one hop") {
    DcganGenerator g = DcganGenerator::identity();
    signal::Waveform out = pipeline_speed_gan(w, 0.5, g, cfg);
    CHECK(std::abs(static_cast<int64_t>(out.samples.size()) - 12000) <=
          cfg.stft.hop_len);
  }
  SUBCASE("sbgan path at full k with zero delta correlates >= 0.99") {
    SbganGenerator g = SbganGenerator::random_init(129, 16, {16, 16}, 0.0, rng);
    PipelineConfig scfg = cfg;
    scfg.k = 16;
    scfg.delta_scale = 0.0;
    signal::Waveform out = pipeline_sbgan(w, 1.0, g, scfg);
    size_t n = std::min(out.samples.size(), w.samples.size());
    std::vector<double> a(w.samples.begin() + 256, w.samples.begin() + n - 256);
    std::vector<double> b(out.samples.begin() + 256,
                          out.samples.begin() + n - 256);
    CHECK(oracles::correlation(a, b) >= 0.99);
  }
}

TEST_SUITE_END();
