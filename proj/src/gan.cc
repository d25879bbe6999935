// src/gan.cc

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

#include "dysaug/gan.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "dysaug/checkpoint.h"

namespace dysaug::gan {

using autograd::Adam;
using autograd::AdamConfig;
using autograd::Padding;
using nlohmann::json;

namespace {

constexpr double kLeakySlope = 0.2;

Tensor detach(const Tensor& t) {
  return Tensor::from_data(t.shape(), t.data(), false);
}

Tensor mat_to_tensor(const Mat& m, bool channel_dim = true) {
  if (channel_dim)
    return Tensor::from_data({1, m.rows, m.cols}, m.v, false);
  return Tensor::from_data({m.rows, m.cols}, m.v, false);
}

json cfg_to_json(const GanTrainConfig& cfg) {
  json j;
  j["epochs"] = cfg.epochs;
  j["batch_size"] = cfg.batch_size;
  j["seed"] = cfg.seed;
  j["lr"] = cfg.lr;
  j["adam_beta1"] = cfg.adam_beta1;
  j["adam_beta2"] = cfg.adam_beta2;
  j["paired_l1_weight"] = cfg.paired_l1_weight;
  j["chunk_frames"] = cfg.chunk_frames;
  j["k"] = cfg.k;
  j["delta_scale"] = cfg.delta_scale;
  j["sb_hidden"] = cfg.sb_hidden;
  j["sb_per_vector"] = cfg.sb_per_vector;
  return j;
}

}  // namespace

void GanTrainConfig::validate() const {
  if (epochs < 1 || batch_size < 1 || chunk_frames < 1 || k < 1)
    throw ConfigError("gan config: counts must be positive");
  if (lr <= 0.0) throw ConfigError("gan config: lr must be positive");
  if (paired_l1_weight < 0.0)
    throw ConfigError("gan config: paired_l1_weight must be >= 0");
  for (int h : sb_hidden)
    if (h < 1) throw ConfigError("gan config: hidden widths must be positive");
}

// ---- DCGAN generator ----

DcganGenerator DcganGenerator::random_init(Rng& rng) {
  DcganGenerator g;
  g.k1 = Tensor::randn({8, 1, 3, 3}, 0.02, rng, true);
  g.b1 = Tensor::zeros({8}, true);
  g.k2 = Tensor::randn({8, 8, 3, 3}, 0.02, rng, true);
  g.b2 = Tensor::zeros({8}, true);
  g.k3 = Tensor::randn({8, 8, 3, 3}, 0.02, rng, true);
  g.b3 = Tensor::zeros({8}, true);
  g.k4 = Tensor::randn({1, 8, 3, 3}, 0.02, rng, true);
  g.b4 = Tensor::zeros({1}, true);
  return g;
}

DcganGenerator DcganGenerator::identity() {
  DcganGenerator g;
  auto center_tap = [](int cout, int cin) {
    Tensor k = Tensor::zeros({cout, cin, 3, 3}, true);
    // route channel 0 -> channel 0 through the kernel center
    k.raw_data()[4] = 1.0;  // [0,0,1,1]
    return k;
  };
  g.k1 = center_tap(8, 1);
  g.b1 = Tensor::zeros({8}, true);
  g.k2 = center_tap(8, 8);
  g.b2 = Tensor::zeros({8}, true);
  g.k3 = center_tap(8, 8);
  g.b3 = Tensor::zeros({8}, true);
  g.k4 = center_tap(1, 8);
  g.b4 = Tensor::zeros({1}, true);
  return g;
}

Tensor DcganGenerator::forward(const Tensor& x) const {
  using namespace autograd;
  Tensor h = relu(conv2d(x, k1, b1, 1, 1, Padding::kReplicate));
  h = relu(conv2d(h, k2, b2, 1, 1, Padding::kReplicate));
  h = relu(conv2d(h, k3, b3, 1, 1, Padding::kReplicate));
  return conv2d(h, k4, b4, 1, 1, Padding::kReplicate);
}

std::vector<Tensor> DcganGenerator::parameters() const {
  return {k1, b1, k2, b2, k3, b3, k4, b4};
}

std::vector<std::pair<std::string, Tensor>> DcganGenerator::named_parameters()
    const {
  return {{"g.k1", k1}, {"g.b1", b1}, {"g.k2", k2}, {"g.b2", b2},
          {"g.k3", k3}, {"g.b3", b3}, {"g.k4", k4}, {"g.b4", b4}};
}

// ---- DCGAN discriminator ----

namespace {
int conv_out_dim(int in) { return (in - 2) / 2 + 1; }
}  // namespace

DcganDiscriminator DcganDiscriminator::random_init(int bins, int frames,
                                                   Rng& rng) {
  if (bins < 16 || frames < 16)
    throw ConfigError("dcgan discriminator: input must be at least 16x16 for "
                      "four stride-2 layers");
  DcganDiscriminator d;
  d.input_bins = bins;
  d.input_frames = frames;
  int h = bins, w = frames;
  for (int i = 0; i < 4; ++i) {
    h = conv_out_dim(h);
    w = conv_out_dim(w);
  }
  d.flat_dim = static_cast<int64_t>(64) * h * w;
  d.k1 = Tensor::randn({8, 1, 2, 2}, 0.02, rng, true);
  d.b1 = Tensor::zeros({8}, true);
  d.k2 = Tensor::randn({16, 8, 2, 2}, 0.02, rng, true);
  d.b2 = Tensor::zeros({16}, true);
  d.k3 = Tensor::randn({32, 16, 2, 2}, 0.02, rng, true);
  d.b3 = Tensor::zeros({32}, true);
  d.k4 = Tensor::randn({64, 32, 2, 2}, 0.02, rng, true);
  d.b4 = Tensor::zeros({64}, true);
  d.w = Tensor::randn({1, static_cast<int>(d.flat_dim)},
                      1.0 / std::sqrt(static_cast<double>(d.flat_dim)), rng,
                      true);
  d.b = Tensor::zeros({1}, true);
  return d;
}

Tensor DcganDiscriminator::logit(const Tensor& x) const {
  using namespace autograd;
  if (x.shape() != Shape{1, input_bins, input_frames})
    throw NumericError("dcgan discriminator: unexpected input shape");
  Tensor h = leaky_relu(conv2d(x, k1, b1, 2, 2, Padding::kZero), kLeakySlope);
  h = leaky_relu(conv2d(h, k2, b2, 2, 2, Padding::kZero), kLeakySlope);
  h = leaky_relu(conv2d(h, k3, b3, 2, 2, Padding::kZero), kLeakySlope);
  h = leaky_relu(conv2d(h, k4, b4, 2, 2, Padding::kZero), kLeakySlope);
  return linear(zero_pad_flatten(h, flat_dim), w, b);
}

Tensor DcganDiscriminator::prob(const Tensor& x) const {
  return autograd::sigmoid(logit(x));
}

std::vector<Tensor> DcganDiscriminator::parameters() const {
  return {k1, b1, k2, b2, k3, b3, k4, b4, w, b};
}

std::vector<std::pair<std::string, Tensor>>
DcganDiscriminator::named_parameters() const {
  return {{"d.k1", k1}, {"d.b1", b1}, {"d.k2", k2}, {"d.b2", b2},
          {"d.k3", k3}, {"d.b3", b3}, {"d.k4", k4}, {"d.b4", b4},
          {"d.w", w},   {"d.b", b}};
}

// ---- chunking ----

std::vector<Mat> make_chunks(const Mat& spec, int chunk_frames) {
  if (spec.empty()) throw DataError("make_chunks: empty spectrogram");
  std::vector<Mat> chunks;
  for (int start = 0; start < spec.cols; start += chunk_frames) {
    Mat c(spec.rows, chunk_frames, 0.0);
    int width = std::min(chunk_frames, spec.cols - start);
    for (int r = 0; r < spec.rows; ++r)
      for (int t = 0; t < width; ++t) c.at(r, t) = spec.at(r, start + t);
    chunks.push_back(std::move(c));
  }
  return chunks;
}

// ---- DCGAN training ----

DcganModels dcgan_train(const std::vector<SpecPair>& pairs,
                        const GanTrainConfig& cfg) {
  cfg.validate();
  if (pairs.empty()) throw DataError("dcgan_train: empty pair set");
  int bins = pairs[0].control.rows;
  for (const auto& p : pairs) {
    if (p.control.rows != p.dys.rows || p.control.cols != p.dys.cols)
      throw DataError("dcgan_train: pair spectrogram shapes disagree");
    if (p.control.rows != bins)
      throw DataError("dcgan_train: inconsistent bin count across pairs");
  }

  // Cut each pair into matched fixed-width chunk pairs.
  std::vector<std::pair<Mat, Mat>> chunk_pairs;
  for (const auto& p : pairs) {
    auto cc = make_chunks(p.control, cfg.chunk_frames);
    auto dc = make_chunks(p.dys, cfg.chunk_frames);
    for (size_t i = 0; i < cc.size(); ++i)
      chunk_pairs.emplace_back(std::move(cc[i]), std::move(dc[i]));
  }

  Rng rng(cfg.seed);
  DcganModels m{DcganGenerator::random_init(rng),
                DcganDiscriminator::random_init(bins, cfg.chunk_frames, rng),
                {}};

  AdamConfig ac;
  ac.lr = cfg.lr;
  ac.beta1 = cfg.adam_beta1;
  ac.beta2 = cfg.adam_beta2;
  Adam opt_d(m.d.parameters(), ac);
  Adam opt_g(m.g.parameters(), ac);

  std::vector<size_t> order(chunk_pairs.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double d_loss_sum = 0.0, g_loss_sum = 0.0;
    int d_correct = 0, d_total = 0, batches = 0;

    for (size_t pos = 0; pos < order.size(); pos += cfg.batch_size) {
      size_t end = std::min(order.size(), pos + cfg.batch_size);
      int n = static_cast<int>(end - pos);

      // discriminator step
      opt_d.zero_grad();
      Tensor d_loss;
      for (size_t bi = pos; bi < end; ++bi) {
        const auto& [ctl, dys] = chunk_pairs[order[bi]];
        Tensor fake = detach(m.g.forward(mat_to_tensor(ctl)));
        Tensor lr_real = m.d.logit(mat_to_tensor(dys));
        Tensor lr_fake = m.d.logit(fake);
        Tensor sample_loss =
            autograd::add(autograd::bce_with_logits(lr_real, 1.0),
                          autograd::bce_with_logits(lr_fake, 0.0));
        d_loss = d_loss.defined() ? autograd::add(d_loss, sample_loss)
                                  : sample_loss;
        d_correct += (lr_real.item() > 0.0) + (lr_fake.item() < 0.0);
        d_total += 2;
      }
      d_loss = autograd::scale(d_loss, 1.0 / n);
      autograd::backward(d_loss);
      opt_d.step();
      d_loss_sum += d_loss.item();

      // generator step (non-saturating + optional paired L1)
      if (cfg.train_generator) {
        opt_g.zero_grad();
        opt_d.zero_grad();  // gradients flow through D; discard them
        Tensor g_loss;
        for (size_t bi = pos; bi < end; ++bi) {
          const auto& [ctl, dys] = chunk_pairs[order[bi]];
          Tensor fake = m.g.forward(mat_to_tensor(ctl));
          Tensor sample_loss = autograd::bce_with_logits(m.d.logit(fake), 1.0);
          if (cfg.paired_l1_weight > 0.0)
            sample_loss = autograd::add(
                sample_loss,
                autograd::scale(autograd::l1_loss(fake, mat_to_tensor(dys)),
                                cfg.paired_l1_weight));
          g_loss = g_loss.defined() ? autograd::add(g_loss, sample_loss)
                                    : sample_loss;
        }
        g_loss = autograd::scale(g_loss, 1.0 / n);
        autograd::backward(g_loss);
        opt_g.step();
        g_loss_sum += g_loss.item();
      }
      ++batches;
    }

    GanEpochStats st;
    st.epoch = epoch;
    st.d_loss = d_loss_sum / batches;
    st.g_loss = cfg.train_generator ? g_loss_sum / batches : 0.0;
    st.d_acc = static_cast<double>(d_correct) / d_total;
    m.history.push_back(st);
  }
  return m;
}

Mat dcgan_transform(const DcganGenerator& g, const Mat& spec,
                    int chunk_frames) {
  if (spec.empty()) throw DataError("dcgan_transform: empty spectrogram");
  Mat out(spec.rows, spec.cols, 0.0);
  int start = 0;
  for (const Mat& chunk : make_chunks(spec, chunk_frames)) {
    Tensor y = g.forward(mat_to_tensor(chunk));
    int width = std::min(chunk_frames, spec.cols - start);
    for (int r = 0; r < spec.rows; ++r)
      for (int t = 0; t < width; ++t)
        out.at(r, start + t) = std::max(
            0.0, y.data()[static_cast<size_t>(r) * chunk_frames + t]);
    start += chunk_frames;
  }
  return out;
}

signal::Spectrogram dcgan_transform(const DcganGenerator& g,
                                    const signal::Spectrogram& spec,
                                    int chunk_frames) {
  signal::Spectrogram out = spec;
  out.mag = dcgan_transform(g, spec.mag, chunk_frames);
  return out;
}

// ---- SBGAN ----

SbganGenerator SbganGenerator::random_init(int rows, int cols,
                                           const std::vector<int>& hidden,
                                           double delta_scale, Rng& rng) {
  if (hidden.size() != 2)
    throw ConfigError("sbgan generator: expected two hidden widths");
  int in = rows * cols;
  SbganGenerator g;
  g.basis_rows = rows;
  g.basis_cols = cols;
  g.delta_scale = delta_scale;
  g.w1 = Tensor::randn({hidden[0], in}, 1.0 / std::sqrt(in), rng, true);
  g.b1 = Tensor::zeros({hidden[0]}, true);
  g.w2 = Tensor::randn({hidden[1], hidden[0]}, 1.0 / std::sqrt(hidden[0]), rng,
                       true);
  g.b2 = Tensor::zeros({hidden[1]}, true);
  // small output init keeps the initial perturbation near zero
  g.w3 = Tensor::randn({in, hidden[1]}, 0.01 / std::sqrt(hidden[1]), rng, true);
  g.b3 = Tensor::zeros({in}, true);
  return g;
}

Tensor SbganGenerator::delta_flat(const Tensor& u_flat) const {
  using namespace autograd;
  Tensor h = leaky_relu(linear(u_flat, w1, b1), kLeakySlope);
  h = leaky_relu(linear(h, w2, b2), kLeakySlope);
  return scale(tanh_t(linear(h, w3, b3)), delta_scale);
}

Mat SbganGenerator::delta(const Mat& u) const {
  if (u.rows != basis_rows || u.cols != basis_cols)
    throw DataError("sbgan generator: basis block shape mismatch");
  Tensor d = delta_flat(Tensor::from_data({u.rows * u.cols}, u.v, false));
  Mat out(u.rows, u.cols);
  out.v = d.data();
  return out;
}

std::vector<Tensor> SbganGenerator::parameters() const {
  return {w1, b1, w2, b2, w3, b3};
}

std::vector<std::pair<std::string, Tensor>> SbganGenerator::named_parameters()
    const {
  return {{"g.w1", w1}, {"g.b1", b1}, {"g.w2", w2},
          {"g.b2", b2}, {"g.w3", w3}, {"g.b3", b3}};
}

SbganDiscriminator SbganDiscriminator::random_init(int input_dim, Rng& rng) {
  SbganDiscriminator d;
  d.input_dim = input_dim;
  d.w1 = Tensor::randn({1024, input_dim}, 1.0 / std::sqrt(input_dim), rng, true);
  d.b1 = Tensor::zeros({1024}, true);
  d.w2 = Tensor::randn({512, 1024}, 1.0 / std::sqrt(1024.0), rng, true);
  d.b2 = Tensor::zeros({512}, true);
  d.w3 = Tensor::randn({256, 512}, 1.0 / std::sqrt(512.0), rng, true);
  d.b3 = Tensor::zeros({256}, true);
  d.w4 = Tensor::randn({1, 256}, 1.0 / std::sqrt(256.0), rng, true);
  d.b4 = Tensor::zeros({1}, true);
  return d;
}

Tensor SbganDiscriminator::logit(const Tensor& u_flat) const {
  using namespace autograd;
  Tensor h = leaky_relu(linear(u_flat, w1, b1), kLeakySlope);
  h = leaky_relu(linear(h, w2, b2), kLeakySlope);
  h = leaky_relu(linear(h, w3, b3), kLeakySlope);
  return linear(h, w4, b4);
}

Tensor SbganDiscriminator::prob(const Tensor& u_flat) const {
  return autograd::sigmoid(logit(u_flat));
}

std::vector<Tensor> SbganDiscriminator::parameters() const {
  return {w1, b1, w2, b2, w3, b3, w4, b4};
}

std::vector<std::pair<std::string, Tensor>>
SbganDiscriminator::named_parameters() const {
  return {{"d.w1", w1}, {"d.b1", b1}, {"d.w2", w2}, {"d.b2", b2},
          {"d.w3", w3}, {"d.b3", b3}, {"d.w4", w4}, {"d.b4", b4}};
}

namespace {

double mean_column_norm(const std::vector<Mat>& blocks) {
  double sum = 0.0;
  int64_t count = 0;
  for (const Mat& u : blocks) {
    for (int c = 0; c < u.cols; ++c) {
      double s = 0.0;
      for (int r = 0; r < u.rows; ++r) s += u.at(r, c) * u.at(r, c);
      sum += std::sqrt(s);
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

}  // namespace

SbganModels sbgan_train(const std::vector<Mat>& control_bases,
                        const std::vector<Mat>& dys_bases,
                        const GanTrainConfig& cfg) {
  cfg.validate();
  if (control_bases.empty() || dys_bases.empty())
    throw DataError("sbgan_train: empty basis sets");
  int rows = control_bases[0].rows, cols = control_bases[0].cols;
  for (const auto* set : {&control_bases, &dys_bases})
    for (const Mat& u : *set)
      if (u.rows != rows || u.cols != cols)
        throw DataError("sbgan_train: inconsistent basis block shapes");

  double delta_scale = cfg.delta_scale > 0.0
                           ? cfg.delta_scale
                           : 0.1 * mean_column_norm(control_bases);

  Rng rng(cfg.seed);
  SbganModels m{SbganGenerator::random_init(rows, cols, cfg.sb_hidden,
                                            delta_scale, rng),
                SbganDiscriminator::random_init(
                    cfg.sb_per_vector ? rows : rows * cols, rng),
                {},
                delta_scale};

  AdamConfig ac;
  ac.lr = cfg.lr;
  ac.beta1 = cfg.adam_beta1;
  ac.beta2 = cfg.adam_beta2;
  Adam opt_d(m.d.parameters(), ac);
  Adam opt_g(m.g.parameters(), ac);

  // Discriminator samples: whole flattened blocks, or single basis vectors.
  auto d_inputs = [&](const Tensor& block_flat) {
    std::vector<Tensor> xs;
    if (!cfg.sb_per_vector) {
      xs.push_back(block_flat);
    } else {
      // columns of the F x k block
      for (int c = 0; c < cols; ++c) {
        std::vector<double> col(rows);
        for (int r = 0; r < rows; ++r)
          col[r] = block_flat.data()[static_cast<size_t>(r) * cols + c];
        xs.push_back(Tensor::from_data({rows}, std::move(col), false));
      }
    }
    return xs;
  };

  size_t n_pairs = std::max(control_bases.size(), dys_bases.size());
  std::vector<size_t> order(n_pairs);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double d_loss_sum = 0.0, g_loss_sum = 0.0;
    int d_correct = 0, d_total = 0, batches = 0;

    for (size_t pos = 0; pos < order.size(); pos += cfg.batch_size) {
      size_t end = std::min(order.size(), pos + cfg.batch_size);
      int n = static_cast<int>(end - pos);

      opt_d.zero_grad();
      Tensor d_loss;
      for (size_t bi = pos; bi < end; ++bi) {
        const Mat& ctl = control_bases[order[bi] % control_bases.size()];
        const Mat& dys = dys_bases[order[bi] % dys_bases.size()];
        Tensor u_flat = Tensor::from_data({rows * cols}, ctl.v, false);
        Tensor fake = detach(autograd::add(u_flat, m.g.delta_flat(u_flat)));
        Tensor real = Tensor::from_data({rows * cols}, dys.v, false);
        if (cfg.sb_per_vector) {
          fake = autograd::reshape(fake, {rows, cols});
          real = autograd::reshape(real, {rows, cols});
        }
        for (const Tensor& rx : d_inputs(real)) {
          Tensor lg = m.d.logit(rx);
          Tensor l = autograd::bce_with_logits(lg, 1.0);
          d_loss = d_loss.defined() ? autograd::add(d_loss, l) : l;
          d_correct += lg.item() > 0.0;
          ++d_total;
        }
        for (const Tensor& fx : d_inputs(fake)) {
          Tensor lg = m.d.logit(fx);
          Tensor l = autograd::bce_with_logits(lg, 0.0);
          d_loss = autograd::add(d_loss, l);
          d_correct += lg.item() < 0.0;
          ++d_total;
        }
      }
      d_loss = autograd::scale(d_loss, 1.0 / n);
      autograd::backward(d_loss);
      opt_d.step();
      d_loss_sum += d_loss.item();

      if (cfg.train_generator) {
        opt_g.zero_grad();
        opt_d.zero_grad();
        Tensor g_loss;
        for (size_t bi = pos; bi < end; ++bi) {
          const Mat& ctl = control_bases[order[bi] % control_bases.size()];
          Tensor u_flat = Tensor::from_data({rows * cols}, ctl.v, false);
          Tensor fake = autograd::add(u_flat, m.g.delta_flat(u_flat));
          if (!cfg.sb_per_vector) {
            Tensor l = autograd::bce_with_logits(m.d.logit(fake), 1.0);
            g_loss = g_loss.defined() ? autograd::add(g_loss, l) : l;
          } else {
            // differentiable column split: e_c^T U^T selects basis vector c
            Tensor fake_t =
                autograd::transpose2d(autograd::reshape(fake, {rows, cols}));
            for (int c = 0; c < cols; ++c) {
              std::vector<double> e(cols, 0.0);
              e[c] = 1.0;
              Tensor sel = Tensor::from_data({1, cols}, std::move(e), false);
              Tensor col =
                  autograd::reshape(autograd::matmul(sel, fake_t), {rows});
              Tensor l = autograd::bce_with_logits(m.d.logit(col), 1.0);
              g_loss = g_loss.defined() ? autograd::add(g_loss, l) : l;
            }
          }
        }
        g_loss = autograd::scale(g_loss, 1.0 / n);
        autograd::backward(g_loss);
        opt_g.step();
        g_loss_sum += g_loss.item();
      }
      ++batches;
    }

    GanEpochStats st;
    st.epoch = epoch;
    st.d_loss = d_loss_sum / batches;
    st.g_loss = cfg.train_generator ? g_loss_sum / batches : 0.0;
    st.d_acc = static_cast<double>(d_correct) / d_total;
    m.history.push_back(st);
  }
  return m;
}

Mat sbgan_augment(const SbganGenerator& g, const Mat& spec, int k,
                  double delta_scale) {
  SpectralBasis basis = svd_bases(spec, k);
  Tensor u_flat =
      Tensor::from_data({basis.u.rows * basis.u.cols}, basis.u.v, false);
  SbganGenerator scaled = g;
  scaled.delta_scale = delta_scale;
  Tensor d = scaled.delta_flat(u_flat);
  SpectralBasis perturbed = basis;
  for (size_t i = 0; i < perturbed.u.v.size(); ++i)
    perturbed.u.v[i] += d.data()[i];
  Mat out = recompose(perturbed);
  for (auto& x : out.v) x = std::max(0.0, x);
  return out;
}

signal::Spectrogram sbgan_augment(const SbganGenerator& g,
                                  const signal::Spectrogram& spec, int k,
                                  double delta_scale) {
  signal::Spectrogram out = spec;
  out.mag = sbgan_augment(g, spec.mag, k, delta_scale);
  return out;
}

double adversarial_value(const std::vector<double>& d_real,
                         const std::vector<double>& d_fake) {
  if (d_real.empty() || d_fake.empty())
    throw DataError("adversarial_value: empty sample sets");
  double a = 0.0, b = 0.0;
  for (double p : d_real) a += std::log(p);
  for (double p : d_fake) b += std::log(1.0 - p);
  return a / d_real.size() + b / d_fake.size();
}

void history_write_csv(const GanHistory& h, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write history " + path);
  f << "epoch,d_loss,g_loss,d_acc\n";
  for (const auto& st : h)
    f << st.epoch << "," << format_double17(st.d_loss) << ","
      << format_double17(st.g_loss) << "," << format_double17(st.d_acc)
      << "\n";
}

// ---- checkpoints ----

void save_dcgan(const std::string& path, const DcganModels& m,
                const GanTrainConfig& cfg) {
  json meta;
  meta["arch"] = "dcgan";
  meta["bins"] = m.d.input_bins;
  meta["frames"] = m.d.input_frames;
  meta["cfg"] = cfg_to_json(cfg);
  auto params = m.g.named_parameters();
  auto dp = m.d.named_parameters();
  params.insert(params.end(), dp.begin(), dp.end());
  autograd::save_checkpoint(path, meta.dump(), params);
}

DcganModels load_dcgan(const std::string& path) {
  autograd::Checkpoint ck = autograd::load_checkpoint(path);
  json meta = json::parse(ck.meta);
  if (meta.value("arch", "") != "dcgan")
    throw DataError(path + ": not a dcgan checkpoint");
  DcganModels m;
  m.g.k1 = ck.at("g.k1"); m.g.b1 = ck.at("g.b1");
  m.g.k2 = ck.at("g.k2"); m.g.b2 = ck.at("g.b2");
  m.g.k3 = ck.at("g.k3"); m.g.b3 = ck.at("g.b3");
  m.g.k4 = ck.at("g.k4"); m.g.b4 = ck.at("g.b4");
  m.d.input_bins = meta.at("bins").get<int>();
  m.d.input_frames = meta.at("frames").get<int>();
  int h = m.d.input_bins, w = m.d.input_frames;
  for (int i = 0; i < 4; ++i) {
    h = conv_out_dim(h);
    w = conv_out_dim(w);
  }
  m.d.flat_dim = static_cast<int64_t>(64) * h * w;
  m.d.k1 = ck.at("d.k1"); m.d.b1 = ck.at("d.b1");
  m.d.k2 = ck.at("d.k2"); m.d.b2 = ck.at("d.b2");
  m.d.k3 = ck.at("d.k3"); m.d.b3 = ck.at("d.b3");
  m.d.k4 = ck.at("d.k4"); m.d.b4 = ck.at("d.b4");
  m.d.w = ck.at("d.w"); m.d.b = ck.at("d.b");
  return m;
}

void save_sbgan(const std::string& path, const SbganModels& m,
                const GanTrainConfig& cfg) {
  json meta;
  meta["arch"] = "sbgan";
  meta["basis_rows"] = m.g.basis_rows;
  meta["basis_cols"] = m.g.basis_cols;
  meta["delta_scale"] = m.resolved_delta_scale;
  meta["d_input_dim"] = m.d.input_dim;
  meta["cfg"] = cfg_to_json(cfg);
  auto params = m.g.named_parameters();
  auto dp = m.d.named_parameters();
  params.insert(params.end(), dp.begin(), dp.end());
  autograd::save_checkpoint(path, meta.dump(), params);
}

SbganModels load_sbgan(const std::string& path) {
  autograd::Checkpoint ck = autograd::load_checkpoint(path);
  json meta = json::parse(ck.meta);
  if (meta.value("arch", "") != "sbgan")
    throw DataError(path + ": not an sbgan checkpoint");
  SbganModels m;
  m.g.basis_rows = meta.at("basis_rows").get<int>();
  m.g.basis_cols = meta.at("basis_cols").get<int>();
  m.g.delta_scale = meta.at("delta_scale").get<double>();
  m.resolved_delta_scale = m.g.delta_scale;
  m.g.w1 = ck.at("g.w1"); m.g.b1 = ck.at("g.b1");
  m.g.w2 = ck.at("g.w2"); m.g.b2 = ck.at("g.b2");
  m.g.w3 = ck.at("g.w3"); m.g.b3 = ck.at("g.b3");
  m.d.input_dim = meta.at("d_input_dim").get<int>();
  m.d.w1 = ck.at("d.w1"); m.d.b1 = ck.at("d.b1");
  m.d.w2 = ck.at("d.w2"); m.d.b2 = ck.at("d.b2");
  m.d.w3 = ck.at("d.w3"); m.d.b3 = ck.at("d.b3");
  m.d.w4 = ck.at("d.w4"); m.d.b4 = ck.at("d.b4");
  return m;
}

}  // namespace dysaug::gan
