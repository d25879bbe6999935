// include/dysaug/gan.h

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

// The two adversarial augmenters: a spectrogram-to-spectrogram DCGAN trained
// on duration-matched parallel pairs, and a Spectral basis GAN that perturbs
// SVD spectral bases of non-parallel data. One (G, D) pair is trained per
// target dysarthric speaker.

#ifndef DYSAUG_GAN_H_
#define DYSAUG_GAN_H_

#include <string>
#include <vector>

#include "dysaug/autograd.h"
#include "dysaug/common.h"
#include "dysaug/svd.h"

namespace dysaug::gan {

using autograd::Tensor;

struct GanTrainConfig {
  int epochs = 200;
  int batch_size = 8;
  uint64_t seed = 0;
  double lr = 2e-4;
  // conventional DCGAN moment decays
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.999;
  double paired_l1_weight = 0.0;  // DCGAN only; 0 keeps the pure objective
  int chunk_frames = 128;         // DCGAN fixed time width
  int k = 32;                     // SBGAN retained bases
  double delta_scale = 0.0;       // <= 0: auto, 0.1 * mean column norm of U
  std::vector<int> sb_hidden = {512, 512};
  bool sb_per_vector = false;  // discriminate single basis vectors, not blocks
  bool train_generator = true;    // freeze hook for discriminator-only runs

  void validate() const;
};

// Generator: 4 conv layers, 3x3 kernels, stride 1, replicate padding on every
// layer so the output shape equals the input shape; 8 kernels on layers 1-3
// (each followed by ReLU), 1 kernel on layer 4.
struct DcganGenerator {
  Tensor k1, b1, k2, b2, k3, b3, k4, b4;

  static DcganGenerator random_init(Rng& rng);
  // Passes nonnegative inputs through unchanged (center-tap kernels).
  static DcganGenerator identity();

  Tensor forward(const Tensor& x) const;  // [1,F,T] -> [1,F,T]
  std::vector<Tensor> parameters() const;
  std::vector<std::pair<std::string, Tensor>> named_parameters() const;
};

// Discriminator: 4 conv layers of 8/16/32/64 kernels, 2x2 kernels and strides,
// LeakyReLU(0.2) between layers, zero-padded flatten into a linear layer and a
// Sigmoid output. Built for a fixed input shape.
struct DcganDiscriminator {
  int input_bins = 0;
  int input_frames = 0;
  int64_t flat_dim = 0;
  Tensor k1, b1, k2, b2, k3, b3, k4, b4, w, b;

  static DcganDiscriminator random_init(int bins, int frames, Rng& rng);

  Tensor logit(const Tensor& x) const;
  Tensor prob(const Tensor& x) const;  // sigmoid(logit), always in (0,1)
  std::vector<Tensor> parameters() const;
  std::vector<std::pair<std::string, Tensor>> named_parameters() const;
};

// Generator over flattened F x k basis blocks: three linear layers, LeakyReLU
// (0.2) after the first two, Tanh output scaled by delta_scale.
struct SbganGenerator {
  int basis_rows = 0;  // F
  int basis_cols = 0;  // k
  double delta_scale = 0.1;
  Tensor w1, b1, w2, b2, w3, b3;

  static SbganGenerator random_init(int rows, int cols,
                                    const std::vector<int>& hidden,
                                    double delta_scale, Rng& rng);

  Tensor delta_flat(const Tensor& u_flat) const;  // tape path, [F*k]
  Mat delta(const Mat& u) const;                  // inference, F x k
  std::vector<Tensor> parameters() const;
  std::vector<std::pair<std::string, Tensor>> named_parameters() const;
};

// Three hidden linear layers of 1024/512/256 dims (LeakyReLU 0.2), then a
// linear projection to one logit and Sigmoid.
struct SbganDiscriminator {
  int input_dim = 0;
  Tensor w1, b1, w2, b2, w3, b3, w4, b4;

  static SbganDiscriminator random_init(int input_dim, Rng& rng);

  Tensor logit(const Tensor& u_flat) const;
  Tensor prob(const Tensor& u_flat) const;
  std::vector<Tensor> parameters() const;
  std::vector<std::pair<std::string, Tensor>> named_parameters() const;
};

struct GanEpochStats {
  int epoch = 0;
  double d_loss = 0.0;
  double g_loss = 0.0;
  double d_acc = 0.0;
};
using GanHistory = std::vector<GanEpochStats>;

// CSV with header "epoch,d_loss,g_loss,d_acc".
void history_write_csv(const GanHistory& h, const std::string& path);

// A duration-matched (control, dysarthric) magnitude pair; shapes must agree.
struct SpecPair {
  Mat control;
  Mat dys;
};

struct DcganModels {
  DcganGenerator g;
  DcganDiscriminator d;
  GanHistory history;
};

// Alternating training of Eq.-(4)-style losses: D maximizes
// log D(f_D) + log(1 - D(G(f_C))); G takes the non-saturating form
// (maximize log D(G(f_C))) plus an optional paired L1 term. Pairs are cut into
// fixed-width chunks (zero-padded tails) before batching.
DcganModels dcgan_train(const std::vector<SpecPair>& pairs,
                        const GanTrainConfig& cfg);

// Chunked application of the generator; output shape equals input shape and is
// clamped to >= 0.
Mat dcgan_transform(const DcganGenerator& g, const Mat& spec, int chunk_frames);
signal::Spectrogram dcgan_transform(const DcganGenerator& g,
                                    const signal::Spectrogram& spec,
                                    int chunk_frames);

struct SbganModels {
  SbganGenerator g;
  SbganDiscriminator d;
  GanHistory history;
  double resolved_delta_scale = 0.0;
};

// Non-parallel training: real samples are dysarthric U-blocks, fakes are
// control U-blocks plus the generator's perturbation.
SbganModels sbgan_train(const std::vector<Mat>& control_bases,
                        const std::vector<Mat>& dys_bases,
                        const GanTrainConfig& cfg);

// clamp((U + dU) diag(S) V^T, >= 0) with (U,S,V) = svd_bases(spec, k); only
// the spectral bases are perturbed, temporal bases and singular values pass
// through unchanged.
Mat sbgan_augment(const SbganGenerator& g, const Mat& spec, int k,
                  double delta_scale);
signal::Spectrogram sbgan_augment(const SbganGenerator& g,
                                  const signal::Spectrogram& spec, int k,
                                  double delta_scale);

// Adversarial value V(D, G) = mean log d_real + mean log(1 - d_fake) for
// discriminator outputs collected on real and generated samples.
double adversarial_value(const std::vector<double>& d_real,
                         const std::vector<double>& d_fake);

// Non-overlapping fixed-width chunks, final partial chunk zero-padded.
std::vector<Mat> make_chunks(const Mat& spec, int chunk_frames);

// Checkpoint I/O. Meta records architecture dims, training config and seed.
void save_dcgan(const std::string& path, const DcganModels& m,
                const GanTrainConfig& cfg);
DcganModels load_dcgan(const std::string& path);
void save_sbgan(const std::string& path, const SbganModels& m,
                const GanTrainConfig& cfg);
SbganModels load_sbgan(const std::string& path);

}  // namespace dysaug::gan

#endif  // DYSAUG_GAN_H_
