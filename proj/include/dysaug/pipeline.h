// include/dysaug/pipeline.h

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

// End-to-end augmentation paths: speed-perturbed control speech through the
// DCGAN (speed GAN) or through spectral-basis perturbation, back to a
// waveform.

#ifndef DYSAUG_PIPELINE_H_
#define DYSAUG_PIPELINE_H_

#include "dysaug/gan.h"
#include "dysaug/resample.h"
#include "dysaug/stft.h"

namespace dysaug::gan {

enum class FeatureMode { kLinear, kLog1p };

FeatureMode feature_mode_from_string(const std::string& s);
std::string to_string(FeatureMode m);

struct PipelineConfig {
  signal::StftParams stft;
  FeatureMode features = FeatureMode::kLinear;
  int chunk_frames = 128;
  int k = 32;                  // SBG path
  double delta_scale = 0.0;    // SBG path; must be set from the trained model
  bool use_griffin_lim = false;  // phase fallback instead of source phase
  int griffin_lim_iters = 60;
};

// speed GAN: resample_speed -> stft -> magnitude -> dcgan_transform ->
// recompose_with_phase (phase of the speed-perturbed control) -> waveform.
signal::Waveform pipeline_speed_gan(const signal::Waveform& control,
                                    double factor, const DcganGenerator& g,
                                    const PipelineConfig& cfg);

// Spectral basis GAN: resample_speed -> stft -> magnitude -> sbgan_augment ->
// recompose_with_phase -> waveform.
signal::Waveform pipeline_sbgan(const signal::Waveform& control, double factor,
                                const SbganGenerator& g,
                                const PipelineConfig& cfg);

// Plain speed perturbation (SI or SD), shared by the same job executor.
signal::Waveform pipeline_speed_only(const signal::Waveform& source,
                                     double factor);

// stft -> magnitude -> feature transform; inputs shorter than one window are
// zero-padded up to it first.
Mat spectrogram_features(const signal::Waveform& w,
                         const signal::StftParams& p, FeatureMode mode);

// Zero-pads columns so the matrix has at least min_frames frames.
Mat pad_frames(const Mat& m, int min_frames);

}  // namespace dysaug::gan

#endif  // DYSAUG_PIPELINE_H_
