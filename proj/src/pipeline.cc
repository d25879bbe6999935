// src/pipeline.cc

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

#include "dysaug/pipeline.h"

#include <cmath>

namespace dysaug::gan {

FeatureMode feature_mode_from_string(const std::string& s) {
  if (s == "linear") return FeatureMode::kLinear;
  if (s == "log1p") return FeatureMode::kLog1p;
  throw ConfigError("unknown feature mode '" + s + "' (linear | log1p)");
}

std::string to_string(FeatureMode m) {
  return m == FeatureMode::kLinear ? "linear" : "log1p";
}

namespace {

void to_features(Mat& m, FeatureMode mode) {
  if (mode == FeatureMode::kLog1p)
    for (auto& x : m.v) x = std::log1p(x);
}

void from_features(Mat& m, FeatureMode mode) {
  if (mode == FeatureMode::kLog1p)
    for (auto& x : m.v) x = std::expm1(std::max(0.0, x));
  for (auto& x : m.v) x = std::max(0.0, x);
}

signal::Waveform resynthesize(const signal::Spectrogram& mag,
                              const signal::ComplexSpectrogram& phase_source,
                              const PipelineConfig& cfg) {
  if (cfg.use_griffin_lim)
    return signal::griffin_lim(mag, cfg.griffin_lim_iters);
  return signal::recompose_with_phase(mag, phase_source);
}

}  // namespace

signal::Waveform pipeline_speed_gan(const signal::Waveform& control,
                                    double factor, const DcganGenerator& g,
                                    const PipelineConfig& cfg) {
  signal::Waveform perturbed = signal::resample_speed(control, factor);
  signal::ComplexSpectrogram c = signal::stft(perturbed, cfg.stft);
  signal::Spectrogram mag = signal::magnitude(c);
  to_features(mag.mag, cfg.features);
  mag.mag = dcgan_transform(g, mag.mag, cfg.chunk_frames);
  from_features(mag.mag, cfg.features);
  return resynthesize(mag, c, cfg);
}

signal::Waveform pipeline_sbgan(const signal::Waveform& control, double factor,
                                const SbganGenerator& g,
                                const PipelineConfig& cfg) {
  signal::Waveform perturbed = signal::resample_speed(control, factor);
  signal::ComplexSpectrogram c = signal::stft(perturbed, cfg.stft);
  signal::Spectrogram mag = signal::magnitude(c);
  to_features(mag.mag, cfg.features);
  // The generator expects F x k blocks; utterances shorter than k frames are
  // zero-padded in time for the SVD and truncated back afterwards.
  int t_orig = mag.mag.cols;
  Mat padded = pad_frames(mag.mag, cfg.k);
  padded = sbgan_augment(g, padded, cfg.k, cfg.delta_scale);
  if (padded.cols != t_orig) {
    Mat cut(padded.rows, t_orig);
    for (int r = 0; r < padded.rows; ++r)
      for (int t = 0; t < t_orig; ++t) cut.at(r, t) = padded.at(r, t);
    padded = std::move(cut);
  }
  mag.mag = std::move(padded);
  from_features(mag.mag, cfg.features);
  return resynthesize(mag, c, cfg);
}

signal::Waveform pipeline_speed_only(const signal::Waveform& source,
                                     double factor) {
  return signal::resample_speed(source, factor);
}

Mat spectrogram_features(const signal::Waveform& w,
                         const signal::StftParams& p, FeatureMode mode) {
  signal::Waveform padded = w;
  if (static_cast<int>(padded.samples.size()) < p.window_len)
    padded.samples.resize(static_cast<size_t>(p.window_len), 0.0);
  Mat mag = signal::magnitude(signal::stft(padded, p)).mag;
  to_features(mag, mode);
  return mag;
}

Mat pad_frames(const Mat& m, int min_frames) {
  if (m.cols >= min_frames) return m;
  Mat out(m.rows, min_frames, 0.0);
  for (int r = 0; r < m.rows; ++r)
    for (int t = 0; t < m.cols; ++t) out.at(r, t) = m.at(r, t);
  return out;
}

}  // namespace dysaug::gan
