// src/resample.cc

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

#include "dysaug/resample.h"

#include <cmath>
#include <mutex>
#include <vector>

namespace dysaug::signal {

namespace {

constexpr int kZeroCrossings = 64;   // taps per side at the scaled sinc rate
constexpr double kKaiserBeta = 12.0;
constexpr int kTableOversample = 512;  // table entries per zero crossing

double sinc(double x) {
  if (x == 0.0) return 1.0;
  double px = M_PI * x;
  return std::sin(px) / px;
}

double kaiser(double frac) {  // frac in [-1, 1]
  double t = 1.0 - frac * frac;
  if (t < 0.0) return 0.0;
  return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(t)) /
         std::cyl_bessel_i(0.0, kKaiserBeta);
}

// Shared kernel table g(v) = sinc(v) * kaiser(v / kZeroCrossings) sampled at
// kTableOversample points per crossing; runtime lookups linearly interpolate.
// One table serves every alpha because the cutoff only rescales the argument.
const std::vector<double>& kernel_table() {
  static std::vector<double> table;
  static std::once_flag flag;
  std::call_once(flag, [] {
    int n = kZeroCrossings * kTableOversample + 1;
    table.resize(n + 1);
    for (int i = 0; i < n; ++i) {
      double v = static_cast<double>(i) / kTableOversample;
      table[i] = sinc(v) * kaiser(v / kZeroCrossings);
    }
    table[n] = 0.0;  // guard for interpolation at the support edge
  });
  return table;
}

double kernel_eval(double v) {
  const std::vector<double>& g = kernel_table();
  double idx = v * kTableOversample;
  int i = static_cast<int>(idx);
  if (i >= kZeroCrossings * kTableOversample) return 0.0;
  double frac = idx - i;
  return g[i] + frac * (g[i + 1] - g[i]);
}

}  // namespace

int64_t resampled_length(int64_t n, double alpha) {
  return std::llround(static_cast<double>(n) / alpha);
}

Waveform resample_speed(const Waveform& w, double alpha) {
  if (w.samples.empty()) throw DataError("resample_speed: empty input");
  if (!(alpha >= 0.25 && alpha <= 4.0))
    throw ConfigError("resample_speed: alpha " + std::to_string(alpha) +
                      " outside [0.25, 4.0]");

  int64_t n_in = static_cast<int64_t>(w.samples.size());
  int64_t n_out = resampled_length(n_in, alpha);
  double cutoff = std::min(1.0, 1.0 / alpha);
  double half_width = kZeroCrossings / cutoff;

  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples.resize(static_cast<size_t>(n_out));

  for (int64_t n = 0; n < n_out; ++n) {
    double t = static_cast<double>(n) * alpha;
    int64_t lo = static_cast<int64_t>(std::ceil(t - half_width));
    int64_t hi = static_cast<int64_t>(std::floor(t + half_width));
    if (lo < 0) lo = 0;
    if (hi >= n_in) hi = n_in - 1;
    double acc = 0.0;
    for (int64_t j = lo; j <= hi; ++j) {
      double v = cutoff * std::abs(t - static_cast<double>(j));
      acc += w.samples[static_cast<size_t>(j)] * kernel_eval(v);
    }
    out.samples[static_cast<size_t>(n)] = cutoff * acc;
  }
  return out;
}

}  // namespace dysaug::signal
