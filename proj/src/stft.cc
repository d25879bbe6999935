// src/stft.cc

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

#include "dysaug/stft.h"

#include <cmath>
#include <fstream>
#include <sstream>

namespace dysaug::signal {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> make_window(const StftParams& p) {
  std::vector<double> w(p.window_len);
  int n = p.window_len;
  if (p.window == "hann") {
    for (int i = 0; i < n; ++i)
      w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / n);
  } else if (p.window == "hamming") {
    for (int i = 0; i < n; ++i)
      w[i] = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / n);
  } else if (p.window == "rect") {
    for (int i = 0; i < n; ++i) w[i] = 1.0;
  } else {
    throw ConfigError("unknown window type '" + p.window + "'");
  }
  return w;
}

// Squared-window overlap sum over one hop-periodic cell, used both for the
// synthesis window and the NOLA validity check.
std::vector<double> overlap_denominator(const std::vector<double>& w, int hop) {
  int n = static_cast<int>(w.size());
  std::vector<double> den(n, 0.0);
  for (int shift = -((n - 1) / hop) * hop; shift < n; shift += hop) {
    for (int i = 0; i < n; ++i) {
      int j = i - shift;
      if (j >= 0 && j < n) den[i] += w[j] * w[j];
    }
  }
  return den;
}

}  // namespace

void StftParams::validate() const {
  if (hop_len <= 0 || window_len <= 0 || fft_len <= 0)
    throw ConfigError("stft: window/hop/fft lengths must be positive");
  if (hop_len > window_len)
    throw ConfigError("stft: hop_len must not exceed window_len");
  if (window_len > fft_len)
    throw ConfigError("stft: window_len must not exceed fft_len");
  if (!is_pow2(fft_len))
    throw ConfigError("stft: fft_len must be a power of two");
  make_window(*this);  // validates the window identifier
}

void fft(std::vector<std::complex<double>>& x, bool inverse) {
  size_t n = x.size();
  if (!is_pow2(static_cast<int>(n)))
    throw NumericError("fft: size must be a power of two");
  // bit reversal
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * M_PI / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = x[i + k];
        std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    double inv = 1.0 / static_cast<double>(n);
    for (auto& c : x) c *= inv;
  }
}

ComplexSpectrogram stft(const Waveform& w, const StftParams& p) {
  p.validate();
  int n = static_cast<int>(w.samples.size());
  if (n < p.window_len)
    throw DataError("stft: input shorter than one window (" +
                    std::to_string(n) + " < " + std::to_string(p.window_len) + ")");
  int num_frames = 1 + (n - p.window_len) / p.hop_len;
  int num_bins = p.num_bins();

  ComplexSpectrogram out;
  out.num_bins = num_bins;
  out.num_frames = num_frames;
  out.params = p;
  out.sample_rate = w.sample_rate;
  out.bins.resize(static_cast<size_t>(num_bins) * num_frames);

  std::vector<double> win = make_window(p);
  std::vector<std::complex<double>> buf(p.fft_len);
  for (int t = 0; t < num_frames; ++t) {
    int start = t * p.hop_len;
    for (int i = 0; i < p.window_len; ++i)
      buf[i] = w.samples[start + i] * win[i];
    for (int i = p.window_len; i < p.fft_len; ++i) buf[i] = 0.0;
    fft(buf, false);
    for (int f = 0; f < num_bins; ++f) out.at(f, t) = buf[f];
  }
  return out;
}

Waveform istft(const ComplexSpectrogram& c) {
  const StftParams& p = c.params;
  p.validate();
  std::vector<double> win = make_window(p);
  std::vector<double> den = overlap_denominator(win, p.hop_len);
  double den_max = 0.0, den_min = 1e300;
  for (double d : den) {
    den_max = std::max(den_max, d);
    den_min = std::min(den_min, d);
  }
  if (den_min <= 1e-10 * den_max)
    throw ConfigError("istft: window/hop combination violates overlap-add "
                      "(overlap sum vanishes)");
  std::vector<double> synth(win.size());
  for (size_t i = 0; i < win.size(); ++i) synth[i] = win[i] / den[i];

  int out_len = (c.num_frames - 1) * p.hop_len + p.window_len;
  Waveform out;
  out.sample_rate = c.sample_rate;
  out.samples.assign(static_cast<size_t>(out_len), 0.0);

  std::vector<std::complex<double>> buf(p.fft_len);
  for (int t = 0; t < c.num_frames; ++t) {
    for (int f = 0; f < c.num_bins; ++f) buf[f] = c.at(f, t);
    for (int f = c.num_bins; f < p.fft_len; ++f)
      buf[f] = std::conj(c.at(p.fft_len - f, t));
    fft(buf, true);
    int start = t * p.hop_len;
    for (int i = 0; i < p.window_len; ++i)
      out.samples[start + i] += buf[i].real() * synth[i];
  }
  return out;
}

Spectrogram magnitude(const ComplexSpectrogram& c) {
  Spectrogram s;
  s.params = c.params;
  s.sample_rate = c.sample_rate;
  s.mag = Mat(c.num_bins, c.num_frames);
  for (int f = 0; f < c.num_bins; ++f)
    for (int t = 0; t < c.num_frames; ++t) s.mag.at(f, t) = std::abs(c.at(f, t));
  return s;
}

Mat phase_angles(const ComplexSpectrogram& c) {
  Mat a(c.num_bins, c.num_frames);
  for (int f = 0; f < c.num_bins; ++f)
    for (int t = 0; t < c.num_frames; ++t) {
      std::complex<double> z = c.at(f, t);
      a.at(f, t) = std::atan2(z.imag(), z.real());
    }
  return a;
}

double spectral_convergence(const Waveform& w, const Spectrogram& mag) {
  ComplexSpectrogram c = stft(w, mag.params);
  int frames = std::min(c.num_frames, mag.num_frames());
  double num = 0.0, den = 0.0;
  for (int f = 0; f < mag.num_bins(); ++f)
    for (int t = 0; t < frames; ++t) {
      double d = std::abs(c.at(f, t)) - mag.mag.at(f, t);
      num += d * d;
      den += mag.mag.at(f, t) * mag.mag.at(f, t);
    }
  // Frames lost to the istft length change count as fully missed energy.
  for (int f = 0; f < mag.num_bins(); ++f)
    for (int t = frames; t < mag.num_frames(); ++t) {
      num += mag.mag.at(f, t) * mag.mag.at(f, t);
      den += mag.mag.at(f, t) * mag.mag.at(f, t);
    }
  return std::sqrt(num / den);
}

Waveform griffin_lim(const Spectrogram& mag, int iters) {
  if (iters < 1) throw ConfigError("griffin_lim: iters must be >= 1");
  double norm = frobenius_norm(mag.mag);
  if (norm == 0.0)
    throw NumericError("griffin_lim: zero-norm magnitude input");

  ComplexSpectrogram c;
  c.num_bins = mag.num_bins();
  c.num_frames = mag.num_frames();
  c.params = mag.params;
  c.sample_rate = mag.sample_rate;
  c.bins.resize(static_cast<size_t>(c.num_bins) * c.num_frames);
  // Fixed-seed random phase start; zero phase makes every frame identical and
  // stalls the early iterations.
  Rng rng(0x477269666c696dULL);
  for (int f = 0; f < c.num_bins; ++f)
    for (int t = 0; t < c.num_frames; ++t) {
      double phi = rng.uniform(-M_PI, M_PI);
      c.at(f, t) = std::polar(mag.mag.at(f, t), phi);
    }

  Waveform w;
  for (int it = 0; it < iters; ++it) {
    w = istft(c);
    ComplexSpectrogram s = stft(w, mag.params);
    int frames = std::min(s.num_frames, c.num_frames);
    for (int f = 0; f < c.num_bins; ++f)
      for (int t = 0; t < frames; ++t) {
        std::complex<double> z = s.at(f, t);
        double m = std::abs(z);
        c.at(f, t) = (m > 0.0) ? mag.mag.at(f, t) * (z / m)
                               : std::complex<double>(mag.mag.at(f, t), 0.0);
      }
  }
  return w;
}

Waveform recompose_with_phase(const Spectrogram& mag,
                              const ComplexSpectrogram& phase_source) {
  if (mag.num_bins() != phase_source.num_bins ||
      mag.num_frames() != phase_source.num_frames)
    throw DataError("recompose_with_phase: shape mismatch (" +
                    std::to_string(mag.num_bins()) + "x" +
                    std::to_string(mag.num_frames()) + " vs " +
                    std::to_string(phase_source.num_bins) + "x" +
                    std::to_string(phase_source.num_frames) + ")");
  ComplexSpectrogram c;
  c.num_bins = phase_source.num_bins;
  c.num_frames = phase_source.num_frames;
  c.params = mag.params;
  c.sample_rate = mag.sample_rate;
  c.bins.resize(phase_source.bins.size());
  for (int f = 0; f < c.num_bins; ++f)
    for (int t = 0; t < c.num_frames; ++t) {
      std::complex<double> z = phase_source.at(f, t);
      double m = std::abs(z);
      c.at(f, t) = (m > 0.0) ? mag.mag.at(f, t) * (z / m)
                             : std::complex<double>(mag.mag.at(f, t), 0.0);
    }
  return istft(c);
}

void spectrogram_write(const Spectrogram& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path);
  f << s.mag.rows << " " << s.mag.cols << " " << s.params.window_len << " "
    << s.params.hop_len << " " << s.params.fft_len << " " << s.sample_rate
    << "\n";
  for (int i = 0; i < s.mag.rows; ++i) {
    for (int j = 0; j < s.mag.cols; ++j) {
      if (j) f << " ";
      f << format_double17(s.mag.at(i, j));
    }
    f << "\n";
  }
}

Spectrogram spectrogram_read(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open " + path);
  Spectrogram s;
  int rows, cols;
  if (!(f >> rows >> cols >> s.params.window_len >> s.params.hop_len >>
        s.params.fft_len >> s.sample_rate))
    throw DataError(path + ": malformed spectrogram header");
  s.mag = Mat(rows, cols);
  for (auto& x : s.mag.v)
    if (!(f >> x)) throw DataError(path + ": truncated spectrogram data");
  return s;
}

}  // namespace dysaug::signal
