// include/dysaug/stft.h

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

#ifndef DYSAUG_STFT_H_
#define DYSAUG_STFT_H_

#include <complex>
#include <string>
#include <vector>

#include "dysaug/common.h"
#include "dysaug/waveform.h"

namespace dysaug::signal {

// Analysis parameters. fft_len must be a power of two >= window_len.
// Defaults: 16 kHz audio, 25 ms Hann window, 10 ms hop, 512-point FFT -> 257 bins.
struct StftParams {
  int window_len = 400;
  int hop_len = 160;
  int fft_len = 512;
  std::string window = "hann";  // hann | hamming | rect

  int num_bins() const { return fft_len / 2 + 1; }
  void validate() const;  // throws ConfigError
};

// bins is (fft_len/2+1) x T, row = frequency bin.
struct ComplexSpectrogram {
  std::vector<std::complex<double>> bins;
  int num_bins = 0;
  int num_frames = 0;
  StftParams params;
  int sample_rate = 16000;

  std::complex<double>& at(int f, int t) {
    return bins[static_cast<size_t>(f) * num_frames + t];
  }
  std::complex<double> at(int f, int t) const {
    return bins[static_cast<size_t>(f) * num_frames + t];
  }
};

// Magnitude spectrogram, F x T, nonnegative.
struct Spectrogram {
  Mat mag;
  StftParams params;
  int sample_rate = 16000;

  int num_bins() const { return mag.rows; }
  int num_frames() const { return mag.cols; }
};

// In-order complex FFT, size must be a power of two. inverse=true applies 1/n.
void fft(std::vector<std::complex<double>>& x, bool inverse);

// T = 1 + floor((len - window_len) / hop_len); no centering or padding.
// Throws DataError when the input is shorter than one window.
ComplexSpectrogram stft(const Waveform& w, const StftParams& p);

// Weighted overlap-add inverse; the synthesis window is the analysis window
// normalized by the squared-window overlap sum, so reconstruction is exact on
// the fully-overlapped interior for any NOLA window/hop combination.
// Throws ConfigError when the overlap sum vanishes somewhere (non-COLA).
Waveform istft(const ComplexSpectrogram& c);

Spectrogram magnitude(const ComplexSpectrogram& c);
Mat phase_angles(const ComplexSpectrogram& c);

// Relative spectral convergence error ||  |STFT(w)| - mag || / ||mag||.
double spectral_convergence(const Waveform& w, const Spectrogram& mag);

// Iterative phase reconstruction; the convergence error is non-increasing in
// the iteration count. Throws NumericError on a zero-norm magnitude.
Waveform griffin_lim(const Spectrogram& mag, int iters);

// istft of mag combined with phase_source's phase angles. Shapes must agree.
Waveform recompose_with_phase(const Spectrogram& mag,
                              const ComplexSpectrogram& phase_source);

// Text dump format: header "F T window hop fft rate", then row-major magnitudes.
void spectrogram_write(const Spectrogram& s, const std::string& path);
Spectrogram spectrogram_read(const std::string& path);

}  // namespace dysaug::signal

#endif  // DYSAUG_STFT_H_
