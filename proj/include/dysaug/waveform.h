// include/dysaug/waveform.h

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

#ifndef DYSAUG_WAVEFORM_H_
#define DYSAUG_WAVEFORM_H_

#include <string>
#include <vector>

#include "dysaug/common.h"

namespace dysaug::signal {

// Mono audio, samples nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  size_t length() const { return samples.size(); }
  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Distinct failure modes for WAV ingestion; tests and callers can dispatch on Kind.
class WavError : public DataError {
 public:
  enum class Kind { kMalformedHeader, kNotMono, kUnsupportedBitDepth, kIo };

  WavError(Kind kind, const std::string& msg) : DataError(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Reads a RIFF/WAVE file. Only 16-bit PCM mono is accepted; anything else is
// rejected with the matching WavError kind, never converted.
Waveform wav_read(const std::string& path);

// Writes 16-bit PCM mono. Samples are clamped to [-1, 1] and quantized with
// rounding, so a write/read round trip is exact to within 2^-15.
void wav_write(const Waveform& w, const std::string& path);

}  // namespace dysaug::signal

#endif  // DYSAUG_WAVEFORM_H_
