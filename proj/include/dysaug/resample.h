// include/dysaug/resample.h

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

#ifndef DYSAUG_RESAMPLE_H_
#define DYSAUG_RESAMPLE_H_

#include "dysaug/waveform.h"

namespace dysaug::signal {

// Speed perturbation y(t) = x(alpha * t): output sample n is the bandlimited
// interpolation of the input at instant n * alpha. Output length is
// round(len / alpha); the declared sample rate is unchanged, so both duration
// and spectral envelope scale (a sinusoid at f moves to alpha * f).
//
// Interpolation is windowed-sinc (Kaiser beta = 12, 64 zero crossings per
// side); for alpha > 1 the sinc cutoff is lowered to 1/alpha to suppress
// aliasing, widening the kernel support accordingly. alpha must lie in
// [0.25, 4.0] and the input must be non-empty.
Waveform resample_speed(const Waveform& w, double alpha);

// Number of samples resample_speed produces for an input of length n.
int64_t resampled_length(int64_t n, double alpha);

}  // namespace dysaug::signal

#endif  // DYSAUG_RESAMPLE_H_
