// include/dysaug/svd.h

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

#ifndef DYSAUG_SVD_H_
#define DYSAUG_SVD_H_

#include <vector>

#include "dysaug/common.h"
#include "dysaug/stft.h"

namespace dysaug::gan {

// SVD factors of a spectrogram. Columns of u are the spectral bases
// (time-invariant frequency structure); columns of v are the temporal bases.
struct SpectralBasis {
  Mat u;                  // F x k, orthonormal columns
  std::vector<double> s;  // k singular values, nonincreasing, >= 0
  Mat v;                  // T x k, orthonormal columns
};

// Thin SVD by one-sided Jacobi rotations, then truncation to the leading k
// bases. Deterministic; zero singular directions are completed with
// Gram-Schmidt against canonical basis vectors so u and v stay orthonormal.
// Requires 1 <= k <= min(F, T).
SpectralBasis svd_bases(const Mat& spec, int k);
SpectralBasis svd_bases(const signal::Spectrogram& spec, int k);

// u * diag(s) * v^T.
Mat recompose(const SpectralBasis& b);

}  // namespace dysaug::gan

#endif  // DYSAUG_SVD_H_
