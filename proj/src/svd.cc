// src/svd.cc

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

#include "dysaug/svd.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dysaug::gan {

namespace {

// Thin SVD of a tall matrix (rows >= cols) by one-sided Jacobi: orthogonalize
// column pairs with plane rotations accumulated into V, singular values are
// the final column norms.
struct ThinSvd {
  Mat u;
  std::vector<double> s;
  Mat v;
};

ThinSvd one_sided_jacobi(Mat b) {
  int rows = b.rows, cols = b.cols;
  Mat v(cols, cols, 0.0);
  for (int i = 0; i < cols; ++i) v.at(i, i) = 1.0;

  const double tol = 1e-14;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int i = 0; i < cols - 1; ++i) {
      for (int j = i + 1; j < cols; ++j) {
        double aii = 0.0, ajj = 0.0, aij = 0.0;
        for (int r = 0; r < rows; ++r) {
          double bi = b.at(r, i), bj = b.at(r, j);
          aii += bi * bi;
          ajj += bj * bj;
          aij += bi * bj;
        }
        if (std::abs(aij) <= tol * std::sqrt(aii * ajj) || aij == 0.0)
          continue;
        rotated = true;
        double tau = (ajj - aii) / (2.0 * aij);
        double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double cs = 1.0 / std::sqrt(1.0 + t * t);
        double sn = cs * t;
        for (int r = 0; r < rows; ++r) {
          double bi = b.at(r, i), bj = b.at(r, j);
          b.at(r, i) = cs * bi - sn * bj;
          b.at(r, j) = sn * bi + cs * bj;
        }
        for (int r = 0; r < cols; ++r) {
          double vi = v.at(r, i), vj = v.at(r, j);
          v.at(r, i) = cs * vi - sn * vj;
          v.at(r, j) = sn * vi + cs * vj;
        }
      }
    }
    if (!rotated) break;
  }

  // Column norms are the singular values; sort descending.
  std::vector<double> sv(cols);
  for (int i = 0; i < cols; ++i) {
    double s = 0.0;
    for (int r = 0; r < rows; ++r) s += b.at(r, i) * b.at(r, i);
    sv[i] = std::sqrt(s);
  }
  std::vector<int> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int c) { return sv[a] > sv[c]; });

  ThinSvd out;
  out.s.resize(cols);
  out.u = Mat(rows, cols);
  out.v = Mat(cols, cols);
  double smax = sv.empty() ? 0.0 : sv[order[0]];
  double tiny = std::max(1e-300, smax * 1e-13);
  for (int c = 0; c < cols; ++c) {
    int src = order[c];
    out.s[c] = sv[src];
    for (int r = 0; r < cols; ++r) out.v.at(r, c) = v.at(r, src);
    if (sv[src] > tiny) {
      double inv = 1.0 / sv[src];
      for (int r = 0; r < rows; ++r) out.u.at(r, c) = b.at(r, src) * inv;
    } else {
      out.s[c] = 0.0;
      // placeholder; completed below
      for (int r = 0; r < rows; ++r) out.u.at(r, c) = 0.0;
    }
  }

  // Complete zero-singular-value directions so U stays orthonormal:
  // Gram-Schmidt canonical basis vectors against the existing columns.
  for (int c = 0; c < cols; ++c) {
    if (out.s[c] > 0.0) continue;
    for (int e = 0; e < rows; ++e) {
      std::vector<double> cand(rows, 0.0);
      cand[e] = 1.0;
      for (int p = 0; p < cols; ++p) {
        if (p == c) continue;
        double dot = 0.0;
        for (int r = 0; r < rows; ++r) dot += cand[r] * out.u.at(r, p);
        for (int r = 0; r < rows; ++r) cand[r] -= dot * out.u.at(r, p);
      }
      double norm = 0.0;
      for (double x : cand) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > 0.5) {  // e was far enough from the span
        for (int r = 0; r < rows; ++r) out.u.at(r, c) = cand[r] / norm;
        break;
      }
    }
  }
  return out;
}

}  // namespace

SpectralBasis svd_bases(const Mat& spec, int k) {
  if (spec.rows <= 0 || spec.cols <= 0)
    throw DataError("svd_bases: empty spectrogram");
  int full = std::min(spec.rows, spec.cols);
  if (k < 1 || k > full)
    throw ConfigError("svd_bases: k=" + std::to_string(k) +
                      " outside [1, " + std::to_string(full) + "]");

  bool swapped = spec.rows < spec.cols;
  ThinSvd thin = one_sided_jacobi(swapped ? transpose(spec) : spec);
  if (swapped) std::swap(thin.u, thin.v);

  SpectralBasis out;
  out.s.assign(thin.s.begin(), thin.s.begin() + k);
  out.u = Mat(spec.rows, k);
  out.v = Mat(spec.cols, k);
  for (int r = 0; r < spec.rows; ++r)
    for (int c = 0; c < k; ++c) out.u.at(r, c) = thin.u.at(r, c);
  for (int r = 0; r < spec.cols; ++r)
    for (int c = 0; c < k; ++c) out.v.at(r, c) = thin.v.at(r, c);
  return out;
}

SpectralBasis svd_bases(const signal::Spectrogram& spec, int k) {
  return svd_bases(spec.mag, k);
}

Mat recompose(const SpectralBasis& b) {
  int f = b.u.rows, t = b.v.rows, k = static_cast<int>(b.s.size());
  Mat out(f, t, 0.0);
  for (int c = 0; c < k; ++c) {
    double s = b.s[c];
    if (s == 0.0) continue;
    for (int i = 0; i < f; ++i) {
      double us = b.u.at(i, c) * s;
      if (us == 0.0) continue;
      for (int j = 0; j < t; ++j) out.at(i, j) += us * b.v.at(j, c);
    }
  }
  return out;
}

}  // namespace dysaug::gan
