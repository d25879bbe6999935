// tests/oracles.cc

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

#include "oracles.h"

#include <algorithm>
#include <cmath>

namespace oracles {

std::vector<std::complex<double>> direct_dft(const std::vector<double>& x) {
  size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (size_t k = 0; k < n; ++k) {
    std::complex<double> s(0.0, 0.0);
    for (size_t j = 0; j < n; ++j) {
      double ang = -2.0 * M_PI * static_cast<double>(k) *
                   static_cast<double>(j) / static_cast<double>(n);
      s += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = s;
  }
  return out;
}

namespace {

double sinc(double v) {
  if (v == 0.0) return 1.0;
  return std::sin(M_PI * v) / (M_PI * v);
}

double kaiser_i0(double x) {
  // power series for the modified Bessel function of the first kind, order 0
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= (x / (2.0 * k)) * (x / (2.0 * k));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace

std::vector<double> direct_sinc_resample(const std::vector<double>& x,
                                         double alpha, int zero_crossings,
                                         double beta) {
  int64_t n_in = static_cast<int64_t>(x.size());
  int64_t n_out = std::llround(static_cast<double>(n_in) / alpha);
  double cutoff = std::min(1.0, 1.0 / alpha);
  double half_width = zero_crossings / cutoff;
  double i0b = kaiser_i0(beta);

  std::vector<double> out(static_cast<size_t>(n_out), 0.0);
  for (int64_t n = 0; n < n_out; ++n) {
    double t = static_cast<double>(n) * alpha;
    int64_t lo = std::max<int64_t>(0, static_cast<int64_t>(std::ceil(t - half_width)));
    int64_t hi = std::min<int64_t>(n_in - 1,
                                   static_cast<int64_t>(std::floor(t + half_width)));
    double acc = 0.0;
    for (int64_t j = lo; j <= hi; ++j) {
      double v = cutoff * (t - static_cast<double>(j));
      double frac = v / zero_crossings;
      double wd = 1.0 - frac * frac;
      double win = wd <= 0.0 ? 0.0 : kaiser_i0(beta * std::sqrt(wd)) / i0b;
      acc += x[static_cast<size_t>(j)] * sinc(v) * win;
    }
    out[static_cast<size_t>(n)] = cutoff * acc;
  }
  return out;
}

std::vector<double> jacobi_singular_values(const dysaug::Mat& a) {
  // Gram matrix of the smaller dimension.
  const dysaug::Mat& m = a;
  int r = m.rows, c = m.cols;
  int n = std::min(r, c);
  std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
  if (c <= r) {
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < c; ++j) {
        double s = 0.0;
        for (int k = 0; k < r; ++k) s += m.at(k, i) * m.at(k, j);
        g[i][j] = s;
      }
  } else {
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        double s = 0.0;
        for (int k = 0; k < c; ++k) s += m.at(i, k) * m.at(j, k);
        g[i][j] = s;
      }
  }

  // Classical two-sided Jacobi eigenvalue iteration on the symmetric Gram
  // matrix: repeatedly zero the largest off-diagonal element.
  for (int sweep = 0; sweep < 100 * n * n; ++sweep) {
    int p = 0, q = 1;
    double mx = -1.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(g[i][j]) > mx) {
          mx = std::abs(g[i][j]);
          p = i;
          q = j;
        }
    if (n < 2 || mx < 1e-30) break;
    double app = g[p][p], aqq = g[q][q], apq = g[p][q];
    double phi = 0.5 * std::atan2(2.0 * apq, aqq - app);
    double cs = std::cos(phi), sn = std::sin(phi);
    for (int k = 0; k < n; ++k) {
      double gkp = g[k][p], gkq = g[k][q];
      g[k][p] = cs * gkp - sn * gkq;
      g[k][q] = sn * gkp + cs * gkq;
    }
    for (int k = 0; k < n; ++k) {
      double gpk = g[p][k], gqk = g[q][k];
      g[p][k] = cs * gpk - sn * gqk;
      g[q][k] = sn * gpk + cs * gqk;
    }
  }

  std::vector<double> sv(n);
  for (int i = 0; i < n; ++i) sv[i] = std::sqrt(std::max(0.0, g[i][i]));
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

double ctc_enumerate_prob(const dysaug::Mat& log_probs,
                          const std::vector<int>& labels) {
  int t_len = log_probs.rows;
  int symbols = log_probs.cols;  // V + 1, blank = 0
  // Every path is a base-(V+1) number with t_len digits.
  int64_t total_paths = 1;
  for (int t = 0; t < t_len; ++t) total_paths *= symbols;

  double prob = 0.0;
  std::vector<int> path(t_len);
  for (int64_t code = 0; code < total_paths; ++code) {
    int64_t c = code;
    for (int t = 0; t < t_len; ++t) {
      path[t] = static_cast<int>(c % symbols);
      c /= symbols;
    }
    // collapse: drop repeats then blanks
    std::vector<int> collapsed;
    int prev = -1;
    for (int t = 0; t < t_len; ++t) {
      if (path[t] != prev && path[t] != 0) collapsed.push_back(path[t]);
      prev = path[t];
    }
    if (collapsed != labels) continue;
    double lp = 0.0;
    for (int t = 0; t < t_len; ++t) lp += log_probs.at(t, path[t]);
    prob += std::exp(lp);
  }
  return prob;
}

int edit_distance(const std::vector<std::string>& a,
                  const std::vector<std::string>& b) {
  size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i)
    for (size_t j = 1; j <= m; ++j)
      d[i][j] = std::min({d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1),
                          d[i - 1][j] + 1, d[i][j - 1] + 1});
  return d[n][m];
}

double dominant_frequency(const std::vector<double>& x, int sample_rate) {
  auto spec = direct_dft(x);
  size_t half = x.size() / 2;
  size_t best = 1;
  double best_mag = 0.0;
  for (size_t k = 1; k < half; ++k) {
    double m = std::abs(spec[k]);
    if (m > best_mag) {
      best_mag = m;
      best = k;
    }
  }
  return static_cast<double>(best) * sample_rate / static_cast<double>(x.size());
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  size_t n = std::min(a.size(), b.size());
  double ma = 0.0, mb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double num = 0.0, da = 0.0, db = 0.0;
  for (size_t i = 0; i < n; ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    da += (a[i] - ma) * (a[i] - ma);
    db += (b[i] - mb) * (b[i] - mb);
  }
  return num / std::sqrt(da * db);
}

}  // namespace oracles
