// src/ctc.cc

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

#include <algorithm>
#include <cmath>
#include <limits>

#include "dysaug/eval.h"

namespace dysaug::eval {

namespace {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  return a > b ? a + std::log1p(std::exp(b - a))
               : b + std::log1p(std::exp(a - b));
}

// Blank-extended label sequence [0, l1, 0, l2, ..., lL, 0].
std::vector<int> extend_labels(const std::vector<int>& labels) {
  std::vector<int> ext;
  ext.reserve(2 * labels.size() + 1);
  ext.push_back(0);
  for (int l : labels) {
    ext.push_back(l);
    ext.push_back(0);
  }
  return ext;
}

int min_frames_needed(const std::vector<int>& labels) {
  int repeats = 0;
  for (size_t i = 1; i < labels.size(); ++i)
    if (labels[i] == labels[i - 1]) ++repeats;
  return static_cast<int>(labels.size()) + repeats;
}

void check_labels(int t_len, int symbols, const std::vector<int>& labels) {
  if (labels.empty()) throw DataError("ctc: empty label sequence");
  for (int l : labels)
    if (l < 1 || l >= symbols)
      throw DataError("ctc: label " + std::to_string(l) +
                      " outside vocabulary [1, " + std::to_string(symbols - 1) +
                      "]");
  if (min_frames_needed(labels) > t_len)
    throw InfeasibleAlignmentError(
        "ctc: labels need at least " +
        std::to_string(min_frames_needed(labels)) + " frames, got " +
        std::to_string(t_len));
}

// Forward lattice over the extended sequence. logp(t, k) indexes the flat
// [T, symbols] log-prob array.
std::vector<double> forward_lattice(const double* logp, int t_len, int symbols,
                                    const std::vector<int>& ext) {
  int s_len = static_cast<int>(ext.size());
  std::vector<double> alpha(static_cast<size_t>(t_len) * s_len, kLogZero);
  auto lp = [&](int t, int k) { return logp[static_cast<size_t>(t) * symbols + k]; };
  alpha[0] = lp(0, ext[0]);
  if (s_len > 1) alpha[1] = lp(0, ext[1]);
  for (int t = 1; t < t_len; ++t) {
    for (int s = 0; s < s_len; ++s) {
      double best = alpha[static_cast<size_t>(t - 1) * s_len + s];
      if (s >= 1)
        best = log_add(best, alpha[static_cast<size_t>(t - 1) * s_len + s - 1]);
      if (s >= 2 && ext[s] != 0 && ext[s] != ext[s - 2])
        best = log_add(best, alpha[static_cast<size_t>(t - 1) * s_len + s - 2]);
      alpha[static_cast<size_t>(t) * s_len + s] =
          best == kLogZero ? kLogZero : best + lp(t, ext[s]);
    }
  }
  return alpha;
}

double lattice_total(const std::vector<double>& alpha, int t_len, int s_len) {
  double p = alpha[static_cast<size_t>(t_len - 1) * s_len + s_len - 1];
  if (s_len > 1)
    p = log_add(p, alpha[static_cast<size_t>(t_len - 1) * s_len + s_len - 2]);
  return p;
}

}  // namespace

double ctc_loss_value(const Mat& log_probs, const std::vector<int>& labels) {
  check_labels(log_probs.rows, log_probs.cols, labels);
  std::vector<int> ext = extend_labels(labels);
  std::vector<double> alpha =
      forward_lattice(log_probs.v.data(), log_probs.rows, log_probs.cols, ext);
  return -lattice_total(alpha, log_probs.rows, static_cast<int>(ext.size()));
}

Tensor ctc_loss(const Tensor& log_probs, const std::vector<int>& labels) {
  if (log_probs.shape().size() != 2)
    throw NumericError("ctc_loss: log_probs must be [T, V+1]");
  int t_len = log_probs.shape()[0];
  int symbols = log_probs.shape()[1];
  check_labels(t_len, symbols, labels);

  std::vector<int> ext = extend_labels(labels);
  int s_len = static_cast<int>(ext.size());
  std::vector<double> alpha =
      forward_lattice(log_probs.data().data(), t_len, symbols, ext);
  double log_p = lattice_total(alpha, t_len, s_len);
  if (log_p == kLogZero)
    throw InfeasibleAlignmentError("ctc: zero total path probability");

  // Backward closure recomputes beta and distributes -gamma over the inputs.
  auto alpha_shared = std::make_shared<std::vector<double>>(std::move(alpha));
  auto ext_shared = std::make_shared<std::vector<int>>(std::move(ext));
  return autograd::make_op_node(
      {1}, {-log_p}, {log_probs},
      [alpha_shared, ext_shared, t_len, symbols, s_len, log_p](
          std::span<const double> out_grad, std::vector<Tensor>& inputs) {
        const std::vector<double>& a = *alpha_shared;
        const std::vector<int>& e = *ext_shared;
        const std::vector<double>& logp = inputs[0].data();
        auto lp = [&](int t, int k) {
          return logp[static_cast<size_t>(t) * symbols + k];
        };

        // beta[t][s]: paths from (t, s) to the end, including emission at t.
        std::vector<double> beta(static_cast<size_t>(t_len) * s_len, kLogZero);
        beta[static_cast<size_t>(t_len - 1) * s_len + s_len - 1] =
            lp(t_len - 1, e[s_len - 1]);
        if (s_len > 1)
          beta[static_cast<size_t>(t_len - 1) * s_len + s_len - 2] =
              lp(t_len - 1, e[s_len - 2]);
        for (int t = t_len - 2; t >= 0; --t) {
          for (int s = s_len - 1; s >= 0; --s) {
            double acc = beta[static_cast<size_t>(t + 1) * s_len + s];
            if (s + 1 < s_len)
              acc = log_add(acc, beta[static_cast<size_t>(t + 1) * s_len + s + 1]);
            if (s + 2 < s_len && e[s + 2] != 0 && e[s + 2] != e[s])
              acc = log_add(acc, beta[static_cast<size_t>(t + 1) * s_len + s + 2]);
            beta[static_cast<size_t>(t) * s_len + s] =
                acc == kLogZero ? kLogZero : acc + lp(t, e[s]);
          }
        }

        std::vector<double> grad(static_cast<size_t>(t_len) * symbols, 0.0);
        for (int t = 0; t < t_len; ++t) {
          // log sum over lattice states emitting symbol k at time t
          std::vector<double> by_symbol(symbols, kLogZero);
          for (int s = 0; s < s_len; ++s) {
            double ab = a[static_cast<size_t>(t) * s_len + s] +
                        beta[static_cast<size_t>(t) * s_len + s];
            if (ab == kLogZero) continue;
            by_symbol[e[s]] = log_add(by_symbol[e[s]], ab);
          }
          for (int k = 0; k < symbols; ++k) {
            if (by_symbol[k] == kLogZero) continue;
            grad[static_cast<size_t>(t) * symbols + k] =
                -std::exp(by_symbol[k] - lp(t, k) - log_p) * out_grad[0];
          }
        }
        inputs[0].add_grad(grad);
      });
}

std::vector<int> greedy_decode(const Mat& log_probs) {
  std::vector<int> out;
  int prev = -1;
  for (int t = 0; t < log_probs.rows; ++t) {
    int best = 0;
    double best_v = log_probs.at(t, 0);
    for (int k = 1; k < log_probs.cols; ++k)
      if (log_probs.at(t, k) > best_v) {
        best_v = log_probs.at(t, k);
        best = k;
      }
    if (best != prev && best != 0) out.push_back(best);
    prev = best;
  }
  return out;
}

ScoreMode score_mode_from_string(const std::string& s) {
  if (s == "greedy_path") return ScoreMode::kGreedyPath;
  if (s == "full_sum") return ScoreMode::kFullSum;
  throw ConfigError("unknown score mode '" + s +
                    "' (greedy_path | full_sum)");
}

double hypothesis_score(const Mat& log_probs, const std::vector<int>& labels,
                        ScoreMode mode) {
  if (labels.empty() || min_frames_needed(labels) > log_probs.rows)
    return kLogZero;
  if (mode == ScoreMode::kFullSum) return -ctc_loss_value(log_probs, labels);

  // Viterbi over the same lattice: max instead of log-sum.
  std::vector<int> ext = extend_labels(labels);
  int s_len = static_cast<int>(ext.size());
  int t_len = log_probs.rows;
  std::vector<double> v(static_cast<size_t>(t_len) * s_len, kLogZero);
  v[0] = log_probs.at(0, ext[0]);
  if (s_len > 1) v[1] = log_probs.at(0, ext[1]);
  for (int t = 1; t < t_len; ++t)
    for (int s = 0; s < s_len; ++s) {
      double best = v[static_cast<size_t>(t - 1) * s_len + s];
      if (s >= 1)
        best = std::max(best, v[static_cast<size_t>(t - 1) * s_len + s - 1]);
      if (s >= 2 && ext[s] != 0 && ext[s] != ext[s - 2])
        best = std::max(best, v[static_cast<size_t>(t - 1) * s_len + s - 2]);
      v[static_cast<size_t>(t) * s_len + s] =
          best == kLogZero ? kLogZero : best + log_probs.at(t, ext[s]);
    }
  double p = v[static_cast<size_t>(t_len - 1) * s_len + s_len - 1];
  if (s_len > 1)
    p = std::max(p, v[static_cast<size_t>(t_len - 1) * s_len + s_len - 2]);
  return p;
}

}  // namespace dysaug::eval
