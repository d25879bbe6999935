// include/dysaug/eval.h

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

// Desk-scale downstream utility measurement: a tiny CTC acoustic model with a
// severity multitask head, WER scoring, and N-best system combination.

#ifndef DYSAUG_EVAL_H_
#define DYSAUG_EVAL_H_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dysaug/align.h"
#include "dysaug/autograd.h"
#include "dysaug/common.h"

namespace dysaug::eval {

using autograd::Tensor;

// Raised when a label sequence admits no alignment within the given number of
// frames (the loss would be +infinity).
class InfeasibleAlignmentError : public NumericError {
 public:
  using NumericError::NumericError;
};

// ---- CTC ----

// -log of the total probability over all valid alignments, by the log-space
// forward recursion over the blank-extended label sequence. log_probs is a
// [T, V+1] tensor of per-frame log-softmax outputs with blank at index 0;
// labels hold vocabulary indices in [1, V]. Differentiable through the tape.
Tensor ctc_loss(const Tensor& log_probs, const std::vector<int>& labels);

// Value-only variant on a plain matrix (rows = frames).
double ctc_loss_value(const Mat& log_probs, const std::vector<int>& labels);

// Per-frame argmax, collapse repeats, drop blanks.
std::vector<int> greedy_decode(const Mat& log_probs);

enum class ScoreMode { kGreedyPath, kFullSum };
ScoreMode score_mode_from_string(const std::string& s);

// Hypothesis log-probability: the best single alignment (greedy path, default)
// or the full alignment sum. Returns -inf when labels are infeasible for T.
double hypothesis_score(const Mat& log_probs, const std::vector<int>& labels,
                        ScoreMode mode);

// ---- losses ----

// beta1 * l_ctc + beta2 * l_seve; inputs must be finite.
Tensor mtl_loss(const Tensor& l_ctc, const Tensor& l_seve, double beta1,
                double beta2);
double mtl_loss(double l_ctc, double l_seve, double beta1, double beta2);

// Cross-entropy of softmax(logits) against the 4-class severity label.
Tensor severity_loss(const Tensor& logits, align::Severity label);

// ---- toy acoustic model ----

// Two conv layers (8 then 16 kernels, 3x3, stride 2 over frequency and 1 over
// time, replicate padding), mean-pool over frequency into per-frame features,
// a linear head to |vocab|+1 logits per frame (blank = 0), and a severity head
// that mean-pools the frame features over time into a linear 4-class output.
struct CtcModel {
  int vocab_size = 0;
  Tensor k1, b1, k2, b2;
  Tensor w_out, b_out;
  Tensor w_sev, b_sev;

  static CtcModel random_init(int vocab_size, Rng& rng);

  struct Outputs {
    Tensor log_probs;        // [T, V+1]
    Tensor severity_logits;  // [4]
  };
  Outputs forward(const Mat& features) const;

  std::vector<Tensor> parameters() const;
  std::vector<std::pair<std::string, Tensor>> named_parameters() const;
  void save(const std::string& path, const std::string& meta_json) const;
  static CtcModel load(const std::string& path);
};

// ---- WER ----

struct WerCounts {
  int64_t sub = 0;
  int64_t del = 0;
  int64_t ins = 0;
  int64_t ref_len = 0;

  int64_t errors() const { return sub + del + ins; }
  double percent() const {
    return 100.0 * static_cast<double>(errors()) /
           static_cast<double>(ref_len);
  }
};

// Minimum-edit-distance WER with substitution/deletion/insertion counts.
// The reference must be non-empty.
WerCounts wer(const std::vector<std::string>& ref,
              const std::vector<std::string>& hyp);

// ---- N-best lists ----

struct NBestEntry {
  std::vector<std::string> words;
  std::map<std::string, double> scores;  // system id -> log score
};

struct NBestList {
  std::string utt_id;
  std::vector<NBestEntry> entries;

  void validate() const;  // nonempty, N <= 100, finite scores
};

constexpr int kMaxNBest = 100;

// argmax over entries of sum_i w_i * score_i; weights must sum to 1 within
// 1e-9 and every entry must carry a score for every weighted system. Ties go
// to the earliest entry.
const NBestEntry& nbest_interpolate(const NBestList& list,
                                    const std::map<std::string, double>& weights);

using HypScorer = std::function<double(const std::string& utt_id,
                                       const std::vector<std::string>& words)>;

// Second-pass rescoring of system X's N-best by scorer Y: every entry gains
// Y's score (stored under system_y) and a combined score
// w * score_x + (1-w) * score_y (stored under "combined"); the returned list
// is sorted by the combined score, descending, stable.
NBestList two_pass_rescore(const NBestList& from_x, const std::string& system_x,
                           const std::string& system_y, const HypScorer& scorer_y,
                           double interpolation_weight);

// JSONL, one NBestList per line.
void nbest_write(const std::vector<NBestList>& lists, const std::string& path);
std::vector<NBestList> nbest_read(const std::string& path);

// ---- per-subgroup reporting ----

struct UttScore {
  std::string utt_id;
  align::Severity severity = align::Severity::kNone;
  WerCounts counts;
};

struct SubgroupWer {
  // pooled WER per severity subgroup plus the pooled total over all four
  double vl = 0.0, l = 0.0, m = 0.0, h = 0.0, all = 0.0;
  int64_t n_utts = 0;
};

SubgroupWer aggregate_wer(const std::vector<UttScore>& scores);
// CSV: header "VL,L,M,H,All" and one row of percentages.
void report_write_csv(const SubgroupWer& r, const std::string& path);
std::string report_format_table(const SubgroupWer& r);

void utt_scores_write(const std::vector<UttScore>& scores,
                      const std::string& path);
std::vector<UttScore> utt_scores_read(const std::string& path);

}  // namespace dysaug::eval

#endif  // DYSAUG_EVAL_H_
