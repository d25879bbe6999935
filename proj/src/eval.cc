// src/eval.cc

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

#include "dysaug/eval.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dysaug/checkpoint.h"

namespace dysaug::eval {

using nlohmann::json;

Tensor mtl_loss(const Tensor& l_ctc, const Tensor& l_seve, double beta1,
                double beta2) {
  if (!std::isfinite(l_ctc.item()) || !std::isfinite(l_seve.item()))
    throw NumericError("mtl_loss: non-finite component loss");
  return autograd::add(autograd::scale(l_ctc, beta1),
                       autograd::scale(l_seve, beta2));
}

double mtl_loss(double l_ctc, double l_seve, double beta1, double beta2) {
  if (!std::isfinite(l_ctc) || !std::isfinite(l_seve))
    throw NumericError("mtl_loss: non-finite component loss");
  return beta1 * l_ctc + beta2 * l_seve;
}

Tensor severity_loss(const Tensor& logits, align::Severity label) {
  if (logits.size() != 4)
    throw NumericError("severity_loss: expected 4 logits");
  return autograd::cross_entropy(logits, align::severity_class_index(label));
}

// ---- CtcModel ----

CtcModel CtcModel::random_init(int vocab_size, Rng& rng) {
  if (vocab_size < 1) throw ConfigError("ctc model: vocabulary must be nonempty");
  CtcModel m;
  m.vocab_size = vocab_size;
  m.k1 = Tensor::randn({8, 1, 3, 3}, 0.3, rng, true);
  m.b1 = Tensor::zeros({8}, true);
  m.k2 = Tensor::randn({16, 8, 3, 3}, 0.15, rng, true);
  m.b2 = Tensor::zeros({16}, true);
  m.w_out = Tensor::randn({vocab_size + 1, 16}, 1.0 / 4.0, rng, true);
  m.b_out = Tensor::zeros({vocab_size + 1}, true);
  m.w_sev = Tensor::randn({4, 16}, 1.0 / 4.0, rng, true);
  m.b_sev = Tensor::zeros({4}, true);
  return m;
}

CtcModel::Outputs CtcModel::forward(const Mat& features) const {
  using namespace autograd;
  if (features.empty()) throw DataError("ctc model: empty features");
  Tensor x = Tensor::from_data({1, features.rows, features.cols}, features.v);
  // stride 2 over frequency (rows), 1 over time (cols)
  Tensor h = relu(conv2d(x, k1, b1, 2, 1, Padding::kReplicate));
  h = relu(conv2d(h, k2, b2, 2, 1, Padding::kReplicate));
  Tensor frames = transpose2d(mean_axis(h, 1));  // [T, 16]
  Outputs out;
  out.log_probs = log_softmax(linear(frames, w_out, b_out));
  out.severity_logits = linear(mean_axis(frames, 0), w_sev, b_sev);
  return out;
}

std::vector<Tensor> CtcModel::parameters() const {
  return {k1, b1, k2, b2, w_out, b_out, w_sev, b_sev};
}

std::vector<std::pair<std::string, Tensor>> CtcModel::named_parameters() const {
  return {{"k1", k1},       {"b1", b1},       {"k2", k2},   {"b2", b2},
          {"w_out", w_out}, {"b_out", b_out}, {"w_sev", w_sev},
          {"b_sev", b_sev}};
}

void CtcModel::save(const std::string& path, const std::string& meta_json) const {
  json meta = meta_json.empty() ? json::object() : json::parse(meta_json);
  meta["arch"] = "ctc_model";
  meta["vocab_size"] = vocab_size;
  autograd::save_checkpoint(path, meta.dump(), named_parameters());
}

CtcModel CtcModel::load(const std::string& path) {
  autograd::Checkpoint ck = autograd::load_checkpoint(path);
  json meta = json::parse(ck.meta);
  if (meta.value("arch", "") != "ctc_model")
    throw DataError(path + ": not a ctc_model checkpoint");
  CtcModel m;
  m.vocab_size = meta.at("vocab_size").get<int>();
  m.k1 = ck.at("k1");
  m.b1 = ck.at("b1");
  m.k2 = ck.at("k2");
  m.b2 = ck.at("b2");
  m.w_out = ck.at("w_out");
  m.b_out = ck.at("b_out");
  m.w_sev = ck.at("w_sev");
  m.b_sev = ck.at("b_sev");
  return m;
}

// ---- WER ----

WerCounts wer(const std::vector<std::string>& ref,
              const std::vector<std::string>& hyp) {
  if (ref.empty()) throw DataError("wer: empty reference");
  size_t n = ref.size(), m = hyp.size();
  // cost matrix plus backpointers: 0 = diag, 1 = up (deletion), 2 = left (ins)
  std::vector<int> cost((n + 1) * (m + 1));
  std::vector<unsigned char> back((n + 1) * (m + 1));
  auto idx = [m](size_t i, size_t j) { return i * (m + 1) + j; };
  for (size_t i = 0; i <= n; ++i) {
    cost[idx(i, 0)] = static_cast<int>(i);
    back[idx(i, 0)] = 1;
  }
  for (size_t j = 0; j <= m; ++j) {
    cost[idx(0, j)] = static_cast<int>(j);
    back[idx(0, j)] = 2;
  }
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      int diag = cost[idx(i - 1, j - 1)] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      int up = cost[idx(i - 1, j)] + 1;
      int left = cost[idx(i, j - 1)] + 1;
      // tie preference diag > up > left keeps S stable under ref/hyp swap
      int best = diag;
      unsigned char b = 0;
      if (up < best) {
        best = up;
        b = 1;
      }
      if (left < best) {
        best = left;
        b = 2;
      }
      cost[idx(i, j)] = best;
      back[idx(i, j)] = b;
    }
  }

  WerCounts c;
  c.ref_len = static_cast<int64_t>(n);
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    unsigned char b = back[idx(i, j)];
    if (b == 0 && i > 0 && j > 0) {
      if (ref[i - 1] != hyp[j - 1]) ++c.sub;
      --i;
      --j;
    } else if (b == 1 && i > 0) {
      ++c.del;
      --i;
    } else {
      ++c.ins;
      --j;
    }
  }
  return c;
}

// ---- reporting ----

SubgroupWer aggregate_wer(const std::vector<UttScore>& scores) {
  int64_t errs[4] = {0, 0, 0, 0};
  int64_t refs[4] = {0, 0, 0, 0};
  int64_t n = 0;
  for (const auto& s : scores) {
    if (s.severity == align::Severity::kNone) continue;
    int c = align::severity_class_index(s.severity);
    errs[c] += s.counts.errors();
    refs[c] += s.counts.ref_len;
    ++n;
  }
  auto pct = [](int64_t e, int64_t r) {
    return r == 0 ? 0.0 : 100.0 * static_cast<double>(e) / static_cast<double>(r);
  };
  SubgroupWer r;
  r.vl = pct(errs[0], refs[0]);
  r.l = pct(errs[1], refs[1]);
  r.m = pct(errs[2], refs[2]);
  r.h = pct(errs[3], refs[3]);
  r.all = pct(errs[0] + errs[1] + errs[2] + errs[3],
              refs[0] + refs[1] + refs[2] + refs[3]);
  r.n_utts = n;
  return r;
}

void report_write_csv(const SubgroupWer& r, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write report " + path);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%.2f,%.2f,%.2f,%.2f,%.2f", r.vl, r.l, r.m,
                r.h, r.all);
  f << "VL,L,M,H,All\n" << buf << "\n";
}

std::string report_format_table(const SubgroupWer& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "  %6s %6s %6s %6s %6s\n  %6.2f %6.2f %6.2f %6.2f %6.2f\n",
                "VL", "L", "M", "H", "All", r.vl, r.l, r.m, r.h, r.all);
  return std::string("Word Error Rate %\n") + buf;
}

void utt_scores_write(const std::vector<UttScore>& scores,
                      const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write scores " + path);
  for (const auto& s : scores) {
    json j;
    j["utt_id"] = s.utt_id;
    j["severity"] = align::to_string(s.severity);
    j["sub"] = s.counts.sub;
    j["del"] = s.counts.del;
    j["ins"] = s.counts.ins;
    j["ref_len"] = s.counts.ref_len;
    f << j.dump() << "\n";
  }
}

std::vector<UttScore> utt_scores_read(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open scores " + path);
  std::vector<UttScore> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataError(path + ": bad JSON line");
    UttScore s;
    s.utt_id = j.at("utt_id").get<std::string>();
    s.severity = align::severity_from_string(j.at("severity").get<std::string>());
    s.counts.sub = j.at("sub").get<int64_t>();
    s.counts.del = j.at("del").get<int64_t>();
    s.counts.ins = j.at("ins").get<int64_t>();
    s.counts.ref_len = j.at("ref_len").get<int64_t>();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace dysaug::eval
