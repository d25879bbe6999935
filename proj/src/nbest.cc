// src/nbest.cc

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
#include <fstream>

#include <json.hpp>

#include "dysaug/eval.h"

namespace dysaug::eval {

using nlohmann::json;

void NBestList::validate() const {
  if (entries.empty())
    throw DataError("nbest '" + utt_id + "': empty entry list");
  if (static_cast<int>(entries.size()) > kMaxNBest)
    throw DataError("nbest '" + utt_id + "': more than " +
                    std::to_string(kMaxNBest) + " entries");
  for (const auto& e : entries)
    for (const auto& [sys, score] : e.scores)
      if (!std::isfinite(score))
        throw DataError("nbest '" + utt_id + "': non-finite score for system '" +
                        sys + "'");
}

const NBestEntry& nbest_interpolate(
    const NBestList& list, const std::map<std::string, double>& weights) {
  list.validate();
  if (weights.empty()) throw ConfigError("nbest_interpolate: no weights");
  double wsum = 0.0;
  for (const auto& [sys, w] : weights) wsum += w;
  if (std::abs(wsum - 1.0) > 1e-9)
    throw ConfigError("nbest_interpolate: weights sum to " +
                      std::to_string(wsum) + ", expected 1");

  const NBestEntry* best = nullptr;
  double best_score = 0.0;
  for (const auto& e : list.entries) {
    double s = 0.0;
    for (const auto& [sys, w] : weights) {
      auto it = e.scores.find(sys);
      if (it == e.scores.end())
        throw DataError("nbest '" + list.utt_id +
                        "': entry missing score for system '" + sys + "'");
      s += w * it->second;
    }
    if (!best || s > best_score) {  // ties keep the earliest entry
      best = &e;
      best_score = s;
    }
  }
  return *best;
}

NBestList two_pass_rescore(const NBestList& from_x, const std::string& system_x,
                           const std::string& system_y,
                           const HypScorer& scorer_y,
                           double interpolation_weight) {
  from_x.validate();
  NBestList out = from_x;
  std::vector<double> combined(out.entries.size());
  for (size_t i = 0; i < out.entries.size(); ++i) {
    NBestEntry& e = out.entries[i];
    auto it = e.scores.find(system_x);
    if (it == e.scores.end())
      throw DataError("nbest '" + out.utt_id +
                      "': entry missing first-pass score for system '" +
                      system_x + "'");
    double sy = scorer_y(out.utt_id, e.words);
    if (!std::isfinite(sy))
      throw DataError("nbest '" + out.utt_id + "': system '" + system_y +
                      "' cannot score hypothesis");
    e.scores[system_y] = sy;
    combined[i] =
        interpolation_weight * it->second + (1.0 - interpolation_weight) * sy;
    e.scores["combined"] = combined[i];
  }
  std::vector<size_t> order(out.entries.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return combined[a] > combined[b];
  });
  NBestList sorted;
  sorted.utt_id = out.utt_id;
  for (size_t i : order) sorted.entries.push_back(std::move(out.entries[i]));
  return sorted;
}

void nbest_write(const std::vector<NBestList>& lists, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write nbest " + path);
  for (const auto& l : lists) {
    l.validate();
    json j;
    j["utt_id"] = l.utt_id;
    json entries = json::array();
    for (const auto& e : l.entries) {
      json je;
      je["words"] = e.words;
      je["scores"] = e.scores;
      entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    f << j.dump() << "\n";
  }
}

std::vector<NBestList> nbest_read(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open nbest " + path);
  std::vector<NBestList> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataError(path + ": bad JSON line");
    NBestList l;
    try {
      l.utt_id = j.at("utt_id").get<std::string>();
      for (const auto& je : j.at("entries")) {
        NBestEntry e;
        e.words = je.at("words").get<std::vector<std::string>>();
        e.scores = je.at("scores").get<std::map<std::string, double>>();
        l.entries.push_back(std::move(e));
      }
    } catch (const json::exception& ex) {
      throw DataError(path + ": malformed nbest record: " + ex.what());
    }
    l.validate();
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace dysaug::eval
