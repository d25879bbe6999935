// src/plan.cc

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

#include "dysaug/plan.h"

#include <algorithm>
#include <set>

namespace dysaug::cli {

const double kSiFactors[2] = {0.9, 1.1};
const double kSdJitter[5] = {1.0, 0.9, 1.1, 0.95, 1.05};

std::string to_string(Method m) {
  switch (m) {
    case Method::kSpeedSi: return "S_si";
    case Method::kSpeedSd: return "S_sd";
    case Method::kSpeedGan: return "SG";
    case Method::kSpectralBasisGan: return "SBG";
  }
  return "S_si";
}

Method method_from_string(const std::string& s) {
  if (s == "S_si") return Method::kSpeedSi;
  if (s == "S_sd") return Method::kSpeedSd;
  if (s == "SG") return Method::kSpeedGan;
  if (s == "SBG") return Method::kSpectralBasisGan;
  throw ConfigError("unknown augmentation method '" + s +
                    "' (S_si | S_sd | SG | SBG)");
}

bool method_needs_target(Method m) { return m != Method::kSpeedSi; }
bool method_needs_model(Method m) {
  return m == Method::kSpeedGan || m == Method::kSpectralBasisGan;
}

namespace {

std::string method_tag(Method m) {
  switch (m) {
    case Method::kSpeedSi: return "ssi";
    case Method::kSpeedSd: return "ssd";
    case Method::kSpeedGan: return "sg";
    case Method::kSpectralBasisGan: return "sbg";
  }
  return "ssi";
}

std::string directive_key(const Directive& d) {
  std::string key = align::to_string(d.speaker_type) + "|";
  for (const auto& b : d.blocks) key += b + ",";
  key += "|" + to_string(d.method) + "|" + d.target_speaker;
  return key;
}

}  // namespace

std::vector<Job> plan_expansion(
    const std::vector<align::ManifestRecord>& manifest, const AugPlan& plan,
    const std::map<std::string, double>& sd_factors) {
  std::set<std::string> seen_directives;
  std::vector<Job> jobs;

  for (const Directive& d : plan.directives) {
    if (d.multiplier < 1)
      throw ConfigError("plan: multiplier must be a positive integer");
    if (d.blocks.empty()) throw ConfigError("plan: directive with no blocks");
    if (!seen_directives.insert(directive_key(d)).second)
      throw ConfigError("plan: duplicate (subset, method) directive");
    if (method_needs_target(d.method) && d.target_speaker.empty())
      throw ConfigError("plan: method " + to_string(d.method) +
                        " requires target_speaker");

    double sd = 1.0;
    if (method_needs_target(d.method)) {
      auto it = sd_factors.find(d.target_speaker);
      if (it == sd_factors.end())
        throw DataError("plan: no speaker-dependent factor for target '" +
                        d.target_speaker + "'");
      sd = it->second;
    }

    int subset_size = 0;
    for (const auto& r : manifest) {
      if (r.speaker_type != d.speaker_type) continue;
      if (!d.blocks.count(r.block)) continue;
      ++subset_size;
      for (int i = 0; i < d.multiplier; ++i) {
        Job j;
        j.source_utt = r.utt_id;
        j.method = d.method;
        j.replica = i;
        j.target_speaker =
            method_needs_target(d.method) ? d.target_speaker : "";
        if (d.method == Method::kSpeedSi) {
          j.factor = kSiFactors[i % 2];
        } else {
          j.factor = sd * kSdJitter[i % 5];
        }
        if (method_needs_model(d.method))
          j.model_id = (d.method == Method::kSpeedGan ? "dcgan_" : "sbgan_") +
                       d.target_speaker;
        std::string suffix = method_tag(d.method) +
                             (j.target_speaker.empty()
                                  ? std::string()
                                  : "_" + j.target_speaker) +
                             "_r" + std::to_string(i);
        j.out_utt_id = r.utt_id + "_" + suffix;
        j.job_id = j.out_utt_id;
        j.seed = derive_seed(plan.seed, j.job_id);
        jobs.push_back(std::move(j));
      }
    }
    if (subset_size == 0)
      throw DataError("plan: directive (" + align::to_string(d.speaker_type) +
                      ", " + to_string(d.method) +
                      ") selects zero utterances");
  }
  return jobs;
}

std::vector<align::ManifestRecord> manifest_merge(
    const std::vector<align::ManifestRecord>& original,
    const std::vector<align::ManifestRecord>& augmented) {
  std::set<std::string> ids;
  std::vector<align::ManifestRecord> merged;
  merged.reserve(original.size() + augmented.size());
  for (const auto& r : original) {
    if (!ids.insert(r.utt_id).second)
      throw DataError("manifest_merge: duplicate utt_id '" + r.utt_id + "'");
    merged.push_back(r);
  }
  for (const auto& r : augmented) {
    if (!r.provenance)
      throw DataError("manifest_merge: augmented record '" + r.utt_id +
                      "' lacks provenance");
    if (!ids.insert(r.utt_id).second)
      throw DataError("manifest_merge: duplicate utt_id '" + r.utt_id + "'");
    merged.push_back(r);
  }
  return merged;
}

}  // namespace dysaug::cli
