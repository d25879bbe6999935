// include/dysaug/plan.h

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

// Data-expansion planning: per-subset directives (speaker type x block set x
// method x multiplier) unfold into one generation job per source utterance and
// replica, with deterministic per-job seeds and factors.

#ifndef DYSAUG_PLAN_H_
#define DYSAUG_PLAN_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dysaug/align.h"

namespace dysaug::cli {

enum class Method { kSpeedSi, kSpeedSd, kSpeedGan, kSpectralBasisGan };

std::string to_string(Method m);       // S_si | S_sd | SG | SBG
Method method_from_string(const std::string& s);
bool method_needs_target(Method m);    // everything but S_si
bool method_needs_model(Method m);     // SG and SBG

struct Directive {
  align::SpeakerType speaker_type = align::SpeakerType::kControl;
  std::set<std::string> blocks;       // subset selector
  Method method = Method::kSpeedSi;
  int multiplier = 1;                 // replicas per source utterance
  std::string target_speaker;        // required for SD-family methods
};

struct AugPlan {
  std::vector<Directive> directives;
  std::string out_root;
  uint64_t seed = 0;
};

struct Job {
  std::string job_id;
  std::string source_utt;
  Method method = Method::kSpeedSi;
  int replica = 0;
  double factor = 1.0;
  std::string target_speaker;  // empty for S_si
  std::string model_id;        // empty unless the method needs a model
  std::string out_utt_id;
  uint64_t seed = 0;
};

// SI replicas cycle the fixed factors {0.9, 1.1} (1.0 is the original and is
// not re-emitted). SD-family replicas scale the target speaker's factor by
// the jitter schedule {1.0, 0.9, 1.1, 0.95, 1.05}, cycling.
extern const double kSiFactors[2];
extern const double kSdJitter[5];

// One job per (source utterance, replica). |jobs| always equals
// sum over directives of |subset| x multiplier. sd_factors maps dysarthric
// speaker ids to their speaker-dependent perturbation factors and is required
// by SD-family directives.
std::vector<Job> plan_expansion(const std::vector<align::ManifestRecord>& manifest,
                                const AugPlan& plan,
                                const std::map<std::string, double>& sd_factors);

// Originals plus augmented records; rejects duplicate utt ids. Every augmented
// record must carry provenance.
std::vector<align::ManifestRecord> manifest_merge(
    const std::vector<align::ManifestRecord>& original,
    const std::vector<align::ManifestRecord>& augmented);

}  // namespace dysaug::cli

#endif  // DYSAUG_PLAN_H_
