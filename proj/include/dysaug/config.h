// include/dysaug/config.h

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

// Run configuration: one JSON document, schema-validated with explicit error
// paths ("config error at dcgan.epochs: ..."). Sections are optional; each
// subcommand demands the ones it needs.

#ifndef DYSAUG_CONFIG_H_
#define DYSAUG_CONFIG_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dysaug/corpus.h"
#include "dysaug/eval.h"
#include "dysaug/gan.h"
#include "dysaug/pipeline.h"
#include "dysaug/plan.h"
#include "dysaug/stft.h"

namespace dysaug::cli {

struct PathsConfig {
  std::string manifest;
  std::string ctm;
  std::string audio_root = ".";
  std::string out_dir = "out";
  std::string models_dir = "models";
  std::string pairs;  // pairs.jsonl produced by `pair`
};

struct PairConfig {
  std::string target_speaker;
  std::set<std::string> blocks = {"B1", "B3"};
  // "alignment" uses silence-stripped CTM durations, "audio" uses waveform
  // lengths; "auto" prefers alignment when a CTM is configured.
  std::string duration_source = "auto";
};

struct TrainConfig {
  std::string target_speaker;
  std::set<std::string> blocks = {"B1", "B3"};
};

struct EvalRunConfig {
  std::string train_manifest;
  std::string test_manifest;
  signal::StftParams stft{256, 128, 256, "hann"};
  gan::FeatureMode features = gan::FeatureMode::kLog1p;
  int epochs = 15;
  double lr = 2e-3;
  double beta_ctc = 0.5;
  double beta_seve = 0.5;
  eval::ScoreMode score_mode = eval::ScoreMode::kGreedyPath;
  int nbest = 20;
  std::string system_id = "sys";
  std::string decode = "nbest";  // nbest | greedy
};

struct CombineSystem {
  std::string id;
  std::string nbest_path;
  double weight = 0.0;
};

struct CombineRunConfig {
  std::string mode = "interpolate";  // interpolate | rescore
  std::vector<CombineSystem> systems;
  std::string base_system;       // rescore mode: system X
  std::string rescoring_system;  // rescore mode: system Y
  double weight = 0.5;           // rescore mode interpolation weight
  std::string test_manifest;
};

struct RunConfig {
  uint64_t seed = 0;
  PathsConfig paths;
  signal::StftParams stft;  // GAN front end (defaults 400/160/512 hann)
  gan::FeatureMode features = gan::FeatureMode::kLinear;
  gan::GanTrainConfig dcgan;
  gan::GanTrainConfig sbgan;
  PairConfig pair;
  TrainConfig train;
  std::vector<Directive> directives;
  bool has_plan = false;
  EvalRunConfig eval;
  bool has_eval = false;
  CombineRunConfig combine;
  bool has_combine = false;
  CorpusConfig corpus;
  bool has_corpus = false;

  std::string config_hash;  // FNV-1a of the canonical document, hex
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace dysaug::cli

#endif  // DYSAUG_CONFIG_H_
