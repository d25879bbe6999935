// include/dysaug/commands.h

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

// Subcommand implementations behind the dysaug CLI. Each command validates
// its config sections, runs the corresponding module pipeline, and writes its
// outputs plus a <command>_meta.json run record (seed, config hash, counts).
// Library-level run_* helpers are exposed so tests can drive the same paths
// without spawning processes.

#ifndef DYSAUG_COMMANDS_H_
#define DYSAUG_COMMANDS_H_

#include <map>
#include <string>
#include <vector>

#include "dysaug/config.h"
#include "dysaug/eval.h"
#include "dysaug/plan.h"

namespace dysaug::cli {

struct CommandContext {
  RunConfig cfg;
  std::string command;
  std::string out_dir;  // resolved: --out override or cfg.paths.out_dir
  bool force = false;
};

// Exit codes shared with the CLI: 0 success, 2 config error, 3 data error,
// 4 numerical-check failure.
int cmd_make_corpus(CommandContext& ctx);
int cmd_perturb(CommandContext& ctx);
int cmd_pair(CommandContext& ctx);
int cmd_train_dcgan(CommandContext& ctx);
int cmd_train_sbgan(CommandContext& ctx);
int cmd_augment(CommandContext& ctx);
int cmd_eval(CommandContext& ctx);
int cmd_combine(CommandContext& ctx);
int cmd_gradcheck(CommandContext& ctx);
int cmd_report(CommandContext& ctx);

// ---- shared machinery ----

// Per-speaker SD factors from forced alignments: unweighted mean over control
// speakers' mean phone durations divided by each dysarthric speaker's mean.
std::map<std::string, double> compute_sd_factors(
    const std::vector<align::ManifestRecord>& manifest,
    const std::string& ctm_path);

// Non-silence duration per utterance from a CTM, or waveform duration when
// use_alignment is false.
std::map<std::string, double> utterance_durations(
    const std::vector<align::ManifestRecord>& manifest,
    const std::string& audio_root, const std::string& ctm_path,
    bool use_alignment);

std::string resolve_audio(const std::string& audio_root,
                          const std::string& audio_path);

struct AugmentResult {
  int n_jobs = 0;
  std::string manifest_path;
  std::vector<align::ManifestRecord> merged;
};
// Executes the config's plan: one WAV per job under out_dir/audio plus the
// merged manifest with provenance. speed_only restricts methods to S_si/S_sd.
AugmentResult run_augment_plan(const RunConfig& cfg, const std::string& out_dir,
                               bool speed_only);

struct PairFileEntry {
  align::UtterancePair pair;
};
void pairs_write(const std::vector<align::UtterancePair>& pairs,
                 const std::string& path);
std::vector<align::UtterancePair> pairs_read(const std::string& path);

struct TrainDcganResult {
  std::string checkpoint_path;
  std::string history_path;
  int n_pairs = 0;
};
TrainDcganResult run_train_dcgan(const RunConfig& cfg,
                                 const std::string& out_dir);

struct TrainSbganResult {
  std::string checkpoint_path;
  std::string history_path;
  int n_control_blocks = 0;
  int n_dys_blocks = 0;
  double delta_scale = 0.0;
};
TrainSbganResult run_train_sbgan(const RunConfig& cfg,
                                 const std::string& out_dir);

struct EvalResult {
  eval::SubgroupWer report;
  std::string nbest_path;
  std::string scores_path;
  std::string report_csv_path;
  int n_train = 0;
  int n_test = 0;
};
EvalResult run_eval(const RunConfig& cfg, const std::string& out_dir);

struct CombineResult {
  eval::SubgroupWer report;
  std::string nbest_path;
  std::string scores_path;
};
CombineResult run_combine(const RunConfig& cfg, const std::string& out_dir);

}  // namespace dysaug::cli

#endif  // DYSAUG_COMMANDS_H_
