// tools/dysaug.cc

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

// dysaug <subcommand> --config <path> [--seed N] [--out DIR] [--force]
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical-check
// failure.

#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "dysaug/commands.h"

namespace {

using dysaug::cli::CommandContext;

int dispatch(const std::string& name, CommandContext& ctx) {
  using Handler = std::function<int(CommandContext&)>;
  static const std::map<std::string, Handler> handlers = {
      {"make-corpus", dysaug::cli::cmd_make_corpus},
      {"perturb", dysaug::cli::cmd_perturb},
      {"pair", dysaug::cli::cmd_pair},
      {"train-dcgan", dysaug::cli::cmd_train_dcgan},
      {"train-sbgan", dysaug::cli::cmd_train_sbgan},
      {"augment", dysaug::cli::cmd_augment},
      {"eval", dysaug::cli::cmd_eval},
      {"combine", dysaug::cli::cmd_combine},
      {"gradcheck", dysaug::cli::cmd_gradcheck},
      {"report", dysaug::cli::cmd_report},
  };
  return handlers.at(name)(ctx);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dysarthric speech augmentation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int64_t seed_override = -1;
  bool force = false;

  const char* subcommands[] = {"make-corpus", "perturb",     "pair",
                               "train-dcgan", "train-sbgan", "augment",
                               "eval",        "combine",     "gradcheck",
                               "report"};
  const char* descriptions[] = {
      "generate the bundled synthetic mini-corpus",
      "run a speed-perturbation expansion plan",
      "build parallel control/dysarthric utterance pairs",
      "train the parallel-data spectrogram DCGAN for a target speaker",
      "train the non-parallel spectral basis GAN for a target speaker",
      "run a full expansion plan (speed and GAN methods)",
      "train the toy CTC/severity evaluator and score a test set",
      "combine system outputs via interpolation or two-pass rescoring",
      "finite-difference check of every differentiable op",
      "aggregate per-utterance scores into the subgroup WER table"};

  for (size_t i = 0; i < std::size(subcommands); ++i) {
    CLI::App* sub = app.add_subcommand(subcommands[i], descriptions[i]);
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required(std::string(subcommands[i]) != "gradcheck" &&
                   std::string(subcommands[i]) != "report");
    sub->add_option("--seed", seed_override, "override the config seed");
    sub->add_option("--out", out_dir, "override paths.out_dir");
    sub->add_flag("--force", force, "overwrite an existing output record");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    CommandContext ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    ctx.cfg = config_path.empty()
                  ? dysaug::cli::parse_config_text("{}")
                  : dysaug::cli::parse_config_file(config_path);
    if (seed_override >= 0) {
      ctx.cfg.seed = static_cast<uint64_t>(seed_override);
      ctx.cfg.dcgan.seed = ctx.cfg.seed;
      ctx.cfg.sbgan.seed = ctx.cfg.seed;
      ctx.cfg.corpus.seed = ctx.cfg.seed;
    }
    ctx.out_dir = out_dir.empty() ? ctx.cfg.paths.out_dir : out_dir;
    ctx.force = force;
    return dispatch(ctx.command, ctx);
  } catch (const dysaug::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dysaug::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const dysaug::NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
