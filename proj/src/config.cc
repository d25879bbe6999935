// src/config.cc

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

#include "dysaug/config.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dysaug::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
}

int get_pos_int(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<int64_t>() < 1)
    fail(path, "expected positive integer");
  return j.get<int>();
}

double get_pos_double(const json& j, const std::string& path) {
  if (!j.is_number() || j.get<double>() <= 0.0)
    fail(path, "expected positive number");
  return j.get<double>();
}

double get_nonneg_double(const json& j, const std::string& path) {
  if (!j.is_number() || j.get<double>() < 0.0)
    fail(path, "expected nonnegative number");
  return j.get<double>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected boolean");
  return j.get<bool>();
}

signal::StftParams parse_stft(const json& j, const std::string& path,
                              signal::StftParams defaults) {
  check_keys(j, path, {"window_len", "hop_len", "fft_len", "window"});
  signal::StftParams p = defaults;
  if (j.contains("window_len")) p.window_len = get_pos_int(j["window_len"], path + ".window_len");
  if (j.contains("hop_len")) p.hop_len = get_pos_int(j["hop_len"], path + ".hop_len");
  if (j.contains("fft_len")) p.fft_len = get_pos_int(j["fft_len"], path + ".fft_len");
  if (j.contains("window")) p.window = get_string(j["window"], path + ".window");
  try {
    p.validate();
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
  return p;
}

gan::GanTrainConfig parse_gan(const json& j, const std::string& path,
                              gan::GanTrainConfig defaults) {
  check_keys(j, path,
             {"epochs", "batch_size", "lr", "adam_beta1", "adam_beta2",
              "paired_l1_weight", "chunk_frames", "k", "delta_scale", "hidden",
              "per_vector"});
  gan::GanTrainConfig g = defaults;
  if (j.contains("epochs")) g.epochs = get_pos_int(j["epochs"], path + ".epochs");
  if (j.contains("batch_size"))
    g.batch_size = get_pos_int(j["batch_size"], path + ".batch_size");
  if (j.contains("lr")) g.lr = get_pos_double(j["lr"], path + ".lr");
  if (j.contains("adam_beta1"))
    g.adam_beta1 = get_nonneg_double(j["adam_beta1"], path + ".adam_beta1");
  if (j.contains("adam_beta2"))
    g.adam_beta2 = get_nonneg_double(j["adam_beta2"], path + ".adam_beta2");
  if (j.contains("paired_l1_weight"))
    g.paired_l1_weight =
        get_nonneg_double(j["paired_l1_weight"], path + ".paired_l1_weight");
  if (j.contains("chunk_frames"))
    g.chunk_frames = get_pos_int(j["chunk_frames"], path + ".chunk_frames");
  if (j.contains("k")) g.k = get_pos_int(j["k"], path + ".k");
  if (j.contains("delta_scale"))
    g.delta_scale = get_nonneg_double(j["delta_scale"], path + ".delta_scale");
  if (j.contains("hidden")) {
    if (!j["hidden"].is_array() || j["hidden"].size() != 2)
      fail(path + ".hidden", "expected an array of two widths");
    g.sb_hidden = {get_pos_int(j["hidden"][0], path + ".hidden[0]"),
                   get_pos_int(j["hidden"][1], path + ".hidden[1]")};
  }
  if (j.contains("per_vector"))
    g.sb_per_vector = get_bool(j["per_vector"], path + ".per_vector");
  return g;
}

std::set<std::string> parse_blocks(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty block array");
  std::set<std::string> blocks;
  for (size_t i = 0; i < j.size(); ++i) {
    std::string b = get_string(j[i], path + "[" + std::to_string(i) + "]");
    if (b != "B1" && b != "B2" && b != "B3")
      fail(path + "[" + std::to_string(i) + "]", "blocks are B1 | B2 | B3");
    blocks.insert(b);
  }
  return blocks;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  check_keys(j, "",
             {"seed", "paths", "stft", "features", "dcgan", "sbgan", "pair",
              "train", "plan", "eval", "combine", "corpus"});

  RunConfig cfg;
  cfg.config_hash = [&] {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(j.dump())));
    return std::string(buf);
  }();

  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<int64_t>() < 0)
      fail("seed", "expected nonnegative integer");
    cfg.seed = j["seed"].get<uint64_t>();
  }

  if (j.contains("paths")) {
    const json& p = j["paths"];
    check_keys(p, "paths",
               {"manifest", "ctm", "audio_root", "out_dir", "models_dir",
                "pairs"});
    if (p.contains("manifest"))
      cfg.paths.manifest = get_string(p["manifest"], "paths.manifest");
    if (p.contains("ctm")) cfg.paths.ctm = get_string(p["ctm"], "paths.ctm");
    if (p.contains("audio_root"))
      cfg.paths.audio_root = get_string(p["audio_root"], "paths.audio_root");
    if (p.contains("out_dir"))
      cfg.paths.out_dir = get_string(p["out_dir"], "paths.out_dir");
    if (p.contains("models_dir"))
      cfg.paths.models_dir = get_string(p["models_dir"], "paths.models_dir");
    if (p.contains("pairs"))
      cfg.paths.pairs = get_string(p["pairs"], "paths.pairs");
  }

  if (j.contains("stft")) cfg.stft = parse_stft(j["stft"], "stft", cfg.stft);

  if (j.contains("features")) {
    check_keys(j["features"], "features", {"mode"});
    if (j["features"].contains("mode")) {
      try {
        cfg.features = gan::feature_mode_from_string(
            get_string(j["features"]["mode"], "features.mode"));
      } catch (const ConfigError& e) {
        fail("features.mode", e.what());
      }
    }
  }

  if (j.contains("dcgan")) cfg.dcgan = parse_gan(j["dcgan"], "dcgan", cfg.dcgan);
  if (j.contains("sbgan")) cfg.sbgan = parse_gan(j["sbgan"], "sbgan", cfg.sbgan);

  if (j.contains("pair")) {
    const json& p = j["pair"];
    check_keys(p, "pair", {"target_speaker", "blocks", "duration_source"});
    if (p.contains("target_speaker"))
      cfg.pair.target_speaker =
          get_string(p["target_speaker"], "pair.target_speaker");
    if (p.contains("blocks"))
      cfg.pair.blocks = parse_blocks(p["blocks"], "pair.blocks");
    if (p.contains("duration_source")) {
      cfg.pair.duration_source =
          get_string(p["duration_source"], "pair.duration_source");
      if (cfg.pair.duration_source != "auto" &&
          cfg.pair.duration_source != "alignment" &&
          cfg.pair.duration_source != "audio")
        fail("pair.duration_source", "expected auto | alignment | audio");
    }
  }

  if (j.contains("train")) {
    const json& p = j["train"];
    check_keys(p, "train", {"target_speaker", "blocks"});
    if (p.contains("target_speaker"))
      cfg.train.target_speaker =
          get_string(p["target_speaker"], "train.target_speaker");
    if (p.contains("blocks"))
      cfg.train.blocks = parse_blocks(p["blocks"], "train.blocks");
  }

  if (j.contains("plan")) {
    cfg.has_plan = true;
    const json& p = j["plan"];
    check_keys(p, "plan", {"directives"});
    if (!p.contains("directives") || !p["directives"].is_array() ||
        p["directives"].empty())
      fail("plan.directives", "expected a nonempty array");
    int i = 0;
    for (const json& dj : p["directives"]) {
      std::string dp = "plan.directives[" + std::to_string(i++) + "]";
      check_keys(dj, dp,
                 {"speaker_type", "blocks", "method", "multiplier",
                  "target_speaker"});
      Directive d;
      try {
        d.speaker_type = align::speaker_type_from_string(
            get_string(dj.at("speaker_type"), dp + ".speaker_type"));
      } catch (const json::exception&) {
        fail(dp + ".speaker_type", "missing");
      } catch (const DataError& e) {
        fail(dp + ".speaker_type", e.what());
      }
      if (!dj.contains("blocks")) fail(dp + ".blocks", "missing");
      d.blocks = parse_blocks(dj["blocks"], dp + ".blocks");
      if (!dj.contains("method")) fail(dp + ".method", "missing");
      try {
        d.method = method_from_string(get_string(dj["method"], dp + ".method"));
      } catch (const ConfigError& e) {
        fail(dp + ".method", e.what());
      }
      if (!dj.contains("multiplier")) fail(dp + ".multiplier", "missing");
      d.multiplier = get_pos_int(dj["multiplier"], dp + ".multiplier");
      if (dj.contains("target_speaker"))
        d.target_speaker =
            get_string(dj["target_speaker"], dp + ".target_speaker");
      if (method_needs_target(d.method) && d.target_speaker.empty())
        fail(dp, "method " + to_string(d.method) + " requires target_speaker");
      cfg.directives.push_back(std::move(d));
    }
  }

  if (j.contains("eval")) {
    cfg.has_eval = true;
    const json& e = j["eval"];
    check_keys(e, "eval",
               {"train_manifest", "test_manifest", "stft", "features",
                "epochs", "lr", "beta_ctc", "beta_seve", "score_mode", "nbest",
                "system_id", "decode"});
    if (e.contains("train_manifest"))
      cfg.eval.train_manifest =
          get_string(e["train_manifest"], "eval.train_manifest");
    if (e.contains("test_manifest"))
      cfg.eval.test_manifest =
          get_string(e["test_manifest"], "eval.test_manifest");
    if (e.contains("stft"))
      cfg.eval.stft = parse_stft(e["stft"], "eval.stft", cfg.eval.stft);
    if (e.contains("features")) {
      check_keys(e["features"], "eval.features", {"mode"});
      cfg.eval.features = gan::feature_mode_from_string(
          get_string(e["features"]["mode"], "eval.features.mode"));
    }
    if (e.contains("epochs"))
      cfg.eval.epochs = get_pos_int(e["epochs"], "eval.epochs");
    if (e.contains("lr")) cfg.eval.lr = get_pos_double(e["lr"], "eval.lr");
    if (e.contains("beta_ctc"))
      cfg.eval.beta_ctc = get_nonneg_double(e["beta_ctc"], "eval.beta_ctc");
    if (e.contains("beta_seve"))
      cfg.eval.beta_seve = get_nonneg_double(e["beta_seve"], "eval.beta_seve");
    if (e.contains("score_mode")) {
      try {
        cfg.eval.score_mode = eval::score_mode_from_string(
            get_string(e["score_mode"], "eval.score_mode"));
      } catch (const ConfigError& err) {
        fail("eval.score_mode", err.what());
      }
    }
    if (e.contains("nbest")) {
      cfg.eval.nbest = get_pos_int(e["nbest"], "eval.nbest");
      if (cfg.eval.nbest > eval::kMaxNBest)
        fail("eval.nbest", "at most " + std::to_string(eval::kMaxNBest));
    }
    if (e.contains("system_id"))
      cfg.eval.system_id = get_string(e["system_id"], "eval.system_id");
    if (e.contains("decode")) {
      cfg.eval.decode = get_string(e["decode"], "eval.decode");
      if (cfg.eval.decode != "nbest" && cfg.eval.decode != "greedy")
        fail("eval.decode", "expected nbest | greedy");
    }
  }

  if (j.contains("combine")) {
    cfg.has_combine = true;
    const json& c = j["combine"];
    check_keys(c, "combine",
               {"mode", "systems", "base_system", "rescoring_system", "weight",
                "test_manifest"});
    if (c.contains("mode")) {
      cfg.combine.mode = get_string(c["mode"], "combine.mode");
      if (cfg.combine.mode != "interpolate" && cfg.combine.mode != "rescore")
        fail("combine.mode", "expected interpolate | rescore");
    }
    if (!c.contains("systems") || !c["systems"].is_array() ||
        c["systems"].empty())
      fail("combine.systems", "expected a nonempty array");
    int i = 0;
    for (const json& sj : c["systems"]) {
      std::string sp = "combine.systems[" + std::to_string(i++) + "]";
      check_keys(sj, sp, {"id", "nbest", "weight"});
      CombineSystem s;
      if (!sj.contains("id")) fail(sp + ".id", "missing");
      s.id = get_string(sj["id"], sp + ".id");
      if (!sj.contains("nbest")) fail(sp + ".nbest", "missing");
      s.nbest_path = get_string(sj["nbest"], sp + ".nbest");
      if (sj.contains("weight")) {
        if (!sj["weight"].is_number()) fail(sp + ".weight", "expected number");
        s.weight = sj["weight"].get<double>();
      }
      cfg.combine.systems.push_back(std::move(s));
    }
    if (c.contains("base_system"))
      cfg.combine.base_system =
          get_string(c["base_system"], "combine.base_system");
    if (c.contains("rescoring_system"))
      cfg.combine.rescoring_system =
          get_string(c["rescoring_system"], "combine.rescoring_system");
    if (c.contains("weight")) {
      if (!c["weight"].is_number()) fail("combine.weight", "expected number");
      cfg.combine.weight = c["weight"].get<double>();
      if (cfg.combine.weight < 0.0 || cfg.combine.weight > 1.0)
        fail("combine.weight", "expected a value in [0, 1]");
    }
    if (c.contains("test_manifest"))
      cfg.combine.test_manifest =
          get_string(c["test_manifest"], "combine.test_manifest");
  }

  if (j.contains("corpus")) {
    cfg.has_corpus = true;
    const json& c = j["corpus"];
    check_keys(c, "corpus",
               {"out_dir", "words", "control_speakers", "dys_speakers",
                "reps_per_block", "sample_rate"});
    if (c.contains("out_dir"))
      cfg.corpus.out_dir = get_string(c["out_dir"], "corpus.out_dir");
    if (c.contains("words"))
      cfg.corpus.n_words = get_pos_int(c["words"], "corpus.words");
    if (c.contains("control_speakers"))
      cfg.corpus.n_control =
          get_pos_int(c["control_speakers"], "corpus.control_speakers");
    if (c.contains("dys_speakers"))
      cfg.corpus.n_dys = get_pos_int(c["dys_speakers"], "corpus.dys_speakers");
    if (c.contains("reps_per_block"))
      cfg.corpus.reps_per_block =
          get_pos_int(c["reps_per_block"], "corpus.reps_per_block");
    if (c.contains("sample_rate"))
      cfg.corpus.sample_rate =
          get_pos_int(c["sample_rate"], "corpus.sample_rate");
  }

  // training configs inherit the root seed unless the sections say otherwise
  cfg.dcgan.seed = cfg.seed;
  cfg.sbgan.seed = cfg.seed;
  cfg.corpus.seed = cfg.seed;
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace dysaug::cli
