// tests/cli_test.cc

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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "dysaug/commands.h"
#include "dysaug/config.h"
#include "dysaug/corpus.h"
#include "dysaug/plan.h"

using namespace dysaug;
using namespace dysaug::cli;
namespace fs = std::filesystem;

namespace {

align::ManifestRecord rec(const std::string& utt, const std::string& spk,
                          align::SpeakerType type, const std::string& block,
                          const std::string& word,
                          align::Severity sev = align::Severity::kNone) {
  align::ManifestRecord r;
  r.utt_id = utt;
  r.speaker_id = spk;
  r.speaker_type = type;
  r.block = block;
  r.word_id = word;
  r.transcript = {word};
  r.severity = sev;
  r.audio_path = "audio/" + utt + ".wav";
  return r;
}

std::vector<align::ManifestRecord> dys_fixture(int n, const char* block = "B1") {
  std::vector<align::ManifestRecord> m;
  for (int i = 0; i < n; ++i)
    m.push_back(rec("d" + std::to_string(i), "D01",
                    align::SpeakerType::kDysarthric, block,
                    "w" + std::to_string(i), align::Severity::kLow));
  return m;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::path("/tmp") / ("dysaug_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("plan: SI 2x over 10 dysarthric utterances gives 20 jobs cycling "
          "0.9 and 1.1") {
  auto manifest = dys_fixture(10);
  AugPlan plan;
  Directive d;
  d.speaker_type = align::SpeakerType::kDysarthric;
  d.blocks = {"B1", "B3"};
  d.method = Method::kSpeedSi;
  d.multiplier = 2;
  plan.directives = {d};
  auto jobs = plan_expansion(manifest, plan, {});
  CHECK(jobs.size() == 20);
  for (const auto& j : jobs)
    CHECK(j.factor == (j.replica % 2 == 0 ? 0.9 : 1.1));
}

TEST_CASE("plan: multiplier 1x emits one job per utterance") {
  auto manifest = dys_fixture(7);
  AugPlan plan;
  Directive d;
  d.speaker_type = align::SpeakerType::kDysarthric;
  d.blocks = {"B1"};
  d.method = Method::kSpeedSi;
  d.multiplier = 1;
  plan.directives = {d};
  CHECK(plan_expansion(manifest, plan, {}).size() == 7);
}

TEST_CASE("plan: mixed SG directives reproduce the 2x/5x grid count") {
  std::vector<align::ManifestRecord> manifest;
  int n1 = 6, n2 = 4;
  for (int i = 0; i < n1; ++i)
    manifest.push_back(rec("c13_" + std::to_string(i), "C01",
                           align::SpeakerType::kControl, i % 2 ? "B1" : "B3",
                           "w" + std::to_string(i)));
  for (int i = 0; i < n2; ++i)
    manifest.push_back(rec("c2_" + std::to_string(i), "C01",
                           align::SpeakerType::kControl, "B2",
                           "w" + std::to_string(i)));
  manifest.push_back(rec("d0", "D01", align::SpeakerType::kDysarthric, "B1",
                         "w0", align::Severity::kMedium));

  AugPlan plan;
  Directive d1;
  d1.speaker_type = align::SpeakerType::kControl;
  d1.blocks = {"B1", "B3"};
  d1.method = Method::kSpeedGan;
  d1.multiplier = 2;
  d1.target_speaker = "D01";
  Directive d2 = d1;
  d2.blocks = {"B2"};
  d2.multiplier = 5;
  plan.directives = {d1, d2};

  auto jobs = plan_expansion(manifest, plan, {{"D01", 0.7}});
  // recount from the emitted job list, independently of the formula
  int from_d1 = 0, from_d2 = 0;
  for (const auto& j : jobs) {
    REQUIRE(j.model_id == "dcgan_D01");
    if (j.source_utt.rfind("c13_", 0) == 0) ++from_d1;
    if (j.source_utt.rfind("c2_", 0) == 0) ++from_d2;
  }
  CHECK(from_d1 == 2 * n1);
  CHECK(from_d2 == 5 * n2);
  CHECK(static_cast<int>(jobs.size()) == 2 * n1 + 5 * n2);
}

TEST_CASE("plan: SD jitter schedule at 5x spans the documented factor set") {
  auto manifest = dys_fixture(1);
  std::vector<align::ManifestRecord> m = {
      rec("c0", "C01", align::SpeakerType::kControl, "B1", "w0")};
  AugPlan plan;
  Directive d;
  d.speaker_type = align::SpeakerType::kControl;
  d.blocks = {"B1"};
  d.method = Method::kSpeedSd;
  d.multiplier = 5;
  d.target_speaker = "D01";
  plan.directives = {d};
  double f = 0.6;
  auto jobs = plan_expansion(m, plan, {{"D01", f}});
  REQUIRE(jobs.size() == 5);
  std::multiset<double> got, want;
  for (const auto& j : jobs) got.insert(j.factor);
  for (double jit : {1.0, 0.9, 1.1, 0.95, 1.05}) want.insert(f * jit);
  CHECK(got == want);
}

TEST_CASE("plan: job count formula holds across random plans") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<align::ManifestRecord> manifest;
    const char* blocks[3] = {"B1", "B2", "B3"};
    int n = 5 + rng.uniform_int(20);
    for (int i = 0; i < n; ++i) {
      bool control = rng.uniform_int(2) == 0;
      manifest.push_back(rec(
          "u" + std::to_string(i), control ? "C01" : "D01",
          control ? align::SpeakerType::kControl
                  : align::SpeakerType::kDysarthric,
          blocks[rng.uniform_int(3)], "w" + std::to_string(i % 4),
          control ? align::Severity::kNone : align::Severity::kHigh));
    }
    AugPlan plan;
    int expected = 0;
    for (int di = 0; di < 2; ++di) {
      Directive d;
      d.speaker_type = di == 0 ? align::SpeakerType::kControl
                               : align::SpeakerType::kDysarthric;
      d.blocks = {blocks[rng.uniform_int(3)], blocks[rng.uniform_int(3)]};
      d.method = di == 0 ? Method::kSpeedSd : Method::kSpeedSi;
      d.multiplier = 1 + rng.uniform_int(5);
      if (method_needs_target(d.method)) d.target_speaker = "D01";
      int subset = 0;
      for (const auto& r : manifest)
        if (r.speaker_type == d.speaker_type && d.blocks.count(r.block))
          ++subset;
      if (subset == 0) continue;
      expected += subset * d.multiplier;
      plan.directives.push_back(d);
    }
    if (plan.directives.empty()) continue;
    auto jobs = plan_expansion(manifest, plan, {{"D01", 0.8}});
    CHECK(static_cast<int>(jobs.size()) == expected);
  }
}

TEST_CASE("plan: errors") {
  auto manifest = dys_fixture(3);
  AugPlan plan;
  Directive d;
  d.speaker_type = align::SpeakerType::kControl;  // subset is empty
  d.blocks = {"B1"};
  d.method = Method::kSpeedSi;
  d.multiplier = 1;
  plan.directives = {d};
  CHECK_THROWS_AS(plan_expansion(manifest, plan, {}), DataError);

  Directive ok = d;
  ok.speaker_type = align::SpeakerType::kDysarthric;
  plan.directives = {ok, ok};  // exact duplicate
  CHECK_THROWS_AS(plan_expansion(manifest, plan, {}), ConfigError);

  Directive sg = ok;
  sg.method = Method::kSpeedGan;
  sg.target_speaker = "D09";  // factor missing
  plan.directives = {sg};
  CHECK_THROWS_AS(plan_expansion(manifest, plan, {}), DataError);
}

TEST_CASE("manifest_merge") {
  auto original = dys_fixture(4);
  SUBCASE("zero augmented records is the identity") {
    auto merged = manifest_merge(original, {});
    CHECK(merged.size() == 4);
  }
  SUBCASE("2x expansion of n records gives 3n") {
    std::vector<align::ManifestRecord> augmented;
    for (const auto& r : original)
      for (int i = 0; i < 2; ++i) {
        align::ManifestRecord a = r;
        a.utt_id = r.utt_id + "_ssi_r" + std::to_string(i);
        align::Provenance p;
        p.source_utt_id = r.utt_id;
        p.method = "S_si";
        p.factor = i == 0 ? 0.9 : 1.1;
        p.replica = i;
        a.provenance = p;
        augmented.push_back(a);
      }
    CHECK(manifest_merge(original, augmented).size() == 12);
  }
  SUBCASE("duplicate utt ids and missing provenance are rejected") {
    std::vector<align::ManifestRecord> augmented = {original[0]};
    CHECK_THROWS_AS(manifest_merge(original, augmented), DataError);
    align::ManifestRecord a = original[0];
    a.utt_id = "fresh";
    augmented = {a};  // no provenance
    CHECK_THROWS_AS(manifest_merge(original, augmented), DataError);
  }
}

TEST_CASE("config parsing reports precise error paths") {
  CHECK_THROWS_AS(parse_config_text("not json"), ConfigError);
  try {
    parse_config_text(R"({"dcgan": {"epochs": -3}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("dcgan.epochs") != std::string::npos);
  }
  try {
    parse_config_text(R"({"dcgan": {"epoch": 3}})");  // typo
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("dcgan.epoch") != std::string::npos);
    CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
  }
  try {
    parse_config_text(
        R"({"plan": {"directives": [{"speaker_type": "control",
            "blocks": ["B9"], "method": "SG", "multiplier": 2,
            "target_speaker": "D01"}]}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("plan.directives[0].blocks[0]") !=
          std::string::npos);
  }
}

TEST_CASE("config round trips a full document") {
  RunConfig cfg = parse_config_text(R"({
    "seed": 42,
    "paths": {"manifest": "m.jsonl", "out_dir": "o", "models_dir": "mod"},
    "stft": {"window_len": 256, "hop_len": 128, "fft_len": 256},
    "features": {"mode": "log1p"},
    "dcgan": {"epochs": 10, "chunk_frames": 64, "paired_l1_weight": 0.5},
    "sbgan": {"k": 12, "hidden": [32, 48], "per_vector": true},
    "pair": {"target_speaker": "D02", "blocks": ["B1"]},
    "plan": {"directives": [
      {"speaker_type": "dysarthric", "blocks": ["B1", "B3"],
       "method": "S_si", "multiplier": 2}]},
    "eval": {"train_manifest": "t.jsonl", "test_manifest": "e.jsonl",
             "epochs": 3, "score_mode": "full_sum", "nbest": 10},
    "corpus": {"out_dir": "c", "words": 8}
  })");
  CHECK(cfg.seed == 42);
  CHECK(cfg.stft.window_len == 256);
  CHECK(cfg.features == gan::FeatureMode::kLog1p);
  CHECK(cfg.dcgan.epochs == 10);
  CHECK(cfg.dcgan.chunk_frames == 64);
  CHECK(cfg.dcgan.paired_l1_weight == 0.5);
  CHECK(cfg.dcgan.seed == 42);
  CHECK(cfg.sbgan.k == 12);
  CHECK(cfg.sbgan.sb_hidden == std::vector<int>{32, 48});
  CHECK(cfg.sbgan.sb_per_vector);
  CHECK(cfg.pair.target_speaker == "D02");
  REQUIRE(cfg.has_plan);
  REQUIRE(cfg.directives.size() == 1);
  CHECK(cfg.directives[0].multiplier == 2);
  CHECK(cfg.has_eval);
  CHECK(cfg.eval.score_mode == eval::ScoreMode::kFullSum);
  CHECK(cfg.eval.nbest == 10);
  CHECK(cfg.has_corpus);
  CHECK(cfg.corpus.n_words == 8);
  CHECK(!cfg.config_hash.empty());
}

TEST_CASE("corpus generator is deterministic and severity-ordered") {
  TempDir dir("corpus");
  CorpusConfig cc;
  cc.out_dir = (dir.path / "c1").string();
  cc.n_words = 4;
  cc.n_control = 1;
  cc.n_dys = 4;  // one speaker per severity
  cc.reps_per_block = 1;
  cc.seed = 5;
  CorpusOutputs out = generate_corpus(cc);
  CHECK(out.n_utterances == 4 * 3 * (1 + 4));

  auto manifest = align::manifest_read(out.manifest_path);
  CHECK(manifest.size() == static_cast<size_t>(out.n_utterances));
  auto segs = align::parse_ctm_file(out.ctm_path);
  CHECK(!segs.empty());

  // dysarthric speech is slower, and more so at lower intelligibility
  auto dur_of = [&](const std::string& spk) {
    for (const auto& r : manifest)
      if (r.speaker_id == spk && r.block == "B1" && r.word_id == "w00")
        return signal::wav_read(resolve_audio(cc.out_dir, r.audio_path))
            .duration();
    FAIL("speaker not found");
    return 0.0;
  };
  double c = dur_of("C01"), vl = dur_of("D01"), h = dur_of("D04");
  CHECK(vl > h);
  CHECK(h > c);

  // same seed reproduces byte-identical audio
  CorpusConfig cc2 = cc;
  cc2.out_dir = (dir.path / "c2").string();
  generate_corpus(cc2);
  std::ifstream a(fs::path(cc.out_dir) / "audio" / "D01_B1_w00_r0.wav",
                  std::ios::binary);
  std::ifstream b(fs::path(cc2.out_dir) / "audio" / "D01_B1_w00_r0.wav",
                  std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(a)),
                 std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(b)),
                 std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  CHECK(!sa.empty());
}

TEST_CASE("sd factors from the synthetic corpus slow control speech down") {
  TempDir dir("sdfac");
  CorpusConfig cc;
  cc.out_dir = dir.path.string();
  cc.n_words = 3;
  cc.n_control = 2;
  cc.n_dys = 2;
  cc.reps_per_block = 1;
  cc.seed = 1;
  CorpusOutputs out = generate_corpus(cc);
  auto manifest = align::manifest_read(out.manifest_path);
  auto factors = compute_sd_factors(manifest, out.ctm_path);
  REQUIRE(factors.size() == 2);
  // dysarthric tempo multipliers exceed the control spread, so factors < 1
  for (const auto& [spk, f] : factors) {
    CHECK(f < 1.0);
    CHECK(f > 0.25);
  }
  // VL speaker (D01, tempo 1.9) is slower than L (D02, tempo 1.7)
  CHECK(factors.at("D01") < factors.at("D02"));
}

TEST_CASE("augment plan end to end: counts, reachability, determinism") {
  TempDir dir("aug");
  CorpusConfig cc;
  cc.out_dir = (dir.path / "corpus").string();
  cc.n_words = 3;
  cc.n_control = 1;
  cc.n_dys = 1;
  cc.reps_per_block = 1;
  cc.seed = 3;
  CorpusOutputs cout_ = generate_corpus(cc);

  RunConfig cfg = parse_config_text(R"({
    "seed": 11,
    "plan": {"directives": [
      {"speaker_type": "dysarthric", "blocks": ["B1", "B3"],
       "method": "S_si", "multiplier": 2}]}
  })");
  cfg.paths.manifest = cout_.manifest_path;
  cfg.paths.audio_root = cc.out_dir;
  cfg.paths.ctm = cout_.ctm_path;

  std::string out1 = (dir.path / "out1").string();
  AugmentResult r1 = run_augment_plan(cfg, out1, true);
  // dysarthric B1+B3 utts: 3 words x 2 blocks = 6 -> 12 jobs
  CHECK(r1.n_jobs == 12);

  // every augmented file exists and is reachable from the manifest; no orphans
  auto merged = align::manifest_read(r1.manifest_path);
  std::set<std::string> manifest_files;
  int augmented_count = 0;
  for (const auto& r : merged) {
    if (!r.provenance) continue;
    ++augmented_count;
    CHECK(fs::exists(r.audio_path));
    manifest_files.insert(fs::path(r.audio_path).filename().string());
    CHECK(r.provenance->method == "S_si");
  }
  CHECK(augmented_count == 12);
  std::set<std::string> disk_files;
  for (const auto& entry : fs::directory_iterator(fs::path(out1) / "audio"))
    disk_files.insert(entry.path().filename().string());
  CHECK(disk_files == manifest_files);

  // identical seed and config give byte-identical WAVs
  std::string out2 = (dir.path / "out2").string();
  run_augment_plan(cfg, out2, true);
  for (const auto& name : disk_files) {
    std::ifstream a(fs::path(out1) / "audio" / name, std::ios::binary);
    std::ifstream b(fs::path(out2) / "audio" / name, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)),
                   std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)),
                   std::istreambuf_iterator<char>());
    CHECK(sa == sb);
  }

  // the split manifests partition the merged manifest
  auto train = align::manifest_read(out1 + "/manifest_train.jsonl");
  auto test = align::manifest_read(out1 + "/manifest_test.jsonl");
  CHECK(train.size() + test.size() == merged.size());
  for (const auto& r : test) {
    CHECK(r.block == "B2");
    CHECK(r.speaker_type == align::SpeakerType::kDysarthric);
    CHECK_FALSE(r.provenance.has_value());
  }
}

TEST_CASE("perturb rejects GAN methods") {
  TempDir dir("speedonly");
  CorpusConfig cc;
  cc.out_dir = (dir.path / "corpus").string();
  cc.n_words = 2;
  cc.n_control = 1;
  cc.n_dys = 1;
  cc.reps_per_block = 1;
  CorpusOutputs cout_ = generate_corpus(cc);

  RunConfig cfg = parse_config_text(R"({
    "plan": {"directives": [
      {"speaker_type": "control", "blocks": ["B1"], "method": "SG",
       "multiplier": 1, "target_speaker": "D01"}]}
  })");
  cfg.paths.manifest = cout_.manifest_path;
  cfg.paths.audio_root = cc.out_dir;
  cfg.paths.ctm = cout_.ctm_path;
  CHECK_THROWS_AS(run_augment_plan(cfg, (dir.path / "o").string(), true),
                  ConfigError);
}

TEST_SUITE_END();
