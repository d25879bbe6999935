// src/commands.cc

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

#include "dysaug/commands.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <json.hpp>

#include "dysaug/corpus.h"
#include "dysaug/gradcheck.h"
#include "dysaug/pipeline.h"
#include "dysaug/resample.h"
#include "dysaug/waveform.h"

namespace dysaug::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void guard_and_prepare(const CommandContext& ctx) {
  fs::create_directories(ctx.out_dir);
  fs::path meta = fs::path(ctx.out_dir) / (ctx.command + "_meta.json");
  if (fs::exists(meta) && !ctx.force)
    throw DataError("output record " + meta.string() +
                    " already exists; pass --force to overwrite");
}

void write_meta(const CommandContext& ctx, json outputs) {
  json j;
  j["command"] = ctx.command;
  j["seed"] = ctx.cfg.seed;
  j["config_hash"] = ctx.cfg.config_hash;
  j["outputs"] = std::move(outputs);
  fs::path meta = fs::path(ctx.out_dir) / (ctx.command + "_meta.json");
  std::ofstream f(meta);
  if (!f) throw DataError("cannot write " + meta.string());
  f << j.dump(2) << "\n";
}

std::map<std::string, const align::ManifestRecord*> index_by_utt(
    const std::vector<align::ManifestRecord>& manifest) {
  std::map<std::string, const align::ManifestRecord*> by_utt;
  for (const auto& r : manifest) by_utt[r.utt_id] = &r;
  return by_utt;
}

Mat take_cols(const Mat& m, int cols) {
  Mat out(m.rows, cols);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < cols; ++c) out.at(r, c) = m.at(r, c);
  return out;
}

Mat tensor_to_mat(const autograd::Tensor& t) {
  Mat m(t.shape()[0], t.shape()[1]);
  m.v = t.data();
  return m;
}

// UASpeech-style split: test = original dysarthric B2 recordings; everything
// else (all control blocks, dysarthric B1/B3, every augmented record) trains.
void write_train_test_split(const std::vector<align::ManifestRecord>& records,
                            const std::string& out_dir) {
  std::vector<align::ManifestRecord> train, test;
  for (const auto& r : records) {
    bool is_test = r.speaker_type == align::SpeakerType::kDysarthric &&
                   r.block == "B2" && !r.provenance;
    (is_test ? test : train).push_back(r);
  }
  align::manifest_write(train,
                        (fs::path(out_dir) / "manifest_train.jsonl").string());
  align::manifest_write(test,
                        (fs::path(out_dir) / "manifest_test.jsonl").string());
}

}  // namespace

std::string resolve_audio(const std::string& audio_root,
                          const std::string& audio_path) {
  fs::path p(audio_path);
  if (p.is_absolute()) return audio_path;
  return (fs::path(audio_root) / p).string();
}

std::map<std::string, double> compute_sd_factors(
    const std::vector<align::ManifestRecord>& manifest,
    const std::string& ctm_path) {
  if (ctm_path.empty())
    throw ConfigError(
        "speaker-dependent factors need forced alignments: set paths.ctm");
  auto segments = align::parse_ctm_file(ctm_path);
  std::map<std::string, std::string> utt2spk;
  std::set<std::string> control_speakers, dys_speakers;
  for (const auto& r : manifest) {
    utt2spk[r.utt_id] = r.speaker_id;
    if (r.speaker_type == align::SpeakerType::kControl)
      control_speakers.insert(r.speaker_id);
    else
      dys_speakers.insert(r.speaker_id);
  }
  auto stats = align::speaker_duration_stats(segments, utt2spk,
                                             align::default_silence_labels());
  double ref = align::control_reference_duration(stats, control_speakers);
  std::map<std::string, double> factors;
  for (const auto& spk : dys_speakers) {
    auto it = stats.find(spk);
    if (it == stats.end())
      throw DataError("no alignment statistics for dysarthric speaker '" +
                      spk + "'");
    factors[spk] = align::sd_factor(ref, it->second.mean_phone_dur);
  }
  return factors;
}

std::map<std::string, double> utterance_durations(
    const std::vector<align::ManifestRecord>& manifest,
    const std::string& audio_root, const std::string& ctm_path,
    bool use_alignment) {
  std::map<std::string, double> durs;
  if (use_alignment) {
    if (ctm_path.empty())
      throw ConfigError("duration_source=alignment requires paths.ctm");
    const auto& silence = align::default_silence_labels();
    for (const auto& seg : align::parse_ctm_file(ctm_path)) {
      if (silence.count(seg.label)) continue;
      durs[seg.utt_id] += seg.dur;
    }
  } else {
    for (const auto& r : manifest) {
      signal::Waveform w =
          signal::wav_read(resolve_audio(audio_root, r.audio_path));
      durs[r.utt_id] = w.duration();
    }
  }
  return durs;
}

void pairs_write(const std::vector<align::UtterancePair>& pairs,
                 const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write pairs " + path);
  for (const auto& p : pairs) {
    json j;
    j["control_utt"] = p.control_utt;
    j["dysarthric_utt"] = p.dysarthric_utt;
    j["word_id"] = p.word_id;
    j["scale_factor"] = p.scale_factor;
    f << j.dump() << "\n";
  }
}

std::vector<align::UtterancePair> pairs_read(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open pairs " + path);
  std::vector<align::UtterancePair> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataError(path + ": bad JSON line");
    align::UtterancePair p;
    try {
      p.control_utt = j.at("control_utt").get<std::string>();
      p.dysarthric_utt = j.at("dysarthric_utt").get<std::string>();
      p.word_id = j.at("word_id").get<std::string>();
      p.scale_factor = j.at("scale_factor").get<double>();
    } catch (const json::exception& e) {
      throw DataError(path + ": malformed pair record: " + e.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

// ---- augment ----

AugmentResult run_augment_plan(const RunConfig& cfg, const std::string& out_dir,
                               bool speed_only) {
  if (!cfg.has_plan) throw ConfigError("config: missing 'plan' section");
  if (cfg.paths.manifest.empty())
    throw ConfigError("config: paths.manifest is required");
  auto manifest = align::manifest_read(cfg.paths.manifest);
  auto by_utt = index_by_utt(manifest);

  std::map<std::string, align::Severity> speaker_severity;
  for (const auto& r : manifest) speaker_severity[r.speaker_id] = r.severity;

  AugPlan plan;
  plan.directives = cfg.directives;
  plan.out_root = out_dir;
  plan.seed = cfg.seed;

  bool needs_sd = false;
  for (const auto& d : plan.directives) {
    if (speed_only && method_needs_model(d.method))
      throw ConfigError("perturb handles speed methods only; run augment for " +
                        to_string(d.method));
    if (method_needs_target(d.method)) needs_sd = true;
  }
  std::map<std::string, double> sd_factors;
  if (needs_sd) sd_factors = compute_sd_factors(manifest, cfg.paths.ctm);

  std::vector<Job> jobs = plan_expansion(manifest, plan, sd_factors);
  fs::create_directories(fs::path(out_dir) / "audio");

  std::map<std::string, gan::DcganModels> dcgan_cache;
  std::map<std::string, gan::SbganModels> sbgan_cache;
  gan::PipelineConfig pcfg;
  pcfg.stft = cfg.stft;
  pcfg.features = cfg.features;

  std::vector<align::ManifestRecord> augmented;
  for (const Job& job : jobs) {
    const align::ManifestRecord& src = *by_utt.at(job.source_utt);
    signal::Waveform wav = signal::wav_read(
        resolve_audio(cfg.paths.audio_root, src.audio_path));

    signal::Waveform out;
    switch (job.method) {
      case Method::kSpeedSi:
      case Method::kSpeedSd:
        out = gan::pipeline_speed_only(wav, job.factor);
        break;
      case Method::kSpeedGan: {
        auto it = dcgan_cache.find(job.model_id);
        if (it == dcgan_cache.end()) {
          std::string ckpt = (fs::path(cfg.paths.models_dir) /
                              (job.model_id + ".ckpt")).string();
          it = dcgan_cache.emplace(job.model_id, gan::load_dcgan(ckpt)).first;
        }
        const gan::DcganModels& m = it->second;
        if (m.d.input_bins != cfg.stft.num_bins())
          throw DataError("model " + job.model_id +
                          " was trained with a different stft front end");
        gan::PipelineConfig jcfg = pcfg;
        jcfg.chunk_frames = m.d.input_frames;
        out = gan::pipeline_speed_gan(wav, job.factor, m.g, jcfg);
        break;
      }
      case Method::kSpectralBasisGan: {
        auto it = sbgan_cache.find(job.model_id);
        if (it == sbgan_cache.end()) {
          std::string ckpt = (fs::path(cfg.paths.models_dir) /
                              (job.model_id + ".ckpt")).string();
          it = sbgan_cache.emplace(job.model_id, gan::load_sbgan(ckpt)).first;
        }
        const gan::SbganModels& m = it->second;
        if (m.g.basis_rows != cfg.stft.num_bins())
          throw DataError("model " + job.model_id +
                          " was trained with a different stft front end");
        gan::PipelineConfig jcfg = pcfg;
        jcfg.k = m.g.basis_cols;
        jcfg.delta_scale = m.g.delta_scale;
        out = gan::pipeline_sbgan(wav, job.factor, m.g, jcfg);
        break;
      }
    }

    std::string rel = "audio/" + job.out_utt_id + ".wav";
    std::string abs_path = (fs::path(out_dir) / rel).string();
    signal::wav_write(out, abs_path);

    align::ManifestRecord r = src;
    r.utt_id = job.out_utt_id;
    r.audio_path = abs_path;
    if (!job.target_speaker.empty()) {
      // transformed toward the target dysarthric speaker: the synthetic
      // utterance belongs to that speaker's training data
      r.speaker_id = job.target_speaker;
      r.speaker_type = align::SpeakerType::kDysarthric;
      auto sev = speaker_severity.find(job.target_speaker);
      if (sev == speaker_severity.end())
        throw DataError("target speaker '" + job.target_speaker +
                        "' not present in manifest");
      r.severity = sev->second;
    }
    align::Provenance prov;
    prov.source_utt_id = job.source_utt;
    prov.method = to_string(job.method);
    prov.factor = job.factor;
    prov.model_id = job.model_id;
    prov.replica = job.replica;
    r.provenance = prov;
    augmented.push_back(std::move(r));
  }

  AugmentResult res;
  res.n_jobs = static_cast<int>(jobs.size());
  res.merged = manifest_merge(manifest, augmented);
  res.manifest_path = (fs::path(out_dir) / "manifest.jsonl").string();
  align::manifest_write(res.merged, res.manifest_path);
  write_train_test_split(res.merged, out_dir);
  return res;
}

// ---- training ----

TrainDcganResult run_train_dcgan(const RunConfig& cfg,
                                 const std::string& out_dir) {
  if (cfg.paths.manifest.empty() || cfg.paths.pairs.empty())
    throw ConfigError("config: paths.manifest and paths.pairs are required");
  std::string target = cfg.train.target_speaker.empty()
                           ? cfg.pair.target_speaker
                           : cfg.train.target_speaker;
  if (target.empty())
    throw ConfigError("config: train.target_speaker is required");

  auto manifest = align::manifest_read(cfg.paths.manifest);
  auto by_utt = index_by_utt(manifest);
  auto pairs = pairs_read(cfg.paths.pairs);

  std::vector<gan::SpecPair> spec_pairs;
  for (const auto& p : pairs) {
    auto ci = by_utt.find(p.control_utt);
    auto di = by_utt.find(p.dysarthric_utt);
    if (ci == by_utt.end() || di == by_utt.end())
      throw DataError("pair references unknown utterance '" + p.control_utt +
                      "' or '" + p.dysarthric_utt + "'");
    signal::Waveform wc = signal::wav_read(
        resolve_audio(cfg.paths.audio_root, ci->second->audio_path));
    signal::Waveform wd = signal::wav_read(
        resolve_audio(cfg.paths.audio_root, di->second->audio_path));
    signal::Waveform wc_matched = signal::resample_speed(wc, p.scale_factor);
    Mat mc = gan::spectrogram_features(wc_matched, cfg.stft, cfg.features);
    Mat md = gan::spectrogram_features(wd, cfg.stft, cfg.features);
    int frames = std::min(mc.cols, md.cols);
    gan::SpecPair sp;
    sp.control = take_cols(mc, frames);
    sp.dys = take_cols(md, frames);
    spec_pairs.push_back(std::move(sp));
  }

  gan::DcganModels m = gan::dcgan_train(spec_pairs, cfg.dcgan);

  fs::create_directories(cfg.paths.models_dir);
  fs::create_directories(out_dir);
  TrainDcganResult res;
  res.n_pairs = static_cast<int>(spec_pairs.size());
  res.checkpoint_path =
      (fs::path(cfg.paths.models_dir) / ("dcgan_" + target + ".ckpt")).string();
  res.history_path =
      (fs::path(out_dir) / ("dcgan_" + target + "_history.csv")).string();
  gan::save_dcgan(res.checkpoint_path, m, cfg.dcgan);
  gan::history_write_csv(m.history, res.history_path);
  return res;
}

TrainSbganResult run_train_sbgan(const RunConfig& cfg,
                                 const std::string& out_dir) {
  if (cfg.paths.manifest.empty())
    throw ConfigError("config: paths.manifest is required");
  std::string target = cfg.train.target_speaker.empty()
                           ? cfg.pair.target_speaker
                           : cfg.train.target_speaker;
  if (target.empty())
    throw ConfigError("config: train.target_speaker is required");

  auto manifest = align::manifest_read(cfg.paths.manifest);
  std::vector<Mat> control_blocks, dys_blocks;
  for (const auto& r : manifest) {
    if (!cfg.train.blocks.count(r.block)) continue;
    bool is_control = r.speaker_type == align::SpeakerType::kControl;
    bool is_target = r.speaker_id == target;
    if (!is_control && !is_target) continue;
    signal::Waveform w = signal::wav_read(
        resolve_audio(cfg.paths.audio_root, r.audio_path));
    Mat feats = gan::pad_frames(
        gan::spectrogram_features(w, cfg.stft, cfg.features), cfg.sbgan.k);
    Mat u = gan::svd_bases(feats, cfg.sbgan.k).u;
    if (is_control)
      control_blocks.push_back(std::move(u));
    else
      dys_blocks.push_back(std::move(u));
  }
  if (dys_blocks.empty())
    throw DataError("no training utterances for target speaker '" + target +
                    "'");

  gan::SbganModels m = gan::sbgan_train(control_blocks, dys_blocks, cfg.sbgan);

  fs::create_directories(cfg.paths.models_dir);
  fs::create_directories(out_dir);
  TrainSbganResult res;
  res.n_control_blocks = static_cast<int>(control_blocks.size());
  res.n_dys_blocks = static_cast<int>(dys_blocks.size());
  res.delta_scale = m.resolved_delta_scale;
  res.checkpoint_path =
      (fs::path(cfg.paths.models_dir) / ("sbgan_" + target + ".ckpt")).string();
  res.history_path =
      (fs::path(out_dir) / ("sbgan_" + target + "_history.csv")).string();
  gan::save_sbgan(res.checkpoint_path, m, cfg.sbgan);
  gan::history_write_csv(m.history, res.history_path);
  return res;
}

// ---- eval ----

EvalResult run_eval(const RunConfig& cfg, const std::string& out_dir) {
  if (!cfg.has_eval) throw ConfigError("config: missing 'eval' section");
  const EvalRunConfig& e = cfg.eval;
  if (e.train_manifest.empty() || e.test_manifest.empty())
    throw ConfigError(
        "config: eval.train_manifest and eval.test_manifest are required");

  auto train = align::manifest_read(e.train_manifest);
  auto test = align::manifest_read(e.test_manifest);
  if (train.empty() || test.empty())
    throw DataError("eval: empty train or test manifest");

  std::set<std::string> vocab_set;
  for (const auto& r : train)
    for (const auto& w : r.transcript) vocab_set.insert(w);
  std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());
  std::map<std::string, int> word_index;
  for (size_t i = 0; i < vocab.size(); ++i)
    word_index[vocab[i]] = static_cast<int>(i);

  auto features_of = [&](const align::ManifestRecord& r) {
    signal::Waveform w = signal::wav_read(
        resolve_audio(cfg.paths.audio_root, r.audio_path));
    return gan::spectrogram_features(w, e.stft, e.features);
  };
  auto labels_of = [&](const align::ManifestRecord& r) {
    std::vector<int> labels;
    for (const auto& w : r.transcript) {
      auto it = word_index.find(w);
      if (it == word_index.end())
        throw DataError("eval: word '" + w + "' missing from the training vocabulary");
      labels.push_back(it->second + 1);  // 0 is the CTC blank
    }
    return labels;
  };

  struct TrainItem {
    Mat feats;
    std::vector<int> labels;
    align::Severity severity;
  };
  std::vector<TrainItem> items;
  items.reserve(train.size());
  for (const auto& r : train)
    items.push_back({features_of(r), labels_of(r), r.severity});

  Rng rng(derive_seed(cfg.seed, "eval_model"));
  eval::CtcModel model =
      eval::CtcModel::random_init(static_cast<int>(vocab.size()), rng);
  autograd::AdamConfig ac;
  ac.lr = e.lr;
  autograd::Adam opt(model.parameters(), ac);

  std::vector<size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < e.epochs; ++epoch) {
    rng.shuffle(order);
    for (size_t i : order) {
      const TrainItem& it = items[i];
      opt.zero_grad();
      auto out = model.forward(it.feats);
      autograd::Tensor ctc = eval::ctc_loss(out.log_probs, it.labels);
      autograd::Tensor loss;
      if (it.severity != align::Severity::kNone && e.beta_seve > 0.0)
        loss = eval::mtl_loss(
            ctc, eval::severity_loss(out.severity_logits, it.severity),
            e.beta_ctc, e.beta_seve);
      else
        loss = autograd::scale(ctc, e.beta_ctc);
      autograd::backward(loss);
      opt.step();
    }
  }

  // score the closed vocabulary per test utterance
  std::vector<eval::NBestList> nbest_lists;
  std::vector<eval::UttScore> scores;
  for (const auto& r : test) {
    Mat lp = tensor_to_mat(model.forward(features_of(r)).log_probs);

    std::vector<std::pair<double, int>> ranked;
    for (size_t v = 0; v < vocab.size(); ++v) {
      double s = eval::hypothesis_score(lp, {static_cast<int>(v) + 1},
                                        e.score_mode);
      if (std::isfinite(s)) ranked.emplace_back(s, static_cast<int>(v));
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    if (ranked.empty())
      throw DataError("eval: no scorable hypothesis for '" + r.utt_id + "'");

    eval::NBestList list;
    list.utt_id = r.utt_id;
    int keep = std::min<int>(e.nbest, static_cast<int>(ranked.size()));
    for (int i = 0; i < keep; ++i) {
      eval::NBestEntry entry;
      entry.words = {vocab[ranked[i].second]};
      entry.scores[e.system_id] = ranked[i].first;
      list.entries.push_back(std::move(entry));
    }
    nbest_lists.push_back(list);

    std::vector<std::string> hyp;
    if (e.decode == "greedy") {
      for (int idx : eval::greedy_decode(lp)) hyp.push_back(vocab[idx - 1]);
    } else {
      hyp = list.entries[0].words;
    }
    eval::UttScore us;
    us.utt_id = r.utt_id;
    us.severity = r.severity;
    us.counts = eval::wer(r.transcript, hyp);
    scores.push_back(std::move(us));
  }

  fs::create_directories(out_dir);
  EvalResult res;
  res.n_train = static_cast<int>(train.size());
  res.n_test = static_cast<int>(test.size());
  res.nbest_path = (fs::path(out_dir) / "nbest.jsonl").string();
  res.scores_path = (fs::path(out_dir) / "utt_scores.jsonl").string();
  res.report_csv_path = (fs::path(out_dir) / "report.csv").string();
  eval::nbest_write(nbest_lists, res.nbest_path);
  eval::utt_scores_write(scores, res.scores_path);
  res.report = eval::aggregate_wer(scores);
  eval::report_write_csv(res.report, res.report_csv_path);
  std::ofstream table(fs::path(out_dir) / "report.txt");
  table << eval::report_format_table(res.report);
  model.save((fs::path(out_dir) / "ctc_model.ckpt").string(),
             json{{"seed", cfg.seed}, {"system_id", e.system_id}}.dump());
  return res;
}

// ---- combine ----

CombineResult run_combine(const RunConfig& cfg, const std::string& out_dir) {
  if (!cfg.has_combine) throw ConfigError("config: missing 'combine' section");
  const CombineRunConfig& c = cfg.combine;
  if (c.test_manifest.empty())
    throw ConfigError("config: combine.test_manifest is required");

  auto test = align::manifest_read(c.test_manifest);
  auto by_utt = index_by_utt(test);

  struct System {
    std::string id;
    double weight = 0.0;
    std::map<std::string, eval::NBestList> lists;
  };
  std::vector<System> systems;
  for (const auto& s : c.systems) {
    System sys;
    sys.id = s.id;
    sys.weight = s.weight;
    for (auto& l : eval::nbest_read(s.nbest_path)) sys.lists[l.utt_id] = l;
    systems.push_back(std::move(sys));
  }
  if (systems.empty()) throw ConfigError("combine: no systems configured");

  auto key_of = [](const std::vector<std::string>& words) {
    std::string k;
    for (const auto& w : words) {
      k += w;
      k += '\x1f';
    }
    return k;
  };

  std::vector<eval::NBestList> combined_lists;
  std::vector<eval::UttScore> scores;

  for (const auto& r : test) {
    std::vector<std::string> hyp;
    if (c.mode == "interpolate") {
      auto base_it = systems[0].lists.find(r.utt_id);
      if (base_it == systems[0].lists.end())
        throw DataError("combine: system '" + systems[0].id +
                        "' has no n-best for '" + r.utt_id + "'");
      eval::NBestList merged = base_it->second;
      std::map<std::string, double> weights;
      for (const auto& sys : systems) weights[sys.id] = sys.weight;
      for (size_t si = 1; si < systems.size(); ++si) {
        auto it = systems[si].lists.find(r.utt_id);
        if (it == systems[si].lists.end())
          throw DataError("combine: system '" + systems[si].id +
                          "' has no n-best for '" + r.utt_id + "'");
        std::map<std::string, double> score_by_words;
        for (const auto& entry : it->second.entries)
          score_by_words[key_of(entry.words)] = entry.scores.at(systems[si].id);
        for (auto& entry : merged.entries) {
          auto sit = score_by_words.find(key_of(entry.words));
          if (sit != score_by_words.end())
            entry.scores[systems[si].id] = sit->second;
        }
      }
      hyp = eval::nbest_interpolate(merged, weights).words;
      combined_lists.push_back(std::move(merged));
    } else {  // rescore
      const System* base = nullptr;
      const System* resc = nullptr;
      for (const auto& sys : systems) {
        if (sys.id == c.base_system) base = &sys;
        if (sys.id == c.rescoring_system) resc = &sys;
      }
      if (!base || !resc)
        throw ConfigError(
            "combine: rescore mode needs base_system and rescoring_system "
            "matching configured systems");
      auto bit = base->lists.find(r.utt_id);
      if (bit == base->lists.end())
        throw DataError("combine: system '" + base->id +
                        "' has no n-best for '" + r.utt_id + "'");
      eval::HypScorer scorer = [&](const std::string& utt,
                                   const std::vector<std::string>& words) {
        auto lit = resc->lists.find(utt);
        if (lit == resc->lists.end())
          throw DataError("combine: system '" + resc->id +
                          "' has no n-best for '" + utt + "'");
        for (const auto& entry : lit->second.entries)
          if (entry.words == words) return entry.scores.at(resc->id);
        throw DataError("combine: system '" + resc->id +
                        "' cannot score a hypothesis for '" + utt + "'");
      };
      eval::NBestList reranked = eval::two_pass_rescore(
          bit->second, base->id, resc->id, scorer, c.weight);
      hyp = reranked.entries[0].words;
      combined_lists.push_back(std::move(reranked));
    }

    eval::UttScore us;
    us.utt_id = r.utt_id;
    us.severity = r.severity;
    us.counts = eval::wer(r.transcript, hyp);
    scores.push_back(std::move(us));
  }

  fs::create_directories(out_dir);
  CombineResult res;
  res.nbest_path = (fs::path(out_dir) / "combined_nbest.jsonl").string();
  res.scores_path = (fs::path(out_dir) / "utt_scores.jsonl").string();
  eval::nbest_write(combined_lists, res.nbest_path);
  eval::utt_scores_write(scores, res.scores_path);
  res.report = eval::aggregate_wer(scores);
  eval::report_write_csv(res.report,
                         (fs::path(out_dir) / "report.csv").string());
  std::ofstream table(fs::path(out_dir) / "report.txt");
  table << eval::report_format_table(res.report);
  return res;
}

// ---- command wrappers ----

int cmd_make_corpus(CommandContext& ctx) {
  if (!ctx.cfg.has_corpus) throw ConfigError("config: missing 'corpus' section");
  CorpusConfig cc = ctx.cfg.corpus;
  if (cc.out_dir.empty()) cc.out_dir = ctx.out_dir;
  ctx.out_dir = cc.out_dir;
  guard_and_prepare(ctx);
  CorpusOutputs out = generate_corpus(cc);
  write_train_test_split(align::manifest_read(out.manifest_path), cc.out_dir);
  write_meta(ctx, json{{"manifest", out.manifest_path},
                       {"ctm", out.ctm_path},
                       {"utterances", out.n_utterances}});
  std::cout << "wrote " << out.n_utterances << " utterances under "
            << cc.out_dir << "\n";
  return 0;
}

int cmd_perturb(CommandContext& ctx) {
  guard_and_prepare(ctx);
  AugmentResult r = run_augment_plan(ctx.cfg, ctx.out_dir, /*speed_only=*/true);
  write_meta(ctx, json{{"jobs", r.n_jobs}, {"manifest", r.manifest_path}});
  std::cout << "emitted " << r.n_jobs << " perturbed utterances; manifest at "
            << r.manifest_path << "\n";
  return 0;
}

int cmd_augment(CommandContext& ctx) {
  guard_and_prepare(ctx);
  AugmentResult r = run_augment_plan(ctx.cfg, ctx.out_dir, /*speed_only=*/false);
  write_meta(ctx, json{{"jobs", r.n_jobs}, {"manifest", r.manifest_path}});
  std::cout << "emitted " << r.n_jobs << " augmented utterances; manifest at "
            << r.manifest_path << "\n";
  return 0;
}

int cmd_pair(CommandContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  if (cfg.paths.manifest.empty())
    throw ConfigError("config: paths.manifest is required");
  if (cfg.pair.target_speaker.empty())
    throw ConfigError("config: pair.target_speaker is required");
  guard_and_prepare(ctx);

  auto manifest = align::manifest_read(cfg.paths.manifest);
  bool use_alignment = cfg.pair.duration_source == "alignment" ||
                       (cfg.pair.duration_source == "auto" &&
                        !cfg.paths.ctm.empty());
  auto durs = utterance_durations(manifest, cfg.paths.audio_root,
                                  cfg.paths.ctm, use_alignment);
  auto pairs = align::build_parallel_pairs(manifest, cfg.pair.target_speaker,
                                           durs, cfg.pair.blocks);
  std::string path = (fs::path(ctx.out_dir) / "pairs.jsonl").string();
  pairs_write(pairs, path);
  write_meta(ctx, json{{"pairs", static_cast<int>(pairs.size())},
                       {"pairs_path", path},
                       {"duration_source",
                        use_alignment ? "alignment" : "audio"}});
  std::cout << "built " << pairs.size() << " parallel pairs for "
            << cfg.pair.target_speaker << " at " << path << "\n";
  return 0;
}

int cmd_train_dcgan(CommandContext& ctx) {
  guard_and_prepare(ctx);
  TrainDcganResult r = run_train_dcgan(ctx.cfg, ctx.out_dir);
  write_meta(ctx, json{{"checkpoint", r.checkpoint_path},
                       {"history", r.history_path},
                       {"pairs", r.n_pairs}});
  std::cout << "trained dcgan on " << r.n_pairs << " pairs; checkpoint at "
            << r.checkpoint_path << "\n";
  return 0;
}

int cmd_train_sbgan(CommandContext& ctx) {
  guard_and_prepare(ctx);
  TrainSbganResult r = run_train_sbgan(ctx.cfg, ctx.out_dir);
  write_meta(ctx, json{{"checkpoint", r.checkpoint_path},
                       {"history", r.history_path},
                       {"control_blocks", r.n_control_blocks},
                       {"dys_blocks", r.n_dys_blocks},
                       {"delta_scale", r.delta_scale}});
  std::cout << "trained sbgan on " << r.n_control_blocks << " control / "
            << r.n_dys_blocks << " dysarthric basis blocks; checkpoint at "
            << r.checkpoint_path << "\n";
  return 0;
}

int cmd_eval(CommandContext& ctx) {
  guard_and_prepare(ctx);
  EvalResult r = run_eval(ctx.cfg, ctx.out_dir);
  write_meta(ctx, json{{"train_utts", r.n_train},
                       {"test_utts", r.n_test},
                       {"nbest", r.nbest_path},
                       {"scores", r.scores_path},
                       {"report", r.report_csv_path},
                       {"wer_all", r.report.all}});
  std::cout << eval::report_format_table(r.report);
  return 0;
}

int cmd_combine(CommandContext& ctx) {
  guard_and_prepare(ctx);
  CombineResult r = run_combine(ctx.cfg, ctx.out_dir);
  write_meta(ctx, json{{"nbest", r.nbest_path},
                       {"scores", r.scores_path},
                       {"wer_all", r.report.all}});
  std::cout << eval::report_format_table(r.report);
  return 0;
}

int cmd_gradcheck(CommandContext& ctx) {
  guard_and_prepare(ctx);
  auto results = autograd::run_gradient_checks(1e-4, 20, ctx.cfg.seed);
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("%-22s %-4s max rel err %.3e\n", r.op.c_str(),
                r.pass ? "ok" : "FAIL", r.max_rel_err);
    all_pass = all_pass && r.pass;
  }
  write_meta(ctx, json{{"ops", static_cast<int>(results.size())},
                       {"pass", all_pass}});
  if (!all_pass) {
    std::cerr << "gradient checks failed\n";
    return 4;
  }
  std::cout << "all " << results.size() << " ops within 1e-4\n";
  return 0;
}

int cmd_report(CommandContext& ctx) {
  std::string scores_path =
      (fs::path(ctx.out_dir) / "utt_scores.jsonl").string();
  if (!fs::exists(scores_path))
    throw DataError("report: " + scores_path +
                    " not found; run eval or combine into this directory first");
  guard_and_prepare(ctx);
  auto scores = eval::utt_scores_read(scores_path);
  eval::SubgroupWer r = eval::aggregate_wer(scores);
  std::string csv = (fs::path(ctx.out_dir) / "report.csv").string();
  eval::report_write_csv(r, csv);
  std::ofstream table(fs::path(ctx.out_dir) / "report.txt");
  table << eval::report_format_table(r);
  write_meta(ctx, json{{"report", csv}, {"utts", r.n_utts}});
  std::cout << eval::report_format_table(r);
  return 0;
}

}  // namespace dysaug::cli
