// src/corpus.cc

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

#include "dysaug/corpus.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace dysaug::cli {

namespace fs = std::filesystem;

void CorpusConfig::validate() const {
  if (out_dir.empty()) throw ConfigError("corpus: out_dir is required");
  if (n_words < 1 || n_words > 20)
    throw ConfigError("corpus: n_words must be in [1, 20]");
  if (n_control < 1 || n_dys < 1)
    throw ConfigError("corpus: need at least one speaker of each type");
  if (reps_per_block < 1)
    throw ConfigError("corpus: reps_per_block must be positive");
  if (sample_rate < 8000)
    throw ConfigError("corpus: sample_rate must be >= 8000");
}

SpeakerProfile control_profile(int index) {
  SpeakerProfile p;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "C%02d", index + 1);
  p.speaker_id = buf;
  p.type = align::SpeakerType::kControl;
  p.severity = align::Severity::kNone;
  p.tempo = 1.0 + 0.04 * (index % 3);  // mild inter-speaker variation
  p.smear_len = 1;
  p.noise_level = 0.002;
  p.gain = 1.0 - 0.05 * (index % 2);
  p.formant_shift = 1.0 + 0.01 * (index % 2);
  return p;
}

SpeakerProfile dysarthric_profile(int index) {
  SpeakerProfile p;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "D%02d", index + 1);
  p.speaker_id = buf;
  p.type = align::SpeakerType::kDysarthric;
  switch (index % 4) {
    case 0:  // very low intelligibility: slowest, heaviest smearing
      p.severity = align::Severity::kVeryLow;
      p.tempo = 1.9;
      p.smear_len = 25;
      p.noise_level = 0.020;
      p.gain = 0.5;
      p.formant_shift = 0.93;
      break;
    case 1:
      p.severity = align::Severity::kLow;
      p.tempo = 1.7;
      p.smear_len = 17;
      p.noise_level = 0.012;
      p.gain = 0.6;
      p.formant_shift = 0.95;
      break;
    case 2:
      p.severity = align::Severity::kMedium;
      p.tempo = 1.5;
      p.smear_len = 11;
      p.noise_level = 0.008;
      p.gain = 0.7;
      p.formant_shift = 0.97;
      break;
    default:
      p.severity = align::Severity::kHigh;
      p.tempo = 1.3;
      p.smear_len = 7;
      p.noise_level = 0.005;
      p.gain = 0.85;
      p.formant_shift = 0.99;
      break;
  }
  return p;
}

std::vector<int> word_phones(int word_index) {
  int len = 2 + word_index % 3;
  int base = word_index % 12;
  int shift = word_index / 12;
  std::vector<int> phones(len);
  phones[0] = base;
  if (len > 1) phones[1] = (base + 3 + 5 * shift) % 12;
  if (len > 2) phones[2] = (base + 7 + 9 * shift) % 12;
  if (len > 3) phones[3] = (base + 2 * (word_index % 5) + 1) % 12;
  return phones;
}

std::string word_id_of(int word_index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "w%02d", word_index);
  return buf;
}

namespace {

struct PhoneTemplate {
  double f0;
  double partial_ratio;
  double dur;
};

PhoneTemplate phone_template(int phone) {
  PhoneTemplate t;
  t.f0 = 180.0 * std::pow(2.0, phone / 12.0);          // 180..~350 Hz
  t.partial_ratio = 2.0 + 0.25 * (phone % 3);          // inharmonic partial
  t.dur = 0.11 + 0.012 * (phone % 3);
  return t;
}

void append_phone(std::vector<double>& samples, const PhoneTemplate& t,
                  const SpeakerProfile& spk, int rate, Rng& rng,
                  double* out_dur) {
  double dur = t.dur * spk.tempo * (1.0 + 0.06 * (rng.uniform() - 0.5));
  double f = t.f0 * spk.formant_shift * (1.0 + 0.02 * (rng.uniform() - 0.5));
  double amp = 0.45 * (1.0 + 0.1 * (rng.uniform() - 0.5));
  int n = static_cast<int>(dur * rate);
  int ramp = std::min(n / 4, rate / 100);  // 10 ms onset/offset
  double phase = rng.uniform(0.0, 2.0 * M_PI);
  for (int i = 0; i < n; ++i) {
    double env = 1.0;
    if (i < ramp) env = 0.5 - 0.5 * std::cos(M_PI * i / ramp);
    if (n - 1 - i < ramp) env = std::min(env, 0.5 - 0.5 * std::cos(M_PI * (n - 1 - i) / ramp));
    double x = 0.55 * std::sin(2.0 * M_PI * f * i / rate + phase) +
               0.30 * std::sin(2.0 * M_PI * f * t.partial_ratio * i / rate);
    samples.push_back(amp * env * x);
  }
  *out_dur = static_cast<double>(n) / rate;
}

void moving_average(std::vector<double>& x, int width) {
  if (width <= 1) return;
  std::vector<double> out(x.size(), 0.0);
  double acc = 0.0;
  int half = width / 2;
  for (size_t i = 0; i < x.size() + half; ++i) {
    if (i < x.size()) acc += x[i];
    if (i >= static_cast<size_t>(width)) acc -= x[i - width];
    if (i >= static_cast<size_t>(half))
      out[i - half] = acc / width;
  }
  x.swap(out);
}

}  // namespace

SynthesizedUtterance synthesize_utterance(int word_index,
                                          const SpeakerProfile& speaker,
                                          int sample_rate, Rng& rng) {
  SynthesizedUtterance out;
  out.audio.sample_rate = sample_rate;
  double cursor = 0.0;
  for (int phone : word_phones(word_index)) {
    double dur = 0.0;
    append_phone(out.audio.samples, phone_template(phone), speaker,
                 sample_rate, rng, &dur);
    align::AlignmentSegment seg;
    seg.label = "P" + std::to_string(phone);
    seg.start = cursor;
    seg.dur = dur;
    out.phones.push_back(seg);
    cursor += dur;
  }
  moving_average(out.audio.samples, speaker.smear_len);
  for (auto& s : out.audio.samples) {
    s = speaker.gain * s + speaker.noise_level * rng.gaussian();
    s = std::clamp(s, -1.0, 1.0);
  }
  return out;
}

CorpusOutputs generate_corpus(const CorpusConfig& cfg) {
  cfg.validate();
  fs::create_directories(fs::path(cfg.out_dir) / "audio");

  std::vector<SpeakerProfile> speakers;
  for (int i = 0; i < cfg.n_control; ++i) speakers.push_back(control_profile(i));
  for (int i = 0; i < cfg.n_dys; ++i) speakers.push_back(dysarthric_profile(i));

  std::vector<align::ManifestRecord> manifest;
  std::ofstream ctm(fs::path(cfg.out_dir) / "align.ctm");
  if (!ctm) throw DataError("corpus: cannot write align.ctm");
  ctm << "# synthetic corpus alignments\n";

  const char* blocks[3] = {"B1", "B2", "B3"};
  for (const auto& spk : speakers) {
    for (int b = 0; b < 3; ++b) {
      for (int w = 0; w < cfg.n_words; ++w) {
        for (int rep = 0; rep < cfg.reps_per_block; ++rep) {
          std::string utt_id = spk.speaker_id + "_" + blocks[b] + "_" +
                               word_id_of(w) + "_r" + std::to_string(rep);
          Rng rng(derive_seed(cfg.seed, utt_id));
          SynthesizedUtterance utt =
              synthesize_utterance(w, spk, cfg.sample_rate, rng);
          std::string rel = "audio/" + utt_id + ".wav";
          signal::wav_write(utt.audio,
                            (fs::path(cfg.out_dir) / rel).string());

          align::ManifestRecord r;
          r.utt_id = utt_id;
          r.speaker_id = spk.speaker_id;
          r.speaker_type = spk.type;
          r.block = blocks[b];
          r.word_id = word_id_of(w);
          r.transcript = {word_id_of(w)};
          r.severity = spk.severity;
          r.audio_path = rel;
          manifest.push_back(std::move(r));

          for (const auto& seg : utt.phones) {
            char line[128];
            std::snprintf(line, sizeof(line), "%s 1 %.4f %.4f %s\n",
                          utt_id.c_str(), seg.start, seg.dur,
                          seg.label.c_str());
            ctm << line;
          }
        }
      }
    }
  }

  CorpusOutputs out;
  out.manifest_path = (fs::path(cfg.out_dir) / "manifest.jsonl").string();
  out.ctm_path = (fs::path(cfg.out_dir) / "align.ctm").string();
  out.n_utterances = static_cast<int>(manifest.size());
  align::manifest_write(manifest, out.manifest_path);
  return out;
}

}  // namespace dysaug::cli
