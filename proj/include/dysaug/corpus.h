// include/dysaug/corpus.h

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

// Bundled synthetic mini-corpus: tone-complex "words" spoken by clean control
// speakers and slowed, spectrally smeared, noisier "impaired" speakers whose
// severity labels follow the distortion level. Deterministic per seed.

#ifndef DYSAUG_CORPUS_H_
#define DYSAUG_CORPUS_H_

#include <string>
#include <vector>

#include "dysaug/align.h"
#include "dysaug/waveform.h"

namespace dysaug::cli {

struct CorpusConfig {
  std::string out_dir;
  int n_words = 20;          // closed vocabulary, <= 20
  int n_control = 2;
  int n_dys = 2;             // severities cycle VL, L, M, H by speaker index
  int reps_per_block = 2;    // utterances per word per block (B1, B2, B3)
  int sample_rate = 16000;
  uint64_t seed = 0;

  void validate() const;
};

struct CorpusOutputs {
  std::string manifest_path;
  std::string ctm_path;
  int n_utterances = 0;
};

// Per-speaker distortion profile; exposed for tests.
struct SpeakerProfile {
  std::string speaker_id;
  align::SpeakerType type = align::SpeakerType::kControl;
  align::Severity severity = align::Severity::kNone;
  double tempo = 1.0;        // > 1 means slower speech
  int smear_len = 1;         // moving-average width, 1 = none
  double noise_level = 0.0;
  double gain = 1.0;
  double formant_shift = 1.0;
};

SpeakerProfile control_profile(int index);
SpeakerProfile dysarthric_profile(int index);

// Deterministic word template: phone ids and nominal durations.
std::vector<int> word_phones(int word_index);
std::string word_id_of(int word_index);

// Synthesizes one utterance and its phone alignment (seconds).
struct SynthesizedUtterance {
  signal::Waveform audio;
  std::vector<align::AlignmentSegment> phones;  // utt_id left empty
};
SynthesizedUtterance synthesize_utterance(int word_index,
                                          const SpeakerProfile& speaker,
                                          int sample_rate, Rng& rng);

// Writes WAVs under out_dir/audio, a manifest (manifest.jsonl) and a CTM
// (align.ctm) under out_dir.
CorpusOutputs generate_corpus(const CorpusConfig& cfg);

}  // namespace dysaug::cli

#endif  // DYSAUG_CORPUS_H_
