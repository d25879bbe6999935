// include/dysaug/align.h

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

#ifndef DYSAUG_ALIGN_H_
#define DYSAUG_ALIGN_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dysaug/common.h"

namespace dysaug::align {

// One force-aligned phone instance.
struct AlignmentSegment {
  std::string utt_id;
  std::string label;
  double start = 0.0;  // seconds
  double dur = 0.0;    // seconds, > 0
};

struct SpeakerDurationStats {
  std::string speaker_id;
  double mean_phone_dur = 0.0;
  int64_t phone_count = 0;
};

enum class SpeakerType { kControl, kDysarthric };
enum class Severity { kVeryLow, kLow, kMedium, kHigh, kNone };

std::string to_string(SpeakerType t);
std::string to_string(Severity s);
SpeakerType speaker_type_from_string(const std::string& s);
Severity severity_from_string(const std::string& s);
// 0..3 over {VL, L, M, H}; throws on kNone.
int severity_class_index(Severity s);

// Per-utterance metadata. Augmented utterances additionally carry provenance.
struct Provenance {
  std::string source_utt_id;
  std::string method;
  double factor = 0.0;
  std::string model_id;  // empty for plain speed methods
  int replica = 0;
};

struct ManifestRecord {
  std::string utt_id;
  std::string speaker_id;
  SpeakerType speaker_type = SpeakerType::kControl;
  std::string block;  // B1 | B2 | B3
  std::string word_id;
  std::vector<std::string> transcript;
  Severity severity = Severity::kNone;
  std::string audio_path;
  std::optional<Provenance> provenance;
};

struct UtterancePair {
  std::string control_utt;
  std::string dysarthric_utt;
  std::string word_id;
  double scale_factor = 1.0;
};

// Silence labels excluded from duration statistics by default.
const std::set<std::string>& default_silence_labels();  // {SIL, SP, NSN}

// CTM lines "utt_id channel start dur label"; '#' comments and blank lines are
// skipped. Malformed lines raise DataError carrying the 1-based line number.
std::vector<AlignmentSegment> parse_ctm(const std::string& text);
std::vector<AlignmentSegment> parse_ctm_file(const std::string& path);

// Arithmetic mean of dur over segments whose label is not excluded. Raises
// DataError when nothing qualifies.
double mean_phone_duration(const std::vector<AlignmentSegment>& segments,
                           const std::set<std::string>& exclude_labels);

// Per-speaker mean phone durations; speaker id of a segment is resolved by the
// supplied utt -> speaker map.
std::map<std::string, SpeakerDurationStats> speaker_duration_stats(
    const std::vector<AlignmentSegment>& segments,
    const std::map<std::string, std::string>& utt_to_speaker,
    const std::set<std::string>& exclude_labels);

// Speaker-dependent perturbation factor: reference control mean over a
// dysarthric speaker's mean. Slower speakers get factors < 1, so control
// speech resampled with the factor stretches toward their tempo.
double sd_factor(double l_control_mean, double l_dys);

// Per-pair scaling factor control_dur / dys_dur; resample_speed with it maps
// the control utterance onto the dysarthric duration within one sample.
double pair_scale_factor(double control_dur, double dys_dur);

// Unweighted mean over control speakers' per-speaker means.
double control_reference_duration(
    const std::map<std::string, SpeakerDurationStats>& stats,
    const std::set<std::string>& control_speakers);

// Cross product of control and target-speaker utterances sharing a word_id,
// restricted to the given blocks. durations maps utt_id -> seconds and feeds
// the per-pair scale factor. Raises DataError when no word overlaps.
std::vector<UtterancePair> build_parallel_pairs(
    const std::vector<ManifestRecord>& manifest,
    const std::string& target_speaker,
    const std::map<std::string, double>& durations,
    const std::set<std::string>& blocks);

// Manifest JSONL (one record per line, UTF-8).
std::vector<ManifestRecord> manifest_read(const std::string& path);
void manifest_write(const std::vector<ManifestRecord>& records,
                    const std::string& path);
std::string manifest_record_to_json(const ManifestRecord& r);
ManifestRecord manifest_record_from_json(const std::string& line);

}  // namespace dysaug::align

#endif  // DYSAUG_ALIGN_H_
