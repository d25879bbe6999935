// src/align.cc

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

#include "dysaug/align.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dysaug::align {

using nlohmann::json;

std::string to_string(SpeakerType t) {
  return t == SpeakerType::kControl ? "control" : "dysarthric";
}

std::string to_string(Severity s) {
  switch (s) {
    case Severity::kVeryLow: return "VL";
    case Severity::kLow: return "L";
    case Severity::kMedium: return "M";
    case Severity::kHigh: return "H";
    case Severity::kNone: return "none";
  }
  return "none";
}

SpeakerType speaker_type_from_string(const std::string& s) {
  if (s == "control") return SpeakerType::kControl;
  if (s == "dysarthric") return SpeakerType::kDysarthric;
  throw DataError("unknown speaker_type '" + s + "'");
}

Severity severity_from_string(const std::string& s) {
  if (s == "VL") return Severity::kVeryLow;
  if (s == "L") return Severity::kLow;
  if (s == "M") return Severity::kMedium;
  if (s == "H") return Severity::kHigh;
  if (s == "none") return Severity::kNone;
  throw DataError("unknown severity '" + s + "'");
}

int severity_class_index(Severity s) {
  switch (s) {
    case Severity::kVeryLow: return 0;
    case Severity::kLow: return 1;
    case Severity::kMedium: return 2;
    case Severity::kHigh: return 3;
    case Severity::kNone: break;
  }
  throw DataError("severity 'none' has no class index");
}

const std::set<std::string>& default_silence_labels() {
  static const std::set<std::string> labels = {"SIL", "SP", "NSN"};
  return labels;
}

std::vector<AlignmentSegment> parse_ctm(const std::string& text) {
  std::vector<AlignmentSegment> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    AlignmentSegment seg;
    std::string channel, start_s, dur_s;
    if (!(ls >> seg.utt_id >> channel >> start_s >> dur_s >> seg.label))
      throw DataError("ctm line " + std::to_string(line_no) +
                      ": expected 'utt_id channel start dur label'");
    std::string extra;
    if (ls >> extra)
      throw DataError("ctm line " + std::to_string(line_no) +
                      ": trailing field '" + extra + "'");
    try {
      size_t pos = 0;
      seg.start = std::stod(start_s, &pos);
      if (pos != start_s.size()) throw std::invalid_argument("start");
      seg.dur = std::stod(dur_s, &pos);
      if (pos != dur_s.size()) throw std::invalid_argument("dur");
    } catch (const std::exception&) {
      throw DataError("ctm line " + std::to_string(line_no) +
                      ": non-numeric start/dur");
    }
    if (seg.dur <= 0.0 || seg.start < 0.0)
      throw DataError("ctm line " + std::to_string(line_no) +
                      ": start must be >= 0 and dur > 0");
    out.push_back(std::move(seg));
  }
  return out;
}

std::vector<AlignmentSegment> parse_ctm_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open ctm file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_ctm(ss.str());
}

double mean_phone_duration(const std::vector<AlignmentSegment>& segments,
                           const std::set<std::string>& exclude_labels) {
  double sum = 0.0;
  int64_t n = 0;
  for (const auto& s : segments) {
    if (exclude_labels.count(s.label)) continue;
    sum += s.dur;
    ++n;
  }
  if (n == 0) throw DataError("mean_phone_duration: no qualifying segments");
  return sum / static_cast<double>(n);
}

std::map<std::string, SpeakerDurationStats> speaker_duration_stats(
    const std::vector<AlignmentSegment>& segments,
    const std::map<std::string, std::string>& utt_to_speaker,
    const std::set<std::string>& exclude_labels) {
  std::map<std::string, SpeakerDurationStats> stats;
  for (const auto& s : segments) {
    if (exclude_labels.count(s.label)) continue;
    auto it = utt_to_speaker.find(s.utt_id);
    if (it == utt_to_speaker.end())
      throw DataError("alignment references unknown utt '" + s.utt_id + "'");
    auto& st = stats[it->second];
    st.speaker_id = it->second;
    st.mean_phone_dur += s.dur;  // running sum, normalized below
    st.phone_count += 1;
  }
  for (auto& [id, st] : stats)
    st.mean_phone_dur /= static_cast<double>(st.phone_count);
  return stats;
}

double sd_factor(double l_control_mean, double l_dys) {
  if (l_control_mean <= 0.0 || l_dys <= 0.0)
    throw DataError("sd_factor: durations must be positive");
  return l_control_mean / l_dys;
}

double pair_scale_factor(double control_dur, double dys_dur) {
  if (control_dur <= 0.0 || dys_dur <= 0.0)
    throw DataError("pair_scale_factor: durations must be positive");
  return control_dur / dys_dur;
}

double control_reference_duration(
    const std::map<std::string, SpeakerDurationStats>& stats,
    const std::set<std::string>& control_speakers) {
  double sum = 0.0;
  int n = 0;
  for (const auto& [id, st] : stats) {
    if (!control_speakers.count(id)) continue;
    sum += st.mean_phone_dur;
    ++n;
  }
  if (n == 0) throw DataError("no control speakers with duration stats");
  return sum / n;
}

std::vector<UtterancePair> build_parallel_pairs(
    const std::vector<ManifestRecord>& manifest,
    const std::string& target_speaker,
    const std::map<std::string, double>& durations,
    const std::set<std::string>& blocks) {
  auto duration_of = [&](const std::string& utt) {
    auto it = durations.find(utt);
    if (it == durations.end())
      throw DataError("no duration for utt '" + utt + "'");
    return it->second;
  };

  // word_id -> utterances, per side
  std::map<std::string, std::vector<const ManifestRecord*>> control_by_word;
  std::map<std::string, std::vector<const ManifestRecord*>> dys_by_word;
  for (const auto& r : manifest) {
    if (!blocks.empty() && !blocks.count(r.block)) continue;
    if (r.speaker_type == SpeakerType::kControl)
      control_by_word[r.word_id].push_back(&r);
    else if (r.speaker_id == target_speaker)
      dys_by_word[r.word_id].push_back(&r);
  }

  std::vector<UtterancePair> pairs;
  for (const auto& [word, controls] : control_by_word) {
    auto it = dys_by_word.find(word);
    if (it == dys_by_word.end()) continue;
    for (const ManifestRecord* c : controls)
      for (const ManifestRecord* d : it->second) {
        UtterancePair p;
        p.control_utt = c->utt_id;
        p.dysarthric_utt = d->utt_id;
        p.word_id = word;
        p.scale_factor =
            pair_scale_factor(duration_of(c->utt_id), duration_of(d->utt_id));
        pairs.push_back(std::move(p));
      }
  }
  if (pairs.empty())
    throw DataError("build_parallel_pairs: no overlapping word_ids between "
                    "control speech and speaker '" + target_speaker + "'");
  return pairs;
}

std::string manifest_record_to_json(const ManifestRecord& r) {
  json j;
  j["utt_id"] = r.utt_id;
  j["speaker_id"] = r.speaker_id;
  j["speaker_type"] = to_string(r.speaker_type);
  j["block"] = r.block;
  j["word_id"] = r.word_id;
  j["transcript"] = r.transcript;
  j["severity"] = to_string(r.severity);
  j["audio_path"] = r.audio_path;
  if (r.provenance) {
    json p;
    p["source_utt_id"] = r.provenance->source_utt_id;
    p["method"] = r.provenance->method;
    p["factor"] = r.provenance->factor;
    p["model_id"] = r.provenance->model_id;
    p["replica"] = r.provenance->replica;
    j["provenance"] = p;
  }
  return j.dump();
}

ManifestRecord manifest_record_from_json(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("manifest: bad JSON line: ") + e.what());
  }
  try {
    ManifestRecord r;
    r.utt_id = j.at("utt_id").get<std::string>();
    r.speaker_id = j.at("speaker_id").get<std::string>();
    r.speaker_type =
        speaker_type_from_string(j.at("speaker_type").get<std::string>());
    r.block = j.at("block").get<std::string>();
    r.word_id = j.at("word_id").get<std::string>();
    r.transcript = j.at("transcript").get<std::vector<std::string>>();
    r.severity = severity_from_string(j.at("severity").get<std::string>());
    r.audio_path = j.at("audio_path").get<std::string>();
    if (j.contains("provenance")) {
      const json& p = j["provenance"];
      Provenance prov;
      prov.source_utt_id = p.at("source_utt_id").get<std::string>();
      prov.method = p.at("method").get<std::string>();
      prov.factor = p.at("factor").get<double>();
      prov.model_id = p.value("model_id", std::string());
      prov.replica = p.at("replica").get<int>();
      r.provenance = prov;
    }
    if (r.word_id.empty()) throw DataError("manifest: empty word_id");
    if (r.speaker_type == SpeakerType::kControl &&
        r.severity != Severity::kNone)
      throw DataError("manifest: control record '" + r.utt_id +
                      "' must have severity none");
    if (r.block != "B1" && r.block != "B2" && r.block != "B3")
      throw DataError("manifest: bad block '" + r.block + "'");
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("manifest: missing or mistyped field: ") +
                    e.what());
  }
}

std::vector<ManifestRecord> manifest_read(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open manifest " + path);
  std::vector<ManifestRecord> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(manifest_record_from_json(line));
  }
  return out;
}

void manifest_write(const std::vector<ManifestRecord>& records,
                    const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write manifest " + path);
  for (const auto& r : records) f << manifest_record_to_json(r) << "\n";
}

}  // namespace dysaug::align
