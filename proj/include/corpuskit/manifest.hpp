#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "corpuskit/error.hpp"
#include "corpuskit/langtags.hpp"

namespace corpuskit {

// One transcript sentence with absolute times in seconds.
struct Sentence {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;

  bool operator==(const Sentence&) const = default;
};

// One manifest record. duration_s from the manifest is authoritative;
// probe_wav_duration (wav.hpp) is a verification utility only.
struct Utterance {
  std::string id;
  std::string audio_path;
  double duration_s = 0.0;
  LanguageTag tag;
  std::vector<Sentence> sentences;
  bool punctuated = false;
  bool itn = false;  // text contains non-standardized elements (digits etc.)
  std::string dataset;

  bool operator==(const Utterance&) const = default;
};

// Default tolerance for "sentence lies within the utterance" checks.
inline constexpr double kTimestampToleranceS = 0.020;

struct LineError {
  std::size_t line = 0;
  std::string message;
};

struct ManifestReadResult {
  std::vector<Utterance> utterances;
  std::vector<LineError> errors;
};

inline std::string trim_copy(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// All sentence texts joined into one transcript.
inline std::string utterance_text(const Utterance& u,
                                  std::string_view separator = " ") {
  std::string out;
  for (std::size_t i = 0; i < u.sentences.size(); ++i) {
    if (i > 0) out += separator;
    out += u.sentences[i].text;
  }
  return out;
}

// Invariant violations as messages; empty result means the record is valid.
inline std::vector<std::string> validate_utterance(
    const Utterance& u, double tol_s = kTimestampToleranceS) {
  std::vector<std::string> out;
  if (u.id.empty()) out.push_back("empty id");
  if (!(u.duration_s > 0.0)) out.push_back("duration_s must be > 0");
  for (std::size_t i = 0; i < u.sentences.size(); ++i) {
    const auto& s = u.sentences[i];
    const std::string at = "sentence " + std::to_string(i) + ": ";
    if (!(s.start_s >= 0.0)) out.push_back(at + "start < 0");
    if (!(s.start_s < s.end_s)) out.push_back(at + "start >= end");
    if (trim_copy(s.text).empty()) out.push_back(at + "empty text");
    if (s.end_s > u.duration_s + tol_s) out.push_back(at + "exceeds duration");
    if (i > 0 && u.sentences[i - 1].end_s > s.start_s + tol_s)
      out.push_back(at + "overlaps previous sentence");
  }
  return out;
}

inline nlohmann::ordered_json utterance_to_json(const Utterance& u) {
  nlohmann::ordered_json j;
  j["id"] = u.id;
  j["audio"] = u.audio_path;
  j["duration_s"] = u.duration_s;
  j["lang"] = u.tag.language;
  j["region"] = u.tag.region;
  j["punct"] = u.punctuated;
  j["itn"] = u.itn;
  j["dataset"] = u.dataset;
  auto sentences = nlohmann::ordered_json::array();
  for (const auto& s : u.sentences) {
    nlohmann::ordered_json js;
    js["start"] = s.start_s;
    js["end"] = s.end_s;
    js["text"] = s.text;
    sentences.push_back(std::move(js));
  }
  j["sentences"] = std::move(sentences);
  return j;
}

inline Utterance utterance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("manifest record is not a JSON object");
  Utterance u;
  u.id = j.at("id").get<std::string>();
  if (u.id.empty()) throw ParseError("empty id");
  u.audio_path = j.value("audio", std::string{});
  u.duration_s = j.at("duration_s").get<double>();
  u.tag = make_tag(j.at("lang").get<std::string>(),
                   j.value("region", std::string{"NULL"}));
  u.punctuated = j.value("punct", false);
  u.itn = j.value("itn", false);
  u.dataset = j.value("dataset", std::string{});
  if (j.contains("sentences")) {
    for (const auto& js : j.at("sentences")) {
      Sentence s;
      s.start_s = js.at("start").get<double>();
      s.end_s = js.at("end").get<double>();
      s.text = js.at("text").get<std::string>();
      u.sentences.push_back(std::move(s));
    }
  }
  return u;
}

// Reads a JSONL manifest in file order. Malformed lines are collected with
// their line numbers; under strict=true the first problem throws instead.
// Duplicate ids are reported the same way (the records are still returned).
inline ManifestReadResult read_manifest_stream(std::istream& in,
                                               bool strict = false) {
  ManifestReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim_copy(line).empty()) continue;
    try {
      result.utterances.push_back(
          utterance_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      if (strict)
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
      result.errors.push_back({line_no, e.what()});
    }
  }
  std::set<std::string> unique;
  for (const auto& u : result.utterances) {
    if (!unique.insert(u.id).second) {
      if (strict) throw ParseError("duplicate id: " + u.id);
      result.errors.push_back({0, "duplicate id: " + u.id});
    }
  }
  return result;
}

inline ManifestReadResult read_manifest(const std::filesystem::path& path,
                                        bool strict = false) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open manifest: " + path.string());
  return read_manifest_stream(in, strict);
}

inline void write_manifest_stream(const std::vector<Utterance>& utterances,
                                  std::ostream& out) {
  for (const auto& u : utterances) out << utterance_to_json(u).dump() << '\n';
}

inline void write_manifest(const std::vector<Utterance>& utterances,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write manifest: " + path.string());
  write_manifest_stream(utterances, out);
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace corpuskit
