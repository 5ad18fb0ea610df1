#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "corpuskit/edit_distance.hpp"
#include "corpuskit/error.hpp"
#include "corpuskit/manifest.hpp"
#include "corpuskit/utf8.hpp"

namespace corpuskit {

// Outcome of one quality filter. keep=false names exactly the rule that
// fired with the measured value and the threshold it crossed.
struct FilterVerdict {
  bool keep = true;
  std::string rule;
  double measured = 0.0;
  double threshold = 0.0;
};

// Default text-to-speech ratio ceilings, in characters per second. CJK
// scripts pack more meaning per character, so their ceiling is higher.
inline constexpr double kMaxRatioCjk = 30.0;
inline constexpr double kMaxRatioDefault = 25.0;

inline bool is_cjk_language(std::string_view language) {
  static const std::set<std::string, std::less<>> cjk{"zh", "ct", "ja", "ko"};
  return cjk.count(language) > 0;
}

inline double default_max_ratio(const LanguageTag& tag) {
  return is_cjk_language(tag.language) ? kMaxRatioCjk : kMaxRatioDefault;
}

// Characters per second over all sentence text. Boundary inclusive: a
// measurement exactly at the threshold keeps the utterance.
inline FilterVerdict speech_ratio_filter(const Utterance& u, double max_ratio) {
  if (!(u.duration_s > 0.0))
    throw InvalidArgument("speech_ratio_filter: zero duration for " + u.id);
  std::size_t chars = 0;
  for (const auto& s : u.sentences) chars += utf8::count(s.text);
  const double measured = static_cast<double>(chars) / u.duration_s;
  FilterVerdict v;
  v.rule = "text_to_speech_ratio";
  v.measured = measured;
  v.threshold = max_ratio;
  v.keep = measured <= max_ratio;
  return v;
}

// Timestamp sanity report; violations are data, not errors.
inline std::vector<std::string> validate_timestamps(
    const Utterance& u, double tol_s = kTimestampToleranceS) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < u.sentences.size(); ++i) {
    const auto& s = u.sentences[i];
    const std::string at = "sentence " + std::to_string(i) + ": ";
    if (s.start_s >= s.end_s) out.push_back(at + "start >= end");
    if (s.start_s < -tol_s || s.end_s > u.duration_s + tol_s)
      out.push_back(at + "exceeds duration");
    if (i > 0 && s.start_s < u.sentences[i - 1].end_s - tol_s)
      out.push_back(at + "overlaps previous sentence");
  }
  return out;
}

// 1 - levenshtein/max(len) over Unicode scalars. Two empty strings are
// identical by definition.
inline double text_similarity(std::string_view before, std::string_view after) {
  const auto a = utf8::decode(before);
  const auto b = utf8::decode(after);
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  const std::size_t distance = edit_distance(a, b);
  return 1.0 - static_cast<double>(distance) / static_cast<double>(longest);
}

// Punctuation-presence consistency between the punctuated flag and the
// sentence text. This is a consistency check only; nothing restores or
// strips punctuation.
inline bool contains_punctuation(std::string_view text) {
  static const std::set<char32_t> marks{
      U'.', U',', U'!', U'?', U';', U':',
      U'。', U'，', U'！', U'？', U'、', U'；',
      U'：', U'؟', U'،', U'।'};
  for (char32_t cp : utf8::decode(text))
    if (marks.count(cp)) return true;
  return false;
}

inline std::optional<std::string> check_punctuation(const Utterance& u) {
  bool any = false;
  for (const auto& s : u.sentences) any = any || contains_punctuation(s.text);
  if (u.punctuated && !u.sentences.empty() && !any)
    return "punct flag set but text carries no punctuation";
  if (!u.punctuated && any)
    return "punct flag unset but text carries punctuation";
  return std::nullopt;
}

// One clip produced by segmentation. over_length marks a single sentence
// that alone exceeds the clip limit and so could not be split further.
struct Clip {
  Utterance utterance;
  bool over_length = false;
};

// Greedily packs consecutive sentences into clips spanning at most
// max_len_s. Boundaries fall only between sentences (timestamps are
// sentence-level); clip-local times are re-based to the clip start.
inline std::vector<Clip> segment_long_audio(const Utterance& u,
                                            double max_len_s = 30.0) {
  if (u.sentences.empty())
    throw InvalidArgument("segment_long_audio: no sentences in " + u.id);
  std::vector<Clip> clips;
  std::size_t begin = 0;
  while (begin < u.sentences.size()) {
    std::size_t end = begin + 1;
    while (end < u.sentences.size() &&
           u.sentences[end].end_s - u.sentences[begin].start_s <= max_len_s)
      ++end;
    const double clip_start = u.sentences[begin].start_s;
    const double clip_end = u.sentences[end - 1].end_s;

    Clip clip;
    clip.over_length = clip_end - clip_start > max_len_s;
    Utterance& out = clip.utterance;
    char suffix[8];
    std::snprintf(suffix, sizeof(suffix), "-%03zu", clips.size());
    out.id = u.id + suffix;
    out.audio_path = u.audio_path;
    out.duration_s = clip_end - clip_start;
    out.tag = u.tag;
    out.punctuated = u.punctuated;
    out.itn = u.itn;
    out.dataset = u.dataset;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& s = u.sentences[i];
      out.sentences.push_back(
          Sentence{s.start_s - clip_start, s.end_s - clip_start, s.text});
    }
    clips.push_back(std::move(clip));
    begin = end;
  }
  // A single clip keeps the source id; suffixes only disambiguate splits.
  if (clips.size() == 1) clips.front().utterance.id = u.id;
  return clips;
}

}  // namespace corpuskit
