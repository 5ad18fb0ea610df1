#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include <json.hpp>

#include "corpuskit/manifest.hpp"

namespace corpuskit {

// Six 5-second duration buckets over [0,30] s; durations beyond 30 s are
// counted in the last bucket so counts always sum to the utterance count.
inline int duration_bucket(double seconds) {
  if (seconds < 0.0) return 0;
  const int b = static_cast<int>(seconds / 5.0);
  return b > 5 ? 5 : b;
}

// Decade bins over per-tag hour totals: <1, 1-10, 10-100, 100-1k, >=1k.
inline int hours_decade_bin(double hours) {
  if (hours < 1.0) return 0;
  if (hours < 10.0) return 1;
  if (hours < 100.0) return 2;
  if (hours < 1000.0) return 3;
  return 4;
}

struct TagStats {
  LanguageTag tag;
  std::size_t utterance_count = 0;
  double total_hours = 0.0;
  std::array<std::size_t, 6> duration_histogram{};
  int decade_bin = 0;
};

struct StatsReport {
  std::vector<TagStats> per_tag;  // sorted by tag
  std::size_t total_utterances = 0;
  double total_hours = 0.0;
  std::array<std::size_t, 6> duration_histogram{};
  // Number of tags whose hour total falls in each decade bin.
  std::array<std::size_t, 5> decade_counts{};
};

inline StatsReport corpus_stats(const std::vector<Utterance>& utterances) {
  std::map<LanguageTag, TagStats> by_tag;
  StatsReport report;
  for (const auto& u : utterances) {
    auto& t = by_tag[u.tag];
    t.tag = u.tag;
    t.utterance_count += 1;
    t.total_hours += u.duration_s / 3600.0;
    t.duration_histogram[static_cast<std::size_t>(duration_bucket(u.duration_s))] += 1;
    report.total_utterances += 1;
    report.total_hours += u.duration_s / 3600.0;
    report.duration_histogram[static_cast<std::size_t>(duration_bucket(u.duration_s))] += 1;
  }
  for (auto& [tag, stats] : by_tag) {
    stats.decade_bin = hours_decade_bin(stats.total_hours);
    report.decade_counts[static_cast<std::size_t>(stats.decade_bin)] += 1;
    report.per_tag.push_back(stats);
  }
  return report;
}

inline nlohmann::ordered_json stats_to_json(const StatsReport& r) {
  nlohmann::ordered_json j;
  j["total_utterances"] = r.total_utterances;
  j["total_hours"] = r.total_hours;
  j["duration_histogram"] = r.duration_histogram;
  j["decade_counts"] = r.decade_counts;
  auto tags = nlohmann::ordered_json::array();
  for (const auto& t : r.per_tag) {
    nlohmann::ordered_json jt;
    jt["tag"] = t.tag.hyphenated();
    jt["utterances"] = t.utterance_count;
    jt["hours"] = t.total_hours;
    jt["duration_histogram"] = t.duration_histogram;
    jt["decade_bin"] = t.decade_bin;
    tags.push_back(std::move(jt));
  }
  j["per_tag"] = std::move(tags);
  return j;
}

}  // namespace corpuskit
