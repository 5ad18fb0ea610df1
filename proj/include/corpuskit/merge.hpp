#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "corpuskit/codec.hpp"
#include "corpuskit/error.hpp"
#include "corpuskit/manifest.hpp"
#include "corpuskit/rng.hpp"

namespace corpuskit {

inline constexpr double kMergeCapacityS = 30.0;
inline constexpr double kMergeTargetMinS = 25.0;

// Bucket of a merged duration: [0,5),[5,10),[10,15),[15,20),[20,25),[25,30].
inline int merge_bucket(double total_s) {
  const int b = static_cast<int>(total_s / 5.0);
  return b > 5 ? 5 : (b < 0 ? 0 : b);
}

enum class MergeMode { target_25_30, bucket_balance };

inline std::string_view merge_mode_name(MergeMode m) {
  return m == MergeMode::target_25_30 ? "target-25-30" : "bucket-balance";
}

inline MergeMode merge_mode_from_name(std::string_view name) {
  if (name == "target-25-30") return MergeMode::target_25_30;
  if (name == "bucket-balance") return MergeMode::bucket_balance;
  throw ParseError("unknown merge mode: '" + std::string(name) + "'");
}

struct MergePart {
  std::string utt_id;
  double offset_s = 0.0;

  bool operator==(const MergePart&) const = default;
};

// One logical concatenation: ordered source parts with cumulative offsets.
// No audio bytes move; this is the mapping dictionary consumed at training
// time.
struct MergedSegment {
  std::string merged_id;
  std::vector<MergePart> parts;
  double total_duration_s = 0.0;
  int bucket = 0;
};

struct MergePlan {
  MergeMode mode = MergeMode::target_25_30;
  std::vector<MergedSegment> segments;
};

namespace merge_detail {

struct Item {
  const Utterance* utt = nullptr;
  double duration() const { return utt->duration_s; }
  const std::string& id() const { return utt->id; }
};

// Merging requires one header per segment, so only utterances sharing
// language, region and both text flags may combine.
struct GroupKey {
  std::string language, region;
  bool punctuated = false, itn = false;

  auto operator<=>(const GroupKey&) const = default;

  std::string str() const {
    return language + "-" + region + (punctuated ? "+p" : "-p") +
           (itn ? "+i" : "-i");
  }
};

inline MergedSegment finish_segment(std::vector<Item> items, std::size_t seq) {
  MergedSegment seg;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "m%06zu", seq);
  seg.merged_id = buf;
  double offset = 0.0;
  for (const auto& item : items) {
    seg.parts.push_back({item.id(), offset});
    offset += item.duration();
  }
  seg.total_duration_s = offset;
  seg.bucket = merge_bucket(offset);
  return seg;
}

// First-fit-decreasing with 30 s capacity. Bins that end at >=25 s hit the
// target range; smaller ones are terminal leftovers and stay as-is.
inline void plan_group_target(std::vector<Item> items,
                              std::vector<std::vector<Item>>& bins) {
  std::vector<std::vector<Item>> open;
  std::vector<double> totals;
  for (auto& item : items) {
    bool placed = false;
    for (std::size_t b = 0; b < open.size(); ++b) {
      if (totals[b] + item.duration() <= kMergeCapacityS + 1e-9) {
        totals[b] += item.duration();
        open[b].push_back(item);
        placed = true;
        break;
      }
    }
    if (!placed) {
      open.push_back({item});
      totals.push_back(item.duration());
    }
  }
  for (auto& bin : open) bins.push_back(std::move(bin));
}

// Builds segments whose totals cycle through the six 5-second buckets,
// evening the final histogram. Items are drawn largest-first while they fit
// under the current bucket's upper edge.
inline void plan_group_buckets(std::vector<Item> items, rng::SplitMix& gen,
                               std::vector<std::vector<Item>>& bins) {
  int next_bucket = static_cast<int>(gen.bounded(6));
  while (!items.empty()) {
    const int b = next_bucket;
    next_bucket = (next_bucket + 1) % 6;
    const double lower = 5.0 * b;
    const double upper = b == 5 ? kMergeCapacityS : 5.0 * (b + 1) - 1e-9;

    std::vector<Item> segment;
    double total = 0.0;
    while (total < lower || segment.empty()) {
      // Largest item that keeps the segment inside the target bucket.
      std::size_t pick = items.size();
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (total + items[i].duration() <= upper) {
          pick = i;
          break;
        }
      }
      if (pick == items.size()) {
        if (!segment.empty()) break;
        // Nothing fits the target; fall back to the smallest remaining item
        // so the overshoot lands as low as possible.
        pick = items.size() - 1;
      }
      total += items[pick].duration();
      segment.push_back(items[pick]);
      items.erase(items.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    bins.push_back(std::move(segment));
  }
}

}  // namespace merge_detail

// Plans logical merges per (language, region, punct, itn) group.
// target-25-30 packs toward 25-30 s segments; bucket-balance levels the
// six-bucket duration histogram. Deterministic for a given seed.
inline MergePlan plan_merge(const std::vector<Utterance>& utterances,
                            MergeMode mode, std::uint64_t seed = 0) {
  using merge_detail::GroupKey;
  using merge_detail::Item;

  std::map<GroupKey, std::vector<Item>> groups;
  for (const auto& u : utterances) {
    if (u.duration_s > kMergeCapacityS + 1e-9)
      throw InvalidArgument("plan_merge: utterance " + u.id + " exceeds 30 s; " +
                            "segment long audio first");
    groups[GroupKey{u.tag.language, u.tag.region, u.punctuated, u.itn}]
        .push_back(Item{&u});
  }

  MergePlan plan;
  plan.mode = mode;
  std::size_t seq = 0;
  for (auto& [key, items] : groups) {
    // Descending duration, ties by id, so plans are input-order independent.
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      if (a.duration() != b.duration()) return a.duration() > b.duration();
      return a.id() < b.id();
    });
    std::vector<std::vector<Item>> bins;
    if (mode == MergeMode::target_25_30) {
      merge_detail::plan_group_target(std::move(items), bins);
    } else {
      rng::SplitMix gen(rng::mix({seed, rng::fnv1a64(key.str())}));
      merge_detail::plan_group_buckets(std::move(items), gen, bins);
    }
    for (auto& bin : bins)
      plan.segments.push_back(merge_detail::finish_segment(std::move(bin), seq++));
  }
  return plan;
}

inline std::array<std::size_t, 6> bucket_histogram(const MergePlan& plan) {
  std::array<std::size_t, 6> counts{};
  for (const auto& seg : plan.segments)
    counts[static_cast<std::size_t>(seg.bucket)] += 1;
  return counts;
}

// Merged transcript: each part's sentences shifted by its offset, under the
// shared header. All parts must resolve and agree on tag and flags.
inline std::pair<Header, std::vector<Sentence>> materialize_transcript(
    const MergedSegment& segment,
    const std::function<const Utterance*(const std::string&)>& lookup) {
  if (segment.parts.empty())
    throw InvalidArgument("materialize_transcript: empty segment");
  Header header;
  std::vector<Sentence> sentences;
  bool first = true;
  for (const auto& part : segment.parts) {
    const Utterance* u = lookup(part.utt_id);
    if (u == nullptr)
      throw InvalidArgument("materialize_transcript: missing part id " +
                            part.utt_id);
    if (first) {
      header.tag = u->tag;
      header.task = Task::asr;
      header.punctuated = u->punctuated;
      header.itn = u->itn;
      header.with_timestamps = true;
      first = false;
    } else if (u->tag != header.tag) {
      throw InvalidArgument("materialize_transcript: tag mismatch in segment " +
                            segment.merged_id + " (" + header.tag.hyphenated() +
                            " vs " + u->tag.hyphenated() + ")");
    } else if (u->punctuated != header.punctuated || u->itn != header.itn) {
      throw InvalidArgument("materialize_transcript: flag mismatch in segment " +
                            segment.merged_id);
    }
    for (const auto& s : u->sentences)
      sentences.push_back(
          Sentence{s.start_s + part.offset_s, s.end_s + part.offset_s, s.text});
  }
  return {header, std::move(sentences)};
}

inline nlohmann::ordered_json plan_to_json(const MergePlan& plan) {
  nlohmann::ordered_json j;
  j["mode"] = std::string(merge_mode_name(plan.mode));
  auto segments = nlohmann::ordered_json::array();
  for (const auto& seg : plan.segments) {
    nlohmann::ordered_json js;
    js["id"] = seg.merged_id;
    js["bucket"] = seg.bucket;
    auto parts = nlohmann::ordered_json::array();
    for (const auto& p : seg.parts) {
      nlohmann::ordered_json jp;
      jp["utt"] = p.utt_id;
      jp["offset_s"] = p.offset_s;
      parts.push_back(std::move(jp));
    }
    js["parts"] = std::move(parts);
    segments.push_back(std::move(js));
  }
  j["segments"] = std::move(segments);
  return j;
}

// Totals are not stored in the file; when a duration lookup is supplied the
// segment totals and buckets are reconstructed from it.
inline MergePlan plan_from_json(
    const nlohmann::json& j,
    const std::function<double(const std::string&)>* duration_of = nullptr) {
  MergePlan plan;
  plan.mode = merge_mode_from_name(j.at("mode").get<std::string>());
  for (const auto& js : j.at("segments")) {
    MergedSegment seg;
    seg.merged_id = js.at("id").get<std::string>();
    seg.bucket = js.at("bucket").get<int>();
    for (const auto& jp : js.at("parts"))
      seg.parts.push_back(MergePart{jp.at("utt").get<std::string>(),
                                    jp.at("offset_s").get<double>()});
    if (duration_of && !seg.parts.empty()) {
      const auto& last = seg.parts.back();
      seg.total_duration_s = last.offset_s + (*duration_of)(last.utt_id);
      seg.bucket = merge_bucket(seg.total_duration_s);
    }
    plan.segments.push_back(std::move(seg));
  }
  return plan;
}

}  // namespace corpuskit
