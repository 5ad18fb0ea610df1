#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "corpuskit/error.hpp"
#include "corpuskit/rng.hpp"

namespace corpuskit {

// Shard membership policy across epochs. static_membership keeps each
// rank's subset fixed (the per-rank memory guarantee holds for the whole
// run) and reshuffles only the within-shard order; reshuffle_each_epoch
// additionally re-deals membership every epoch.
enum class ShardMode { static_membership, reshuffle_each_epoch };

inline std::string_view shard_mode_name(ShardMode m) {
  return m == ShardMode::static_membership ? "static" : "reshuffle-each-epoch";
}

inline ShardMode shard_mode_from_name(std::string_view name) {
  if (name == "static") return ShardMode::static_membership;
  if (name == "reshuffle-each-epoch") return ShardMode::reshuffle_each_epoch;
  throw ParseError("unknown shard mode: '" + std::string(name) + "'");
}

struct ShardItem {
  std::string id;
  double duration_s = 0.0;
};

struct ShardAssignment {
  unsigned world_size = 1;
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  ShardMode mode = ShardMode::static_membership;
  std::vector<std::vector<std::string>> shards;  // per-rank item ids, in order
  std::vector<double> shard_durations;           // per-rank total seconds
};

// Longest-processing-time partition: items sorted by duration descending
// (ties by id) each go to the rank with the smallest running total. Each
// rank's list is then shuffled by a generator keyed on (seed, epoch, rank),
// so epochs permute order but never membership (static mode).
inline ShardAssignment assign_shards(std::vector<ShardItem> items,
                                     unsigned world_size, std::uint64_t seed,
                                     std::uint64_t epoch,
                                     ShardMode mode = ShardMode::static_membership) {
  if (world_size == 0)
    throw InvalidArgument("assign_shards: world_size must be >= 1");
  {
    std::set<std::string_view> ids;
    for (const auto& item : items)
      if (!ids.insert(item.id).second)
        throw InvalidArgument("assign_shards: duplicate id " + item.id);
  }

  // In reshuffle mode the LPT tie-break key is an epoch-keyed permutation
  // instead of the id, so equal-duration membership re-deals per epoch.
  std::vector<std::size_t> tie_key(items.size());
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return items[a].id < items[b].id;
  });
  if (mode == ShardMode::reshuffle_each_epoch) {
    rng::SplitMix gen(rng::mix({seed, epoch, 0x7265736875ull}));
    rng::shuffle(order, gen);
  }
  for (std::size_t rank_pos = 0; rank_pos < order.size(); ++rank_pos)
    tie_key[order[rank_pos]] = rank_pos;

  std::vector<std::size_t> by_duration(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) by_duration[i] = i;
  std::sort(by_duration.begin(), by_duration.end(),
            [&](std::size_t a, std::size_t b) {
              if (items[a].duration_s != items[b].duration_s)
                return items[a].duration_s > items[b].duration_s;
              return tie_key[a] < tie_key[b];
            });

  ShardAssignment assignment;
  assignment.world_size = world_size;
  assignment.seed = seed;
  assignment.epoch = epoch;
  assignment.mode = mode;
  assignment.shards.resize(world_size);
  assignment.shard_durations.assign(world_size, 0.0);
  for (std::size_t idx : by_duration) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < world_size; ++r)
      if (assignment.shard_durations[r] < assignment.shard_durations[best])
        best = r;
    assignment.shards[best].push_back(items[idx].id);
    assignment.shard_durations[best] += items[idx].duration_s;
  }
  for (std::size_t r = 0; r < world_size; ++r) {
    rng::SplitMix gen(rng::mix({seed, epoch, static_cast<std::uint64_t>(r)}));
    rng::shuffle(assignment.shards[r], gen);
  }
  return assignment;
}

// Partition contract checks: pairwise disjoint shards that exactly cover
// the input id set. Returns human-readable violations; empty means ok.
inline std::vector<std::string> verify_partition(
    const ShardAssignment& assignment, const std::vector<ShardItem>& items) {
  std::vector<std::string> violations;
  std::map<std::string, double> duration_by_id;
  for (const auto& item : items) duration_by_id.emplace(item.id, item.duration_s);

  std::set<std::string> seen;
  for (std::size_t r = 0; r < assignment.shards.size(); ++r) {
    for (const auto& id : assignment.shards[r]) {
      if (!duration_by_id.count(id))
        violations.push_back("unknown id in shard " + std::to_string(r) + ": " + id);
      if (!seen.insert(id).second) violations.push_back("duplicate " + id);
    }
  }
  for (const auto& item : items)
    if (!seen.count(item.id)) violations.push_back("missing id: " + item.id);
  return violations;
}

// Max/min loaded-rank duration ratio; empty ranks are ignored.
inline double shard_balance_ratio(const ShardAssignment& assignment) {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (double d : assignment.shard_durations) {
    if (d <= 0.0) continue;
    if (first) {
      lo = hi = d;
      first = false;
    } else {
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  }
  return first || lo == 0.0 ? 1.0 : hi / lo;
}

inline nlohmann::ordered_json shard_meta_to_json(const ShardAssignment& a) {
  nlohmann::ordered_json j;
  j["world_size"] = a.world_size;
  j["seed"] = a.seed;
  j["epoch"] = a.epoch;
  j["mode"] = std::string(shard_mode_name(a.mode));
  j["prng"] = rng::kPrngId;
  auto ranks = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < a.shards.size(); ++r) {
    nlohmann::ordered_json jr;
    jr["rank"] = r;
    jr["items"] = a.shards[r].size();
    jr["total_duration_s"] = a.shard_durations[r];
    ranks.push_back(std::move(jr));
  }
  j["ranks"] = std::move(ranks);
  return j;
}

}  // namespace corpuskit
