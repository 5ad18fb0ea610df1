#pragma once

#include <cstddef>
#include <vector>

namespace corpuskit {

// Substitution/insertion/deletion/hit counts of a minimal-cost alignment.
// Insertions are hypothesis tokens with no reference counterpart, deletions
// are reference tokens with no hypothesis counterpart.
struct EditAlignment {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t hits = 0;

  std::size_t errors() const { return substitutions + insertions + deletions; }
  std::size_t ref_length() const { return substitutions + deletions + hits; }

  bool operator==(const EditAlignment&) const = default;
};

// Unit-cost Levenshtein alignment via dynamic programming. Ties in the
// backtrace prefer substitution over insertion over deletion, so the
// breakdown is deterministic.
template <typename Seq>
EditAlignment align(const Seq& ref, const Seq& hyp) {
  const std::size_t m = ref.size();
  const std::size_t n = hyp.size();
  std::vector<std::size_t> cost((m + 1) * (n + 1));
  const auto at = [&](std::size_t i, std::size_t j) -> std::size_t& {
    return cost[i * (n + 1) + j];
  };
  for (std::size_t i = 0; i <= m; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= n; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t sub =
          at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const std::size_t ins = at(i, j - 1) + 1;
      const std::size_t del = at(i - 1, j) + 1;
      std::size_t best = sub;
      if (ins < best) best = ins;
      if (del < best) best = del;
      at(i, j) = best;
    }
  }
  EditAlignment a;
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        at(i, j) == at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      if (ref[i - 1] == hyp[j - 1])
        ++a.hits;
      else
        ++a.substitutions;
      --i;
      --j;
    } else if (j > 0 && at(i, j) == at(i, j - 1) + 1) {
      ++a.insertions;
      --j;
    } else {
      ++a.deletions;
      --i;
    }
  }
  return a;
}

// Distance only; convenience over align().
template <typename Seq>
std::size_t edit_distance(const Seq& ref, const Seq& hyp) {
  return align(ref, hyp).errors();
}

}  // namespace corpuskit
