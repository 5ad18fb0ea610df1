#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "corpuskit/edit_distance.hpp"
#include "corpuskit/error.hpp"
#include "corpuskit/manifest.hpp"
#include "corpuskit/parallel.hpp"
#include "corpuskit/utf8.hpp"

namespace corpuskit {

enum class Metric { wer, cer };

inline std::string_view metric_name(Metric m) {
  return m == Metric::wer ? "WER" : "CER";
}

// Trim plus inner whitespace collapse; no case folding, punctuation kept.
inline std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = !out.empty();
      continue;
    }
    if (in_space) out.push_back(' ');
    in_space = false;
    out.push_back(c);
  }
  return out;
}

inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

// 100 * (S+I+D) / N. An empty reference with insertions has no finite rate;
// +infinity is the sentinel (values above 100 are otherwise legitimate).
inline double wer_percent(const EditAlignment& a) {
  if (a.ref_length() == 0)
    return a.insertions == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return 100.0 * static_cast<double>(a.errors()) /
         static_cast<double>(a.ref_length());
}

inline EditAlignment align_words(std::string_view ref, std::string_view hyp) {
  return align(split_words(normalize_text(ref)), split_words(normalize_text(hyp)));
}

// Character tokens for CER. strip_whitespace drops all spaces first, the
// convention for space-free scripts.
inline std::vector<char32_t> char_tokens(std::string_view text,
                                         bool strip_whitespace) {
  std::vector<char32_t> out;
  for (char32_t cp : utf8::decode(normalize_text(text)))
    if (!(strip_whitespace && cp == U' ')) out.push_back(cp);
  return out;
}

inline EditAlignment align_chars(std::string_view ref, std::string_view hyp,
                                 bool strip_whitespace = true) {
  return align(char_tokens(ref, strip_whitespace), char_tokens(hyp, strip_whitespace));
}

inline double cer_percent(std::string_view ref, std::string_view hyp,
                          bool strip_whitespace = true) {
  return wer_percent(align_chars(ref, hyp, strip_whitespace));
}

// Rounded to one decimal, half away from zero (table presentation rule).
inline double round_1dp(double value) { return std::round(value * 10.0) / 10.0; }

// Unweighted arithmetic mean across rows, reported to one decimal.
inline double macro_average(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("macro_average of empty list");
  double sum = 0.0;
  for (double v : values) sum += v;
  return round_1dp(sum / static_cast<double>(values.size()));
}

// 100 * (baseline - improved) / baseline, full precision.
inline double relative_reduction(double baseline, double improved) {
  if (!(baseline > 0.0))
    throw InvalidArgument("relative_reduction requires baseline > 0");
  return 100.0 * (baseline - improved) / baseline;
}

struct ScoreRow {
  LanguageTag tag;
  Metric metric = Metric::wer;
  double value = 0.0;  // pooled percent, full precision
  EditAlignment pooled;
  std::size_t utterances = 0;
};

struct ScoreReport {
  std::vector<ScoreRow> rows;  // sorted by tag
  double aggregate = 0.0;      // macro average over rows, one decimal
  std::vector<std::string> missing_hyp_ids;
  std::vector<std::string> unknown_hyp_ids;
};

struct ScoreOptions {
  // Languages scored by CER (space-free scripts); everything else uses WER.
  std::set<std::string> cer_languages{"zh", "ja", "th"};
  std::map<LanguageTag, Metric> metric_overrides;
  bool strip_whitespace_for_cer = true;
  // strict: missing hypotheses count as all-deletion instead of being skipped.
  bool strict = false;
  unsigned jobs = 1;
};

inline Metric metric_for(const LanguageTag& tag, const ScoreOptions& opt) {
  const auto it = opt.metric_overrides.find(tag);
  if (it != opt.metric_overrides.end()) return it->second;
  return opt.cer_languages.count(tag.language) ? Metric::cer : Metric::wer;
}

// Pooled corpus-level scoring: per tag, 100 * sum(errors) / sum(N); the
// aggregate row is the macro average across tags.
inline ScoreReport score_manifests(const std::vector<Utterance>& refs,
                                   const std::vector<Utterance>& hyps,
                                   const ScoreOptions& opt = {}) {
  std::map<std::string, const Utterance*> hyp_by_id;
  for (const auto& h : hyps) hyp_by_id.emplace(h.id, &h);

  ScoreReport report;
  std::set<std::string> ref_ids;
  for (const auto& r : refs) ref_ids.insert(r.id);
  for (const auto& h : hyps)
    if (!ref_ids.count(h.id)) report.unknown_hyp_ids.push_back(h.id);

  struct UttScore {
    LanguageTag tag;
    Metric metric = Metric::wer;
    EditAlignment alignment;
    bool counted = false;
  };
  auto scores = parallel_map(refs.size(), opt.jobs, [&](std::size_t i) {
    const Utterance& ref = refs[i];
    UttScore s;
    s.tag = ref.tag;
    s.metric = metric_for(ref.tag, opt);
    const auto it = hyp_by_id.find(ref.id);
    const std::string ref_text = utterance_text(ref);
    if (it == hyp_by_id.end()) {
      if (!opt.strict) return s;  // reported, not scored
      // All-deletion: every reference token is missing.
      const std::string empty;
      s.alignment = s.metric == Metric::wer
                        ? align_words(ref_text, empty)
                        : align_chars(ref_text, empty, opt.strip_whitespace_for_cer);
      s.counted = true;
      return s;
    }
    const std::string hyp_text = utterance_text(*it->second);
    s.alignment = s.metric == Metric::wer
                      ? align_words(ref_text, hyp_text)
                      : align_chars(ref_text, hyp_text, opt.strip_whitespace_for_cer);
    s.counted = true;
    return s;
  });
  for (std::size_t i = 0; i < refs.size(); ++i)
    if (!hyp_by_id.count(refs[i].id))
      report.missing_hyp_ids.push_back(refs[i].id);

  std::map<LanguageTag, ScoreRow> rows;
  for (const auto& s : scores) {
    if (!s.counted) continue;
    auto& row = rows[s.tag];
    row.tag = s.tag;
    row.metric = s.metric;
    row.pooled.substitutions += s.alignment.substitutions;
    row.pooled.insertions += s.alignment.insertions;
    row.pooled.deletions += s.alignment.deletions;
    row.pooled.hits += s.alignment.hits;
    row.utterances += 1;
  }
  std::vector<double> values;
  for (auto& [tag, row] : rows) {
    row.value = wer_percent(row.pooled);
    values.push_back(row.value);
    report.rows.push_back(row);
  }
  report.aggregate = values.empty() ? 0.0 : macro_average(values);
  return report;
}

inline nlohmann::ordered_json score_report_to_json(const ScoreReport& r) {
  nlohmann::ordered_json j;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json jr;
    jr["tag"] = row.tag.hyphenated();
    jr["metric"] = std::string(metric_name(row.metric));
    jr["value"] = row.value;
    jr["substitutions"] = row.pooled.substitutions;
    jr["insertions"] = row.pooled.insertions;
    jr["deletions"] = row.pooled.deletions;
    jr["hits"] = row.pooled.hits;
    jr["utterances"] = row.utterances;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  j["aggregate"] = r.aggregate;
  j["missing_hyp_ids"] = r.missing_hyp_ids;
  j["unknown_hyp_ids"] = r.unknown_hyp_ids;
  return j;
}

// Markdown table, one row per tag plus the aggregate row.
inline std::string score_report_to_markdown(const ScoreReport& r,
                                            std::string_view system = "system") {
  std::ostringstream out;
  out << "| Tag | Metric | " << system << " |\n";
  out << "|---|---|---|\n";
  out.setf(std::ios::fixed);
  out.precision(1);
  for (const auto& row : r.rows)
    out << "| " << row.tag.hyphenated() << " | " << metric_name(row.metric)
        << " | " << row.value << " |\n";
  out << "| average | - | " << r.aggregate << " |\n";
  return out.str();
}

}  // namespace corpuskit
