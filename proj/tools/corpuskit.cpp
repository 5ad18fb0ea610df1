// corpuskit command-line front end: one binary, one subcommand per pipeline
// stage (langtags, clean, stats, plan-merge, shard, codec, tokenize, score).
//
// Exit codes: 0 success, 1 runtime/data error (or data violations under
// --strict), 2 usage error. Diagnostics go to stderr, data to files/stdout.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corpuskit/bpe.hpp"
#include "corpuskit/cleaning.hpp"
#include "corpuskit/codec.hpp"
#include "corpuskit/error.hpp"
#include "corpuskit/langtags.hpp"
#include "corpuskit/manifest.hpp"
#include "corpuskit/merge.hpp"
#include "corpuskit/parallel.hpp"
#include "corpuskit/scorer.hpp"
#include "corpuskit/shard.hpp"
#include "corpuskit/stats.hpp"
#include "corpuskit/wav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct GlobalOptions {
  bool strict = false;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
  std::string registry_path;
};

corpuskit::Registry load_registry(const GlobalOptions& g) {
  if (!g.registry_path.empty())
    return corpuskit::Registry::from_csv_file(g.registry_path);
  return corpuskit::Registry::builtin();
}

// Reads a manifest and reports (or, under --strict, rejects) bad lines.
corpuskit::ManifestReadResult read_manifest_checked(const std::string& path,
                                                    bool strict) {
  auto result = corpuskit::read_manifest(path, strict);
  for (const auto& e : result.errors) {
    if (e.line > 0)
      std::cerr << path << ":" << e.line << ": " << e.message << "\n";
    else
      std::cerr << path << ": " << e.message << "\n";
  }
  return result;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw corpuskit::Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- langtags

int run_langtags_list(const GlobalOptions& g, const std::string& language) {
  const auto registry = load_registry(g);
  const auto emit = [](const corpuskit::RegistryEntry& e) {
    std::cout << e.tag.hyphenated() << "," << e.display_name << "\n";
  };
  if (language.empty()) {
    for (const auto& e : registry.entries()) emit(e);
  } else {
    for (const auto& e : registry.dialects(language)) emit(e);
  }
  return 0;
}

int run_langtags_check(const GlobalOptions& g, const std::string& text) {
  const auto registry = load_registry(g);
  corpuskit::LanguageTag tag;
  try {
    tag = corpuskit::parse_tag(text);
  } catch (const corpuskit::ParseError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 1;
  }
  const auto entry = registry.lookup(tag);
  std::cout << tag.hyphenated() << " " << tag.tokens() << " "
            << (entry ? entry->display_name : "(not in registry)") << "\n";
  if (g.strict && !entry) {
    std::cerr << "strict: tag not in registry: " << tag.hyphenated() << "\n";
    return 1;
  }
  return 0;
}

// ------------------------------------------------------------------- clean

struct CleanOptions {
  std::string manifest;
  std::string out;
  std::string rejected;
  double max_ratio = 0.0;  // 0 = per-script default
  double tol_s = corpuskit::kTimestampToleranceS;
  double max_len_s = 30.0;
  bool check_punct = true;
  bool segment = true;
};

int run_clean(const GlobalOptions& g, const CleanOptions& opt) {
  const auto input = read_manifest_checked(opt.manifest, g.strict);
  const auto& utterances = input.utterances;

  struct Outcome {
    bool keep = true;
    corpuskit::FilterVerdict verdict;
    std::string detail;
    std::vector<corpuskit::Clip> clips;
  };
  const auto outcomes =
      corpuskit::parallel_map(utterances.size(), g.jobs, [&](std::size_t i) {
        const auto& u = utterances[i];
        Outcome o;
        if (!(u.duration_s > 0.0)) {
          o.keep = false;
          o.verdict = {false, "invalid_duration", u.duration_s, 0.0};
          return o;
        }
        const auto ts_violations = corpuskit::validate_timestamps(u, opt.tol_s);
        if (!ts_violations.empty()) {
          o.keep = false;
          o.verdict = {false, "timestamps",
                       static_cast<double>(ts_violations.size()), opt.tol_s};
          o.detail = ts_violations.front();
          return o;
        }
        const double ratio = opt.max_ratio > 0.0
                                 ? opt.max_ratio
                                 : corpuskit::default_max_ratio(u.tag);
        o.verdict = corpuskit::speech_ratio_filter(u, ratio);
        if (!o.verdict.keep) {
          o.keep = false;
          return o;
        }
        if (opt.check_punct) {
          if (const auto problem = corpuskit::check_punctuation(u)) {
            o.keep = false;
            o.verdict = {false, "punctuation_consistency", 1.0, 0.0};
            o.detail = *problem;
            return o;
          }
        }
        if (opt.segment && u.duration_s > opt.max_len_s) {
          if (u.sentences.empty()) {
            // No sentence timestamps to cut at: unusable for clip-limited
            // downstream stages.
            o.keep = false;
            o.verdict = {false, "overlength_unsegmentable", u.duration_s,
                         opt.max_len_s};
            return o;
          }
          o.clips = corpuskit::segment_long_audio(u, opt.max_len_s);
        }
        return o;
      });

  std::vector<corpuskit::Utterance> kept;
  std::ofstream rejected_out;
  if (!opt.rejected.empty()) {
    rejected_out.open(opt.rejected, std::ios::binary);
    if (!rejected_out)
      throw corpuskit::Error("cannot write: " + opt.rejected);
  }
  std::size_t rejected_count = 0, over_length = 0;
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.keep) {
      if (o.clips.empty()) {
        kept.push_back(utterances[i]);
      } else {
        for (const auto& clip : o.clips) {
          kept.push_back(clip.utterance);
          if (clip.over_length) {
            ++over_length;
            std::cerr << "warning: clip " << clip.utterance.id
                      << " exceeds " << opt.max_len_s << " s (single sentence)\n";
          }
        }
      }
      continue;
    }
    ++rejected_count;
    if (rejected_out.is_open()) {
      ordered_json j;
      j["id"] = utterances[i].id;
      j["rule"] = o.verdict.rule;
      j["measured"] = o.verdict.measured;
      j["threshold"] = o.verdict.threshold;
      if (!o.detail.empty()) j["detail"] = o.detail;
      rejected_out << j.dump() << "\n";
    }
  }
  corpuskit::write_manifest(kept, opt.out);
  std::cerr << "clean: kept " << kept.size() << " (of " << utterances.size()
            << " read, " << rejected_count << " rejected, " << over_length
            << " over-length clips)\n";
  return 0;
}

// ------------------------------------------------------------------- stats

int run_stats(const GlobalOptions& g, const std::string& manifest,
              const std::string& report_path) {
  const auto input = read_manifest_checked(manifest, g.strict);
  const auto report = corpuskit::corpus_stats(input.utterances);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", report.total_hours);
  std::cout << "utterances: " << report.total_utterances << "\n";
  std::cout << "total_hours: " << buf << "\n";
  std::cout << "duration_histogram:";
  for (auto c : report.duration_histogram) std::cout << " " << c;
  std::cout << "\n";
  std::cout << "hours_decade_counts(<1,1-10,10-100,100-1k,>=1k):";
  for (auto c : report.decade_counts) std::cout << " " << c;
  std::cout << "\n";
  for (const auto& t : report.per_tag) {
    std::snprintf(buf, sizeof(buf), "%.3f", t.total_hours);
    std::cout << t.tag.hyphenated() << ": " << t.utterance_count
              << " utterances, " << buf << " h\n";
  }
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw corpuskit::Error("cannot write: " + report_path);
    out << corpuskit::stats_to_json(report).dump(2) << "\n";
  }
  return 0;
}

// -------------------------------------------------------------- plan-merge

int run_plan_merge(const GlobalOptions& g, const std::string& manifest,
                   const std::string& mode_name, const std::string& out_path,
                   const std::string& histogram_path) {
  if (!histogram_path.empty()) {
    const auto plan = corpuskit::plan_from_json(
        json::parse(read_text_file(histogram_path)));
    const auto counts = corpuskit::bucket_histogram(plan);
    std::cout << "segments: " << plan.segments.size() << "\n";
    std::cout << "bucket_histogram(0-5,5-10,10-15,15-20,20-25,25-30):";
    for (auto c : counts) std::cout << " " << c;
    std::cout << "\n";
    return 0;
  }
  const auto input = read_manifest_checked(manifest, g.strict);
  const auto mode = corpuskit::merge_mode_from_name(mode_name);
  const auto plan = corpuskit::plan_merge(input.utterances, mode, g.seed);
  if (out_path.empty()) throw corpuskit::Error("plan-merge: --out is required");
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw corpuskit::Error("cannot write: " + out_path);
  out << corpuskit::plan_to_json(plan).dump() << "\n";
  const auto counts = corpuskit::bucket_histogram(plan);
  std::cerr << "plan-merge: " << plan.segments.size() << " segments, histogram:";
  for (auto c : counts) std::cerr << " " << c;
  std::cerr << "\n";
  return 0;
}

// ------------------------------------------------------------------- shard

int run_shard(const GlobalOptions& g, const std::string& manifest,
              unsigned world_size, std::uint64_t epoch,
              const std::string& mode_name, const std::string& out_dir) {
  const auto input = read_manifest_checked(manifest, g.strict);
  std::vector<corpuskit::ShardItem> items;
  std::map<std::string, const corpuskit::Utterance*> by_id;
  for (const auto& u : input.utterances) {
    items.push_back({u.id, u.duration_s});
    by_id.emplace(u.id, &u);
  }
  const auto mode = corpuskit::shard_mode_from_name(mode_name);
  const auto assignment =
      corpuskit::assign_shards(items, world_size, g.seed, epoch, mode);

  fs::create_directories(out_dir);
  for (std::size_t r = 0; r < assignment.shards.size(); ++r) {
    char name[32];
    std::snprintf(name, sizeof(name), "shard-%05zu.jsonl", r);
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) throw corpuskit::Error("cannot write shard file " + std::string(name));
    for (const auto& id : assignment.shards[r])
      out << corpuskit::utterance_to_json(*by_id.at(id)).dump() << "\n";
  }
  std::ofstream meta(fs::path(out_dir) / "shards.meta.json", std::ios::binary);
  if (!meta) throw corpuskit::Error("cannot write shards.meta.json");
  meta << corpuskit::shard_meta_to_json(assignment).dump(2) << "\n";
  std::cerr << "shard: " << items.size() << " items over " << world_size
            << " ranks, balance ratio "
            << corpuskit::shard_balance_ratio(assignment) << "\n";
  return 0;
}

// ------------------------------------------------------------------- codec

corpuskit::Header header_from_json(const json& j) {
  corpuskit::Header h;
  h.tag = corpuskit::make_tag(j.at("lang").get<std::string>(),
                              j.at("region").get<std::string>());
  const auto task = j.value("task", std::string{"asr"});
  if (task == "asr")
    h.task = corpuskit::Task::asr;
  else if (task == "lid")
    h.task = corpuskit::Task::lid;
  else
    throw corpuskit::ParseError("unknown task: " + task);
  h.punctuated = j.value("punct", false);
  h.itn = j.value("itn", false);
  h.with_timestamps = j.value("timestamps", false);
  return h;
}

ordered_json header_to_json(const corpuskit::Header& h) {
  ordered_json j;
  j["lang"] = h.tag.language;
  j["region"] = h.tag.region;
  j["task"] = h.task == corpuskit::Task::asr ? "asr" : "lid";
  j["punct"] = h.punctuated;
  j["itn"] = h.itn;
  j["timestamps"] = h.with_timestamps;
  return j;
}

int run_codec_render(const GlobalOptions& g, const std::string& in_path) {
  const std::string text =
      in_path.empty()
          ? std::string(std::istreambuf_iterator<char>(std::cin), {})
          : read_text_file(in_path);
  const json j = json::parse(text);
  const auto header = header_from_json(j);
  std::vector<corpuskit::Sentence> sentences;
  if (j.contains("sentences")) {
    for (const auto& js : j.at("sentences"))
      sentences.push_back({js.at("start").get<double>(),
                           js.at("end").get<double>(),
                           js.at("text").get<std::string>()});
  }
  const auto seq =
      corpuskit::render(header, sentences, corpuskit::RenderOptions{g.strict});
  ordered_json out;
  out["tokens"] = seq.to_string();
  std::cout << out.dump() << "\n";
  return 0;
}

int run_codec_parse(const std::string& in_path, const std::string& text_arg) {
  std::string text = text_arg;
  if (text.empty())
    text = in_path.empty()
               ? std::string(std::istreambuf_iterator<char>(std::cin), {})
               : read_text_file(in_path);
  // Token streams are single-line; trailing newline from files is noise.
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
    text.pop_back();
  json input = json::value_t::discarded;
  if (!text.empty() && text.front() == '{') {
    input = json::parse(text, nullptr, false);
    if (!input.is_discarded() && input.contains("tokens"))
      text = input.at("tokens").get<std::string>();
  }
  const auto seq = corpuskit::TokenSequence::from_string(text);
  const auto [header, sentences] = corpuskit::parse(seq);
  ordered_json out = header_to_json(header);
  auto js = ordered_json::array();
  for (const auto& s : sentences) {
    ordered_json js_one;
    js_one["start"] = s.start_s;
    js_one["end"] = s.end_s;
    js_one["text"] = s.text;
    js.push_back(std::move(js_one));
  }
  out["sentences"] = std::move(js);
  std::cout << out.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------- tokenize

// Training/encoding lines: either raw text lines or rendered multitask
// sequences built from a manifest.
std::vector<std::string> tokenize_input_lines(const GlobalOptions& g,
                                              const std::string& in_path,
                                              const std::string& manifest_path,
                                              bool render_tokens) {
  std::vector<std::string> lines;
  if (!manifest_path.empty()) {
    const auto input = read_manifest_checked(manifest_path, g.strict);
    for (const auto& u : input.utterances) {
      if (render_tokens) {
        corpuskit::Header h{u.tag, corpuskit::Task::asr, u.punctuated, u.itn,
                            !u.sentences.empty()};
        lines.push_back(corpuskit::render(h, u.sentences).to_string());
      } else {
        lines.push_back(corpuskit::utterance_text(u));
      }
    }
    return lines;
  }
  if (in_path.empty())
    throw corpuskit::Error("tokenize: need --in or --manifest");
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw corpuskit::Error("cannot open file: " + in_path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

int run_tokenize_train(const GlobalOptions& g, const std::string& in_path,
                       const std::string& manifest_path, bool render_tokens,
                       std::size_t vocab_size,
                       const std::vector<std::string>& extra_protected,
                       const std::string& model_path) {
  auto lines = tokenize_input_lines(g, in_path, manifest_path, render_tokens);
  std::vector<std::string> protected_tokens = extra_protected;
  if (render_tokens) {
    const auto registry = load_registry(g);
    protected_tokens = corpuskit::special_vocabulary(&registry);
    protected_tokens.insert(protected_tokens.end(), extra_protected.begin(),
                            extra_protected.end());
  }
  const auto model = corpuskit::train_bpe(lines, vocab_size, protected_tokens);
  corpuskit::save_bpe_model(model, model_path);
  std::cerr << "tokenize: trained " << model.merges.size() << " merges, vocab "
            << model.vocab_size() << "\n";
  return 0;
}

int run_tokenize_encode(const GlobalOptions& g, const std::string& model_path,
                        const std::string& text_arg, const std::string& in_path,
                        const std::string& manifest_path, bool render_tokens,
                        const std::string& out_path) {
  const auto model = corpuskit::load_bpe_model(model_path);
  std::vector<std::string> lines;
  if (!text_arg.empty())
    lines.push_back(text_arg);
  else
    lines = tokenize_input_lines(g, in_path, manifest_path, render_tokens);
  const auto encoded =
      corpuskit::parallel_map(lines.size(), g.jobs, [&](std::size_t i) {
        return corpuskit::encode(model, lines[i]);
      });
  std::ofstream file_out;
  if (!out_path.empty()) {
    file_out.open(out_path, std::ios::binary);
    if (!file_out) throw corpuskit::Error("cannot write: " + out_path);
  }
  std::ostream& out = out_path.empty() ? std::cout : file_out;
  for (const auto& ids : encoded) {
    for (std::size_t k = 0; k < ids.size(); ++k)
      out << (k ? " " : "") << ids[k];
    out << "\n";
  }
  return 0;
}

int run_tokenize_decode(const std::string& model_path,
                        const std::string& ids_arg, const std::string& in_path,
                        const std::string& out_path) {
  const auto model = corpuskit::load_bpe_model(model_path);
  std::vector<std::string> lines;
  if (!ids_arg.empty()) {
    lines.push_back(ids_arg);
  } else {
    std::ifstream in(in_path, std::ios::binary);
    if (!in) throw corpuskit::Error("cannot open file: " + in_path);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  std::ofstream file_out;
  if (!out_path.empty()) {
    file_out.open(out_path, std::ios::binary);
    if (!file_out) throw corpuskit::Error("cannot write: " + out_path);
  }
  std::ostream& out = out_path.empty() ? std::cout : file_out;
  for (const auto& line : lines) {
    std::vector<int> ids;
    std::istringstream ss(line);
    int id;
    while (ss >> id) ids.push_back(id);
    out << corpuskit::decode(model, ids) << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------- score

int run_score(const GlobalOptions& g, const std::string& refs_path,
              const std::string& hyps_path, const std::string& report_path,
              const std::string& table, const std::string& cer_langs,
              const std::vector<std::string>& metric_overrides) {
  const auto refs = read_manifest_checked(refs_path, g.strict);
  const auto hyps = read_manifest_checked(hyps_path, g.strict);

  corpuskit::ScoreOptions opt;
  opt.strict = g.strict;
  opt.jobs = g.jobs;
  if (!cer_langs.empty()) {
    opt.cer_languages.clear();
    std::istringstream ss(cer_langs);
    std::string lang;
    while (std::getline(ss, lang, ',')) {
      if (!lang.empty()) opt.cer_languages.insert(lang);
    }
  }
  for (const auto& spec : metric_overrides) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw corpuskit::Error("bad --metric override (want tag=WER|CER): " + spec);
    const auto tag = corpuskit::parse_tag(spec.substr(0, eq));
    const auto name = spec.substr(eq + 1);
    if (name == "WER" || name == "wer")
      opt.metric_overrides[tag] = corpuskit::Metric::wer;
    else if (name == "CER" || name == "cer")
      opt.metric_overrides[tag] = corpuskit::Metric::cer;
    else
      throw corpuskit::Error("bad metric name: " + name);
  }

  const auto report =
      corpuskit::score_manifests(refs.utterances, hyps.utterances, opt);
  for (const auto& id : report.missing_hyp_ids)
    std::cerr << "missing hypothesis for " << id << "\n";
  for (const auto& id : report.unknown_hyp_ids)
    std::cerr << "hypothesis for unknown id " << id << "\n";

  if (table == "md") {
    std::cout << corpuskit::score_report_to_markdown(report);
  } else {
    char buf[64];
    for (const auto& row : report.rows) {
      std::snprintf(buf, sizeof(buf), "%.1f", row.value);
      std::cout << row.tag.hyphenated() << " "
                << corpuskit::metric_name(row.metric) << " " << buf << "\n";
    }
    std::snprintf(buf, sizeof(buf), "%.1f", report.aggregate);
    std::cout << "average " << buf << "\n";
  }
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw corpuskit::Error("cannot write: " + report_path);
    out << corpuskit::score_report_to_json(report).dump(2) << "\n";
  }
  if (g.strict &&
      (!report.missing_hyp_ids.empty() || !report.unknown_hyp_ids.empty()))
    return 1;
  return 0;
}

// ------------------------------------------------------------------- probe

int run_probe_wav(const std::vector<std::string>& paths) {
  for (const auto& p : paths) {
    const auto info = corpuskit::probe_wav_info(p);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", info.duration_s());
    std::cout << p << " " << buf << " s (" << info.sample_rate << " Hz, "
              << info.channels << " ch, " << info.bits_per_sample << " bit)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpus engineering toolkit for multilingual speech manifests"};
  app.require_subcommand(1);
  app.set_config("--config");
  app.fallthrough();

  GlobalOptions g;
  app.add_flag("--strict", g.strict, "fail on data violations");
  app.add_option("--jobs", g.jobs, "worker threads (0 = hardware)");
  app.add_option("--seed", g.seed, "seed for seeded subcommands");
  app.add_option("--registry", g.registry_path,
                 "language-region registry CSV (default: built-in)");

  // langtags
  auto* langtags = app.add_subcommand("langtags", "language-region registry");
  langtags->require_subcommand(1);
  langtags->fallthrough();
  auto* lt_list = langtags->add_subcommand("list", "list registry entries");
  lt_list->fallthrough();
  std::string lt_language;
  lt_list->add_option("--language", lt_language, "restrict to one language");
  auto* lt_check = langtags->add_subcommand("check", "validate one tag");
  lt_check->fallthrough();
  std::string lt_tag;
  lt_check->add_option("tag", lt_tag, "tag, e.g. zh-CN or <zh><CN>")->required();

  // clean
  auto* clean = app.add_subcommand("clean", "quality filters and segmentation");
  clean->fallthrough();
  CleanOptions clean_opt;
  clean->add_option("--manifest", clean_opt.manifest, "input manifest")->required();
  clean->add_option("--out", clean_opt.out, "kept-utterance manifest")->required();
  clean->add_option("--rejected", clean_opt.rejected, "rejected-record JSONL");
  clean->add_option("--max-ratio", clean_opt.max_ratio,
                    "chars/s ceiling (default: per-script)");
  clean->add_option("--tol", clean_opt.tol_s, "timestamp tolerance seconds");
  clean->add_option("--max-len", clean_opt.max_len_s, "clip length limit seconds");
  clean->add_flag("!--no-check-punct", clean_opt.check_punct,
                  "skip punctuation-consistency check");
  clean->add_flag("!--no-segment", clean_opt.segment,
                  "skip long-audio segmentation");

  // stats
  auto* stats = app.add_subcommand("stats", "corpus duration statistics");
  stats->fallthrough();
  std::string stats_manifest, stats_report;
  stats->add_option("--manifest", stats_manifest, "input manifest")->required();
  stats->add_option("--report", stats_report, "JSON report path");

  // plan-merge
  auto* plan = app.add_subcommand("plan-merge", "logical merge planning");
  plan->fallthrough();
  std::string plan_manifest, plan_mode = "target-25-30", plan_out, plan_histogram;
  plan->add_option("--manifest", plan_manifest, "input manifest");
  plan->add_option("--mode", plan_mode, "target-25-30 | bucket-balance");
  plan->add_option("--out", plan_out, "plan JSON path");
  plan->add_option("--histogram", plan_histogram,
                   "print bucket histogram of an existing plan");

  // shard
  auto* shard = app.add_subcommand("shard", "per-rank manifest partitioning");
  shard->fallthrough();
  std::string shard_manifest, shard_out, shard_mode = "static";
  unsigned shard_world = 1;
  std::uint64_t shard_epoch = 0;
  shard->add_option("--manifest", shard_manifest, "input manifest")->required();
  shard->add_option("--world-size", shard_world, "number of ranks")->required();
  shard->add_option("--epoch", shard_epoch, "epoch number");
  shard->add_option("--mode", shard_mode, "static | reshuffle-each-epoch");
  shard->add_option("--out", shard_out, "output directory")->required();

  // codec
  auto* codec = app.add_subcommand("codec", "multitask token sequences");
  codec->require_subcommand(1);
  codec->fallthrough();
  auto* codec_render = codec->add_subcommand("render", "JSON -> token stream");
  codec_render->fallthrough();
  std::string codec_render_in;
  codec_render->add_option("--in", codec_render_in, "input JSON (default stdin)");
  auto* codec_parse = codec->add_subcommand("parse", "token stream -> JSON");
  codec_parse->fallthrough();
  std::string codec_parse_in, codec_parse_text;
  codec_parse->add_option("--in", codec_parse_in, "input file (default stdin)");
  codec_parse->add_option("--text", codec_parse_text, "token stream argument");

  // tokenize
  auto* tokenize = app.add_subcommand("tokenize", "byte-level BPE");
  tokenize->require_subcommand(1);
  tokenize->fallthrough();
  auto* tok_train = tokenize->add_subcommand("train", "learn merges");
  tok_train->fallthrough();
  std::string tt_in, tt_manifest, tt_model;
  std::size_t tt_vocab = 512;
  bool tt_render = false;
  std::vector<std::string> tt_protected;
  tok_train->add_option("--in", tt_in, "text file, one sample per line");
  tok_train->add_option("--manifest", tt_manifest, "manifest as corpus");
  tok_train->add_flag("--render-tokens", tt_render,
                      "train over rendered multitask sequences");
  tok_train->add_option("--vocab-size", tt_vocab, "total vocabulary size");
  tok_train->add_option("--protected", tt_protected, "extra protected tokens");
  tok_train->add_option("--out", tt_model, "model file")->required();
  auto* tok_encode = tokenize->add_subcommand("encode", "text -> ids");
  tok_encode->fallthrough();
  std::string te_model, te_text, te_in, te_manifest, te_out;
  bool te_render = false;
  tok_encode->add_option("--model", te_model, "model file")->required();
  tok_encode->add_option("--text", te_text, "encode one string");
  tok_encode->add_option("--in", te_in, "text file, one sample per line");
  tok_encode->add_option("--manifest", te_manifest, "manifest as input");
  tok_encode->add_flag("--render-tokens", te_render,
                       "encode rendered multitask sequences");
  tok_encode->add_option("--out", te_out, "id file (default stdout)");
  auto* tok_decode = tokenize->add_subcommand("decode", "ids -> text");
  tok_decode->fallthrough();
  std::string td_model, td_ids, td_in, td_out;
  tok_decode->add_option("--model", td_model, "model file")->required();
  tok_decode->add_option("--ids", td_ids, "decode one id line");
  tok_decode->add_option("--in", td_in, "id file, one line per sample");
  tok_decode->add_option("--out", td_out, "text file (default stdout)");

  // score
  auto* score = app.add_subcommand("score", "WER/CER against references");
  score->fallthrough();
  std::string sc_refs, sc_hyps, sc_report, sc_table, sc_cer_langs;
  std::vector<std::string> sc_metric;
  score->add_option("--refs", sc_refs, "reference manifest")->required();
  score->add_option("--hyps", sc_hyps, "hypothesis manifest")->required();
  score->add_option("--report", sc_report, "JSON report path");
  score->add_option("--table", sc_table, "table format: md");
  score->add_option("--cer-langs", sc_cer_langs,
                    "comma-separated languages scored by CER");
  score->add_option("--metric", sc_metric, "per-tag override, tag=WER|CER");

  // probe-wav
  auto* probe = app.add_subcommand("probe-wav", "PCM WAV duration from header");
  probe->fallthrough();
  std::vector<std::string> probe_paths;
  probe->add_option("files", probe_paths, "WAV files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (lt_list->parsed()) return run_langtags_list(g, lt_language);
    if (lt_check->parsed()) return run_langtags_check(g, lt_tag);
    if (clean->parsed()) return run_clean(g, clean_opt);
    if (stats->parsed()) return run_stats(g, stats_manifest, stats_report);
    if (plan->parsed())
      return run_plan_merge(g, plan_manifest, plan_mode, plan_out, plan_histogram);
    if (shard->parsed())
      return run_shard(g, shard_manifest, shard_world, shard_epoch, shard_mode,
                       shard_out);
    if (codec_render->parsed()) return run_codec_render(g, codec_render_in);
    if (codec_parse->parsed())
      return run_codec_parse(codec_parse_in, codec_parse_text);
    if (tok_train->parsed())
      return run_tokenize_train(g, tt_in, tt_manifest, tt_render, tt_vocab,
                                tt_protected, tt_model);
    if (tok_encode->parsed())
      return run_tokenize_encode(g, te_model, te_text, te_in, te_manifest,
                                 te_render, te_out);
    if (tok_decode->parsed())
      return run_tokenize_decode(td_model, td_ids, td_in, td_out);
    if (score->parsed())
      return run_score(g, sc_refs, sc_hyps, sc_report, sc_table, sc_cer_langs,
                       sc_metric);
    if (probe->parsed()) return run_probe_wav(probe_paths);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << app.help() << "\n";
  return 2;
}
