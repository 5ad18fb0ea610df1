#include "corpuskit/scorer.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <limits>

using namespace corpuskit;
using Catch::Matchers::WithinAbs;

namespace {

Utterance scored_utt(const char* id, LanguageTag tag, const char* text) {
  Utterance u;
  u.id = id;
  u.duration_s = 5.0;
  u.tag = std::move(tag);
  u.sentences = {{0.0, 4.0, text}};
  return u;
}

}  // namespace

TEST_CASE("wer arithmetic") {
  EditAlignment identity{0, 0, 0, 5};
  CHECK(wer_percent(identity) == 0.0);

  // S=1, I=1, D=0 over N=3 -> 66.7ish
  EditAlignment mixed{1, 1, 0, 2};
  CHECK_THAT(wer_percent(mixed), WithinAbs(100.0 * 2.0 / 3.0, 1e-9));

  EditAlignment all_del{0, 0, 2, 0};
  CHECK(wer_percent(all_del) == 100.0);

  EditAlignment empty_ok{0, 0, 0, 0};
  CHECK(wer_percent(empty_ok) == 0.0);
  EditAlignment empty_ins{0, 3, 0, 0};
  CHECK(std::isinf(wer_percent(empty_ins)));
}

TEST_CASE("wer can exceed 100 only through insertions") {
  EditAlignment heavy{2, 4, 0, 0};  // N = 2, errors 6
  CHECK(wer_percent(heavy) == 300.0);
  // Without insertions errors <= N.
  EditAlignment no_ins{1, 0, 1, 3};
  CHECK(wer_percent(no_ins) <= 100.0);
}

TEST_CASE("cer on character tokens") {
  CHECK(cer_percent("你好", "你号") == 50.0);
  CHECK(cer_percent("abc", "abc") == 0.0);
  CHECK(cer_percent("ab", "") == 100.0);
  // Whitespace stripped by default for space-free scripts.
  CHECK(cer_percent("你 好", "你好") == 0.0);
  CHECK(cer_percent("你 好", "你好", /*strip_whitespace=*/false) > 0.0);
}

TEST_CASE("word alignment example") {
  const auto a = align_words("a b c", "a x c d");
  CHECK(a.substitutions == 1);
  CHECK(a.insertions == 1);
  CHECK(a.deletions == 0);
  CHECK(a.ref_length() == 3);
  CHECK_THAT(wer_percent(a), WithinAbs(66.6666666, 1e-4));
}

TEST_CASE("macro average reproduces published table rows") {
  // Four model sizes on three test sets, plus their printed averages.
  const std::vector<std::vector<double>> rows{
      {31.5, 31.2, 37.2}, {24.5, 23.6, 27.4}, {22.2, 22.2, 25.0},
      {21.4, 20.6, 22.9},
  };
  const double expected[] = {33.3, 25.2, 23.1, 21.6};
  for (std::size_t i = 0; i < rows.size(); ++i)
    CHECK_THAT(macro_average(rows[i]), WithinAbs(expected[i], 1e-9));

  const std::vector<std::vector<double>> comparison{
      {88.6, 82.3, 87.4}, {79.3, 69.8, 77.1}, {71.8, 62.1, 70.4},
      {57.8, 48.8, 50.2}, {29.4, 30.4, 35.6}, {22.4, 23.0, 26.6},
      {20.3, 21.1, 24.5}, {19.4, 19.8, 22.5},
  };
  const double comparison_expected[] = {86.1, 75.4, 68.1, 52.3,
                                        31.8, 24.0, 22.0, 20.6};
  for (std::size_t i = 0; i < comparison.size(); ++i)
    CHECK_THAT(macro_average(comparison[i]), WithinAbs(comparison_expected[i], 1e-9));
}

TEST_CASE("macro average of a singleton is itself") {
  const std::vector<double> one{12.3};
  CHECK(macro_average(one) == 12.3);
  CHECK_THROWS_AS(macro_average(std::vector<double>{}), InvalidArgument);
}

TEST_CASE("relative reduction") {
  CHECK_THAT(relative_reduction(86.1, 31.8), WithinAbs(63.1, 0.05));
  CHECK_THAT(relative_reduction(75.4, 24.0), WithinAbs(68.2, 0.05));
  CHECK_THAT(relative_reduction(33.3, 25.2), WithinAbs(24.3, 0.05));
  CHECK_THAT(relative_reduction(25.2, 23.1), WithinAbs(8.3, 0.05));
  CHECK_THAT(relative_reduction(23.1, 21.6), WithinAbs(6.5, 0.05));
  CHECK_THROWS_AS(relative_reduction(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(relative_reduction(-5.0, 1.0), InvalidArgument);
}

TEST_CASE("identical manifests score zero everywhere") {
  std::vector<Utterance> refs{
      scored_utt("a", {"ru", "RU"}, "привет мир"),
      scored_utt("b", {"zh", "CN"}, "你好世界"),
      scored_utt("c", {"ru", "RU"}, "ещё одна строка"),
  };
  const auto report = score_manifests(refs, refs);
  REQUIRE(report.rows.size() == 2);
  for (const auto& row : report.rows) CHECK(row.value == 0.0);
  CHECK(report.aggregate == 0.0);
  CHECK(report.missing_hyp_ids.empty());
}

TEST_CASE("per-tag pooling, not per-utterance averaging") {
  // Two utterances under one tag: alignments of 2 errors over N=4 and
  // 1 error over N=2 pool to 3/6 = 50%.
  std::vector<Utterance> refs{
      scored_utt("a", {"ru", "RU"}, "w1 w2 w3 w4"),
      scored_utt("b", {"ru", "RU"}, "v1 v2"),
  };
  std::vector<Utterance> hyps{
      scored_utt("a", {"ru", "RU"}, "w1 w2 x y"),
      scored_utt("b", {"ru", "RU"}, "v1 z"),
  };
  const auto report = score_manifests(refs, hyps);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].metric == Metric::wer);
  CHECK_THAT(report.rows[0].value, WithinAbs(50.0, 1e-9));
}

TEST_CASE("aggregate is the macro average over tags") {
  std::vector<Utterance> refs{
      scored_utt("a", {"ru", "RU"}, "w1 w2 w3 w4 w5 w6 w7 w8 w9 w10"),
      scored_utt("b", {"vi", "VN"}, "v1 v2 v3 v4 v5 v6 v7 v8 v9 v10"),
  };
  std::vector<Utterance> hyps{
      scored_utt("a", {"ru", "RU"}, "w1 w2 w3 w4 w5 w6 w7 w8 w9 x"),   // 10%
      scored_utt("b", {"vi", "VN"}, "v1 v2 v3 v4 v5 v6 v7 v8 x y"),    // 20%
  };
  const auto report = score_manifests(refs, hyps);
  REQUIRE(report.rows.size() == 2);
  CHECK_THAT(report.aggregate, WithinAbs(15.0, 1e-9));
}

TEST_CASE("metric selection by language with overrides") {
  ScoreOptions opt;
  CHECK(metric_for({"zh", "CN"}, opt) == Metric::cer);
  CHECK(metric_for({"ja", "JP"}, opt) == Metric::cer);
  CHECK(metric_for({"th", "TH"}, opt) == Metric::cer);
  CHECK(metric_for({"ru", "RU"}, opt) == Metric::wer);
  opt.metric_overrides[{"ru", "RU"}] = Metric::cer;
  CHECK(metric_for({"ru", "RU"}, opt) == Metric::cer);
}

TEST_CASE("missing hypotheses: skipped by default, all-deletion in strict") {
  std::vector<Utterance> refs{
      scored_utt("a", {"ru", "RU"}, "w1 w2"),
      scored_utt("gone", {"ru", "RU"}, "v1 v2"),
  };
  std::vector<Utterance> hyps{scored_utt("a", {"ru", "RU"}, "w1 w2")};

  auto report = score_manifests(refs, hyps);
  REQUIRE(report.missing_hyp_ids == std::vector<std::string>{"gone"});
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].value == 0.0);  // missing one skipped

  ScoreOptions strict;
  strict.strict = true;
  report = score_manifests(refs, hyps, strict);
  REQUIRE(report.rows.size() == 1);
  // Pooled: 2 deletions over N=4.
  CHECK_THAT(report.rows[0].value, WithinAbs(50.0, 1e-9));
}

TEST_CASE("hypotheses for unknown ids are reported") {
  std::vector<Utterance> refs{scored_utt("a", {"ru", "RU"}, "w1")};
  std::vector<Utterance> hyps{scored_utt("a", {"ru", "RU"}, "w1"),
                              scored_utt("ghost", {"ru", "RU"}, "boo")};
  const auto report = score_manifests(refs, hyps);
  CHECK(report.unknown_hyp_ids == std::vector<std::string>{"ghost"});
}

TEST_CASE("scoring is identical across job counts") {
  std::vector<Utterance> refs, hyps;
  for (int i = 0; i < 60; ++i) {
    const auto tag = i % 2 ? LanguageTag{"zh", "CN"} : LanguageTag{"ru", "RU"};
    refs.push_back(scored_utt(("u" + std::to_string(i)).c_str(), tag, "a b c d"));
    hyps.push_back(scored_utt(("u" + std::to_string(i)).c_str(), tag,
                              i % 3 ? "a b c d" : "a x c"));
  }
  ScoreOptions serial, parallel;
  serial.jobs = 1;
  parallel.jobs = 8;
  const auto r1 = score_manifests(refs, hyps, serial);
  const auto r8 = score_manifests(refs, hyps, parallel);
  CHECK(score_report_to_json(r1) == score_report_to_json(r8));
}

TEST_CASE("markdown table lists tags and the average row") {
  std::vector<Utterance> refs{scored_utt("a", {"ru", "RU"}, "w1 w2")};
  const auto report = score_manifests(refs, refs);
  const auto md = score_report_to_markdown(report);
  CHECK(md.find("| ru-RU | WER | 0.0 |") != std::string::npos);
  CHECK(md.find("| average | - | 0.0 |") != std::string::npos);
}
