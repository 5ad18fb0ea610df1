#include "corpuskit/codec.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <set>

#include "corpuskit/rng.hpp"

using namespace corpuskit;

TEST_CASE("quantize_time on the 40 ms grid") {
  CHECK(quantize_time(0.0).index == 0);
  CHECK(quantize_time(1.0).index == 25);
  CHECK(quantize_time(30.0).index == 750);
  CHECK(quantize_time(0.52).index == 13);
  // Half-away-from-zero at the midpoint.
  CHECK(quantize_time(0.02).index == 1);
  CHECK(quantize_time(0.059).index == 1);
  // Beyond the window clamps to the last index.
  CHECK(quantize_time(31.0).index == 750);
  CHECK_THROWS_AS(quantize_time(-0.1), InvalidArgument);
}

TEST_CASE("unquantize is exact on the grid") {
  CHECK(unquantize(TimestampToken{0}) == 0.0);
  CHECK(unquantize(TimestampToken{750}) == 30.0);
  CHECK(unquantize(TimestampToken{13}) == 0.52);
  CHECK_THROWS_AS(unquantize(TimestampToken{751}), InvalidArgument);
  CHECK_THROWS_AS(unquantize(TimestampToken{-1}), InvalidArgument);
}

TEST_CASE("quantization error bound and monotonicity") {
  int prev = 0;
  for (int i = 0; i <= 30000; ++i) {
    const double t = i * 0.001;
    const auto tok = quantize_time(t);
    CHECK(std::abs(unquantize(tok) - t) <= 0.020 + 1e-12);
    CHECK(tok.index >= prev);
    prev = tok.index;
  }
}

TEST_CASE("timestamp vocabulary has exactly 751 distinct surfaces") {
  std::set<std::string> surfaces;
  for (int i = 0; i <= kMaxTimestampIndex; ++i) {
    const auto tok = TimestampToken{i};
    surfaces.insert(tok.surface());
    const auto back = parse_timestamp_token(tok.surface());
    REQUIRE(back.has_value());
    CHECK(back->index == i);
  }
  CHECK(surfaces.size() == 751);
  CHECK(TimestampToken{0}.surface() == "<|0.00|>");
  CHECK(TimestampToken{750}.surface() == "<|30.00|>");
}

TEST_CASE("render produces the canonical header order") {
  Header h{{"zh", "CN"}, Task::asr, true, false, true};
  const auto seq = render(h, {{0.0, 2.0, "你好"}});
  CHECK(seq.to_string() ==
        "<sot><zh><CN><asr><punct><noitn><ts><|0.00|>你好<|2.00|><eot>");

  Header lid{{"ja", "JP"}, Task::lid, false, false, false};
  CHECK(render(lid, {}).to_string() ==
        "<sot><ja><JP><lid><nopunct><noitn><nots><eot>");

  Header nots{{"ru", "RU"}, Task::asr, false, false, false};
  CHECK(render(nots, {{0.0, 0.0, "привет"}}).to_string() ==
        "<sot><ru><RU><asr><nopunct><noitn><nots>привет<eot>");
}

TEST_CASE("render rejects invalid input") {
  Header lid{{"ja", "JP"}, Task::lid, false, false, false};
  CHECK_THROWS_AS(render(lid, {{0.0, 1.0, "x"}}), InvalidArgument);

  Header strict_h{{"zh", "CN"}, Task::asr, false, false, true};
  CHECK_THROWS_AS(render(strict_h, {{0.0, 31.0, "x"}}, RenderOptions{true}),
                  InvalidArgument);
  // Non-strict clamps instead.
  CHECK_NOTHROW(render(strict_h, {{0.0, 31.0, "x"}}));
}

TEST_CASE("parse inverts render on the zh example") {
  Header h{{"zh", "CN"}, Task::asr, true, false, true};
  const std::vector<Sentence> sentences{{0.0, 2.0, "你好"}};
  const auto [h2, s2] = parse(render(h, sentences));
  CHECK(h2 == h);
  CHECK(s2 == sentences);
}

TEST_CASE("parse recovers sequences from flat strings") {
  const auto seq = TokenSequence::from_string(
      "<sot><zh><CN><asr><punct><noitn><ts><|0.00|>你好<|2.00|><eot>");
  const auto [h, s] = parse(seq);
  CHECK(h.tag == LanguageTag{"zh", "CN"});
  CHECK(h.with_timestamps);
  REQUIRE(s.size() == 1);
  CHECK(s[0].text == "你好");
  CHECK(s[0].start_s == 0.0);
  CHECK(s[0].end_s == 2.0);
}

TEST_CASE("parse error cases") {
  const auto seq_of = [](const char* text) {
    return TokenSequence::from_string(text);
  };
  // Non-monotonic inside one sentence.
  CHECK_THROWS_WITH(
      parse(seq_of("<sot><zh><CN><asr><punct><noitn><ts><|2.00|>x<|1.00|><eot>")),
      Catch::Matchers::ContainsSubstring("non-monotonic"));
  // Next sentence starts before the previous ended.
  CHECK_THROWS_WITH(
      parse(seq_of("<sot><zh><CN><asr><punct><noitn><ts>"
                   "<|1.00|>x<|3.00|><|2.00|>y<|4.00|><eot>")),
      Catch::Matchers::ContainsSubstring("non-monotonic"));
  // Missing <eot>.
  CHECK_THROWS_WITH(
      parse(seq_of("<sot><zh><CN><asr><punct><noitn><ts><|0.00|>x<|1.00|>")),
      Catch::Matchers::ContainsSubstring("truncated"));
  // Unbalanced timestamp brackets.
  CHECK_THROWS_WITH(
      parse(seq_of("<sot><zh><CN><asr><punct><noitn><ts><|0.00|>x<eot>")),
      Catch::Matchers::ContainsSubstring("unbalanced"));
  // Unknown special token.
  CHECK_THROWS_WITH(
      parse(seq_of("<sot><zh><CN><asr><punct><noitn><ts><boom>x<|1.00|><eot>")),
      Catch::Matchers::ContainsSubstring("unknown special token"));
  // Header token out of order / duplicated.
  CHECK_THROWS(parse(seq_of("<sot><zh><CN><asr><noitn><punct><ts><eot>")));
  CHECK_THROWS(parse(seq_of("<sot><zh><CN><asr><asr><punct><ts><eot>")));
  CHECK_THROWS(parse(seq_of("<zh><CN><asr><punct><noitn><ts><eot>")));
  // lid with payload.
  CHECK_THROWS(parse(seq_of("<sot><ja><JP><lid><nopunct><noitn><nots>x<eot>")));
  // Timestamps under <nots>.
  CHECK_THROWS(parse(seq_of("<sot><zh><CN><asr><punct><noitn><nots><|0.00|>x<|1.00|><eot>")));
}

namespace {

// Random valid (header, sentences) pairs; timestamps are generated on the
// grid so the round trip is exact.
struct Generated {
  Header header;
  std::vector<Sentence> sentences;
};

Generated random_case(rng::SplitMix& gen) {
  static const LanguageTag tags[] = {
      {"zh", "CN"}, {"ja", "JP"}, {"ru", "RU"}, {"ct", "HK"}, {"kab", "NULL"}};
  static const char* words[] = {"你好", "hello", "мир", "ভাষা", "ん", "x y z"};
  Generated g;
  g.header.tag = tags[gen.bounded(5)];
  const auto kind = gen.bounded(4);
  if (kind == 0) {
    g.header.task = Task::lid;
    return g;
  }
  g.header.task = Task::asr;
  g.header.punctuated = gen.bounded(2) == 1;
  g.header.itn = gen.bounded(2) == 1;
  g.header.with_timestamps = kind != 1;
  if (!g.header.with_timestamps) {
    // One sentence, times zero: the no-timestamp payload is one text blob.
    if (gen.bounded(4) != 0)
      g.sentences.push_back({0.0, 0.0, words[gen.bounded(6)]});
    return g;
  }
  int cursor = 0;
  const auto n = gen.bounded(4);
  for (std::uint64_t s = 0; s < n && cursor < 740; ++s) {
    const int start = cursor + static_cast<int>(gen.bounded(5));
    const int end = start + static_cast<int>(gen.bounded(10));
    if (end > 750) break;
    g.sentences.push_back({TimestampToken{start}.seconds(),
                           TimestampToken{end}.seconds(),
                           words[gen.bounded(6)]});
    cursor = end;
  }
  return g;
}

}  // namespace

TEST_CASE("render/parse round-trip property") {
  rng::SplitMix gen(0xC0DEC);
  for (int i = 0; i < 2000; ++i) {
    const auto [header, sentences] = random_case(gen);
    const auto seq = render(header, sentences);
    const auto [h2, s2] = parse(seq);
    REQUIRE(h2 == header);
    REQUIRE(s2 == sentences);
    // And through the flat-string form.
    const auto [h3, s3] = parse(TokenSequence::from_string(seq.to_string()));
    REQUIRE(h3 == header);
    REQUIRE(s3 == sentences);
  }
}

TEST_CASE("special vocabulary covers fixed, timestamp and registry tokens") {
  const auto& reg = Registry::builtin();
  const auto vocab = special_vocabulary(&reg);
  std::set<std::string> unique(vocab.begin(), vocab.end());
  CHECK(unique.size() == vocab.size());
  CHECK(unique.count("<sot>") == 1);
  CHECK(unique.count("<|30.00|>") == 1);
  CHECK(unique.count("<zh>") == 1);
  CHECK(unique.count("<WENZHOU>") == 1);
  CHECK(vocab.size() >= 10 + 751 + 40);
}
