#include "corpuskit/manifest.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "corpuskit/rng.hpp"
#include "corpuskit/wav.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace corpuskit;

namespace {

fs::path temp_file(const char* name) {
  const auto dir = fs::temp_directory_path() / "corpuskit-tests";
  fs::create_directories(dir);
  return dir / name;
}

Utterance sample_utterance(std::string id = "u1") {
  Utterance u;
  u.id = std::move(id);
  u.audio_path = "audio/u1.wav";
  u.duration_s = 3.2;
  u.tag = {"zh", "CN"};
  u.sentences = {{0.1, 1.5, "你好"}, {1.6, 3.1, "世界"}};
  u.punctuated = false;
  u.itn = false;
  u.dataset = "unit";
  return u;
}

// Random valid manifests for the round-trip property.
std::vector<Utterance> random_manifest(rng::SplitMix& gen) {
  static const char* langs[] = {"zh", "ja", "ru", "hi"};
  static const char* regions[] = {"CN", "JP", "RU", "IN"};
  std::vector<Utterance> out;
  const auto n = gen.bounded(20);
  for (std::uint64_t i = 0; i < n; ++i) {
    Utterance u;
    u.id = "u" + std::to_string(i);
    u.audio_path = "a/" + u.id + ".wav";
    const auto pick = gen.bounded(4);
    u.tag = {langs[pick], regions[pick]};
    u.punctuated = gen.bounded(2) == 1;
    u.itn = gen.bounded(2) == 1;
    u.dataset = "gen";
    double cursor = 0.0;
    const auto sentences = gen.bounded(4);
    for (std::uint64_t s = 0; s < sentences; ++s) {
      const double start = cursor + static_cast<double>(gen.bounded(100)) / 100.0;
      const double end = start + 0.5 + static_cast<double>(gen.bounded(300)) / 100.0;
      u.sentences.push_back({start, end, "text-" + std::to_string(s)});
      cursor = end;
    }
    u.duration_s = cursor + 1.0;
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace

TEST_CASE("empty manifest reads as empty list") {
  std::istringstream in("");
  const auto r = read_manifest_stream(in);
  CHECK(r.utterances.empty());
  CHECK(r.errors.empty());
}

TEST_CASE("single record round-trips field for field") {
  const auto u = sample_utterance();
  std::ostringstream out;
  write_manifest_stream({u}, out);
  std::istringstream in(out.str());
  const auto r = read_manifest_stream(in);
  REQUIRE(r.utterances.size() == 1);
  CHECK(r.utterances[0] == u);
  CHECK(r.utterances[0].duration_s == 3.2);
}

TEST_CASE("malformed lines are collected with line numbers") {
  std::ostringstream body;
  body << utterance_to_json(sample_utterance("a")).dump() << "\n";
  body << "{not json\n";
  body << utterance_to_json(sample_utterance("b")).dump() << "\n";
  std::istringstream in(body.str());
  const auto r = read_manifest_stream(in);
  CHECK(r.utterances.size() == 2);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].line == 2);

  std::istringstream again(body.str());
  CHECK_THROWS_AS(read_manifest_stream(again, /*strict=*/true), ParseError);
}

TEST_CASE("duplicate ids are reported, fatal under strict") {
  std::ostringstream body;
  body << utterance_to_json(sample_utterance("dup")).dump() << "\n";
  body << utterance_to_json(sample_utterance("dup")).dump() << "\n";
  std::istringstream in(body.str());
  const auto r = read_manifest_stream(in);
  CHECK(r.utterances.size() == 2);
  REQUIRE(r.errors.size() == 1);

  std::istringstream again(body.str());
  CHECK_THROWS_AS(read_manifest_stream(again, /*strict=*/true), ParseError);
}

TEST_CASE("round-trip property over generated manifests") {
  rng::SplitMix gen(0x4A11);
  for (int iter = 0; iter < 50; ++iter) {
    const auto manifest = random_manifest(gen);
    std::ostringstream out;
    write_manifest_stream(manifest, out);
    std::istringstream in(out.str());
    const auto r = read_manifest_stream(in, /*strict=*/true);
    REQUIRE(r.utterances == manifest);

    // Determinism: same input, same bytes.
    std::ostringstream out2;
    write_manifest_stream(r.utterances, out2);
    REQUIRE(out.str() == out2.str());
  }
}

TEST_CASE("non-ASCII text survives the file round trip") {
  const auto path = temp_file("roundtrip.jsonl");
  const auto u = sample_utterance();
  write_manifest({u}, path);
  const auto r = read_manifest(path);
  REQUIRE(r.utterances.size() == 1);
  CHECK(r.utterances[0].sentences[0].text == "你好");
}

TEST_CASE("validate_utterance flags invariant violations") {
  auto u = sample_utterance();
  CHECK(validate_utterance(u).empty());

  auto bad = u;
  bad.duration_s = 0.0;
  CHECK_FALSE(validate_utterance(bad).empty());

  bad = u;
  bad.sentences[0] = {2.0, 1.0, "x"};
  CHECK_FALSE(validate_utterance(bad).empty());

  bad = u;
  bad.sentences[1].end_s = 99.0;  // beyond duration
  CHECK_FALSE(validate_utterance(bad).empty());

  bad = u;
  bad.sentences[1].start_s = 1.0;  // overlaps sentence 0
  CHECK_FALSE(validate_utterance(bad).empty());

  bad = u;
  bad.sentences[0].text = "  ";
  CHECK_FALSE(validate_utterance(bad).empty());
}

namespace {

std::vector<unsigned char> make_wav(std::uint32_t rate, std::uint16_t channels,
                                    std::uint16_t bits, std::uint32_t data_bytes,
                                    std::uint16_t format_code = 1) {
  std::vector<unsigned char> b;
  const auto push_u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xFF);
  };
  const auto push_u16 = [&](std::uint16_t v) {
    b.push_back(v & 0xFF);
    b.push_back((v >> 8) & 0xFF);
  };
  const auto push_tag = [&](const char* t) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(t[i]));
  };
  push_tag("RIFF");
  push_u32(36 + data_bytes);
  push_tag("WAVE");
  push_tag("fmt ");
  push_u32(16);
  push_u16(format_code);
  push_u16(channels);
  push_u32(rate);
  push_u32(rate * channels * bits / 8);
  push_u16(static_cast<std::uint16_t>(channels * bits / 8));
  push_u16(bits);
  push_tag("data");
  push_u32(data_bytes);
  b.resize(b.size() + data_bytes, 0);
  return b;
}

fs::path write_wav_file(const char* name, const std::vector<unsigned char>& bytes) {
  const auto path = temp_file(name);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  return path;
}

}  // namespace

TEST_CASE("wav duration probe") {
  // 16 kHz mono 16-bit, 320000 data bytes -> 10 s.
  auto bytes = make_wav(16000, 1, 16, 320000);
  CHECK(probe_wav_duration(write_wav_file("a.wav", bytes)) == 10.0);

  // zero-length data chunk -> 0 s.
  bytes = make_wav(8000, 1, 16, 0);
  CHECK(probe_wav_duration(write_wav_file("b.wav", bytes)) == 0.0);

  // 44.1 kHz stereo 16-bit, 176400 bytes -> 1 s.
  bytes = make_wav(44100, 2, 16, 176400);
  CHECK(probe_wav_duration(write_wav_file("c.wav", bytes)) == 1.0);
}

TEST_CASE("wav probe rejects bad headers") {
  auto bytes = make_wav(16000, 1, 16, 100, /*format_code=*/3);
  CHECK_THROWS_AS(probe_wav_duration(write_wav_file("nonpcm.wav", bytes)), ParseError);

  std::vector<unsigned char> junk{'J', 'U', 'N', 'K', 0, 0, 0, 0};
  CHECK_THROWS_AS(probe_wav_duration(write_wav_file("junk.wav", junk)), ParseError);
}

TEST_CASE("wav probe agrees with an independent flat parser") {
  rng::SplitMix gen(0x3A7E);
  for (int i = 0; i < 50; ++i) {
    const std::uint32_t rates[] = {8000, 16000, 22050, 44100, 48000};
    const std::uint32_t rate = rates[gen.bounded(5)];
    const std::uint16_t channels = static_cast<std::uint16_t>(1 + gen.bounded(2));
    const std::uint16_t bits = gen.bounded(2) == 0 ? 16 : 8;
    const std::uint32_t frames = static_cast<std::uint32_t>(gen.bounded(200000));
    const std::uint32_t data_bytes = frames * channels * bits / 8;
    const auto bytes = make_wav(rate, channels, bits, data_bytes);
    const auto path = write_wav_file("p.wav", bytes);
    const double lib = probe_wav_duration(path);
    const double flat = oracles::wav_duration_flat(bytes);
    const double sample_period = 1.0 / rate;
    CHECK(std::abs(lib - flat) <= sample_period);
  }
}
