#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corpuskit/error.hpp"
#include "corpuskit/langtags.hpp"
#include "corpuskit/manifest.hpp"

namespace corpuskit {

// Target-sequence layout:
//
//   <sot><lang><region><task><punct-flag><itn-flag><ts-flag> payload <eot>
//
// The seven header tokens are positional and mandatory; flags always have an
// explicit negative form so every header has fixed length. With timestamps
// enabled the payload is, per sentence, <|start|> text <|end|> on a 40 ms
// grid; without timestamps it is the bare sentence text. The lid task
// carries no payload.

inline constexpr double kTimeShiftS = 0.040;
inline constexpr double kMaxTimeS = 30.0;
inline constexpr int kMaxTimestampIndex = 750;
inline constexpr int kTimestampVocabularySize = kMaxTimestampIndex + 1;

inline constexpr std::string_view kSotToken = "<sot>";
inline constexpr std::string_view kEotToken = "<eot>";
inline constexpr std::string_view kAsrToken = "<asr>";
inline constexpr std::string_view kLidToken = "<lid>";
inline constexpr std::string_view kPunctToken = "<punct>";
inline constexpr std::string_view kNoPunctToken = "<nopunct>";
inline constexpr std::string_view kItnToken = "<itn>";
inline constexpr std::string_view kNoItnToken = "<noitn>";
inline constexpr std::string_view kTsToken = "<ts>";
inline constexpr std::string_view kNoTsToken = "<nots>";

enum class Task { asr, lid };

struct Header {
  LanguageTag tag;
  Task task = Task::asr;
  bool punctuated = false;
  bool itn = false;
  bool with_timestamps = false;

  bool operator==(const Header&) const = default;
};

// A time token on the 40 ms grid, index 0..750 (0.00 s .. 30.00 s).
struct TimestampToken {
  int index = 0;

  double seconds() const { return index * kTimeShiftS; }

  // Grid times always have an exact two-decimal form, e.g. "<|0.52|>".
  std::string surface() const {
    const int hundredths = index * 4;
    char buf[24];
    std::snprintf(buf, sizeof(buf), "<|%d.%02d|>", hundredths / 100,
                  hundredths % 100);
    return buf;
  }

  bool operator==(const TimestampToken&) const = default;
};

// Nearest grid index, half away from zero; times beyond 30 s clamp to the
// last index. Negative times are a caller bug, not clampable data.
inline TimestampToken quantize_time(double t) {
  if (t < 0.0) throw InvalidArgument("negative timestamp: " + std::to_string(t));
  int index = static_cast<int>(std::round(t / kTimeShiftS));
  if (index > kMaxTimestampIndex) index = kMaxTimestampIndex;
  return TimestampToken{index};
}

inline double unquantize(TimestampToken tok) {
  if (tok.index < 0 || tok.index > kMaxTimestampIndex)
    throw InvalidArgument("timestamp index out of range: " +
                          std::to_string(tok.index));
  return tok.seconds();
}

struct Token {
  enum class Kind { special, text };
  Kind kind = Kind::text;
  std::string value;  // for specials, includes the angle brackets

  bool operator==(const Token&) const = default;

  static Token special(std::string_view v) {
    return Token{Kind::special, std::string(v)};
  }
  static Token text(std::string_view v) {
    return Token{Kind::text, std::string(v)};
  }
};

// Parses "<|x.xx|>" back to a grid index; nullopt if not a timestamp token.
inline std::optional<TimestampToken> parse_timestamp_token(std::string_view s) {
  if (s.size() < 8 || s.substr(0, 2) != "<|" || s.substr(s.size() - 2) != "|>")
    return std::nullopt;
  const std::string_view body = s.substr(2, s.size() - 4);
  const auto dot = body.find('.');
  if (dot == std::string_view::npos || dot == 0 || body.size() - dot - 1 != 2)
    return std::nullopt;
  long whole = 0, frac = 0;
  for (char c : body.substr(0, dot)) {
    if (c < '0' || c > '9') return std::nullopt;
    whole = whole * 10 + (c - '0');
  }
  for (char c : body.substr(dot + 1)) {
    if (c < '0' || c > '9') return std::nullopt;
    frac = frac * 10 + (c - '0');
  }
  const long hundredths = whole * 100 + frac;
  if (hundredths % 4 != 0) return std::nullopt;
  const long index = hundredths / 4;
  if (index > kMaxTimestampIndex) return std::nullopt;
  return TimestampToken{static_cast<int>(index)};
}

struct TokenSequence {
  std::vector<Token> tokens;

  bool operator==(const TokenSequence&) const = default;

  std::string to_string() const {
    std::string out;
    for (const auto& t : tokens) out += t.value;
    return out;
  }

  // Splits a flat stream back into tokens. "<name>" (ASCII letters) and
  // "<|x.xx|>" are reserved special-token shapes; any other '<' is plain
  // text. Sentence text therefore must not itself use those shapes.
  static TokenSequence from_string(std::string_view s) {
    TokenSequence seq;
    std::string text;
    const auto flush_text = [&] {
      if (!text.empty()) {
        seq.tokens.push_back(Token::text(text));
        text.clear();
      }
    };
    std::size_t i = 0;
    while (i < s.size()) {
      if (s[i] == '<') {
        const auto close = s.find('>', i);
        if (close != std::string_view::npos) {
          const std::string_view candidate = s.substr(i, close - i + 1);
          const std::string_view body = candidate.substr(1, candidate.size() - 2);
          const bool named =
              !body.empty() && detail::all_ascii_letters(body);
          if (named || parse_timestamp_token(candidate)) {
            flush_text();
            seq.tokens.push_back(Token::special(candidate));
            i = close + 1;
            continue;
          }
        }
      }
      text.push_back(s[i]);
      ++i;
    }
    flush_text();
    return seq;
  }
};

namespace detail {

inline std::string_view task_token(Task t) {
  return t == Task::asr ? kAsrToken : kLidToken;
}

}  // namespace detail

struct RenderOptions {
  // strict: reject timestamps that needed clamping to [0,30].
  bool strict = false;
};

inline TokenSequence render(const Header& header,
                            const std::vector<Sentence>& sentences,
                            const RenderOptions& opt = {}) {
  if (header.task == Task::lid) {
    if (!sentences.empty())
      throw InvalidArgument("lid sequences carry no sentences");
    if (header.with_timestamps)
      throw InvalidArgument("lid sequences carry no timestamps");
  }
  TokenSequence seq;
  seq.tokens.push_back(Token::special(kSotToken));
  seq.tokens.push_back(Token::special("<" + header.tag.language + ">"));
  seq.tokens.push_back(Token::special("<" + header.tag.region + ">"));
  seq.tokens.push_back(Token::special(detail::task_token(header.task)));
  seq.tokens.push_back(Token::special(header.punctuated ? kPunctToken : kNoPunctToken));
  seq.tokens.push_back(Token::special(header.itn ? kItnToken : kNoItnToken));
  seq.tokens.push_back(Token::special(header.with_timestamps ? kTsToken : kNoTsToken));
  for (const auto& s : sentences) {
    if (trim_copy(s.text).empty())
      throw InvalidArgument("empty sentence text");
    if (header.with_timestamps) {
      if (opt.strict && (s.start_s < 0.0 || s.end_s > kMaxTimeS))
        throw InvalidArgument("timestamp outside [0,30] in strict mode");
      const TimestampToken start = quantize_time(std::max(s.start_s, 0.0));
      const TimestampToken end = quantize_time(std::max(s.end_s, 0.0));
      seq.tokens.push_back(Token::special(start.surface()));
      seq.tokens.push_back(Token::text(s.text));
      seq.tokens.push_back(Token::special(end.surface()));
    } else {
      seq.tokens.push_back(Token::text(s.text));
    }
  }
  seq.tokens.push_back(Token::special(kEotToken));
  return seq;
}

inline std::pair<Header, std::vector<Sentence>> parse(const TokenSequence& seq) {
  const auto& toks = seq.tokens;
  std::size_t pos = 0;
  const auto need_special = [&](std::string_view what) -> const std::string& {
    if (pos >= toks.size())
      throw ParseError("truncated sequence: expected " + std::string(what));
    if (toks[pos].kind != Token::Kind::special)
      throw ParseError("expected " + std::string(what) + ", found text '" +
                       toks[pos].value + "'");
    return toks[pos++].value;
  };

  if (need_special("<sot>") != kSotToken) throw ParseError("sequence must start with <sot>");

  const std::string& lang_tok = need_special("language token");
  const std::string& region_tok = need_special("region token");
  Header header;
  try {
    header.tag = parse_tag(lang_tok + region_tok);
  } catch (const ParseError& e) {
    throw ParseError(std::string("bad language/region tokens: ") + e.what());
  }

  const std::string& task_tok = need_special("task token");
  if (task_tok == kAsrToken)
    header.task = Task::asr;
  else if (task_tok == kLidToken)
    header.task = Task::lid;
  else
    throw ParseError("expected task token, found " + task_tok);

  const std::string& punct_tok = need_special("punctuation flag");
  if (punct_tok == kPunctToken)
    header.punctuated = true;
  else if (punct_tok == kNoPunctToken)
    header.punctuated = false;
  else
    throw ParseError("header tokens out of order: expected punctuation flag, found " +
                     punct_tok);

  const std::string& itn_tok = need_special("itn flag");
  if (itn_tok == kItnToken)
    header.itn = true;
  else if (itn_tok == kNoItnToken)
    header.itn = false;
  else
    throw ParseError("header tokens out of order: expected itn flag, found " +
                     itn_tok);

  const std::string& ts_tok = need_special("timestamp flag");
  if (ts_tok == kTsToken)
    header.with_timestamps = true;
  else if (ts_tok == kNoTsToken)
    header.with_timestamps = false;
  else
    throw ParseError("header tokens out of order: expected timestamp flag, found " +
                     ts_tok);

  std::vector<Sentence> sentences;
  std::string no_ts_text;
  bool saw_eot = false;
  double prev_end = 0.0;
  while (pos < toks.size()) {
    const Token& tok = toks[pos];
    if (tok.kind == Token::Kind::text) {
      if (header.with_timestamps)
        throw ParseError("text outside timestamp brackets");
      no_ts_text += tok.value;
      ++pos;
      continue;
    }
    if (tok.value == kEotToken) {
      saw_eot = true;
      ++pos;
      break;
    }
    const auto start_ts = parse_timestamp_token(tok.value);
    if (!start_ts) throw ParseError("unknown special token: " + tok.value);
    if (!header.with_timestamps)
      throw ParseError("timestamp token in <nots> sequence: " + tok.value);
    ++pos;
    // Sentence body: text pieces until the closing timestamp.
    std::string text;
    while (pos < toks.size() && toks[pos].kind == Token::Kind::text) {
      text += toks[pos].value;
      ++pos;
    }
    if (pos >= toks.size())
      throw ParseError("truncated sequence: unbalanced timestamp brackets");
    const auto end_ts = parse_timestamp_token(toks[pos].value);
    if (!end_ts)
      throw ParseError("unbalanced timestamp brackets: expected end timestamp, found " +
                       toks[pos].value);
    ++pos;
    if (text.empty()) throw ParseError("empty sentence between timestamps");
    if (end_ts->index < start_ts->index)
      throw ParseError("non-monotonic timestamps: sentence end before start");
    if (start_ts->seconds() < prev_end)
      throw ParseError("non-monotonic timestamps: sentence starts before previous end");
    prev_end = end_ts->seconds();
    sentences.push_back(Sentence{start_ts->seconds(), end_ts->seconds(), text});
  }
  if (!saw_eot) throw ParseError("truncated sequence: missing <eot>");
  if (pos != toks.size())
    throw ParseError("trailing tokens after <eot>");
  if (!header.with_timestamps && !no_ts_text.empty())
    sentences.push_back(Sentence{0.0, 0.0, no_ts_text});
  if (header.task == Task::lid && !sentences.empty())
    throw ParseError("lid sequence with sentence payload");
  return {header, std::move(sentences)};
}

// Every special token the format can emit: fixed header tokens, the 751
// timestamp tokens, and the language/region tokens of a registry. Used as
// the protected set when training tokenizers over rendered sequences.
inline std::vector<std::string> special_vocabulary(const Registry* registry) {
  std::vector<std::string> out{std::string(kSotToken),     std::string(kEotToken),
                               std::string(kAsrToken),     std::string(kLidToken),
                               std::string(kPunctToken),   std::string(kNoPunctToken),
                               std::string(kItnToken),     std::string(kNoItnToken),
                               std::string(kTsToken),      std::string(kNoTsToken)};
  for (int i = 0; i <= kMaxTimestampIndex; ++i)
    out.push_back(TimestampToken{i}.surface());
  if (registry) {
    std::set<std::string> seen;
    for (const auto& e : registry->entries()) {
      if (seen.insert(e.tag.language).second)
        out.push_back("<" + e.tag.language + ">");
    }
    for (const auto& e : registry->entries()) {
      if (seen.insert(e.tag.region).second)
        out.push_back("<" + e.tag.region + ">");
    }
  }
  return out;
}

}  // namespace corpuskit
