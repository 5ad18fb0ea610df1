#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corpuskit/error.hpp"

namespace corpuskit {

// Byte-level BPE. The base alphabet is the 256 single bytes, so any input
// encodes without an unknown token. Protected special tokens are matched
// greedily in the input, never split, and never merged across.
//
// Vocabulary ids are dense: protected tokens first (reserved ids in list
// order), then the 256 byte units, then one token per learned merge.
struct BpeModel {
  std::vector<std::string> protected_tokens;
  std::vector<std::pair<std::string, std::string>> merges;

  // Derived lookup tables; call rebuild() after mutating the fields above.
  std::vector<std::string> vocab;
  std::unordered_map<std::string, int> token_ids;

  static constexpr std::size_t kByteAlphabetSize = 256;

  void rebuild() {
    vocab.clear();
    token_ids.clear();
    vocab.reserve(protected_tokens.size() + kByteAlphabetSize + merges.size());
    const auto add = [&](std::string token) {
      if (!token_ids.count(token))
        token_ids.emplace(token, static_cast<int>(vocab.size()));
      vocab.push_back(std::move(token));
    };
    for (const auto& t : protected_tokens) add(t);
    for (unsigned b = 0; b < kByteAlphabetSize; ++b)
      add(std::string(1, static_cast<char>(b)));
    for (const auto& [left, right] : merges) add(left + right);
  }

  std::size_t vocab_size() const { return vocab.size(); }
};

namespace bpe_detail {

// Splits text into units: protected tokens (greedy longest match at each
// position) and single bytes everywhere else. Protected units are flagged
// so merges never touch them.
struct Unit {
  std::string_view piece;
  bool is_protected = false;
};

inline std::vector<Unit> split_units(std::string_view text,
                                     std::span<const std::string> protected_tokens) {
  // Longest-first so e.g. "<|10.00|>" wins over a shorter prefix.
  std::vector<std::string_view> by_length(protected_tokens.begin(),
                                          protected_tokens.end());
  std::sort(by_length.begin(), by_length.end(),
            [](std::string_view a, std::string_view b) {
              return a.size() != b.size() ? a.size() > b.size() : a < b;
            });
  std::vector<Unit> units;
  units.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    bool matched = false;
    for (const auto& tok : by_length) {
      if (!tok.empty() && text.compare(i, tok.size(), tok) == 0) {
        units.push_back({text.substr(i, tok.size()), true});
        i += tok.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      units.push_back({text.substr(i, 1), false});
      ++i;
    }
  }
  return units;
}

// Applies one merge left-to-right, non-overlapping.
inline void apply_merge(std::vector<std::string>& symbols,
                        const std::string& left, const std::string& right,
                        const std::string& merged) {
  std::vector<std::string> out;
  out.reserve(symbols.size());
  std::size_t i = 0;
  while (i < symbols.size()) {
    if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
      out.push_back(merged);
      i += 2;
    } else {
      out.push_back(std::move(symbols[i]));
      ++i;
    }
  }
  symbols = std::move(out);
}

}  // namespace bpe_detail

// Greedy highest-frequency pair merging until the vocabulary is full or no
// pair occurs at least twice. Ties break lexicographically by (left, right).
// Pair counts include every adjacent position ("aaa" holds two "aa" pairs);
// replacement is leftmost-first non-overlapping.
inline BpeModel train_bpe(const std::vector<std::string>& corpus,
                          std::size_t vocab_size,
                          std::vector<std::string> protected_tokens = {}) {
  if (corpus.empty()) throw InvalidArgument("train_bpe: empty corpus");
  const std::size_t floor_size =
      BpeModel::kByteAlphabetSize + protected_tokens.size();
  if (vocab_size < floor_size)
    throw InvalidArgument("train_bpe: vocab_size " + std::to_string(vocab_size) +
                          " smaller than base alphabet + protected tokens (" +
                          std::to_string(floor_size) + ")");

  // Protected tokens are excluded from statistics: corpus text is cut into
  // byte runs at protected-token boundaries and pairs are counted per run.
  std::vector<std::vector<std::string>> runs;
  for (const auto& text : corpus) {
    std::vector<std::string> run;
    for (const auto& unit : bpe_detail::split_units(text, protected_tokens)) {
      if (unit.is_protected) {
        if (!run.empty()) runs.push_back(std::move(run));
        run = {};
      } else {
        run.emplace_back(unit.piece);
      }
    }
    if (!run.empty()) runs.push_back(std::move(run));
  }

  BpeModel model;
  model.protected_tokens = std::move(protected_tokens);
  const std::size_t max_merges = vocab_size - floor_size;
  for (std::size_t step = 0; step < max_merges; ++step) {
    std::map<std::pair<std::string, std::string>, std::size_t> pair_counts;
    for (const auto& run : runs)
      for (std::size_t i = 0; i + 1 < run.size(); ++i)
        pair_counts[{run[i], run[i + 1]}] += 1;

    std::pair<std::string, std::string> best;
    std::size_t best_count = 0;
    for (const auto& [pair, count] : pair_counts) {
      // std::map iterates in lexicographic (left, right) order, so the
      // first pair seen at the winning count is the tie-break winner.
      if (count > best_count) {
        best = pair;
        best_count = count;
      }
    }
    if (best_count < 2) break;

    const std::string merged = best.first + best.second;
    for (auto& run : runs)
      bpe_detail::apply_merge(run, best.first, best.second, merged);
    model.merges.push_back(std::move(best));
  }
  model.rebuild();
  return model;
}

// Applies the merge list in priority order; protected tokens in the input
// become single ids.
inline std::vector<int> encode(const BpeModel& model, std::string_view text) {
  std::vector<int> ids;
  if (text.empty()) return ids;

  // Byte runs between protected tokens are merged independently.
  std::vector<std::string> symbols;
  const auto flush_run = [&] {
    if (symbols.empty()) return;
    for (const auto& [left, right] : model.merges)
      bpe_detail::apply_merge(symbols, left, right, left + right);
    for (const auto& sym : symbols) {
      const auto it = model.token_ids.find(sym);
      if (it == model.token_ids.end())
        throw Error("encode: symbol missing from vocabulary");  // unreachable
      ids.push_back(it->second);
    }
    symbols.clear();
  };
  for (const auto& unit : bpe_detail::split_units(text, model.protected_tokens)) {
    if (unit.is_protected) {
      flush_run();
      ids.push_back(model.token_ids.at(std::string(unit.piece)));
    } else {
      symbols.emplace_back(unit.piece);
    }
  }
  flush_run();
  return ids;
}

inline std::string decode(const BpeModel& model, std::span<const int> ids) {
  std::string out;
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= model.vocab.size())
      throw InvalidArgument("decode: unknown token id " + std::to_string(id));
    out += model.vocab[static_cast<std::size_t>(id)];
  }
  return out;
}

namespace bpe_detail {

// Tokens are raw byte strings; escape whitespace, control bytes, high bytes
// and backslash so the "left right" model-file lines stay unambiguous.
inline std::string escape_token(std::string_view token) {
  std::string out;
  for (unsigned char c : token) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c > 0x20 && c < 0x7F) {
      out.push_back(static_cast<char>(c));
    } else {
      char buf[5];
      std::snprintf(buf, sizeof(buf), "\\x%02X", c);
      out += buf;
    }
  }
  return out;
}

inline std::string unescape_token(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '\\') {
      out.push_back(s[i++]);
      continue;
    }
    if (i + 1 < s.size() && s[i + 1] == '\\') {
      out.push_back('\\');
      i += 2;
      continue;
    }
    if (i + 3 < s.size() && s[i + 1] == 'x') {
      const auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
      };
      const int hi = hex(s[i + 2]), lo = hex(s[i + 3]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 4;
        continue;
      }
    }
    throw ParseError("bad escape in model file token");
  }
  return out;
}

}  // namespace bpe_detail

// Model file: line 1 is the format id "bpe-v1", then one merge per line as
// "left right", then a "#protected" line followed by one special token per
// line. Token bytes outside printable ASCII are \xNN-escaped.
inline void save_bpe_model(const BpeModel& model, std::ostream& out) {
  out << "bpe-v1\n";
  for (const auto& [left, right] : model.merges)
    out << bpe_detail::escape_token(left) << ' '
        << bpe_detail::escape_token(right) << '\n';
  out << "#protected\n";
  for (const auto& t : model.protected_tokens)
    out << bpe_detail::escape_token(t) << '\n';
}

inline void save_bpe_model(const BpeModel& model,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file: " + path.string());
  save_bpe_model(model, out);
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

inline BpeModel load_bpe_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "bpe-v1")
    throw ParseError("model file: expected 'bpe-v1' header");
  BpeModel model;
  bool in_protected = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "#protected") {
      in_protected = true;
      continue;
    }
    if (in_protected) {
      model.protected_tokens.push_back(bpe_detail::unescape_token(line));
      continue;
    }
    const auto space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 >= line.size())
      throw ParseError("model file: malformed merge line '" + line + "'");
    model.merges.emplace_back(bpe_detail::unescape_token(line.substr(0, space)),
                              bpe_detail::unescape_token(line.substr(space + 1)));
  }
  model.rebuild();
  return model;
}

inline BpeModel load_bpe_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path.string());
  return load_bpe_model(in);
}

}  // namespace corpuskit
