#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "corpuskit/error.hpp"

namespace corpuskit {

// Two-level language tag: a lowercase language subtag plus an uppercase
// region/dialect subtag. Region "NULL" is a literal sentinel kept as-is so
// tags round-trip losslessly. Region subtags up to 9 letters are accepted;
// the registry's dialect codes (e.g. zh-GUANGDONG) exceed the 2-letter
// region grammar of standard BCP 47.
struct LanguageTag {
  std::string language;
  std::string region;

  auto operator<=>(const LanguageTag&) const = default;

  std::string hyphenated() const { return language + "-" + region; }
  std::string tokens() const { return "<" + language + "><" + region + ">"; }
};

namespace detail {

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

inline std::string ascii_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  return out;
}

inline bool all_ascii_letters(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  });
}

}  // namespace detail

inline bool valid_language_subtag(std::string_view s) {
  return s.size() >= 2 && s.size() <= 4 && detail::all_ascii_letters(s) &&
         std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::islower(c); });
}

inline bool valid_region_subtag(std::string_view s) {
  return s.size() >= 2 && s.size() <= 9 && detail::all_ascii_letters(s) &&
         std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isupper(c); });
}

// Builds a tag from raw subtags, applying canonical casing.
inline LanguageTag make_tag(std::string_view language, std::string_view region) {
  LanguageTag tag{detail::ascii_lower(language), detail::ascii_upper(region)};
  if (!valid_language_subtag(tag.language))
    throw ParseError("invalid language subtag: '" + std::string(language) + "'");
  if (!valid_region_subtag(tag.region))
    throw ParseError("invalid region subtag: '" + std::string(region) + "'");
  return tag;
}

// Accepts the hyphenated form "ru-BY" and the token form "<ru><BY>".
inline LanguageTag parse_tag(std::string_view text) {
  if (text.empty()) throw ParseError("empty language tag");
  for (unsigned char c : text) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    c == '-' || c == '<' || c == '>';
    if (!ok)
      throw ParseError("invalid character in language tag: '" +
                       std::string(text) + "'");
  }
  if (text.front() == '<') {
    // <lang><REGION>
    const auto close1 = text.find('>');
    if (close1 == std::string_view::npos)
      throw ParseError("unterminated token in tag: '" + std::string(text) + "'");
    if (close1 + 1 >= text.size() || text[close1 + 1] != '<')
      throw ParseError("expected second token in tag: '" + std::string(text) + "'");
    const auto close2 = text.find('>', close1 + 2);
    if (close2 == std::string_view::npos || close2 + 1 != text.size())
      throw ParseError("malformed token tag: '" + std::string(text) + "'");
    const auto lang = text.substr(1, close1 - 1);
    const auto region = text.substr(close1 + 2, close2 - close1 - 2);
    if (lang.empty() || region.empty())
      throw ParseError("empty component in tag: '" + std::string(text) + "'");
    return make_tag(lang, region);
  }
  const auto dash = text.find('-');
  if (dash == std::string_view::npos)
    throw ParseError("tag missing region component: '" + std::string(text) + "'");
  const auto lang = text.substr(0, dash);
  const auto region = text.substr(dash + 1);
  if (lang.empty() || region.empty())
    throw ParseError("empty component in tag: '" + std::string(text) + "'");
  if (region.find('-') != std::string_view::npos)
    throw ParseError("too many components in tag: '" + std::string(text) + "'");
  return make_tag(lang, region);
}

struct RegistryEntry {
  LanguageTag tag;
  std::string display_name;
};

// Bundled language-region registry, identical to data/language_regions.csv.
inline constexpr std::string_view kBuiltinRegistryCsv = R"(zh-CN,Chinese (Mandarin)
zh-TW,Chinese (Taiwan)
zh-WU,Chinese (Wuyu)
zh-SICHUAN,Chinese (Sichuan)
zh-SHANXI,Chinese (Shanxi)
zh-ANHUI,Chinese (Anhui)
zh-TIANJIN,Chinese (Tianjin)
zh-NINGXIA,Chinese (Ningxia)
zh-SHAANXI,Chinese (Shaanxi)
zh-HEBEI,Chinese (Hebei)
zh-SHANDONG,Chinese (Shandong)
zh-GUANGDONG,Chinese (Guangdong)
zh-SHANGHAI,Chinese (Shanghai)
zh-HUBEI,Chinese (Hubei)
zh-LIAONING,Chinese (Liaoning)
zh-GANSU,Chinese (Gansu)
zh-FUJIAN,Chinese (Fujian)
zh-HUNAN,Chinese (Hunan)
zh-HENAN,Chinese (Henan)
zh-YUNNAN,Chinese (Yunnan)
zh-MINNAN,Chinese (Minnan)
zh-WENZHOU,Chinese (Wenzhou)
ja-JP,Japanese
th-TH,Thai
ru-RU,Russian
ko-KR,Korean
id-ID,Indonesian
vi-VN,Vietnamese
ct-NULL,Yue (Unknown)
ct-HK,Yue (Hongkong)
ct-GZ,Yue (Guangdong)
hi-IN,Hindi
ur-IN,Urdu
ur-PK,Urdu (Islamic Republic of Pakistan)
ms-MY,Malay
uz-UZ,Uzbek
ar-MA,Arabic (Morocco)
ar-GLA,Arabic
ar-SA,Arabic (Saudi Arabia)
ar-EG,Arabic (Egypt)
ar-KW,Arabic (Kuwait)
ar-LY,Arabic (Libya)
ar-JO,Arabic (Jordan)
ar-AE,Arabic (U.A.E.)
ar-LVT,Arabic (Levant)
fa-IR,Persian
bn-BD,Bengali
ta-SG,Tamil (Singaporean)
ta-LK,Tamil (Sri Lankan)
ta-IN,Tamil (India)
ta-MY,Tamil (Malaysia)
te-IN,Telugu
ug-NULL,Uighur
ug-CN,Uighur
gu-IN,Gujarati
my-MM,Burmese
tl-PH,Tagalog
kk-KZ,Kazakh
or-IN,Oriya / Odia
ne-NP,Nepali
mn-MN,Mongolian
km-KH,Khmer
jv-ID,Javanese
lo-LA,Lao
si-LK,Sinhala
fil-PH,Filipino
ps-AF,Pushto
pa-IN,Panjabi
kab-NULL,Kabyle
ba-NULL,Bashkir
ks-IN,Kashmiri
tg-TJ,Tajik
su-ID,Sundanese
mr-IN,Marathi
ky-KG,Kirghiz
az-AZ,Azerbaijani
)";

// Immutable after load; all lookups are read-only and thread-safe.
class Registry {
 public:
  static Registry from_csv(std::istream& in) {
    Registry reg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos)
        throw ParseError("registry line " + std::to_string(line_no) +
                         ": expected 'code,name'");
      RegistryEntry entry;
      entry.tag = parse_tag(line.substr(0, comma));
      entry.display_name = line.substr(comma + 1);
      if (entry.display_name.empty())
        throw ParseError("registry line " + std::to_string(line_no) +
                         ": empty name");
      if (reg.index_.count(entry.tag))
        throw ParseError("registry line " + std::to_string(line_no) +
                         ": duplicate tag " + entry.tag.hyphenated());
      reg.index_.emplace(entry.tag, reg.entries_.size());
      reg.entries_.push_back(std::move(entry));
    }
    return reg;
  }

  static Registry from_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open registry file: " + path.string());
    return from_csv(in);
  }

  static const Registry& builtin() {
    static const Registry reg = [] {
      std::istringstream in{std::string(kBuiltinRegistryCsv)};
      return from_csv(in);
    }();
    return reg;
  }

  std::optional<RegistryEntry> lookup(const LanguageTag& tag) const {
    const auto it = index_.find(tag);
    if (it == index_.end()) return std::nullopt;
    return entries_[it->second];
  }

  bool contains(const LanguageTag& tag) const { return index_.count(tag) > 0; }

  // All entries for one language, in registry order.
  std::vector<RegistryEntry> dialects(std::string_view language) const {
    std::vector<RegistryEntry> out;
    for (const auto& e : entries_)
      if (e.tag.language == language) out.push_back(e);
    return out;
  }

  const std::vector<RegistryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<RegistryEntry> entries_;
  std::map<LanguageTag, std::size_t> index_;
};

}  // namespace corpuskit
