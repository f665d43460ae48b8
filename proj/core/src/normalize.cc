#include "subseg/normalize.h"

#include <unicode/uchar.h>

#include <charconv>
#include <istream>

#include "subseg/corpus.h"
#include "subseg/error.h"
#include "subseg/io.h"
#include "subseg/utf8.h"

namespace subseg {

namespace {

std::string hex(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

// "U+0627" -> 0x627
std::optional<char32_t> parse_codepoint(std::string_view text) {
  if (text.size() < 3 || (text[0] != 'U' && text[0] != 'u') || text[1] != '+')
    return std::nullopt;
  unsigned value = 0;
  const auto* first = text.data() + 2;
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value, 16);
  if (ec != std::errc() || ptr != last || value > 0x10FFFF ||
      (value >= 0xD800 && value <= 0xDFFF))
    return std::nullopt;
  return static_cast<char32_t>(value);
}

// "U+0660..U+0669" or a single codepoint.
std::optional<std::pair<char32_t, char32_t>> parse_range(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    auto cp = parse_codepoint(text);
    if (!cp) return std::nullopt;
    return std::make_pair(*cp, *cp);
  }
  auto lo = parse_codepoint(text.substr(0, dots));
  auto hi = parse_codepoint(text.substr(dots + 2));
  if (!lo || !hi || *hi < *lo) return std::nullopt;
  return std::make_pair(*lo, *hi);
}

}  // namespace

NormalizationConfig::NormalizationConfig(std::vector<NormalizationRule> rules,
                                         bool enabled)
    : rules_(std::move(rules)), enabled_(enabled) {
  for (std::size_t i = 0; i < rules_.size(); ++i) first_match_.emplace(rules_[i].from, i);
  for (const auto& rule : rules_) {
    if (!rule.to) continue;
    const NormalizationRule* again = match(*rule.to);
    if (again != nullptr && again->to != std::optional<char32_t>(*rule.to)) {
      throw ValidationError("normalization rules are not idempotent: " +
                            hex(rule.from) + " maps to " + hex(*rule.to) +
                            ", which is rewritten again");
    }
  }
}

NormalizationConfig NormalizationConfig::arabic_default() {
  std::vector<NormalizationRule> rules;
  for (char32_t alef : {U'أ', U'إ', U'آ', U'ٱ'})
    rules.push_back({alef, U'ا'});
  rules.push_back({U'ى', U'ي'});
  rules.push_back({U'ـ', std::nullopt});
  for (char32_t d = 0; d < 10; ++d) rules.push_back({U'٠' + d, U'0' + d});
  for (char32_t mark = 0x064B; mark <= 0x0652; ++mark)
    rules.push_back({mark, std::nullopt});
  return NormalizationConfig(std::move(rules));
}

NormalizationConfig NormalizationConfig::read_rules(std::istream& in, bool enabled) {
  std::vector<NormalizationRule> rules;
  LineReader reader(in);
  std::string line;
  while (reader.next(line)) {
    const std::size_t n = reader.line_number();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError(n, "expected FROM<TAB>TO");
    const std::string_view from_text = std::string_view(line).substr(0, tab);
    const std::string_view to_text = std::string_view(line).substr(tab + 1);
    const auto from = parse_range(from_text);
    if (!from) throw FormatError(n, "bad FROM '" + std::string(from_text) + "'");
    if (to_text.empty()) {
      for (char32_t cp = from->first; cp <= from->second; ++cp)
        rules.push_back({cp, std::nullopt});
      continue;
    }
    const auto to = parse_range(to_text);
    if (!to) throw FormatError(n, "bad TO '" + std::string(to_text) + "'");
    const bool single_to = to->first == to->second;
    if (!single_to && to->second - to->first != from->second - from->first)
      throw FormatError(n, "FROM and TO ranges differ in length");
    for (char32_t cp = from->first; cp <= from->second; ++cp)
      rules.push_back({cp, single_to ? to->first : to->first + (cp - from->first)});
  }
  return NormalizationConfig(std::move(rules), enabled);
}

NormalizationConfig NormalizationConfig::with_enabled(bool enabled) const {
  NormalizationConfig copy = *this;
  copy.enabled_ = enabled;
  return copy;
}

const NormalizationRule* NormalizationConfig::match(char32_t cp) const {
  auto it = first_match_.find(cp);
  return it == first_match_.end() ? nullptr : &rules_[it->second];
}

std::string normalize_text(std::string_view text, const NormalizationConfig& config) {
  if (!config.enabled()) return std::string(text);
  std::string out;
  out.reserve(text.size());
  utf8::for_each(text, [&](char32_t cp, std::string_view bytes) {
    const NormalizationRule* rule = config.match(cp);
    if (rule == nullptr) {
      out += bytes;
    } else if (rule->to) {
      utf8::append(out, *rule->to);
    }
  });
  return out;
}

bool is_punctuation(char32_t cp) {
  switch (cp) {
    // Arabic block punctuation.
    case 0x0609: case 0x060A: case 0x060C: case 0x060D: case 0x061B:
    case 0x061D: case 0x061E: case 0x061F: case 0x066A: case 0x066B:
    case 0x066C: case 0x066D: case 0x06D4:
      return true;
    default:
      return u_ispunct(static_cast<UChar32>(cp));
  }
}

Sentence separate_punctuation(std::string_view text) {
  Sentence tokens;
  for (const auto& word : split_words(text)) {
    std::string current;
    utf8::for_each(word, [&](char32_t cp, std::string_view bytes) {
      if (is_punctuation(cp)) {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
        tokens.emplace_back(bytes);
      } else {
        current += bytes;
      }
    });
    if (!current.empty()) tokens.push_back(std::move(current));
  }
  return tokens;
}

}  // namespace subseg
