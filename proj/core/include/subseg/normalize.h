#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subseg/types.h"

namespace subseg {

// Rewrites one codepoint; an empty replacement deletes it.
struct NormalizationRule {
  char32_t from;
  std::optional<char32_t> to;

  friend bool operator==(const NormalizationRule&,
                         const NormalizationRule&) = default;
};

// An ordered rule list; the first rule matching a codepoint wins.
class NormalizationConfig {
 public:
  // Throws ValidationError if applying the rules twice could differ from
  // applying them once, i.e. some replacement is itself rewritten.
  explicit NormalizationConfig(std::vector<NormalizationRule> rules,
                               bool enabled = true);

  // Alef variants to bare alef, alef maqsura to ya, Arabic-Indic digits to
  // ASCII; tatweel and harakat (U+064B..U+0652) deleted.
  static NormalizationConfig arabic_default();

  // Lines "FROM<TAB>TO" with U+XXXX escapes. FROM may be a range
  // "U+0660..U+0669"; TO is then empty (delete), a single codepoint, or a
  // range of equal length mapped element-wise. Blank lines and lines
  // starting with '#' are ignored. Throws FormatError.
  static NormalizationConfig read_rules(std::istream& in, bool enabled = true);

  bool enabled() const noexcept { return enabled_; }
  std::span<const NormalizationRule> rules() const noexcept { return rules_; }
  NormalizationConfig with_enabled(bool enabled) const;

  // First rule matching cp, or nullptr.
  const NormalizationRule* match(char32_t cp) const;

 private:
  std::vector<NormalizationRule> rules_;
  std::unordered_map<char32_t, std::size_t> first_match_;
  bool enabled_;
};

std::string normalize_text(std::string_view text,
                           const NormalizationConfig& config);

// General categories P* plus the punctuation of the Arabic block.
bool is_punctuation(char32_t cp);

// Whitespace split, then every punctuation character becomes its own token.
Sentence separate_punctuation(std::string_view text);

}  // namespace subseg
