#include "subseg/charseg.h"

#include "subseg/error.h"
#include "subseg/utf8.h"

namespace subseg {

void CharSegConfig::validate() const {
  if (boundary.empty()) throw ValidationError("boundary symbol is empty");
  if (max_sentence_units == 0)
    throw ValidationError("max_sentence_units must be at least 1");
}

CharSegmented char_segment(const Sentence& sentence, const CharSegConfig& config) {
  CharSegmented out;
  for (std::size_t w = 0; w < sentence.size(); ++w) {
    const std::string& word = sentence[w];
    if (word.find(config.boundary) != std::string::npos)
      throw ValidationError("word " + std::to_string(w + 1) + " '" + word +
                            "' contains the boundary symbol");
    if (w > 0) out.units.push_back(config.boundary);
    for (std::string_view c : utf8::split_chars(word)) out.units.emplace_back(c);
  }
  out.exceeds_limit = out.units.size() > config.max_sentence_units;
  return out;
}

Sentence char_desegment(std::span<const std::string> units,
                        const CharSegConfig& config) {
  Sentence sentence;
  std::string word;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const std::string& unit = units[i];
    auto fail = [&](const std::string& what) {
      throw ValidationError("unit " + std::to_string(i + 1) + ": " + what);
    };
    if (unit == config.boundary) {
      if (i == 0) fail("leading boundary symbol");
      if (i + 1 == units.size()) fail("trailing boundary symbol");
      if (word.empty()) fail("adjacent boundary symbols");
      sentence.push_back(std::move(word));
      word.clear();
    } else {
      if (!utf8::is_single_char(unit)) fail("'" + unit + "' is not a single character");
      word += unit;
    }
  }
  if (!word.empty()) sentence.push_back(std::move(word));
  return sentence;
}

}  // namespace subseg
