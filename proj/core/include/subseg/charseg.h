#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "subseg/types.h"

namespace subseg {

struct CharSegConfig {
  std::string boundary{kDefaultBoundary};
  // Longer sentences are flagged, never truncated.
  std::size_t max_sentence_units = 500;

  void validate() const;
};

struct CharSegmented {
  std::vector<std::string> units;
  bool exceeds_limit = false;
};

// Every character becomes a unit, with one boundary unit between words.
// Throws ValidationError if a word contains the boundary symbol.
CharSegmented char_segment(const Sentence& sentence, const CharSegConfig& config);

// Inverse of char_segment. Throws ValidationError naming the unit position
// on a leading, trailing or doubled boundary, or a multi-character unit.
Sentence char_desegment(std::span<const std::string> units,
                        const CharSegConfig& config);

}  // namespace subseg
