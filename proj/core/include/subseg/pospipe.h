#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subseg/bpe.h"
#include "subseg/charseg.h"
#include "subseg/io.h"
#include "subseg/types.h"

namespace subseg {

struct TaggedWord {
  std::string word;
  // One tag per morpheme of the native analysis; never empty.
  std::vector<std::string> tags;

  friend bool operator==(const TaggedWord&, const TaggedWord&) = default;
};

using TaggedSentence = std::vector<TaggedWord>;

struct TaggedCorpus {
  std::vector<TaggedSentence> sentences;
  std::set<std::string> tagset;
};

// Tokens "WORD|TAG1+TAG2"; "\p", "\+" and "\\" escape '|', '+' and '\'.
// Throws FormatError with line and token position.
TaggedSentence parse_tagged_line(std::string_view line, std::size_t line_number);
TaggedCorpus load_tagged(std::istream& in);

// Segments single words according to one scheme.
class WordSegmenter {
 public:
  static WordSegmenter unseg();
  static WordSegmenter chars();
  // Uses the first k rules of table. Throws if k > table.op().
  static WordSegmenter bpe(const MergeTable& table, std::size_t k);
  // Looks words up in an imported segmentation; unknown words are an error.
  static WordSegmenter imported(const SegmentedCorpus& corpus);

  const SegmentationScheme& scheme() const noexcept { return scheme_; }

  // Throws ValidationError when the scheme cannot segment word.
  SegmentedWord segment(std::string_view word) const;

 private:
  explicit WordSegmenter(SegmentationScheme scheme) : scheme_(scheme) {}

  SegmentationScheme scheme_;
  std::shared_ptr<const BpeSegmenter> bpe_;
  std::shared_ptr<const std::unordered_map<std::string, SegmentedWord>> lookup_;
};

struct ContextEntry {
  // Empty for the sentence-start sentinel.
  std::optional<SegmentedWord> word;
  std::vector<std::string> tags;

  bool is_bos() const noexcept { return !word.has_value(); }
  static ContextEntry bos() { return {}; }

  friend bool operator==(const ContextEntry&, const ContextEntry&) = default;
};

// Two preceding words with their tags, the focus word, and its tags.
struct TagInstance {
  std::array<ContextEntry, 2> context;
  SegmentedWord focus;
  std::vector<std::string> target;

  friend bool operator==(const TagInstance&, const TagInstance&) = default;
};

// One instance per token of the sentence.
std::vector<TagInstance> sentence_instances(const TaggedSentence& sentence,
                                            const WordSegmenter& segmenter);

std::vector<TagInstance> gen_instances(std::span<const TaggedSentence> sentences,
                                       const WordSegmenter& segmenter);

inline constexpr std::string_view kBosToken = "<BOS>";

// "<T:NOUN>"
std::string tag_token(std::string_view tag);

// Context word 1 units, its tag tokens, context word 2 units, its tag
// tokens, focus units. BOS renders as "<BOS>" without tags.
std::string format_source_line(const TagInstance& instance,
                               const SegmentedLineCodec& codec);
// Space-joined target tags.
std::string format_target_line(const TagInstance& instance);

void emit_seq2seq(std::span<const TagInstance> instances, std::ostream& src,
                  std::ostream& tgt, const SegmentedLineCodec& codec = {});

}  // namespace subseg
