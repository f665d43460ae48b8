#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "subseg/corpus.h"
#include "subseg/types.h"

namespace subseg {

struct MergeRule {
  Symbol left;
  Symbol right;
  std::size_t rank;

  std::string merged() const { return left.text() + right.text(); }

  friend bool operator==(const MergeRule&, const MergeRule&) = default;
};

// Learned merge rules in rank order. Any prefix of a table is itself a
// valid table: a coarser-to-finer family of segmentation models.
class MergeTable {
 public:
  MergeTable() = default;

  // Throws ValidationError unless ranks are 0..n-1 in order and each side of
  // rule k is a single character or the product of a rule ranked below k.
  explicit MergeTable(std::vector<MergeRule> rules, std::string trained_on = {});

  static MergeTable from_pairs(
      const std::vector<std::pair<std::string, std::string>>& pairs,
      std::string trained_on = {});

  const std::vector<MergeRule>& rules() const noexcept { return rules_; }
  // Number of rules: the OP value of the table.
  std::size_t op() const noexcept { return rules_.size(); }
  // Fingerprint of the training corpus, empty when unknown.
  const std::string& trained_on() const noexcept { return trained_on_; }

  MergeTable prefix(std::size_t k) const;

  friend bool operator==(const MergeTable&, const MergeTable&) = default;

 private:
  std::vector<MergeRule> rules_;
  std::string trained_on_;
};

inline constexpr std::string_view kMergesHeader = "#subseg merges v1";

// Header line, optional "#trained_on <fingerprint>", then "LEFT RIGHT" per
// rule in rank order. Byte-deterministic.
void write_merges(std::ostream& out, const MergeTable& table);
std::string merges_to_string(const MergeTable& table);

// Throws FormatError for malformed lines and ValidationError (with the line
// number) for rules referencing symbols that are neither characters nor
// earlier merge products.
MergeTable read_merges(std::istream& in);
MergeTable merges_from_string(std::string_view text);

// Train until no pair reaches the minimum frequency.
inline constexpr std::size_t kSaturate = std::numeric_limits<std::size_t>::max();
inline constexpr std::uint64_t kMinPairFrequency = 2;

// Learns up to op merges by repeatedly merging the most frequent adjacent
// symbol pair, counted over word types weighted by corpus frequency. Merges
// never cross word boundaries. Ties go to the smallest (left, right) in
// codepoint order. Stops early once the best pair occurs fewer than
// kMinPairFrequency times. Throws ValidationError for an empty corpus or
// op == 0.
MergeTable bpe_train(const Corpus& corpus, std::size_t op);

struct BpeTrainResult {
  MergeTable table;
  // Symbol sequence of every word type when training stopped.
  std::map<std::string, std::vector<std::string>> final_symbols;
};

BpeTrainResult bpe_train_detailed(const Corpus& corpus, std::size_t op);

// Full type vocabulary of a training corpus.
class BpeVocab {
 public:
  BpeVocab() = default;
  explicit BpeVocab(std::unordered_set<std::string> words)
      : words_(std::move(words)) {}
  static BpeVocab from_corpus(const Corpus& corpus);

  bool contains(const std::string& word) const { return words_.count(word) > 0; }
  std::size_t size() const noexcept { return words_.size(); }
  const std::unordered_set<std::string>& words() const noexcept { return words_; }

 private:
  std::unordered_set<std::string> words_;
};

// Test-time application mode. Constrained mode segments only words of the
// training vocabulary and replaces every other word by a single UNK unit.
struct ApplyMode {
  const BpeVocab* vocab = nullptr;
  std::string unk{kDefaultUnk};

  static ApplyMode unconstrained() { return {}; }
  static ApplyMode constrained(const BpeVocab& vocab,
                               std::string unk = std::string(kDefaultUnk)) {
    return {&vocab, std::move(unk)};
  }
  bool is_constrained() const noexcept { return vocab != nullptr; }
};

// Applies the first k rules of a table. Segmentations are memoized per word
// type; segment() may be called concurrently.
class BpeSegmenter {
 public:
  // Throws ValidationError if k > table.op().
  BpeSegmenter(const MergeTable& table, std::size_t k);
  ~BpeSegmenter();
  BpeSegmenter(BpeSegmenter&&) noexcept;
  BpeSegmenter& operator=(BpeSegmenter&&) noexcept;

  std::size_t k() const noexcept;

  SegmentedWord segment(std::string_view word) const;
  std::vector<std::string> segment_uncached(std::string_view word) const;

  // Segments a sentence, adding UNK substitutions to unk_count.
  SegmentedRow segment_sentence(const Sentence& sentence, const ApplyMode& mode,
                                std::uint64_t& unk_count) const;

  std::size_t cache_size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SegmentedWord bpe_apply(const MergeTable& table, std::size_t k,
                        std::string_view word);

SegmentedCorpus bpe_apply_corpus(const MergeTable& table, std::size_t k,
                                 const Corpus& corpus,
                                 const ApplyMode& mode = ApplyMode::unconstrained());

// Joins continuation-flagged units with their successors. Throws
// ValidationError naming sentence and position if a UNK unit is present.
Corpus bpe_desegment(const SegmentedCorpus& corpus);
Sentence desegment_row(const SegmentedRow& row, std::size_t sentence_index = 0);

}  // namespace subseg
