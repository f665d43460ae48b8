#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subseg/types.h"

namespace subseg {

using TypeCounts = std::unordered_map<std::string, std::uint64_t>;

// An ordered list of sentences with cached type and token counts.
// Immutable once constructed.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Sentence> sentences);

  const std::vector<Sentence>& sentences() const noexcept { return sentences_; }
  std::size_t size() const noexcept { return sentences_.size(); }
  bool empty() const noexcept { return sentences_.empty(); }

  std::uint64_t token_count() const noexcept { return token_count_; }
  const TypeCounts& type_counts() const noexcept { return type_counts_; }

  // Types with counts in codepoint order of the word.
  std::vector<std::pair<std::string, std::uint64_t>> sorted_types() const;

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.sentences_ == b.sentences_;
  }

 private:
  std::vector<Sentence> sentences_;
  std::uint64_t token_count_ = 0;
  TypeCounts type_counts_;
};

struct LoadOptions {
  Sentinels sentinels;
  // Reject words that contain a reserved sentinel.
  bool reject_sentinels = true;
};

// Splits on runs of Unicode whitespace. line must be valid UTF-8.
Sentence split_words(std::string_view line);

// Joins with a single ASCII space.
std::string join_words(const Sentence& sentence);

// One sentence per line. Empty lines become empty sentences.
// Throws DecodeError on invalid UTF-8 and ValidationError (naming line and
// word) on reserved sentinels.
Corpus load_corpus(std::istream& in, const LoadOptions& options = {});
Corpus load_corpus_from_string(std::string_view text,
                               const LoadOptions& options = {});

// Throws ValidationError naming the line if a word contains a sentinel.
void check_sentinels(const Sentence& sentence, const Sentinels& sentinels,
                     std::size_t line);

void write_corpus(std::ostream& out, const Corpus& corpus);

struct CorpusStats {
  std::uint64_t tokens = 0;
  std::uint64_t types = 0;
  std::uint64_t sentences = 0;
  std::uint64_t chars = 0;
  // Unicode scalar values per token; 0 for an empty corpus.
  double mean_word_len_chars = 0;
};

CorpusStats corpus_stats(const Corpus& corpus);

// Deterministic content hash of a corpus, "fnv1a64:<16 hex digits>".
std::string fingerprint(const Corpus& corpus);

}  // namespace subseg
