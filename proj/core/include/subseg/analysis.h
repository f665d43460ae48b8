#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subseg/bpe.h"
#include "subseg/corpus.h"
#include "subseg/types.h"

namespace subseg {

// A prefix length of a merge table, or the whole table ("saturated").
class SweepOp {
 public:
  explicit SweepOp(std::size_t k) : k_(k) {}
  static SweepOp saturated() { return SweepOp(); }

  bool is_saturated() const noexcept { return !k_.has_value(); }
  std::size_t k() const { return *k_; }
  std::size_t resolve(const MergeTable& table) const {
    return k_ ? *k_ : table.op();
  }
  // The integer, or "saturated".
  std::string label() const;

  // Saturated sorts after every integer.
  friend bool operator<(const SweepOp& a, const SweepOp& b) {
    if (a.is_saturated()) return false;
    if (b.is_saturated()) return true;
    return *a.k_ < *b.k_;
  }
  friend bool operator==(const SweepOp&, const SweepOp&) = default;

 private:
  SweepOp() = default;
  std::optional<std::size_t> k_;
};

// Parses "30000" or "saturated".
SweepOp parse_sweep_op(std::string_view text);

struct SweepPoint {
  SweepOp op;
  std::uint64_t src_tokens = 0;
  std::uint64_t tgt_tokens = 0;
  double ratio = 0;  // src_tokens / tgt_tokens
};

struct SweepOptions {
  // Add op=0 (characters) and op=saturated (full table) if missing.
  bool include_endpoints = false;
  // Segment the target instead of the source (En->Ar pipelines). The ratio
  // stays src/tgt.
  bool segment_target = false;
  // Fixed segmentation for the other side; unsegmented when null.
  const MergeTable* other_table = nullptr;
  std::size_t other_k = 0;
};

// Token counts of a corpus at every prefix of a table, against a fixed
// other side. Points come back ordered by op; duplicates are kept.
// Throws ValidationError if an op exceeds the table or the denominator
// side has no tokens.
std::vector<SweepPoint> op_sweep(const Corpus& src, const Corpus& tgt,
                                 const MergeTable& table,
                                 std::span<const SweepOp> ops,
                                 const SweepOptions& options = {});

// Number of units after applying the first k rules to every token.
std::uint64_t segmented_token_count(const Corpus& corpus,
                                    const MergeTable& table, std::size_t k);

// "op\tsrc_tokens\ttgt_tokens\tratio" then one row per point, ratio with
// four decimals.
void write_sweep_tsv(std::ostream& out, std::span<const SweepPoint> points);
std::string emit_sweep_tsv(std::span<const SweepPoint> points);

struct OovReport {
  std::uint64_t oov_types = 0;
  std::uint64_t oov_tokens = 0;
  // Most frequent OOV types, by frequency then word.
  std::vector<std::pair<std::string, std::uint64_t>> examples;
};

OovReport oov_report(const BpeVocab& train_vocab, const Corpus& test,
                     std::size_t top_n = 10);

struct TypeSegmentation {
  SegmentedWord segmentation;
  std::uint64_t freq = 0;
};

using SegmentedTypeMap = std::map<std::string, TypeSegmentation>;

// Segments every type of corpus with the first k rules of table.
SegmentedTypeMap segment_types(const Corpus& corpus, const MergeTable& table,
                               std::size_t k);

// Two word types sharing a prefix whose unit boundaries inside that prefix
// disagree ("driv|en" vs "drivi|ng").
struct DivergencePair {
  std::string word_a;  // word_a < word_b
  std::string word_b;
  std::size_t lcp_len = 0;  // characters
  std::vector<std::size_t> boundaries_a;  // split positions <= lcp_len
  std::vector<std::size_t> boundaries_b;
  std::string seg_a;  // units joined by "|"
  std::string seg_b;
  std::uint64_t combined_freq = 0;

  friend bool operator==(const DivergencePair&, const DivergencePair&) = default;
};

inline constexpr std::size_t kDefaultMinLcp = 4;

// All divergent pairs of distinct types whose common prefix has at least
// min_lcp characters, ordered by combined frequency (descending) then by
// words. top_n == 0 keeps every pair. UNK entries are ignored. Throws
// ValidationError if min_lcp < 2.
std::vector<DivergencePair> consistency_report(const SegmentedTypeMap& types,
                                               std::size_t min_lcp = kDefaultMinLcp,
                                               std::size_t top_n = 0);

// "word_a\tword_b\tlcp_len\tseg_a\tseg_b\tcombined_freq" header and rows.
void write_consistency_tsv(std::ostream& out,
                           std::span<const DivergencePair> pairs);

}  // namespace subseg
