#include <algorithm>
#include <mutex>
#include <shared_mutex>

#include "bpe_internal.h"
#include "subseg/bpe.h"
#include "subseg/error.h"
#include "subseg/utf8.h"

namespace subseg {

using internal::merge_in_place;
using internal::pair_key;
using internal::SymbolId;

struct BpeSegmenter::Impl {
  std::size_t k = 0;
  std::unordered_map<std::string, SymbolId> ids;
  std::vector<std::string> texts;
  // Ranks (ascending) of the rules for each pair. Usually one.
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> ranks;
  std::vector<SymbolId> left, right, product;

  mutable std::shared_mutex mutex;
  mutable std::unordered_map<std::string, SegmentedWord> cache;

  SymbolId intern(const std::string& text) {
    auto [it, inserted] = ids.try_emplace(text, static_cast<SymbolId>(texts.size()));
    if (inserted) texts.push_back(text);
    return it->second;
  }
};

BpeSegmenter::BpeSegmenter(const MergeTable& table, std::size_t k)
    : impl_(std::make_unique<Impl>()) {
  if (k > table.op())
    throw ValidationError("cannot apply " + std::to_string(k) +
                          " merges from a table of " + std::to_string(table.op()) +
                          " rules; train a deeper table");
  impl_->k = k;
  for (std::size_t r = 0; r < k; ++r) {
    const MergeRule& rule = table.rules()[r];
    const SymbolId l = impl_->intern(rule.left.text());
    const SymbolId rt = impl_->intern(rule.right.text());
    impl_->left.push_back(l);
    impl_->right.push_back(rt);
    impl_->product.push_back(impl_->intern(rule.merged()));
    impl_->ranks[pair_key(l, rt)].push_back(static_cast<std::uint32_t>(r));
  }
}

BpeSegmenter::~BpeSegmenter() = default;
BpeSegmenter::BpeSegmenter(BpeSegmenter&&) noexcept = default;
BpeSegmenter& BpeSegmenter::operator=(BpeSegmenter&&) noexcept = default;

std::size_t BpeSegmenter::k() const noexcept { return impl_->k; }

// Equivalent to replaying rules 0..k-1 in order over the word: at each step
// the lowest-ranked applicable rule above the last applied rank fires. Rules
// skipped over were not applicable when their turn came, and nothing changed
// in between, so they would have been no-ops in a sequential replay too.
std::vector<std::string> BpeSegmenter::segment_uncached(std::string_view word) const {
  const Impl& impl = *impl_;
  const auto chars = utf8::split_chars(word);
  std::vector<SymbolId> syms;
  syms.reserve(chars.size());
  // Characters never seen in the table get ids past the table's symbols.
  std::vector<std::string_view> unknown;
  for (std::string_view c : chars) {
    auto it = impl.ids.find(std::string(c));
    if (it != impl.ids.end()) {
      syms.push_back(it->second);
    } else {
      syms.push_back(static_cast<SymbolId>(impl.texts.size() + unknown.size()));
      unknown.push_back(c);
    }
  }

  std::int64_t last_rank = -1;
  while (syms.size() > 1) {
    std::uint32_t best = UINT32_MAX;
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      auto it = impl.ranks.find(pair_key(syms[i], syms[i + 1]));
      if (it == impl.ranks.end()) continue;
      const auto& ranks = it->second;
      auto r = std::upper_bound(ranks.begin(), ranks.end(), last_rank,
                                [](std::int64_t v, std::uint32_t x) { return v < x; });
      if (r != ranks.end() && *r < best) best = *r;
    }
    if (best == UINT32_MAX) break;
    merge_in_place(syms, impl.left[best], impl.right[best], impl.product[best]);
    last_rank = best;
  }

  std::vector<std::string> units;
  units.reserve(syms.size());
  for (const SymbolId id : syms) {
    if (id < impl.texts.size()) {
      units.push_back(impl.texts[id]);
    } else {
      units.emplace_back(unknown[id - impl.texts.size()]);
    }
  }
  return units;
}

SegmentedWord BpeSegmenter::segment(std::string_view word) const {
  std::string key(word);
  {
    std::shared_lock lock(impl_->mutex);
    auto it = impl_->cache.find(key);
    if (it != impl_->cache.end()) return it->second;
  }
  SegmentedWord result(segment_uncached(word));
  std::unique_lock lock(impl_->mutex);
  impl_->cache.try_emplace(std::move(key), result);
  return result;
}

SegmentedRow BpeSegmenter::segment_sentence(const Sentence& sentence,
                                            const ApplyMode& mode,
                                            std::uint64_t& unk_count) const {
  SegmentedRow row;
  row.reserve(sentence.size());
  for (const auto& word : sentence) {
    if (mode.is_constrained() && !mode.vocab->contains(word)) {
      row.push_back(SegmentedWord::unk(mode.unk));
      ++unk_count;
    } else {
      row.push_back(segment(word));
    }
  }
  return row;
}

std::size_t BpeSegmenter::cache_size() const {
  std::shared_lock lock(impl_->mutex);
  return impl_->cache.size();
}

BpeVocab BpeVocab::from_corpus(const Corpus& corpus) {
  std::unordered_set<std::string> words;
  words.reserve(corpus.type_counts().size());
  for (const auto& [word, count] : corpus.type_counts()) words.insert(word);
  return BpeVocab(std::move(words));
}

SegmentedWord bpe_apply(const MergeTable& table, std::size_t k, std::string_view word) {
  return SegmentedWord(BpeSegmenter(table, k).segment_uncached(word));
}

SegmentedCorpus bpe_apply_corpus(const MergeTable& table, std::size_t k,
                                 const Corpus& corpus, const ApplyMode& mode) {
  BpeSegmenter segmenter(table, k);
  SegmentedCorpus out;
  out.scheme = SegmentationScheme::bpe(k);
  out.rows.reserve(corpus.size());
  for (const auto& sentence : corpus.sentences())
    out.rows.push_back(segmenter.segment_sentence(sentence, mode, out.unk_count));
  return out;
}

Sentence desegment_row(const SegmentedRow& row, std::size_t sentence_index) {
  Sentence sentence;
  sentence.reserve(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i].is_unk())
      throw ValidationError("sentence " + std::to_string(sentence_index + 1) +
                            ", word " + std::to_string(i + 1) +
                            ": UNK unit cannot be desegmented");
    sentence.push_back(row[i].surface());
  }
  return sentence;
}

Corpus bpe_desegment(const SegmentedCorpus& corpus) {
  std::vector<Sentence> sentences;
  sentences.reserve(corpus.rows.size());
  for (std::size_t s = 0; s < corpus.rows.size(); ++s)
    sentences.push_back(desegment_row(corpus.rows[s], s));
  return Corpus(std::move(sentences));
}

}  // namespace subseg
