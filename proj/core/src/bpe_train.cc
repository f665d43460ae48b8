#include <set>
#include <unordered_map>

#include "bpe_internal.h"
#include "subseg/bpe.h"
#include "subseg/error.h"
#include "subseg/utf8.h"

namespace subseg {

namespace {

using internal::merge_in_place;
using internal::pair_key;
using internal::SymbolId;

// Greedy pair merging over word types. Pair counts are kept incrementally:
// when a word changes, all of its old pairs are retracted and all of its new
// pairs added, which stays exact even for overlapping pairs like (a, a).
class Trainer {
 public:
  explicit Trainer(const Corpus& corpus) : queue_(PairOrder{&texts_}) {
    for (auto& [surface, freq] : corpus.sorted_types()) {
      WordState word{surface, {}, freq};
      for (std::string_view c : utf8::split_chars(surface))
        word.syms.push_back(intern(std::string(c)));
      words_.push_back(std::move(word));
    }
    stamps_.assign(words_.size(), 0);
    for (std::size_t w = 0; w < words_.size(); ++w) {
      const auto& syms = words_[w].syms;
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        const auto key = pair_key(syms[i], syms[i + 1]);
        counts_[key] += static_cast<std::int64_t>(words_[w].freq);
        where_[key].push_back(static_cast<std::uint32_t>(w));
      }
    }
    for (const auto& [key, count] : counts_)
      queue_.insert(Entry{count, static_cast<SymbolId>(key >> 32),
                          static_cast<SymbolId>(key & 0xffffffffu)});
  }

  std::vector<std::pair<std::string, std::string>> run(std::size_t op) {
    std::vector<std::pair<std::string, std::string>> merges;
    while (merges.size() < op && !queue_.empty()) {
      const Entry best = *queue_.begin();
      if (best.count < static_cast<std::int64_t>(kMinPairFrequency)) break;
      const SymbolId merged = intern(texts_[best.left] + texts_[best.right]);
      merges.emplace_back(texts_[best.left], texts_[best.right]);

      auto node = where_.extract(pair_key(best.left, best.right));
      if (node.empty()) continue;
      ++epoch_;
      for (const std::uint32_t w : node.mapped()) {
        if (stamps_[w] == epoch_) continue;
        stamps_[w] = epoch_;
        auto& syms = words_[w].syms;
        std::vector<SymbolId> before = syms;
        if (!merge_in_place(syms, best.left, best.right, merged)) continue;
        retract(before, words_[w].freq);
        add(w);
      }
    }
    return merges;
  }

  std::map<std::string, std::vector<std::string>> final_symbols() const {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& word : words_) {
      auto& symbols = out[word.surface];
      for (const SymbolId id : word.syms) symbols.push_back(texts_[id]);
    }
    return out;
  }

 private:
  struct WordState {
    std::string surface;
    std::vector<SymbolId> syms;
    std::uint64_t freq;
  };

  struct Entry {
    std::int64_t count;
    SymbolId left;
    SymbolId right;
  };

  // Highest count first; ties by (left, right) in codepoint order, which for
  // UTF-8 is byte order.
  struct PairOrder {
    const std::vector<std::string>* texts;
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.count != b.count) return a.count > b.count;
      if (a.left != b.left) return (*texts)[a.left] < (*texts)[b.left];
      if (a.right != b.right) return (*texts)[a.right] < (*texts)[b.right];
      return false;
    }
  };

  SymbolId intern(std::string text) {
    auto [it, inserted] = ids_.try_emplace(text, static_cast<SymbolId>(texts_.size()));
    if (inserted) texts_.push_back(std::move(text));
    return it->second;
  }

  void update(SymbolId left, SymbolId right, std::int64_t delta) {
    const auto key = pair_key(left, right);
    auto it = counts_.find(key);
    const std::int64_t old = it == counts_.end() ? 0 : it->second;
    if (old > 0) queue_.erase(Entry{old, left, right});
    const std::int64_t now = old + delta;
    if (now > 0) {
      if (it == counts_.end()) {
        counts_.emplace(key, now);
      } else {
        it->second = now;
      }
      queue_.insert(Entry{now, left, right});
    } else if (it != counts_.end()) {
      counts_.erase(it);
    }
  }

  void retract(const std::vector<SymbolId>& syms, std::uint64_t freq) {
    for (std::size_t i = 0; i + 1 < syms.size(); ++i)
      update(syms[i], syms[i + 1], -static_cast<std::int64_t>(freq));
  }

  void add(std::uint32_t w) {
    const auto& syms = words_[w].syms;
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      update(syms[i], syms[i + 1], static_cast<std::int64_t>(words_[w].freq));
      where_[pair_key(syms[i], syms[i + 1])].push_back(w);
    }
  }

  std::vector<std::string> texts_;
  std::unordered_map<std::string, SymbolId> ids_;
  std::vector<WordState> words_;
  std::unordered_map<std::uint64_t, std::int64_t> counts_;
  // Words that contained a pair at some point; may hold stale entries.
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> where_;
  std::set<Entry, PairOrder> queue_;
  std::vector<std::uint64_t> stamps_;
  std::uint64_t epoch_ = 0;
};

}  // namespace

BpeTrainResult bpe_train_detailed(const Corpus& corpus, std::size_t op) {
  if (corpus.token_count() == 0)
    throw ValidationError("cannot train BPE on an empty corpus");
  if (op == 0) throw ValidationError("number of merge operations must be positive");
  Trainer trainer(corpus);
  auto merges = trainer.run(op);
  return {MergeTable::from_pairs(merges, fingerprint(corpus)),
          trainer.final_symbols()};
}

MergeTable bpe_train(const Corpus& corpus, std::size_t op) {
  return bpe_train_detailed(corpus, op).table;
}

}  // namespace subseg
