#include "subseg/analysis.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "subseg/error.h"
#include "subseg/utf8.h"

namespace subseg {

std::string SweepOp::label() const {
  return is_saturated() ? "saturated" : std::to_string(*k_);
}

SweepOp parse_sweep_op(std::string_view text) {
  if (text == "saturated") return SweepOp::saturated();
  std::size_t k = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw ValidationError("bad OP value '" + std::string(text) +
                          "' (expected a non-negative integer or 'saturated')");
  return SweepOp(k);
}

std::uint64_t segmented_token_count(const Corpus& corpus, const MergeTable& table,
                                    std::size_t k) {
  BpeSegmenter segmenter(table, k);
  std::uint64_t total = 0;
  for (const auto& [word, freq] : corpus.type_counts())
    total += segmenter.segment_uncached(word).size() * freq;
  return total;
}

std::vector<SweepPoint> op_sweep(const Corpus& src, const Corpus& tgt,
                                 const MergeTable& table,
                                 std::span<const SweepOp> ops,
                                 const SweepOptions& options) {
  if (tgt.token_count() == 0)
    throw ValidationError("target corpus has no tokens; the ratio is undefined");

  std::vector<SweepOp> sorted(ops.begin(), ops.end());
  if (options.include_endpoints) {
    for (const SweepOp endpoint : {SweepOp(0), SweepOp::saturated()}) {
      if (std::find(sorted.begin(), sorted.end(), endpoint) == sorted.end())
        sorted.push_back(endpoint);
    }
  }
  std::stable_sort(sorted.begin(), sorted.end());
  for (const SweepOp& op : sorted) {
    if (!op.is_saturated() && op.k() > table.op())
      throw ValidationError("OP " + op.label() + " exceeds the merge table (" +
                            std::to_string(table.op()) +
                            " rules); train a deeper table with at least that many merges");
  }

  const Corpus& swept = options.segment_target ? tgt : src;
  const Corpus& fixed = options.segment_target ? src : tgt;
  const std::uint64_t fixed_tokens =
      options.other_table != nullptr
          ? segmented_token_count(fixed, *options.other_table, options.other_k)
          : fixed.token_count();

  std::map<std::size_t, std::uint64_t> counts;
  std::vector<SweepPoint> points;
  for (const SweepOp& op : sorted) {
    const std::size_t k = op.resolve(table);
    auto it = counts.find(k);
    if (it == counts.end())
      it = counts.emplace(k, segmented_token_count(swept, table, k)).first;
    SweepPoint point{op, 0, 0, 0};
    point.src_tokens = options.segment_target ? fixed_tokens : it->second;
    point.tgt_tokens = options.segment_target ? it->second : fixed_tokens;
    point.ratio = static_cast<double>(point.src_tokens) /
                  static_cast<double>(point.tgt_tokens);
    points.push_back(point);
  }
  return points;
}

void write_sweep_tsv(std::ostream& out, std::span<const SweepPoint> points) {
  out << "op\tsrc_tokens\ttgt_tokens\tratio\n";
  for (const auto& p : points) {
    char ratio[64];
    std::snprintf(ratio, sizeof(ratio), "%.4f", p.ratio);
    out << p.op.label() << '\t' << p.src_tokens << '\t' << p.tgt_tokens << '\t'
        << ratio << '\n';
  }
}

std::string emit_sweep_tsv(std::span<const SweepPoint> points) {
  std::ostringstream out;
  write_sweep_tsv(out, points);
  return out.str();
}

OovReport oov_report(const BpeVocab& train_vocab, const Corpus& test,
                     std::size_t top_n) {
  OovReport report;
  for (const auto& [word, freq] : test.type_counts()) {
    if (train_vocab.contains(word)) continue;
    ++report.oov_types;
    report.oov_tokens += freq;
    report.examples.emplace_back(word, freq);
  }
  std::sort(report.examples.begin(), report.examples.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  if (report.examples.size() > top_n) report.examples.resize(top_n);
  return report;
}

SegmentedTypeMap segment_types(const Corpus& corpus, const MergeTable& table,
                               std::size_t k) {
  BpeSegmenter segmenter(table, k);
  SegmentedTypeMap types;
  for (const auto& [word, freq] : corpus.type_counts())
    types.emplace(word, TypeSegmentation{SegmentedWord(segmenter.segment_uncached(word)), freq});
  return types;
}

namespace {

bool is_continuation_byte(char c) {
  return (static_cast<unsigned char>(c) & 0xC0) == 0x80;
}

// Byte length of the longest common prefix that ends on a character boundary.
std::size_t common_prefix_bytes(std::string_view a, std::string_view b) {
  std::size_t n = 0;
  const std::size_t limit = std::min(a.size(), b.size());
  while (n < limit && a[n] == b[n]) ++n;
  while (n > 0 && ((n < a.size() && is_continuation_byte(a[n])) ||
                   (n < b.size() && is_continuation_byte(b[n]))))
    --n;
  return n;
}

// Byte length of the first `chars` characters, or npos if the word is shorter.
std::size_t prefix_bytes(std::string_view word, std::size_t chars) {
  std::size_t i = 0;
  for (std::size_t c = 0; c < chars; ++c) {
    if (i >= word.size()) return std::string_view::npos;
    utf8::detail::next(word, i);
  }
  return i;
}

struct Candidate {
  const std::string* word;
  const TypeSegmentation* entry;
  std::vector<std::size_t> splits;
};

std::vector<std::size_t> restrict_to(const std::vector<std::size_t>& splits,
                                     std::size_t limit) {
  std::vector<std::size_t> out;
  for (const std::size_t p : splits) {
    if (p <= limit) out.push_back(p);
  }
  return out;
}

bool report_order(const DivergencePair& a, const DivergencePair& b) {
  if (a.combined_freq != b.combined_freq) return a.combined_freq > b.combined_freq;
  if (a.word_a != b.word_a) return a.word_a < b.word_a;
  return a.word_b < b.word_b;
}

}  // namespace

// Pairs with an lcp of at least min_lcp characters are exactly the pairs that
// share their first min_lcp characters, and those form contiguous runs in
// sorted order, so only pairs inside each run are compared.
std::vector<DivergencePair> consistency_report(const SegmentedTypeMap& types,
                                               std::size_t min_lcp,
                                               std::size_t top_n) {
  if (min_lcp < 2) throw ValidationError("min_lcp must be at least 2");

  std::vector<DivergencePair> pairs;
  auto prune = [&] {
    if (top_n == 0 || pairs.size() <= 2 * top_n) return;
    std::nth_element(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(top_n),
                     pairs.end(), report_order);
    pairs.resize(top_n);
  };

  std::vector<Candidate> run;
  std::string_view run_key;
  auto flush = [&] {
    for (std::size_t i = 0; i < run.size(); ++i) {
      for (std::size_t j = i + 1; j < run.size(); ++j) {
        const Candidate& a = run[i];
        const Candidate& b = run[j];
        const std::size_t lcp = utf8::length(
            std::string_view(*a.word).substr(0, common_prefix_bytes(*a.word, *b.word)));
        auto bounds_a = restrict_to(a.splits, lcp);
        auto bounds_b = restrict_to(b.splits, lcp);
        if (bounds_a == bounds_b) continue;
        pairs.push_back(DivergencePair{*a.word, *b.word, lcp, std::move(bounds_a),
                                       std::move(bounds_b),
                                       a.entry->segmentation.joined("|"),
                                       b.entry->segmentation.joined("|"),
                                       a.entry->freq + b.entry->freq});
        prune();
      }
    }
    run.clear();
  };

  // std::map orders by bytes, which for UTF-8 is codepoint order.
  for (const auto& [word, entry] : types) {
    if (entry.segmentation.is_unk()) continue;
    const std::size_t key_len = prefix_bytes(word, min_lcp);
    if (key_len == std::string_view::npos) continue;
    const std::string_view key = std::string_view(word).substr(0, key_len);
    if (key != run_key) {
      flush();
      run_key = key;
    }
    run.push_back({&word, &entry, entry.segmentation.split_positions()});
  }
  flush();

  std::sort(pairs.begin(), pairs.end(), report_order);
  if (top_n > 0 && pairs.size() > top_n) pairs.resize(top_n);
  return pairs;
}

void write_consistency_tsv(std::ostream& out, std::span<const DivergencePair> pairs) {
  out << "word_a\tword_b\tlcp_len\tseg_a\tseg_b\tcombined_freq\n";
  for (const auto& p : pairs) {
    out << p.word_a << '\t' << p.word_b << '\t' << p.lcp_len << '\t' << p.seg_a
        << '\t' << p.seg_b << '\t' << p.combined_freq << '\n';
  }
}

}  // namespace subseg
