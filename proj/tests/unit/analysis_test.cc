#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.h"
#include "subseg/analysis.h"
#include "subseg/error.h"
#include "subseg/utf8.h"
#include "synth.h"

namespace subseg {
namespace {

using testing::corpus_from_counts;

class SweepTest : public ::testing::Test {
 protected:
  Corpus src_ = corpus_from_counts({{"abc", 3}, {"abd", 2}});
  Corpus tgt_ = Corpus({Sentence{"t1", "t2", "t3", "t4", "t5"}});
  MergeTable table_ = bpe_train(src_, 2);
};

TEST_F(SweepTest, Golden) {
  const std::vector<SweepOp> ops = {SweepOp(0), SweepOp(1), SweepOp(2)};
  const auto points = op_sweep(src_, tgt_, table_, ops);
  ASSERT_EQ(points.size(), 3u);
  const std::uint64_t expected_src[] = {15, 10, 7};
  const double expected_ratio[] = {3.0, 2.0, 1.4};
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(points[i].src_tokens, expected_src[i]);
    EXPECT_EQ(points[i].tgt_tokens, 5u);
    EXPECT_NEAR(points[i].ratio, expected_ratio[i], 1e-9);
  }
  EXPECT_EQ(emit_sweep_tsv(points),
            "op\tsrc_tokens\ttgt_tokens\tratio\n0\t15\t5\t3.0000\n1\t10\t5\t2.0000\n"
            "2\t7\t5\t1.4000\n");
}

TEST_F(SweepTest, DuplicatesAndOrdering) {
  const std::vector<SweepOp> ops = {SweepOp(2), SweepOp::saturated(), SweepOp(1), SweepOp(1)};
  const auto points = op_sweep(src_, tgt_, table_, ops);
  ASSERT_EQ(points.size(), 4u);
  EXPECT_EQ(points[0].op, SweepOp(1));
  EXPECT_EQ(points[1].src_tokens, points[0].src_tokens);
  EXPECT_TRUE(points[3].op.is_saturated());
  EXPECT_EQ(points[3].src_tokens, 7u);
}

TEST_F(SweepTest, Endpoints) {
  SweepOptions opts;
  opts.include_endpoints = true;
  const std::vector<SweepOp> ops = {SweepOp(1)};
  const auto points = op_sweep(src_, tgt_, table_, ops, opts);
  ASSERT_EQ(points.size(), 3u);
  EXPECT_EQ(points.front().src_tokens, 15u);
  EXPECT_TRUE(points.back().op.is_saturated());
}

TEST_F(SweepTest, SegmentTargetSideKeepsRatioDirection) {
  SweepOptions opts;
  opts.segment_target = true;
  const std::vector<SweepOp> ops = {SweepOp(0)};
  // Swap roles: the {abc,abd} corpus is now the target.
  const auto points = op_sweep(tgt_, src_, table_, ops, opts);
  EXPECT_EQ(points[0].src_tokens, 5u);
  EXPECT_EQ(points[0].tgt_tokens, 15u);
  EXPECT_NEAR(points[0].ratio, 5.0 / 15.0, 1e-12);
}

TEST_F(SweepTest, OtherSideTable) {
  SweepOptions opts;
  opts.other_table = &table_;
  opts.other_k = 0;
  const std::vector<SweepOp> ops = {SweepOp(2)};
  const auto points = op_sweep(src_, src_, table_, ops, opts);
  EXPECT_EQ(points[0].tgt_tokens, 15u);
}

TEST_F(SweepTest, Errors) {
  const std::vector<SweepOp> too_deep = {SweepOp(3)};
  try {
    op_sweep(src_, tgt_, table_, too_deep);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("deeper"), std::string::npos);
  }
  const std::vector<SweepOp> ok = {SweepOp(1)};
  EXPECT_THROW(op_sweep(src_, Corpus{}, table_, ok), ValidationError);
}

TEST(SweepOp, ParseAndLabel) {
  EXPECT_EQ(parse_sweep_op("30000"), SweepOp(30000));
  EXPECT_TRUE(parse_sweep_op("saturated").is_saturated());
  EXPECT_THROW(parse_sweep_op("x"), ValidationError);
  EXPECT_THROW(parse_sweep_op("-1"), ValidationError);
  EXPECT_EQ(SweepOp::saturated().label(), "saturated");
}

TEST(SweepTsv, Formatting) {
  const std::vector<SweepPoint> one = {{SweepOp(30000), 27700000, 28000000, 27700000.0 / 28000000}};
  EXPECT_EQ(emit_sweep_tsv(one), "op\tsrc_tokens\ttgt_tokens\tratio\n30000\t27700000\t28000000\t0.9893\n");
  EXPECT_EQ(emit_sweep_tsv({}), "op\tsrc_tokens\ttgt_tokens\tratio\n");
  const std::vector<SweepPoint> sat = {{SweepOp::saturated(), 2, 1, 2.0}};
  EXPECT_EQ(emit_sweep_tsv(sat), "op\tsrc_tokens\ttgt_tokens\tratio\nsaturated\t2\t1\t2.0000\n");
}

TEST(Sweep, MonotoneWithCharacterEndpoint) {
  testing::Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const Corpus c = testing::random_corpus(rng, {});
    if (c.token_count() == 0) continue;
    const auto table = bpe_train(c, kSaturate);
    std::vector<SweepOp> ops;
    for (std::size_t k = 0; k <= table.op(); ++k) ops.emplace_back(k);
    const auto points = op_sweep(c, c, table, ops);
    std::uint64_t chars = 0;
    for (const auto& [w, n] : c.type_counts()) chars += n * utf8::length(w);
    EXPECT_EQ(points.front().src_tokens, chars);
    for (std::size_t i = 1; i < points.size(); ++i)
      EXPECT_LE(points[i].src_tokens, points[i - 1].src_tokens);
    EXPECT_GE(points.back().src_tokens, c.token_count());
  }
}

TEST(Oov, Examples) {
  const BpeVocab vocab({"abc", "abd"});
  auto r = oov_report(vocab, Corpus({Sentence{"abc", "xyz", "xyz"}}));
  EXPECT_EQ(r.oov_types, 1u);
  EXPECT_EQ(r.oov_tokens, 2u);
  ASSERT_EQ(r.examples.size(), 1u);
  EXPECT_EQ(r.examples[0].first, "xyz");

  r = oov_report(vocab, Corpus({Sentence{"abd", "abc"}}));
  EXPECT_EQ(r.oov_types, 0u);
  EXPECT_EQ(r.oov_tokens, 0u);
  r = oov_report(vocab, Corpus{});
  EXPECT_EQ(r.oov_tokens, 0u);
}

TEST(Oov, ExamplesOrderedByFrequencyThenWord) {
  const BpeVocab vocab;
  const auto r = oov_report(vocab, Corpus({Sentence{"b", "a", "c", "c", "d", "d"}}), 3);
  ASSERT_EQ(r.examples.size(), 3u);
  EXPECT_EQ(r.examples[0].first, "c");
  EXPECT_EQ(r.examples[1].first, "d");
  EXPECT_EQ(r.examples[2].first, "a");
}

SegmentedTypeMap types_of(std::initializer_list<std::pair<std::string, std::vector<std::string>>> items) {
  SegmentedTypeMap out;
  for (const auto& [w, units] : items) out.emplace(w, TypeSegmentation{SegmentedWord(units), 1});
  return out;
}

TEST(Consistency, DrivenDriving) {
  const auto pairs = consistency_report(types_of({{"driven", {"driv", "en"}}, {"driving", {"drivi", "ng"}}}), 4);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].word_a, "driven");
  EXPECT_EQ(pairs[0].lcp_len, 4u);
  EXPECT_EQ(pairs[0].boundaries_a, std::vector<std::size_t>{4});
  EXPECT_TRUE(pairs[0].boundaries_b.empty());
  EXPECT_EQ(pairs[0].seg_b, "drivi|ng");
  EXPECT_EQ(pairs[0].combined_freq, 2u);
}

TEST(Consistency, BoundaryAtPrefixEdgeCounts) {
  const auto pairs = consistency_report(types_of({{"abc", {"abc"}}, {"abd", {"ab", "d"}}}), 2);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_TRUE(pairs[0].boundaries_a.empty());
  EXPECT_EQ(pairs[0].boundaries_b, std::vector<std::size_t>{2});
}

TEST(Consistency, AgreeingOrShortPrefixesAreSkipped) {
  EXPECT_TRUE(consistency_report(types_of({{"abcx", {"ab", "cx"}}, {"abcy", {"ab", "cy"}}}), 3).empty());
  EXPECT_TRUE(consistency_report(types_of({{"abx", {"a", "bx"}}, {"aby", {"aby"}}}), 4).empty());
  EXPECT_THROW(consistency_report({}, 1), ValidationError);
}

TEST(Consistency, MatchesAllPairsOracle) {
  testing::Rng rng(1234);
  for (int trial = 0; trial < 30; ++trial) {
    testing::RandomCorpusSpec spec;
    spec.types = 200;
    spec.sentences = 300;
    spec.alphabet = trial % 2 ? testing::latin_alphabet(3) : testing::arabic_alphabet(3);
    const Corpus c = testing::random_corpus(rng, spec);
    const auto table = bpe_train(c, 5 + trial * 3);
    const auto types = segment_types(c, table, table.op());
    for (std::size_t min_lcp : {2, 3, 4}) {
      EXPECT_EQ(consistency_report(types, min_lcp), testing::brute_force_consistency(types, min_lcp));
      const auto top = consistency_report(types, min_lcp, 5);
      const auto all = testing::brute_force_consistency(types, min_lcp);
      EXPECT_EQ(top, std::vector<DivergencePair>(all.begin(), all.begin() + std::min<std::size_t>(5, all.size())));
    }
  }
}

TEST(Consistency, Tsv) {
  const auto pairs = consistency_report(types_of({{"driven", {"driv", "en"}}, {"driving", {"drivi", "ng"}}}), 4);
  std::ostringstream out;
  write_consistency_tsv(out, pairs);
  EXPECT_EQ(out.str(),
            "word_a\tword_b\tlcp_len\tseg_a\tseg_b\tcombined_freq\n"
            "driven\tdriving\t4\tdriv|en\tdrivi|ng\t2\n");
}

}  // namespace
}  // namespace subseg
