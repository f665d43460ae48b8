#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "subseg/error.h"
#include "subseg/pospipe.h"
#include "synth.h"

namespace subseg {
namespace {

using Tags = std::vector<std::string>;

TEST(ParseTagged, Example) {
  const auto s = parse_tagged_line("klm|V >SdqA}k|NOUN+PRON", 1);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].word, ">SdqA}k");
  EXPECT_EQ(s[1].tags, (Tags{"NOUN", "PRON"}));
  EXPECT_TRUE(parse_tagged_line("", 1).empty());
}

TEST(ParseTagged, Escapes) {
  const auto s = parse_tagged_line("a\\pb\\+c\\\\|X", 1);
  EXPECT_EQ(s[0].word, "a|b+c\\");
}

TEST(ParseTagged, Errors) {
  for (const char* bad : {"w|", "w", "w|A|B", "|A", "w|A+", "w\\q|A"}) {
    try {
      parse_tagged_line(std::string("ok|A ") + bad, 3);
      FAIL() << bad;
    } catch (const FormatError& e) {
      EXPECT_EQ(e.line(), 3u);
      EXPECT_NE(std::string(e.what()).find("token 2"), std::string::npos) << e.what();
    }
  }
}

TEST(LoadTagged, CollectsTagSet) {
  std::istringstream in("a|N b|V+P\n\nc|N\n");
  const auto corpus = load_tagged(in);
  EXPECT_EQ(corpus.sentences.size(), 3u);
  EXPECT_EQ(corpus.tagset, (std::set<std::string>{"N", "P", "V"}));
}

TEST(Instances, ContextWindow) {
  const auto s = parse_tagged_line("a|A b|B c|C1+C2", 1);
  const auto inst = sentence_instances(s, WordSegmenter::unseg());
  ASSERT_EQ(inst.size(), 3u);
  EXPECT_TRUE(inst[0].context[0].is_bos());
  EXPECT_TRUE(inst[0].context[1].is_bos());
  EXPECT_TRUE(inst[1].context[0].is_bos());
  EXPECT_EQ(inst[1].context[1].word->surface(), "a");
  EXPECT_EQ(inst[2].context[0].word->surface(), "a");
  EXPECT_EQ(inst[2].context[1].tags, Tags{"B"});
  EXPECT_EQ(inst[2].target, (Tags{"C1", "C2"}));
  for (const auto& i : inst) EXPECT_EQ(i.focus.size(), 1u);
}

TEST(Instances, Rendering) {
  const auto table = MergeTable::from_pairs({{"b", "$"}, {"b$", "r"}, {"h", "m"}});
  const auto s = parse_tagged_line("klm|V >SdqA}k|NOUN+PRON b$rhm|NOUN+PRON", 1);
  const auto inst = sentence_instances(s, WordSegmenter::bpe(table, table.op()));
  const SegmentedLineCodec codec;
  EXPECT_EQ(format_source_line(inst[2], codec),
            "k@@ l@@ m <T:V> >@@ S@@ d@@ q@@ A@@ }@@ k <T:NOUN> <T:PRON> b$r@@ hm");
  EXPECT_EQ(format_target_line(inst[2]), "NOUN PRON");
  EXPECT_EQ(format_source_line(inst[0], codec), "<BOS> <BOS> k@@ l@@ m");
}

TEST(Instances, CharScheme) {
  const auto s = parse_tagged_line("ab|X", 1);
  const auto inst = sentence_instances(s, WordSegmenter::chars());
  EXPECT_EQ(inst[0].focus.units(), (std::vector<std::string>{"a", "b"}));
}

TEST(Instances, ImportedScheme) {
  std::istringstream seg("w@@ ktb\n");
  const auto seg_corpus = SegmentedImporter::import(seg, SegmentedLineCodec{});
  const auto segmenter = WordSegmenter::imported(seg_corpus);
  EXPECT_EQ(segmenter.scheme().kind(), SegmentationScheme::Kind::kMorphImported);
  EXPECT_EQ(segmenter.segment("wktb").units(), (std::vector<std::string>{"w", "ktb"}));
  EXPECT_THROW(segmenter.segment("zzz"), ValidationError);
}

TEST(Emit, EmptyInstancesGiveEmptyFiles) {
  std::ostringstream src, tgt;
  emit_seq2seq({}, src, tgt);
  EXPECT_EQ(src.str(), "");
  EXPECT_EQ(tgt.str(), "");
}

TEST(Emit, TargetsIndependentOfScheme) {
  testing::Rng rng(6);
  const auto sentences = testing::random_tagged(rng, 200, 80);
  Corpus words_only = [&] {
    std::vector<Sentence> ss;
    for (const auto& s : sentences) {
      Sentence w;
      for (const auto& t : s) w.push_back(t.word);
      ss.push_back(w);
    }
    return Corpus(ss);
  }();
  const auto table = bpe_train(words_only, 200);
  std::vector<std::string> targets;
  std::size_t tokens = words_only.token_count();
  for (const auto& seg : {WordSegmenter::unseg(), WordSegmenter::chars(),
                          WordSegmenter::bpe(table, table.op())}) {
    const auto inst = gen_instances(sentences, seg);
    EXPECT_EQ(inst.size(), tokens);
    std::ostringstream src, tgt;
    emit_seq2seq(inst, src, tgt);
    targets.push_back(tgt.str());
  }
  EXPECT_EQ(targets[0], targets[1]);
  EXPECT_EQ(targets[0], targets[2]);
}

}  // namespace
}  // namespace subseg
