#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "cli.h"
#include "cli_harness.h"
#include "synth.h"

namespace subseg {
namespace {

using testing::read_file;
using testing::run_cli;

class CliTest : public ::testing::Test {
 protected:
  testing::TempDir dir_;
  std::string corpus_ = dir_.write("c.txt", "abc abc abc abd abd\n");
};

TEST_F(CliTest, TrainBpeGolden) {
  const auto m = dir_.file("m.bpe");
  const auto r = run_cli({"train-bpe", "--input", corpus_, "--op", "2", "--output", m});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = read_file(m);
  EXPECT_NE(text.find("\na b\nab c\n"), std::string::npos);
  EXPECT_EQ(text.rfind("#subseg merges v1\n#trained_on fnv1a64:", 0), 0u);
  EXPECT_TRUE(std::filesystem::exists(m + ".manifest"));
}

TEST_F(CliTest, ApplyThenDesegmentIsIdentity) {
  const auto m = dir_.file("m.bpe");
  ASSERT_EQ(run_cli({"train-bpe", "--input", corpus_, "--output", m}).code, 0);
  const std::string input = "abc  abd\r\n\nxyz ab\n";
  for (const char* k : {"0", "1", "2"}) {
    const auto seg = run_cli({"apply-bpe", "--merges", m, "--k", k}, input);
    ASSERT_EQ(seg.code, 0) << seg.err;
    const auto back = run_cli({"desegment"}, seg.out);
    ASSERT_EQ(back.code, 0) << back.err;
    EXPECT_EQ(back.out, "abc abd\n\nxyz ab\n");
  }
  EXPECT_EQ(run_cli({"apply-bpe", "--merges", m, "--k", "2"}, "abc abd\n").out, "abc ab@@ d\n");
}

TEST_F(CliTest, ConstrainedModeReportsUnkCount) {
  const auto m = dir_.file("m.bpe");
  ASSERT_EQ(run_cli({"train-bpe", "--input", corpus_, "--output", m}).code, 0);
  const auto r = run_cli({"apply-bpe", "--merges", m, "--mode", "constrained", "--vocab", corpus_},
                         "abc xyz q\n");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "abc <unk> <unk>\n");
  EXPECT_NE(r.err.find("unk_count\t2"), std::string::npos);
  EXPECT_EQ(run_cli({"desegment"}, r.out).code, cli::kExitData);
}

TEST_F(CliTest, UsageErrors) {
  const auto m = dir_.file("m.bpe");
  ASSERT_EQ(run_cli({"train-bpe", "--input", corpus_, "--output", m}).code, 0);
  EXPECT_EQ(run_cli({"train-bpe", "--op", "3", "--saturate"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"apply-bpe", "--merges", m, "--mode", "constrained"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"apply-bpe", "--merges", m, "--vocab", corpus_}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"apply-bpe"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"nonsense"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"stats", "--input", dir_.file("missing.txt")}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"apply-bpe", "--merges", m, "--k", "x"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
}

TEST_F(CliTest, DataErrors) {
  const auto m = dir_.file("m.bpe");
  ASSERT_EQ(run_cli({"train-bpe", "--input", corpus_, "--output", m}).code, 0);
  auto r = run_cli({"apply-bpe", "--merges", m, "--k", "9"}, "a\n");
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("deeper"), std::string::npos);
  r = run_cli({"stats"}, "ok\nbad\xFF\n");
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("byte offset 6"), std::string::npos);
  r = run_cli({"apply-bpe", "--merges", m}, "fine\nx y@@\n");
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_NE(r.err.find("y@@"), std::string::npos);
  r = run_cli({"desegment"}, "ok\nab@@\n");
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  r = run_cli({"train-bpe"}, "");
  EXPECT_EQ(r.code, cli::kExitData);
  const auto bad = dir_.write("bad.bpe", "#subseg merges v1\nab c\n");
  EXPECT_EQ(run_cli({"apply-bpe", "--merges", bad}, "a\n").code, cli::kExitData);
}

TEST_F(CliTest, SweepGolden) {
  const auto m = dir_.file("m.bpe");
  ASSERT_EQ(run_cli({"train-bpe", "--input", corpus_, "--op", "2", "--output", m}).code, 0);
  const auto tgt = dir_.write("t.txt", "a b c d e\n");
  const auto r = run_cli({"sweep", "--src", corpus_, "--tgt", tgt, "--merges", m, "--ops", "0,1,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "op\tsrc_tokens\ttgt_tokens\tratio\n0\t15\t5\t3.0000\n1\t10\t5\t2.0000\n2\t7\t5\t1.4000\n");
  EXPECT_EQ(run_cli({"sweep", "--src", corpus_, "--tgt", tgt, "--merges", m}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"sweep", "--src", corpus_, "--tgt", tgt, "--merges", m, "--ops", "3"}).code,
            cli::kExitData);
}

TEST_F(CliTest, SegmentCharsRoundTrip) {
  const auto r = run_cli({"segment-chars", "--max-units", "4"}, "ab cd\nx\n\n");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "a b ▁ c d\nx\n\n");
  EXPECT_NE(r.err.find("line 1"), std::string::npos);
  EXPECT_EQ(run_cli({"desegment", "--scheme", "char"}, r.out).out, "ab cd\nx\n\n");
  EXPECT_EQ(run_cli({"desegment", "--scheme", "char"}, "▁ a\n").code, cli::kExitData);
  EXPECT_EQ(run_cli({"segment-chars"}, "a▁b\n").code, cli::kExitData);
}

TEST_F(CliTest, NormalizeAndStats) {
  auto r = run_cli({"normalize"}, "أَحمد، قال.\n");
  EXPECT_EQ(r.out, "احمد ، قال .\n");
  r = run_cli({"normalize", "--no-normalize", "--no-punct"}, "أَحمد، قال.\n");
  EXPECT_EQ(r.out, "أَحمد، قال.\n");
  const auto rules = dir_.write("rules.tsv", "U+0061\tU+0062\n");
  EXPECT_EQ(run_cli({"normalize", "--rules", rules}, "aa\n").out, "bb\n");
  r = run_cli({"stats"}, "ab cd\nab\n");
  EXPECT_EQ(r.out, "sentences\t2\ntokens\t3\ntypes\t2\nchars\t6\nmean_word_len_chars\t2.0000\n");
}

TEST_F(CliTest, PipelineIsIdentityOnNeutralText) {
  const std::string text = "hello world\nfoo  bar baz\n";
  const auto n = run_cli({"normalize"}, text);
  const auto m = dir_.file("m.bpe");
  ASSERT_EQ(run_cli({"train-bpe", "--output", m}, n.out).code, 0);
  const auto seg = run_cli({"apply-bpe", "--merges", m}, n.out);
  EXPECT_EQ(run_cli({"desegment"}, seg.out).out, "hello world\nfoo bar baz\n");
  const auto chars = run_cli({"segment-chars"}, n.out);
  EXPECT_EQ(run_cli({"desegment", "--scheme", "char"}, chars.out).out, "hello world\nfoo bar baz\n");
}

TEST_F(CliTest, OovAndConsistency) {
  const auto test = dir_.write("test.txt", "abc xyz xyz\n");
  auto r = run_cli({"oov", "--train", corpus_, "--test", test});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "oov_types\t1\noov_tokens\t2\ntest_types\t2\ntest_tokens\t3\nexample\txyz\t2\n");
  const auto m = dir_.file("m.bpe");
  const auto drive = dir_.write("d.txt", "driving driving driving driven driven ng ng en en\n");
  ASSERT_EQ(run_cli({"train-bpe", "--input", drive, "--op", "6", "--output", m}).code, 0);
  r = run_cli({"consistency", "--input", drive, "--merges", m});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "word_a\tword_b\tlcp_len\tseg_a\tseg_b\tcombined_freq\n"
            "driven\tdriving\t4\tdriv|en\tdrivi|ng\t5\n");
  EXPECT_EQ(run_cli({"consistency", "--input", drive, "--merges", m, "--min-lcp", "1"}).code,
            cli::kExitUsage);
}

TEST_F(CliTest, PosPrep) {
  const auto tagged = dir_.write("tagged.txt", "klm|V >SdqA}k|NOUN+PRON b$rhm|NOUN+PRON\n\nx|N\n");
  const auto prefix = dir_.file("pos");
  auto r = run_cli({"pos-prep", "--input", tagged, "--output-prefix", prefix});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(prefix + ".tgt"), "V\nNOUN PRON\nNOUN PRON\nN\n");
  EXPECT_EQ(read_file(prefix + ".src"),
            "<BOS> <BOS> klm\n<BOS> klm <T:V> >SdqA}k\nklm <T:V> >SdqA}k <T:NOUN> <T:PRON> b$rhm\n"
            "<BOS> <BOS> x\n");
  EXPECT_TRUE(std::filesystem::exists(prefix + ".manifest"));

  const auto seg = dir_.write("seg.txt", "k@@ lm >SdqA}k b$r@@ hm\n\nx\n");
  r = run_cli({"pos-prep", "--input", tagged, "--scheme", "morph", "--segmented", seg,
               "--output-prefix", prefix});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(prefix + ".tgt"), "V\nNOUN PRON\nNOUN PRON\nN\n");
  EXPECT_NE(read_file(prefix + ".src").find("b$r@@ hm\n"), std::string::npos);

  EXPECT_EQ(run_cli({"pos-prep", "--input", tagged, "--scheme", "bpe", "--output-prefix", prefix}).code,
            cli::kExitUsage);
  const auto bad = dir_.write("bad.txt", "w|\n");
  EXPECT_EQ(run_cli({"pos-prep", "--input", bad, "--output-prefix", prefix}).code, cli::kExitData);
}

TEST_F(CliTest, ManifestReplayReproducesOutput) {
  const auto m = dir_.file("m.bpe");
  ASSERT_EQ(run_cli({"train-bpe", "--input", corpus_, "--saturate", "--output", m}).code, 0);
  const std::string manifest = read_file(m + ".manifest");
  EXPECT_EQ(manifest.rfind("command=train-bpe\n", 0), 0u);
  EXPECT_NE(manifest.find("saturate=true\n"), std::string::npos);
  const std::string first = read_file(m);
  std::filesystem::remove(m);
  ASSERT_EQ(run_cli({"--replay", m + ".manifest"}).code, 0);
  EXPECT_EQ(read_file(m), first);

  const auto out = dir_.file("seg.txt");
  ASSERT_EQ(run_cli({"apply-bpe", "--input", corpus_, "--merges", m, "--k", "1", "--output", out}).code, 0);
  EXPECT_NE(read_file(out + ".manifest").find("k=1\n"), std::string::npos);
  const std::string seg = read_file(out);
  std::filesystem::remove(out);
  ASSERT_EQ(run_cli({"--replay", out + ".manifest"}).code, 0);
  EXPECT_EQ(read_file(out), seg);
}

TEST_F(CliTest, OutputOrderIndependentOfThreads) {
  testing::Rng rng(3);
  testing::RandomCorpusSpec spec;
  spec.sentences = 10000;
  const auto text = testing::corpus_text(testing::random_corpus(rng, spec));
  const auto input = dir_.write("big.txt", text);
  const auto m = dir_.file("m.bpe");
  ASSERT_EQ(run_cli({"train-bpe", "--input", input, "--output", m}).code, 0);
  setenv("SUBSEG_THREADS", "1", 1);
  const auto one = run_cli({"apply-bpe", "--input", input, "--merges", m});
  setenv("SUBSEG_THREADS", "4", 1);
  const auto four = run_cli({"apply-bpe", "--input", input, "--merges", m});
  unsetenv("SUBSEG_THREADS");
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(run_cli({"desegment"}, four.out).out, text);
}

}  // namespace
}  // namespace subseg
