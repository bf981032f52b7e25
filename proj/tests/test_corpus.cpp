#include <gtest/gtest.h>

#include <random>

#include "prosyn/corpus.hpp"
#include "prosyn/error.hpp"
#include "prosyn/synth.hpp"
#include "prosyn/text_io.hpp"
#include "temp_dir.hpp"

using namespace prosyn;
using prosyn::testing::TempDir;

namespace {

void write_recording(const std::filesystem::path& dir, const std::string& id,
                     const std::string& tokens) {
  std::filesystem::create_directories(dir);
  io::write_file(dir / kMetaFile, "recording_id=" + id + "\nspeaker_id=spk1\n");
  io::write_file(dir / kTokensFile,
                 "# sentence_id\tindex\tsurface\tpos\thead\tdeprel\tstart_ms\tend_ms\n" + tokens);
}

const char* kThreeTokens =
    "s1\t1\tder\tART\t2\tdet\t0\t150\n"
    "s1\t2\tHund\tNN\t3\tsubj\t150\t420\n"
    "s1\t3\tbellt\tVVFIN\t0\troot\t420\t800\n";

Sentence sentence(const std::string& id, bool aligned) {
  Sentence s{id, {}, aligned};
  for (int i = 1; i <= 3; ++i) {
    Token t{i, "w" + std::to_string(i), "NN", i == 1 ? 0 : 1, i == 1 ? "root" : "subj",
            std::nullopt, std::nullopt};
    if (aligned || i != 2) {
      t.start_ms = 100.0 * i;
      t.end_ms = 100.0 * i + 90;
    }
    s.tokens.push_back(t);
  }
  return s;
}

}  // namespace

TEST(LoadCorpus, SmallestWellFormedRecording) {
  TempDir tmp;
  write_recording(tmp / "r1", "r1", kThreeTokens);
  const Corpus c = load_corpus(tmp.path());
  ASSERT_EQ(c.recordings.size(), 1u);
  ASSERT_EQ(c.recordings[0].sentences.size(), 1u);
  const Sentence& s = c.recordings[0].sentences[0];
  EXPECT_TRUE(s.fully_aligned);
  EXPECT_EQ(s.tokens.size(), 3u);
  EXPECT_EQ(s.token(2).surface, "Hund");
  EXPECT_EQ(s.token(2).head, 3);
  EXPECT_EQ(c.recordings[0].speaker_id, "spk1");
}

TEST(LoadCorpus, MissingTimingClearsAlignmentFlagButKeepsSentence) {
  TempDir tmp;
  write_recording(tmp / "r1", "r1",
                  "s1\t1\tder\tART\t2\tdet\t0\t150\n"
                  "s1\t2\tHund\tNN\t3\tsubj\t150\t\n"
                  "s1\t3\tbellt\tVVFIN\t0\troot\t420\t800\n");
  const Corpus c = load_corpus(tmp.path());
  ASSERT_EQ(c.recordings[0].sentences.size(), 1u);
  EXPECT_FALSE(c.recordings[0].sentences[0].fully_aligned);
  EXPECT_FALSE(c.recordings[0].sentences[0].token(2).end_ms.has_value());
}

TEST(LoadCorpus, SelfLoopNamesTheSentence) {
  TempDir tmp;
  write_recording(tmp / "r1", "r1",
                  "s7\t1\tder\tART\t2\tdet\t0\t150\n"
                  "s7\t2\tHund\tNN\t2\tsubj\t150\t420\n"
                  "s7\t3\tbellt\tVVFIN\t0\troot\t420\t800\n");
  try {
    load_corpus(tmp.path());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("s7"), std::string::npos) << e.what();
  }
}

TEST(LoadCorpus, MalformedRowNamesFileAndLine) {
  TempDir tmp;
  write_recording(tmp / "r1", "r1", "s1\t1\tder\tART\t0\troot\t0\n");
  try {
    load_corpus(tmp.path());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("tokens.tsv:2"), std::string::npos) << msg;
  }
}

TEST(LoadCorpus, DuplicateRecordingIdIsAnError) {
  TempDir tmp;
  write_recording(tmp / "a", "same", kThreeTokens);
  write_recording(tmp / "b", "same", kThreeTokens);
  EXPECT_THROW(load_corpus(tmp.path()), Error);
}

TEST(ValidateSentence, StructuralErrors) {
  Sentence two_roots = sentence("s", true);
  two_roots.tokens[1].head = 0;
  EXPECT_THROW(validate_sentence(two_roots), Error);

  Sentence cycle = sentence("s", true);
  cycle.tokens[0].head = 0;
  cycle.tokens[1].head = 3;
  cycle.tokens[2].head = 2;
  EXPECT_THROW(validate_sentence(cycle), Error);

  Sentence outside = sentence("s", true);
  outside.tokens[2].head = 9;
  EXPECT_THROW(validate_sentence(outside), Error);

  Sentence backwards = sentence("s", true);
  backwards.tokens[0].end_ms = *backwards.tokens[0].start_ms;
  EXPECT_THROW(validate_sentence(backwards), Error);

  EXPECT_NO_THROW(validate_sentence(sentence("s", true)));
  EXPECT_NO_THROW(validate_sentence(sentence("s", false)));
}

TEST(FilterFullyAligned, KeepsOnlyAlignedSentences) {
  Corpus c;
  c.recordings.push_back(Recording{"r1", "spk", {sentence("a", true), sentence("b", false),
                                                 sentence("c", true)}, {}, {}, {}});
  const Corpus f = filter_fully_aligned(c);
  ASSERT_EQ(f.recordings.size(), 1u);
  EXPECT_EQ(f.sentence_count(), 2u);
  EXPECT_EQ(filter_fully_aligned(f), f);
}

TEST(FilterFullyAligned, NoAlignedSentencesGivesEmptyCorpus) {
  Corpus c;
  c.recordings.push_back(Recording{"r1", "spk", {sentence("a", false)}, {}, {}, {}});
  EXPECT_TRUE(filter_fully_aligned(c).recordings.empty());
}

TEST(FilterFullyAligned, MatchesGeneratorGroundTruth) {
  SynthConfig cfg;
  cfg.seed = 17;
  cfg.n_speakers = 5;
  cfg.recordings_per_speaker = 1;
  cfg.sentences_per_recording = 20;
  cfg.alignment_dropout = 0.3;
  const SynthCorpus sc = generate(cfg);
  ASSERT_EQ(sc.corpus.sentence_count(), 100u);
  const std::size_t aligned = filter_fully_aligned(sc.corpus).sentence_count();
  EXPECT_EQ(aligned, sc.manifest.aligned_sentence_count());
  EXPECT_LT(aligned, 100u);
  EXPECT_GT(aligned, 40u);
}

TEST(CorpusRoundTrip, SaveThenLoadIsIdentity) {
  SynthConfig cfg;
  cfg.n_speakers = 3;
  cfg.recordings_per_speaker = 2;
  cfg.sentences_per_recording = 4;
  cfg.alignment_dropout = 0.25;
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    cfg.seed = seed;
    const SynthCorpus sc = generate(cfg);
    TempDir tmp;
    save_corpus(sc.corpus, tmp.path());
    EXPECT_EQ(load_corpus(tmp.path()), sc.corpus) << "seed " << seed;
  }
}
