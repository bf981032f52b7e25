#include <gtest/gtest.h>

#include "prosyn/feature_cache.hpp"
#include "prosyn/synth.hpp"
#include "prosyn/text_io.hpp"
#include "temp_dir.hpp"

using namespace prosyn;
using prosyn::testing::TempDir;

namespace {

struct Fixture {
  TempDir tmp;
  SynthConfig cfg;
  Corpus corpus;
  FeatureTable table;

  Fixture() {
    cfg.n_speakers = 2;
    cfg.recordings_per_speaker = 1;
    cfg.sentences_per_recording = 4;
    write_synth(generate(cfg), cfg, tmp / "c");
    corpus = load_corpus(tmp / "c");
    table = extract_features(corpus, compute_tracks(corpus, {}), default_duration_model()).table;
  }

  FeatureCacheKey key(const ExtractConfig& c = {}) const {
    return {corpus_content_hash(corpus), extraction_config_hash(c, default_duration_model())};
  }
};

}  // namespace

TEST(FeatureCache, RoundTripIsExact) {
  Fixture f;
  save_feature_cache(f.table, f.key(), f.tmp / "features.tsv");
  const auto back = load_feature_cache(f.tmp / "features.tsv", f.key());
  ASSERT_TRUE(back.has_value());
  ASSERT_EQ(back->rows.size(), f.table.rows.size());
  EXPECT_EQ(render_feature_cache(*back, f.key()), render_feature_cache(f.table, f.key()));
  EXPECT_TRUE(back->find(f.table.rows[3].recording_id, f.table.rows[3].sentence_id,
                         f.table.rows[3].token_index));
}

TEST(FeatureCache, InvalidatedByContentSettingsOrVersion) {
  Fixture f;
  const auto path = f.tmp / "features.tsv";
  const FeatureCacheKey original = f.key();
  save_feature_cache(f.table, original, path);

  ExtractConfig other;
  other.outcome.min_pause_ms = 30;
  EXPECT_NE(f.key(other), original);
  EXPECT_FALSE(load_feature_cache(path, f.key(other)).has_value());

  const auto track = f.corpus.recordings[0].source_dir / kTrackFile;
  io::write_file(track, io::read_file(track) + "\n");
  const FeatureCacheKey changed = f.key();
  EXPECT_NE(changed.corpus_hash, original.corpus_hash);
  EXPECT_EQ(changed.config_hash, original.config_hash);
  EXPECT_FALSE(load_feature_cache(path, changed).has_value());

  save_feature_cache(f.table, changed, path);
  ASSERT_TRUE(load_feature_cache(path, changed).has_value());
  std::string text = io::read_file(path);
  text.replace(text.find(kFeatureCacheVersion), std::string(kFeatureCacheVersion).size(),
               "prosyn-features-v0");
  io::write_file(path, text);
  EXPECT_FALSE(load_feature_cache(path, changed).has_value());
  EXPECT_FALSE(load_feature_cache(f.tmp / "missing.tsv", changed).has_value());
}
