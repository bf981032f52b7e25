#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "prosyn/error.hpp"
#include "prosyn/prosody.hpp"
#include "prosyn/synth.hpp"

using namespace prosyn;

namespace {

FrameTrack constant_track(std::size_t n, std::optional<double> hz, double db = -20.0) {
  FrameTrack t;
  t.frame_shift_ms = 10.0;
  t.frames.assign(n, Frame{hz, db});
  return t;
}

Token timed(int index, double start, double end) {
  return Token{index, "w", "NN", 0, "root", start, end};
}

Corpus one_recording(const std::string& rec, const std::string& speaker, double end_ms) {
  Corpus c;
  Sentence s{"s1", {timed(1, 0.0, end_ms)}, true};
  c.recordings.push_back(Recording{rec, speaker, {s}, {}, {}, {}});
  return c;
}

SynthCorpus small_synth(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.n_speakers = 3;
  cfg.recordings_per_speaker = 2;
  cfg.sentences_per_recording = 6;
  return generate(cfg);
}

// Every word's outcomes for a corpus, in corpus order.
std::vector<ProsodicOutcomes> all_outcomes(const Corpus& c,
                                           const std::map<std::string, FrameTrack>& tracks,
                                           BaselineScope scope) {
  const BaselineResult base = speaker_baseline(c, tracks, scope);
  std::vector<ProsodicOutcomes> out;
  for (const auto& r : c.recordings) {
    const SpeakerPitchBaseline* b = base.find(r.speaker_id);
    for (const auto& s : r.sentences)
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const Token* next = i + 1 < s.tokens.size() ? &s.tokens[i + 1] : nullptr;
        out.push_back(word_outcomes(s.tokens[i], next, tracks.at(r.recording_id), *b));
      }
  }
  return out;
}

}  // namespace

TEST(Semitones, ReferenceIsOneHundredHz) {
  EXPECT_DOUBLE_EQ(hz_to_semitones(100.0), 0.0);
  EXPECT_DOUBLE_EQ(hz_to_semitones(200.0), 12.0);
  EXPECT_NEAR(hz_to_semitones(50.0), -12.0, 1e-12);
}

TEST(SpeakerBaseline, ConstantTwoHundredHz) {
  const Corpus c = one_recording("r", "spk", 100);
  const auto res = speaker_baseline(c, {{"r", constant_track(10, 200.0)}});
  ASSERT_EQ(res.baselines.size(), 1u);
  EXPECT_DOUBLE_EQ(res.baselines[0].mean_semitones, 12.0);
  EXPECT_EQ(res.baselines[0].n_voiced_frames, 10u);
}

TEST(SpeakerBaseline, LogDomainMean) {
  Corpus c = one_recording("r", "spk", 100);
  FrameTrack t = constant_track(10, 100.0);
  for (std::size_t i = 0; i < 10; i += 2) t.frames[i].f0_hz = 400.0;
  const auto res = speaker_baseline(c, {{"r", t}});
  EXPECT_NEAR(res.baselines[0].mean_semitones, 12.0, 1e-12);
}

TEST(SpeakerBaseline, SpeakerWithoutVoicingIsOmittedWithWarning) {
  Corpus c = one_recording("r1", "a", 100);
  c.recordings.push_back(one_recording("r2", "b", 100).recordings[0]);
  const auto res =
      speaker_baseline(c, {{"r1", constant_track(10, 150.0)}, {"r2", constant_track(10, {})}});
  ASSERT_EQ(res.baselines.size(), 1u);
  EXPECT_EQ(res.baselines[0].speaker_id, "a");
  EXPECT_EQ(res.find("b"), nullptr);
  ASSERT_EQ(res.warnings.size(), 1u);
  EXPECT_NE(res.warnings[0].find("'b'"), std::string::npos);
}

TEST(SpeakerBaseline, MatchesBruteForceOverRandomFrames) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> hz(70, 350), coin(0, 1);
  Corpus c;
  std::map<std::string, FrameTrack> tracks;
  std::map<std::string, std::vector<double>> voiced;  // speaker -> frame Hz
  for (int r = 0; r < 6; ++r) {
    const std::string rec = "r" + std::to_string(r), spk = "s" + std::to_string(r % 3);
    c.recordings.push_back(one_recording(rec, spk, 100).recordings[0]);
    FrameTrack t = constant_track(40 + r, {});
    for (auto& f : t.frames)
      if (coin(rng) < 0.6) {
        f.f0_hz = hz(rng);
        voiced[spk].push_back(*f.f0_hz);
      }
    tracks[rec] = t;
  }
  const auto res = speaker_baseline(c, tracks);
  ASSERT_EQ(res.baselines.size(), 3u);
  for (const auto& b : res.baselines) {
    double sum = 0;
    for (double v : voiced[b.speaker_id]) sum += 12.0 * std::log(v / 100.0) / std::log(2.0);
    EXPECT_NEAR(b.mean_semitones, sum / voiced[b.speaker_id].size(), 1e-12);
    EXPECT_EQ(b.n_voiced_frames, voiced[b.speaker_id].size());
  }
}

TEST(WordOutcomes, PitchAtSpeakerMeanIsZero) {
  const SpeakerPitchBaseline b{"spk", hz_to_semitones(180.0), 1};
  const auto o = word_outcomes(timed(1, 100, 300), nullptr, constant_track(50, 180.0), b);
  ASSERT_TRUE(o.mean_pitch_st.has_value());
  EXPECT_NEAR(*o.mean_pitch_st, 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(o.duration_ms, 200.0);
  EXPECT_DOUBLE_EQ(o.pause_after_ms, 0.0);
}

TEST(WordOutcomes, OctaveAboveMeanIsTwelveSemitones) {
  const SpeakerPitchBaseline b{"spk", hz_to_semitones(110.0), 1};
  const auto o = word_outcomes(timed(1, 100, 300), nullptr, constant_track(50, 220.0), b);
  EXPECT_NEAR(*o.mean_pitch_st, 12.0, 1e-12);
  EXPECT_NEAR(*o.mean_pitch_st * 100.0, 1200.0, 1e-9);
}

TEST(WordOutcomes, PauseIsTheAlignmentGap) {
  const SpeakerPitchBaseline b{"spk", 0.0, 1};
  const FrameTrack t = constant_track(300, 100.0);
  const Token next = timed(2, 1620, 1800);
  EXPECT_DOUBLE_EQ(word_outcomes(timed(1, 1400, 1500), &next, t, b).pause_after_ms, 120.0);
  EXPECT_DOUBLE_EQ(word_outcomes(timed(1, 1400, 1620), &next, t, b).pause_after_ms, 0.0);
  OutcomeConfig cfg;
  cfg.min_pause_ms = 150;
  EXPECT_DOUBLE_EQ(word_outcomes(timed(1, 1400, 1500), &next, t, b, cfg).pause_after_ms, 0.0);
}

TEST(WordOutcomes, UnvoicedWordHasNoPitchButHasPower) {
  const SpeakerPitchBaseline b{"spk", 0.0, 1};
  const auto o = word_outcomes(timed(1, 0, 100), nullptr, constant_track(20, {}, -33.0), b);
  EXPECT_FALSE(o.mean_pitch_st.has_value());
  ASSERT_TRUE(o.mean_power_db.has_value());
  EXPECT_DOUBLE_EQ(*o.mean_power_db, -33.0);
}

TEST(WordOutcomes, SpanOutsideTrackNamesToken) {
  const SpeakerPitchBaseline b{"spk", 0.0, 1};
  Token t = timed(4, 150, 260);
  t.surface = "Katze";
  try {
    word_outcomes(t, nullptr, constant_track(20, 100.0), b);
    FAIL() << "expected a coverage error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("token 4 'Katze'"), std::string::npos) << e.what();
  }
}

TEST(ProsodyProperties, ScalingOneSpeakersPitchChangesNoWordPitch) {
  const SynthCorpus sc = small_synth(21);
  auto scaled = sc.tracks;
  const std::string speaker = sc.corpus.recordings[0].speaker_id;
  for (const auto& r : sc.corpus.recordings)
    if (r.speaker_id == speaker)
      for (auto& f : scaled[r.recording_id].frames)
        if (f.f0_hz) *f.f0_hz *= 1.5;
  for (auto scope : {BaselineScope::kWholeTrack, BaselineScope::kWordSpans}) {
    const auto a = all_outcomes(sc.corpus, sc.tracks, scope);
    const auto b = all_outcomes(sc.corpus, scaled, scope);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_EQ(a[i].mean_pitch_st.has_value(), b[i].mean_pitch_st.has_value());
      if (a[i].mean_pitch_st) EXPECT_NEAR(*a[i].mean_pitch_st, *b[i].mean_pitch_st, 1e-9);
    }
  }
}

TEST(ProsodyProperties, WeightedWordPitchAveragesToZeroWithWordSpanBaseline) {
  const SynthCorpus sc = small_synth(22);
  const BaselineResult base = speaker_baseline(sc.corpus, sc.tracks, BaselineScope::kWordSpans);
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& r : sc.corpus.recordings) {
    const FrameTrack& track = sc.tracks.at(r.recording_id);
    for (const auto& s : r.sentences)
      for (const auto& t : s.tokens) {
        const auto o = word_outcomes(t, nullptr, track, *base.find(r.speaker_id));
        if (!o.mean_pitch_st) continue;
        const auto [lo, hi] = track.frames_in(*t.start_ms, *t.end_ms);
        std::size_t voiced = 0;
        for (std::size_t i = lo; i < hi; ++i) voiced += track.frames[i].f0_hz.has_value();
        acc[r.speaker_id].first += *o.mean_pitch_st * static_cast<double>(voiced);
        acc[r.speaker_id].second += voiced;
      }
  }
  ASSERT_FALSE(acc.empty());
  for (const auto& [spk, a] : acc) EXPECT_NEAR(a.first / static_cast<double>(a.second), 0.0, 1e-9) << spk;
}

TEST(ProsodyProperties, OutcomesIgnoreFramesOutsideTheSpan) {
  const SpeakerPitchBaseline b{"spk", 5.0, 1};
  FrameTrack t = constant_track(100, 150.0);
  for (std::size_t i = 0; i < t.frames.size(); ++i) t.frames[i].power_db = -20.0 - 0.1 * i;
  const Token word = timed(1, 300, 520), next = timed(2, 600, 700);
  const auto ref = word_outcomes(word, &next, t, b);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> hz(60, 400), db(-90, 0);
  for (int rep = 0; rep < 20; ++rep) {
    FrameTrack p = t;
    const auto [lo, hi] = p.frames_in(300, 520);
    for (std::size_t i = 0; i < p.frames.size(); ++i)
      if (i < lo || i >= hi) p.frames[i] = Frame{rep % 2 ? std::optional<double>(hz(rng)) : std::nullopt, db(rng)};
    const auto o = word_outcomes(word, &next, p, b);
    EXPECT_EQ(o.mean_pitch_st, ref.mean_pitch_st);
    EXPECT_EQ(o.mean_power_db, ref.mean_power_db);
    EXPECT_EQ(o.duration_ms, ref.duration_ms);
    EXPECT_EQ(o.pause_after_ms, ref.pause_after_ms);
  }
}
