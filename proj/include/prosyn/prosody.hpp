#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prosyn/corpus.hpp"
#include "prosyn/frame_track.hpp"

namespace prosyn {

/// Semitones relative to 100 Hz.
double hz_to_semitones(double f0_hz);

struct SpeakerPitchBaseline {
  std::string speaker_id;
  double mean_semitones = 0.0;
  std::size_t n_voiced_frames = 0;
};

enum class BaselineScope {
  kWholeTrack,  ///< every voiced frame of the speaker's tracks
  kWordSpans,   ///< only voiced frames inside timed token spans
};

struct BaselineResult {
  std::vector<SpeakerPitchBaseline> baselines;  ///< sorted by speaker_id
  std::vector<std::string> warnings;

  const SpeakerPitchBaseline* find(const std::string& speaker_id) const;
};

/// Per-speaker mean log pitch pooled over all of the speaker's recordings.
/// Speakers without voiced frames are omitted and reported in `warnings`.
BaselineResult speaker_baseline(const Corpus& corpus,
                                const std::map<std::string, FrameTrack>& tracks,
                                BaselineScope scope = BaselineScope::kWholeTrack);

struct ProsodicOutcomes {
  std::optional<double> mean_pitch_st;
  std::optional<double> mean_power_db;
  double duration_ms = 0.0;
  double pause_after_ms = 0.0;
};

struct OutcomeConfig {
  double min_pause_ms = 0.0;  ///< gaps at or below this count as no pause
};

/// Word-level outcomes. `next_token` is the following token of the same
/// recording, if any. Throws prosyn::Error if the token has no timing or its
/// span is not covered by the track.
ProsodicOutcomes word_outcomes(const Token& token, const Token* next_token,
                               const FrameTrack& track, const SpeakerPitchBaseline& baseline,
                               const OutcomeConfig& config = {});

}  // namespace prosyn
