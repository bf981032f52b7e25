#include "prosyn/prosody.hpp"

#include <algorithm>
#include <cmath>

#include "prosyn/error.hpp"
#include "prosyn/text_io.hpp"

namespace prosyn {

double hz_to_semitones(double f0_hz) { return 12.0 * std::log2(f0_hz / 100.0); }

const SpeakerPitchBaseline* BaselineResult::find(const std::string& speaker_id) const {
  const auto it = std::lower_bound(
      baselines.begin(), baselines.end(), speaker_id,
      [](const SpeakerPitchBaseline& b, const std::string& id) { return b.speaker_id < id; });
  return it != baselines.end() && it->speaker_id == speaker_id ? &*it : nullptr;
}

BaselineResult speaker_baseline(const Corpus& corpus,
                                const std::map<std::string, FrameTrack>& tracks,
                                BaselineScope scope) {
  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  std::map<std::string, Acc> acc;
  BaselineResult result;
  const auto add = [](Acc& a, const Frame& f) {
    if (!f.f0_hz) return;
    a.sum += hz_to_semitones(*f.f0_hz);
    ++a.n;
  };
  for (const auto& rec : corpus.recordings) {
    Acc& a = acc[rec.speaker_id];
    const auto it = tracks.find(rec.recording_id);
    if (it == tracks.end()) {
      result.warnings.push_back("recording '" + rec.recording_id + "' has no frame track");
      continue;
    }
    const FrameTrack& track = it->second;
    if (scope == BaselineScope::kWholeTrack) {
      for (const Frame& f : track.frames) add(a, f);
      continue;
    }
    for (const auto& s : rec.sentences)
      for (const auto& t : s.tokens) {
        if (!t.has_timing()) continue;
        const auto [lo, hi] = track.frames_in(*t.start_ms, *t.end_ms);
        for (std::size_t i = lo; i < hi; ++i) add(a, track.frames[i]);
      }
  }
  for (const auto& [speaker, a] : acc) {
    if (a.n == 0) {
      result.warnings.push_back("speaker '" + speaker +
                                "' has no voiced frames; omitted from pitch normalization");
      continue;
    }
    result.baselines.push_back({speaker, a.sum / static_cast<double>(a.n), a.n});
  }
  return result;
}

ProsodicOutcomes word_outcomes(const Token& token, const Token* next_token,
                               const FrameTrack& track, const SpeakerPitchBaseline& baseline,
                               const OutcomeConfig& config) {
  const auto label = [&] {
    return "token " + std::to_string(token.index) + " '" + token.surface + "'";
  };
  if (!token.has_timing()) throw Error(label() + " has no alignment timing");
  const double start = *token.start_ms;
  const double end = *token.end_ms;
  if (start < track.start_ms || end > track.end_ms())
    throw Error(label() + " span [" + io::format_double(start) + ", " + io::format_double(end) +
                ") ms is outside the frame track coverage [" + io::format_double(track.start_ms) +
                ", " + io::format_double(track.end_ms()) + ") ms");

  ProsodicOutcomes out;
  out.duration_ms = end - start;

  const auto [lo, hi] = track.frames_in(start, end);
  double pitch_sum = 0.0, power_sum = 0.0;
  std::size_t voiced = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    const Frame& f = track.frames[i];
    power_sum += f.power_db;
    if (f.f0_hz) {
      pitch_sum += hz_to_semitones(*f.f0_hz) - baseline.mean_semitones;
      ++voiced;
    }
  }
  if (hi > lo) out.mean_power_db = power_sum / static_cast<double>(hi - lo);
  if (voiced > 0) out.mean_pitch_st = pitch_sum / static_cast<double>(voiced);

  if (next_token != nullptr && next_token->start_ms) {
    const double gap = *next_token->start_ms - end;
    out.pause_after_ms = gap > config.min_pause_ms ? gap : 0.0;
  }
  return out;
}

}  // namespace prosyn
