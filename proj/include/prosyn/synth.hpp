#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prosyn/comparison.hpp"
#include "prosyn/corpus.hpp"
#include "prosyn/frame_track.hpp"
#include "prosyn/pipeline.hpp"

namespace prosyn {

/// True parameters of one outcome: y = beta . [1, cdur, pos, slen] + b_rec + e.
struct OutcomeTruth {
  std::array<double, 4> beta{};
  double sigma_b = 0.0;
  double sigma_e = 1.0;
};

struct InjectedEffect {
  ComparisonSpec comparison;
  Outcome outcome = Outcome::kPitch;
  double delta = 0.0;  ///< native units, added to words of the first group
};

struct SynthConfig {
  std::uint64_t seed = 1;
  int n_speakers = 10;
  int recordings_per_speaker = 2;
  int sentences_per_recording = 20;
  int sentence_length_min = 6;
  int sentence_length_max = 16;
  double alignment_dropout = 0.0;
  double unvoiced_rate = 0.05;  ///< probability that a word carries no voiced frames
  /// Probability that the object precedes the subject in a clause (and that a
  /// relative pronoun is the object). 0.5 keeps role and word position independent.
  double object_first_rate = 0.5;
  double speaker_pitch_mean_st = 10.0;
  double speaker_pitch_sd_st = 3.0;
  bool audio = false;  ///< write sine-modulated audio instead of frame tracks
  int audio_sample_rate_hz = 16000;
  double frame_shift_ms = 10.0;
  std::map<Outcome, OutcomeTruth> truth = default_truth();
  std::vector<InjectedEffect> effects;

  static std::map<Outcome, OutcomeTruth> default_truth();
  /// Throws prosyn::Error when a count, variance or probability is out of range.
  void validate() const;
};

/// Flat key=value configuration (`beta.pitch=0,0,-0.1,0.02`, `delta.subj~obja.pitch=0.2`, ...).
SynthConfig parse_synth_config(std::string_view text, const std::string& name = "config");

struct SentenceTruth {
  std::string recording_id;
  std::string sentence_id;
  bool fully_aligned = true;
};

struct WordTruth {
  std::string recording_id;
  std::string sentence_id;
  int token_index = 0;
  std::optional<double> pitch_st;  ///< semitones re 100 Hz, before speaker normalization
  double power_db = 0.0;
  double duration_ms = 0.0;
  double pause_ms = 0.0;
};

struct SynthManifest {
  std::vector<std::pair<std::string, std::string>> parameters;
  std::map<std::string, std::map<Outcome, double>> random_intercepts;  ///< per recording
  std::vector<SentenceTruth> sentences;
  std::vector<WordTruth> words;

  std::size_t aligned_sentence_count() const;
  std::string render() const;
};

struct SynthCorpus {
  Corpus corpus;
  std::map<std::string, FrameTrack> tracks;
  std::map<std::string, std::vector<double>> audio;  ///< only in audio mode
  SynthManifest manifest;
};

/// Deterministic in (config, seed); recordings use independent derived streams.
SynthCorpus generate(const SynthConfig& config);

/// Writes the corpus directory layout plus `manifest.tsv` and a copy of the config.
void write_synth(const SynthCorpus& synth, const SynthConfig& config,
                 const std::filesystem::path& out_dir);

std::string render_synth_config(const SynthConfig& config);

/// Analysis input built straight from generated data, bypassing the disk.
AnalysisInput synth_analysis_input(const SynthCorpus& synth, const ExtractConfig& config = {});

}  // namespace prosyn
