#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prosyn/comparison.hpp"
#include "prosyn/corpus.hpp"
#include "prosyn/duration_model.hpp"
#include "prosyn/frame_track.hpp"
#include "prosyn/lmm.hpp"
#include "prosyn/pitch_tracker.hpp"
#include "prosyn/prosody.hpp"

namespace prosyn {

enum class Outcome { kPitch, kPower, kDuration, kPause };

inline constexpr std::array<Outcome, 4> kAllOutcomes = {Outcome::kPitch, Outcome::kPower,
                                                        Outcome::kDuration, Outcome::kPause};

const char* outcome_name(Outcome o);
/// Reporting unit: Cent, dB or ms.
const char* outcome_unit(Outcome o);
/// Factor from the model's native unit to the reporting unit (semitones to Cent).
double outcome_unit_scale(Outcome o);
Outcome parse_outcome(std::string_view name);
std::vector<Outcome> parse_outcome_list(std::string_view csv);

/// Per-token predictors and outcomes of a fully aligned sentence.
struct WordFeatures {
  std::string recording_id;
  std::string speaker_id;
  std::string sentence_id;
  int token_index = 0;
  double canonical_duration_ms = 0.0;
  int position_in_sentence = 0;
  int sentence_length = 0;
  ProsodicOutcomes outcomes;
};

struct FeatureTable {
  std::vector<WordFeatures> rows;  ///< corpus order

  /// Index of the row for (recording, sentence, 1-based token index), if any.
  std::optional<std::size_t> find(const std::string& recording_id, const std::string& sentence_id,
                                  int token_index) const;
  void reindex();

 private:
  std::map<std::tuple<std::string, std::string, int>, std::size_t> index_;
};

struct ExtractConfig {
  PitchConfig pitch;
  OutcomeConfig outcome;
  bool pause_across_sentences = true;
  BaselineScope baseline_scope = BaselineScope::kWholeTrack;
};

/// Frame track per recording: `track.tsv` if present, otherwise the
/// recording's audio run through the pitch tracker. Recordings in parallel.
std::map<std::string, FrameTrack> compute_tracks(const Corpus& corpus, const PitchConfig& config);

struct ExtractionResult {
  FeatureTable table;
  std::vector<std::string> warnings;
};

/// Features for every token of every fully aligned sentence. Pauses look at
/// the next token of the full recording stream, so `corpus` should be the
/// unfiltered corpus.
ExtractionResult extract_features(const Corpus& corpus,
                                  const std::map<std::string, FrameTrack>& tracks,
                                  const DurationModel& durations, const ExtractConfig& config = {});

/// The regression row.
struct WordRecord {
  std::string recording_id;
  std::string speaker_id;
  double canonical_duration_ms = 0.0;
  int position_in_sentence = 1;
  int sentence_length = 1;
  ProsodicOutcomes outcomes;
  int flag = 0;
};

/// Thrown when fewer rows than the configured minimum remain.
class UnderpoweredError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kDefaultMinRows = 50;

struct DesignOptions {
  std::size_t min_rows = kDefaultMinRows;
  bool pairwise_interactions = true;
};

/// Design [1, cdur, pos, slen, cdur*pos, cdur*slen, pos*slen], groups =
/// recordings (sorted ids), flag carried separately. Rows lacking the
/// outcome are dropped.
Dataset build_design(const std::vector<WordRecord>& records, Outcome outcome,
                     const DesignOptions& options = {});

/// Everything a cell needs: the analysis corpus (fully aligned sentences only) and its features.
struct AnalysisInput {
  Corpus corpus;
  FeatureTable features;

  std::vector<WordRecord> records_for(const ComparisonSpec& spec) const;
};

struct TestResult {
  double lr_stat = 0.0;
  int df = 1;
  double p_value = 1.0;
  double p_adjusted = 1.0;
  double effect = 0.0;     ///< reporting unit, positive iff first group > second group
  double effect_se = 0.0;  ///< reporting unit
  std::string stars;
};

struct ReportCell {
  std::string comparison;
  Outcome outcome = Outcome::kPitch;
  std::optional<TestResult> result;  ///< empty when skipped
  std::size_t n_rows = 0;
  std::size_t n_groups = 0;
  std::string skip_reason;
  std::vector<std::string> warnings;
  double basic_loglik = 0.0;
  double extended_loglik = 0.0;

  bool skipped() const { return !result.has_value(); }
};

struct CellOptions {
  DesignOptions design;
  double near_miss = kNearMissCutoff;
};

ReportCell run_cell(const ComparisonSpec& spec, Outcome outcome, const AnalysisInput& input,
                    const CellOptions& options = {});

struct TableOptions {
  CellOptions cell;
  bool bonferroni = false;
  int workers = 0;  ///< 0 = OpenMP default
};

/// All (comparison x outcome) cells in comparison-major order. Cells are
/// computed in parallel; errors are recorded per cell.
std::vector<ReportCell> run_table(const std::vector<ComparisonSpec>& specs,
                                  const std::vector<Outcome>& outcomes,
                                  const AnalysisInput& input, const TableOptions& options = {});

/// Multiplies p by the number of tested cells (clamped at 1) and relabels stars.
void apply_bonferroni(std::vector<ReportCell>& cells, double near_miss = kNearMissCutoff);

}  // namespace prosyn
