#include "prosyn/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <set>

#include "prosyn/text_io.hpp"
#include "prosyn/wav.hpp"

namespace prosyn {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kPitch: return "pitch";
    case Outcome::kPower: return "power";
    case Outcome::kDuration: return "duration";
    case Outcome::kPause: return "pause";
  }
  return "?";
}

const char* outcome_unit(Outcome o) {
  switch (o) {
    case Outcome::kPitch: return "Cent";
    case Outcome::kPower: return "dB";
    case Outcome::kDuration:
    case Outcome::kPause: return "ms";
  }
  return "?";
}

double outcome_unit_scale(Outcome o) { return o == Outcome::kPitch ? 100.0 : 1.0; }

Outcome parse_outcome(std::string_view name) {
  for (Outcome o : kAllOutcomes)
    if (name == outcome_name(o)) return o;
  throw Error("unknown outcome '" + std::string(name) +
              "' (expected pitch, power, duration or pause)");
}

std::vector<Outcome> parse_outcome_list(std::string_view csv) {
  std::vector<Outcome> out;
  for (auto part : io::split(csv, ',')) {
    part = io::trim(part);
    if (part.empty()) continue;
    const Outcome o = parse_outcome(part);
    if (std::find(out.begin(), out.end(), o) == out.end()) out.push_back(o);
  }
  if (out.empty()) throw Error("no outcomes selected");
  return out;
}

std::optional<std::size_t> FeatureTable::find(const std::string& recording_id,
                                              const std::string& sentence_id,
                                              int token_index) const {
  const auto it = index_.find({recording_id, sentence_id, token_index});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void FeatureTable::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!index_.emplace(std::make_tuple(r.recording_id, r.sentence_id, r.token_index), i).second)
      throw Error("feature table has duplicate row for " + r.recording_id + "/" + r.sentence_id +
                  "/" + std::to_string(r.token_index));
  }
}

std::map<std::string, FrameTrack> compute_tracks(const Corpus& corpus, const PitchConfig& config) {
  const long n = static_cast<long>(corpus.recordings.size());
  std::vector<FrameTrack> tracks(corpus.recordings.size());
  std::vector<std::exception_ptr> errors(corpus.recordings.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const Recording& rec = corpus.recordings[idx];
    try {
      const auto track_path = rec.source_dir / kTrackFile;
      if (!rec.source_dir.empty() && std::filesystem::exists(track_path)) {
        tracks[idx] = load_frame_track(track_path);
      } else if (rec.audio) {
        const PcmAudio audio = read_wav(rec.source_dir / *rec.audio);
        if (rec.sample_rate_hz && *rec.sample_rate_hz != audio.sample_rate_hz)
          throw Error("recording '" + rec.recording_id + "': meta sample_rate " +
                      std::to_string(*rec.sample_rate_hz) + " differs from audio " +
                      std::to_string(audio.sample_rate_hz));
        tracks[idx] = track_pitch_serial(audio.samples, audio.sample_rate_hz, config);
      } else {
        throw Error("recording '" + rec.recording_id + "' has neither " + kTrackFile +
                    " nor audio");
      }
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::map<std::string, FrameTrack> out;
  for (std::size_t i = 0; i < tracks.size(); ++i)
    out.emplace(corpus.recordings[i].recording_id, std::move(tracks[i]));
  return out;
}

ExtractionResult extract_features(const Corpus& corpus,
                                  const std::map<std::string, FrameTrack>& tracks,
                                  const DurationModel& durations, const ExtractConfig& config) {
  ExtractionResult result;
  const BaselineResult baselines = speaker_baseline(corpus, tracks, config.baseline_scope);
  result.warnings = baselines.warnings;

  const long n = static_cast<long>(corpus.recordings.size());
  std::vector<std::vector<WordFeatures>> per_rec(corpus.recordings.size());
  std::vector<std::exception_ptr> errors(corpus.recordings.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const Recording& rec = corpus.recordings[idx];
    try {
      const auto track_it = tracks.find(rec.recording_id);
      const SpeakerPitchBaseline* base = baselines.find(rec.speaker_id);
      // An absent baseline leaves pitch missing for every word of the speaker.
      SpeakerPitchBaseline no_pitch{rec.speaker_id, 0.0, 0};
      for (std::size_t s = 0; s < rec.sentences.size(); ++s) {
        const Sentence& sent = rec.sentences[s];
        if (!sent.fully_aligned) continue;
        if (track_it == tracks.end())
          throw Error("recording '" + rec.recording_id + "' has no frame track");
        const int len = static_cast<int>(sent.tokens.size());
        for (std::size_t t = 0; t < sent.tokens.size(); ++t) {
          const Token& tok = sent.tokens[t];
          const Token* next = nullptr;
          if (t + 1 < sent.tokens.size())
            next = &sent.tokens[t + 1];
          else if (config.pause_across_sentences && s + 1 < rec.sentences.size())
            next = &rec.sentences[s + 1].tokens.front();
          WordFeatures w;
          w.recording_id = rec.recording_id;
          w.speaker_id = rec.speaker_id;
          w.sentence_id = sent.id;
          w.token_index = tok.index;
          w.canonical_duration_ms = durations.predict(tok.surface);
          w.position_in_sentence = tok.index;
          w.sentence_length = len;
          try {
            w.outcomes = word_outcomes(tok, next, track_it->second, base ? *base : no_pitch,
                                       config.outcome);
          } catch (const Error& e) {
            throw Error("recording '" + rec.recording_id + "', sentence '" + sent.id +
                        "': " + e.what());
          }
          if (!base) w.outcomes.mean_pitch_st.reset();
          per_rec[idx].push_back(std::move(w));
        }
      }
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& v : per_rec)
    for (auto& w : v) result.table.rows.push_back(std::move(w));
  result.table.reindex();
  return result;
}

namespace {

std::optional<double> outcome_value(const ProsodicOutcomes& o, Outcome which) {
  switch (which) {
    case Outcome::kPitch: return o.mean_pitch_st;
    case Outcome::kPower: return o.mean_power_db;
    case Outcome::kDuration: return o.duration_ms;
    case Outcome::kPause: return o.pause_after_ms;
  }
  return std::nullopt;
}

}  // namespace

Dataset build_design(const std::vector<WordRecord>& records, Outcome outcome,
                     const DesignOptions& options) {
  std::vector<const WordRecord*> usable;
  for (const auto& r : records) {
    if (r.position_in_sentence < 1 || r.position_in_sentence > r.sentence_length)
      throw Error("word record with position outside its sentence (recording '" + r.recording_id +
                  "')");
    if (outcome_value(r.outcomes, outcome)) usable.push_back(&r);
  }
  if (usable.size() < options.min_rows || usable.empty())
    throw UnderpoweredError("under-powered analysis: " + std::to_string(usable.size()) +
                            " usable rows for outcome " + outcome_name(outcome) + ", minimum is " +
                            std::to_string(options.min_rows));

  std::set<std::string> ids;
  for (const auto* r : usable) ids.insert(r->recording_id);
  const std::vector<std::string> sorted(ids.begin(), ids.end());

  const auto n = static_cast<Eigen::Index>(usable.size());
  const Eigen::Index p = options.pairwise_interactions ? 7 : 4;
  Dataset d;
  d.X.resize(n, p);
  d.y.resize(n);
  d.group.resize(usable.size());
  d.flag = Eigen::VectorXd(n);
  d.n_groups = static_cast<int>(sorted.size());
  d.column_names = {"intercept", "cdur", "pos", "slen"};
  if (options.pairwise_interactions)
    d.column_names.insert(d.column_names.end(), {"cdur:pos", "cdur:slen", "pos:slen"});
  for (Eigen::Index i = 0; i < n; ++i) {
    const WordRecord& r = *usable[static_cast<std::size_t>(i)];
    const double cdur = r.canonical_duration_ms;
    const double pos = r.position_in_sentence;
    const double slen = r.sentence_length;
    d.X(i, 0) = 1.0;
    d.X(i, 1) = cdur;
    d.X(i, 2) = pos;
    d.X(i, 3) = slen;
    if (options.pairwise_interactions) {
      d.X(i, 4) = cdur * pos;
      d.X(i, 5) = cdur * slen;
      d.X(i, 6) = pos * slen;
    }
    d.y(i) = *outcome_value(r.outcomes, outcome);
    d.group[static_cast<std::size_t>(i)] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), r.recording_id) - sorted.begin());
    (*d.flag)(i) = r.flag;
  }
  return d;
}

std::vector<WordRecord> AnalysisInput::records_for(const ComparisonSpec& spec) const {
  std::vector<WordRecord> out;
  for (const auto& sel : select_pairs(spec, corpus)) {
    const Recording& rec = corpus.recordings[sel.ref.recording];
    const Sentence& sent = rec.sentences[sel.ref.sentence];
    const Token& tok = sent.tokens[sel.ref.token];
    const auto row = features.find(rec.recording_id, sent.id, tok.index);
    if (!row)
      throw Error("no features for " + rec.recording_id + "/" + sent.id + "/" +
                  std::to_string(tok.index));
    const WordFeatures& w = features.rows[*row];
    out.push_back({w.recording_id, w.speaker_id, w.canonical_duration_ms, w.position_in_sentence,
                   w.sentence_length, w.outcomes, sel.flag});
  }
  return out;
}

ReportCell run_cell(const ComparisonSpec& spec, Outcome outcome, const AnalysisInput& input,
                    const CellOptions& options) {
  ReportCell cell;
  cell.comparison = spec.name();
  cell.outcome = outcome;
  try {
    const auto selection = select_pairs(spec, input.corpus);
    if (!selection.empty() && surface_overlap(selection, input.corpus) < kMinSurfaceOverlap)
      cell.warnings.push_back("surface forms of the two groups overlap by less than 1%");
    const auto records = input.records_for(spec);
    const Dataset d = build_design(records, outcome, options.design);
    cell.n_rows = static_cast<std::size_t>(d.rows());
    cell.n_groups = static_cast<std::size_t>(d.n_groups);
    const double flag_sum = d.flag->sum();
    if (flag_sum == 0.0 || flag_sum == static_cast<double>(d.rows()))
      throw Error("no contrast: all selected rows belong to one group");

    const LmmFit basic = fit_ml(d);
    FitOptions ext_options;
    ext_options.seed_theta = basic.theta;
    const LmmFit extended = fit_ml(d.with_flag_column(), ext_options);
    const LrTest lr = lr_test(basic, extended);
    const EffectEstimate delta = effect_size(basic, d);
    cell.basic_loglik = basic.loglik;
    cell.extended_loglik = extended.loglik;

    // Flag 0 marks the first label; the reported effect is first minus second.
    const double scale = outcome_unit_scale(outcome);
    TestResult t;
    t.lr_stat = lr.lr_stat;
    t.df = lr.df;
    t.p_value = lr.p_value;
    t.p_adjusted = lr.p_value;
    t.effect = -delta.value * scale;
    t.effect_se = delta.standard_error * scale;
    t.stars = significance_label(t.p_adjusted, options.near_miss);
    cell.result = t;
  } catch (const std::exception& e) {
    cell.result.reset();
    cell.skip_reason = e.what();
  }
  return cell;
}

void apply_bonferroni(std::vector<ReportCell>& cells, double near_miss) {
  const auto tests = static_cast<double>(
      std::count_if(cells.begin(), cells.end(), [](const ReportCell& c) { return !c.skipped(); }));
  for (auto& c : cells) {
    if (c.skipped()) continue;
    c.result->p_adjusted = std::min(1.0, c.result->p_value * tests);
    c.result->stars = significance_label(c.result->p_adjusted, near_miss);
  }
}

std::vector<ReportCell> run_table(const std::vector<ComparisonSpec>& specs,
                                  const std::vector<Outcome>& outcomes,
                                  const AnalysisInput& input, const TableOptions& options) {
  const std::size_t total = specs.size() * outcomes.size();
  std::vector<ReportCell> cells(total);
  const int workers = options.workers > 0 ? options.workers : omp_get_max_threads();
  const long n = static_cast<long>(total);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    cells[idx] = run_cell(specs[idx / outcomes.size()], outcomes[idx % outcomes.size()], input,
                          options.cell);
  }
  if (options.bonferroni) apply_bonferroni(cells, options.cell.near_miss);
  return cells;
}

}  // namespace prosyn
