// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "prosyn/lmm.hpp"
#include "prosyn/pipeline.hpp"
#include "prosyn/pitch_tracker.hpp"
#include "prosyn/prosody.hpp"
#include "prosyn/report.hpp"
#include "prosyn/synth.hpp"
#include "random_data.hpp"

using namespace prosyn;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

Verdict dense_oracle_equivalence() {
  std::mt19937_64 rng(20240901);
  std::uniform_int_distribution<int> n_dist(10, 50), g_dist(1, 5), p_dist(1, 7);
  std::uniform_real_distribution<double> theta_dist(0.0, 10.0);
  double worst = 0.0;
  const auto t0 = Clock::now();
  for (int rep = 0; rep < 200; ++rep) {
    const int p = p_dist(rng);
    const int n = std::max(n_dist(rng), p + 2);
    const Dataset d = testing::random_dataset(rng, n, p, g_dist(rng), 1.0);
    const double theta = rep % 10 == 0 ? 0.0 : theta_dist(rng);
    worst = std::max(worst, std::abs(profiled_deviance(d, theta).deviance -
                                     oracle::dense_deviance(d, theta).deviance));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-8 && secs < 10.0,
          "max |dev - dense| = " + fmt("%.3g", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Verdict ols_reduction() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> p_dist(1, 7), g_dist(1, 8);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int p = p_dist(rng);
    Dataset d = testing::random_dataset(rng, 20 + rep, p, g_dist(rng), 2.0);
    // Spread the predictor scales so the relative check is meaningful.
    for (int k = 1; k < p; ++k) d.X.col(k) *= std::pow(10.0, k - 3);
    const Eigen::VectorXd beta = profiled_deviance(d, 0.0).beta;
    const Eigen::VectorXd ref = oracle::ols(d.X, d.y);
    for (Eigen::Index k = 0; k < ref.size(); ++k)
      worst = std::max(worst, std::abs(beta(k) - ref(k)) / std::max(std::abs(ref(k)), 1e-300));
  }
  return {worst <= 1e-6, "max relative beta error " + fmt("%.3g", worst)};
}

Verdict grid_search_optimizer() {
  std::mt19937_64 rng(4242);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const Dataset d = testing::random_dataset(rng, 60, 3, 6, 0.1 * rep);
    const LmmFit fit = fit_ml(d);
    double best_theta = 0.0, best_dev = INFINITY;
    for (int i = 0; i <= 100000; ++i) {
      const double theta = i * 1e-4;
      const double dev = profiled_deviance(d, theta).deviance;
      if (dev < best_dev) {
        best_dev = dev;
        best_theta = theta;
      }
    }
    worst = std::max(worst, std::abs(fit.theta - best_theta));
  }
  return {worst <= 1e-3, "max |theta - grid argmin| = " + fmt("%.3g", worst)};
}

Verdict chi_square_accuracy() {
  const double p1 = chi_square_sf(3.8415, 1), p2 = chi_square_sf(10.828, 1);
  const double o1 = oracle::chi_square1_sf_by_integration(3.8415);
  const double o2 = oracle::chi_square1_sf_by_integration(10.828);
  const bool ok = std::abs(p1 - 0.0500) <= 1e-4 && std::abs(p2 - 0.0010) <= 1e-4 &&
                  std::abs(p1 - o1) <= 1e-4 && std::abs(p2 - o2) <= 1e-4;
  return {ok, "p(3.8415) = " + fmt("%.6f", p1) + " (oracle " + fmt("%.6f", o1) + "), p(10.828) = " +
                  fmt("%.6f", p2) + " (oracle " + fmt("%.6f", o2) + ")"};
}

SynthConfig corpus_config(std::uint64_t seed, int recordings, double delta_st) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.n_speakers = recordings / 2;
  cfg.recordings_per_speaker = 2;
  cfg.sentences_per_recording = 20;
  if (delta_st != 0.0) cfg.effects.push_back({table1_presets()[0], Outcome::kPitch, delta_st});
  return cfg;
}

Verdict effect_recovery() {
  const auto t0 = Clock::now();
  const SynthCorpus sc = generate(corpus_config(2025, 200, 0.20));
  const AnalysisInput in = synth_analysis_input(sc);
  const ReportCell cell = run_cell(table1_presets()[0], Outcome::kPitch, in);
  const double secs = seconds_since(t0);
  if (cell.skipped()) return {false, "cell skipped: " + cell.skip_reason};
  const TestResult& t = *cell.result;
  const bool ok = std::abs(t.effect - 20.0) <= 2.0 * t.effect_se && t.p_value < 0.001 && secs < 60;
  return {ok, "effect " + fmt("%.3f", t.effect) + " Cent, SE " + fmt("%.3f", t.effect_se) +
                  ", p = " + fmt("%.3g", t.p_value) + ", " + fmt("%.1f", secs) + " s"};
}

Verdict null_calibration() {
  const auto t0 = Clock::now();
  int significant = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    const SynthCorpus sc = generate(corpus_config(100000 + static_cast<std::uint64_t>(s), 20, 0.0));
    const ReportCell cell = run_cell(table1_presets()[0], Outcome::kPitch, synth_analysis_input(sc));
    if (cell.skipped()) return {false, "cell skipped: " + cell.skip_reason};
    significant += cell.result->p_value < 0.05;
  }
  const double frac = static_cast<double>(significant) / seeds;
  const double secs = seconds_since(t0);
  return {frac >= 0.01 && frac <= 0.11 && secs < 600,
          fmt("%.2f", frac) + " of seeds with p < 0.05, " + fmt("%.1f", secs) + " s"};
}

Verdict sign_convention() {
  const SynthCorpus sc = generate(corpus_config(7, 20, 0.20));
  const AnalysisInput in = synth_analysis_input(sc);
  double worst_effect = 0.0, worst_p = 0.0;
  for (const auto& spec : table1_presets())
    for (Outcome o : kAllOutcomes) {
      const ReportCell a = run_cell(spec, o, in), b = run_cell(spec.swapped(), o, in);
      if (a.skipped() != b.skipped()) return {false, "skip mismatch for " + spec.name()};
      if (a.skipped()) continue;
      worst_effect = std::max(worst_effect, std::abs(a.result->effect + b.result->effect));
      worst_p = std::max(worst_p, std::abs(a.result->p_value - b.result->p_value));
    }
  const ReportCell pitch = run_cell(table1_presets()[0], Outcome::kPitch, in);
  const bool positive = !pitch.skipped() && pitch.result->effect > 0;
  return {worst_effect <= 1e-9 && worst_p <= 1e-9 && positive,
          "max |e + e_swapped| = " + fmt("%.3g", worst_effect) + ", max |dp| = " +
              fmt("%.3g", worst_p) + ", injected subj > obja reported " +
              (positive ? "positive" : "non-positive")};
}

Verdict pitch_tracker() {
  std::string detail;
  bool ok = true;
  for (double hz : {110.0, 220.0, 330.0}) {
    const int fs = 16000;
    std::vector<double> x(static_cast<std::size_t>(2 * fs));
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = 0.5 * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / fs);
    const FrameTrack t = track_pitch(x, fs);
    std::vector<double> err;
    std::size_t octave = 0;
    for (const Frame& f : t.frames) {
      if (!f.f0_hz) continue;
      err.push_back(std::abs(*f.f0_hz - hz));
      if (std::abs(std::log2(*f.f0_hz / hz)) > 0.5) ++octave;
    }
    if (err.empty()) {
      ok = false;
      detail += fmt("%.0f Hz: no voiced frames; ", hz);
      continue;
    }
    std::nth_element(err.begin(), err.begin() + err.size() / 2, err.end());
    const double median = err[err.size() / 2];
    const double octave_rate = static_cast<double>(octave) / static_cast<double>(err.size());
    ok = ok && median < 1.0 && octave_rate < 0.01;
    detail += fmt("%.0f Hz: median error ", hz) + fmt("%.3f", median) + " Hz, octave errors " +
              fmt("%.1f%%", 100.0 * octave_rate) + "; ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Verdict pitch_normalization() {
  SynthConfig cfg = corpus_config(13, 6, 0.0);
  const SynthCorpus sc = generate(cfg);
  const std::string speaker = sc.corpus.recordings[0].speaker_id;
  auto scaled = sc.tracks;
  for (const auto& r : sc.corpus.recordings)
    if (r.speaker_id == speaker)
      for (auto& f : scaled[r.recording_id].frames)
        if (f.f0_hz) *f.f0_hz *= 1.5;
  const auto a = extract_features(sc.corpus, sc.tracks, default_duration_model()).table;
  const auto b = extract_features(sc.corpus, scaled, default_duration_model()).table;
  double worst = 0.0;
  std::size_t compared = 0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& pa = a.rows[i].outcomes.mean_pitch_st;
    const auto& pb = b.rows[i].outcomes.mean_pitch_st;
    if (pa.has_value() != pb.has_value()) return {false, "voicing changed"};
    if (!pa) continue;
    worst = std::max(worst, std::abs(*pa - *pb));
    ++compared;
  }
  return {worst <= 1e-9 && compared > 0,
          "max change " + fmt("%.3g", worst) + " st over " + std::to_string(compared) + " words"};
}

Verdict report_golden() {
  const SynthCorpus sc = generate(corpus_config(3, 20, 0.20));
  const AnalysisInput in = synth_analysis_input(sc);
  const std::vector<Outcome> outs(kAllOutcomes.begin(), kAllOutcomes.end());
  std::vector<std::string> renders;
  std::size_t n_cells = 0;
  bool legend_ok = true;
  for (int workers : {1, 2, 4, 1}) {
    TableOptions opt;
    opt.workers = workers;
    const auto cells = run_table(table1_presets(), outs, in, opt);
    n_cells = cells.size();
    for (const auto& c : cells) {
      if (c.skipped()) continue;
      const double p = c.result->p_value;
      const std::string& s = c.result->stars;
      const std::string expect = p < 0.001 ? "***" : p < 0.01 ? "**" : p < 0.05 ? "*"
                                 : p < kNearMissCutoff ? fmt("%.2f", p) : "ns";
      legend_ok = legend_ok && s == expect;
    }
    renders.push_back(render_report(cells, ReportFormat::kMarkdown) +
                      render_report(cells, ReportFormat::kTsv) + render_cells_tsv(cells));
    // "---" appears exactly where a cell is ns or skipped.
    const std::string tsv = render_report(cells, ReportFormat::kTsv);
    std::size_t dashes = 0, expected = 0;
    for (std::size_t pos = tsv.find("---"); pos != std::string::npos; pos = tsv.find("---", pos + 3))
      ++dashes;
    for (const auto& c : cells) expected += c.skipped() || c.result->stars == "ns";
    legend_ok = legend_ok && dashes == expected;
  }
  const bool identical = std::all_of(renders.begin(), renders.end(),
                                     [&](const std::string& r) { return r == renders[0]; });
  return {identical && legend_ok && n_cells == 36,
          std::to_string(n_cells) + " cells, renders " + (identical ? "identical" : "differ") +
              " across worker counts 1/2/4/1, legend " + (legend_ok ? "consistent" : "violated")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"dense-oracle equivalence", dense_oracle_equivalence},
      {"OLS reduction at theta = 0", ols_reduction},
      {"grid-search optimizer check", grid_search_optimizer},
      {"chi-square accuracy", chi_square_accuracy},
      {"effect recovery", effect_recovery},
      {"null calibration", null_calibration},
      {"sign convention", sign_convention},
      {"pitch tracker", pitch_tracker},
      {"pitch normalization invariance", pitch_normalization},
      {"report golden test", report_golden},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failures += !r.pass;
    std::printf("%s  %s: %s\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
