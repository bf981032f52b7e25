// prosyn: syntax/prosody correlation analysis on aligned, parsed corpora.

#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "prosyn/comparison.hpp"
#include "prosyn/corpus.hpp"
#include "prosyn/duration_model.hpp"
#include "prosyn/feature_cache.hpp"
#include "prosyn/pipeline.hpp"
#include "prosyn/report.hpp"
#include "prosyn/synth.hpp"
#include "prosyn/text_io.hpp"
#include "prosyn/version.hpp"

namespace fs = std::filesystem;
using namespace prosyn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitSkipped = 2;
constexpr int kExitUsage = 64;

struct ExtractFlags {
  std::string duration_model;
  double min_pause_ms = 0.0;
  bool no_cross_sentence_pause = false;
  PitchConfig pitch;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--duration-model", duration_model,
                    "Canonical duration model file (default: built-in seed lexicon model)");
    cmd->add_option("--min-pause-ms", min_pause_ms, "Gaps up to this length count as no pause")
        ->capture_default_str();
    cmd->add_flag("--no-cross-sentence-pause", no_cross_sentence_pause,
                  "Sentence-final words get pause 0");
    cmd->add_option("--voicing-threshold", pitch.voicing_threshold, "Minimum normalized autocorrelation peak")->capture_default_str();
    cmd->add_option("--min-f0", pitch.min_f0_hz, "Lowest f0 searched (Hz)")->capture_default_str();
    cmd->add_option("--max-f0", pitch.max_f0_hz, "Highest f0 searched (Hz)")->capture_default_str();
  }

  DurationModel durations() const {
    if (duration_model.empty()) return default_duration_model();
    return DurationModel::deserialize(io::read_file(duration_model), duration_model);
  }

  ExtractConfig config() const {
    ExtractConfig c;
    c.pitch = pitch;
    c.outcome.min_pause_ms = min_pause_ms;
    c.pause_across_sentences = !no_cross_sentence_pause;
    return c;
  }
};

struct LoadedFeatures {
  FeatureTable table;
  bool from_cache = false;
};

LoadedFeatures features_for(const Corpus& corpus, const fs::path& root, const ExtractFlags& flags,
                            bool use_cache, bool write_cache) {
  const DurationModel durations = flags.durations();
  const ExtractConfig config = flags.config();
  const FeatureCacheKey key{corpus_content_hash(corpus), extraction_config_hash(config, durations)};
  const fs::path cache = root / kFeatureCacheFile;
  if (use_cache) {
    if (auto table = load_feature_cache(cache, key)) return {std::move(*table), true};
  }
  const auto tracks = compute_tracks(corpus, config.pitch);
  ExtractionResult result = extract_features(corpus, tracks, durations, config);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  if (write_cache) save_feature_cache(result.table, key, cache);
  return {std::move(result.table), false};
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    io::write_file(path, text);
}

int cmd_ingest(const std::string& root) {
  const Corpus c = load_corpus(root);
  const Corpus aligned = filter_fully_aligned(c);
  std::cout << "recordings\t" << c.recordings.size() << "\n"
            << "sentences\t" << c.sentence_count() << "\n"
            << "fully_aligned_sentences\t" << aligned.sentence_count() << "\n"
            << "tokens\t" << c.token_count() << "\n"
            << "analysis_tokens\t" << aligned.token_count() << "\n";
  return kExitOk;
}

int cmd_extract(const std::string& root, const ExtractFlags& flags) {
  const Corpus c = load_corpus(root);
  const auto loaded = features_for(c, root, flags, false, true);
  std::cout << "wrote " << (fs::path(root) / kFeatureCacheFile).string() << " ("
            << loaded.table.rows.size() << " words)\n";
  return kExitOk;
}

int cmd_train(const std::string& lexicon, const std::string& out, double lambda) {
  const auto lex = lexicon.empty() ? seed_lexicon() : load_lexicon(lexicon);
  const DurationModel m = train_duration_model(lex, lambda);
  write_or_print(out, m.serialize());
  return kExitOk;
}

struct AnalyzeFlags {
  std::string corpus;
  std::vector<std::string> comparisons;
  std::string outcomes = "pitch,power,duration,pause";
  bool bonferroni = false;
  std::size_t min_rows = kDefaultMinRows;
  double near_miss = kNearMissCutoff;
  std::string report;
  std::string cells;
  std::string format = "markdown";
  bool no_cache = false;
  ExtractFlags extract;
};

int cmd_analyze(const AnalyzeFlags& f) {
  const Corpus full = load_corpus(f.corpus);
  AnalysisInput input;
  input.corpus = filter_fully_aligned(full);
  if (input.corpus.sentence_count() == 0) {
    std::cerr << "error: corpus has no fully aligned sentences; the analysis only uses sentences "
                 "in which every word has alignment timings\n";
    return kExitFatal;
  }
  std::vector<ComparisonSpec> specs;
  for (const auto& q : f.comparisons) {
    auto resolved = resolve_comparisons(q);
    specs.insert(specs.end(), resolved.begin(), resolved.end());
  }
  const auto outcomes = parse_outcome_list(f.outcomes);
  const auto format = parse_report_format(f.format);
  auto loaded = features_for(full, f.corpus, f.extract, !f.no_cache, !f.no_cache);
  input.features = std::move(loaded.table);

  TableOptions options;
  options.bonferroni = f.bonferroni;
  options.cell.design.min_rows = f.min_rows;
  options.cell.near_miss = f.near_miss;
  const auto cells = run_table(specs, outcomes, input, options);

  std::ostringstream cfg;
  cfg << "comparisons=";
  for (std::size_t i = 0; i < specs.size(); ++i) cfg << (i ? "," : "") << specs[i].name();
  cfg << " outcomes=" << f.outcomes << " bonferroni=" << (f.bonferroni ? "on" : "off")
      << " min-rows=" << f.min_rows << " near-miss=" << io::format_double(f.near_miss)
      << " min-pause-ms=" << io::format_double(f.extract.min_pause_ms)
      << " cross-sentence-pause=" << (f.extract.no_cross_sentence_pause ? "off" : "on")
      << " duration-model=" << io::hex64(io::fnv1a(f.extract.durations().serialize()))
      << " corpus=" << corpus_content_hash(full);
  const std::vector<std::string> header = {std::string("prosyn ") + kVersion, cfg.str()};

  write_or_print(f.report, render_report(cells, format, header));
  if (!f.cells.empty()) io::write_file(f.cells, render_cells_tsv(cells));

  bool any_skipped = false;
  for (const auto& c : cells) {
    for (const auto& w : c.warnings)
      std::cerr << "warning: " << c.comparison << " / " << outcome_name(c.outcome) << ": " << w
                << "\n";
    if (c.skipped()) {
      any_skipped = true;
      std::cerr << "skipped: " << c.comparison << " / " << outcome_name(c.outcome) << ": "
                << c.skip_reason << "\n";
    }
  }
  return any_skipped ? kExitSkipped : kExitOk;
}

int cmd_synth(const std::string& config_path, const std::string& out,
              std::optional<std::uint64_t> seed) {
  SynthConfig cfg;
  if (!config_path.empty()) cfg = parse_synth_config(io::read_file(config_path), config_path);
  if (seed) cfg.seed = *seed;
  const SynthCorpus synth = generate(cfg);
  write_synth(synth, cfg, out);
  std::cout << "wrote " << synth.corpus.recordings.size() << " recordings, "
            << synth.corpus.sentence_count() << " sentences ("
            << synth.manifest.aligned_sentence_count() << " fully aligned) to " << out << "\n";
  return kExitOk;
}

int cmd_report(const std::string& cells_path, const std::string& format, const std::string& out) {
  const auto cells = parse_cells_tsv(io::read_file(cells_path), cells_path);
  write_or_print(out, render_report(cells, parse_report_format(format)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prosyn: correlate syntactic functions with prosodic realization"};
  app.set_version_flag("--version", std::string("prosyn ") + kVersion);
  app.set_config("--settings", "", "Flat key=value settings file");
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "Worker threads (default: available parallelism)");

  std::string corpus_root;
  auto* ingest = app.add_subcommand("ingest", "Load and validate a corpus directory");
  ingest->add_option("--corpus", corpus_root, "Corpus root directory")->required();

  ExtractFlags extract_flags;
  auto* extract = app.add_subcommand("extract", "Compute word features and write the cache");
  extract->add_option("--corpus", corpus_root, "Corpus root directory")->required();
  extract_flags.add_to(extract);

  std::string lexicon, model_out;
  double lambda = kDefaultRidgeLambda;
  auto* train = app.add_subcommand("train-durations", "Train the canonical duration model");
  train->add_option("--lexicon", lexicon, "Lexicon TSV (word, duration_ms); default: seed lexicon");
  train->add_option("--out", model_out, "Model output file (default: stdout)");
  train->add_option("--lambda", lambda, "Ridge penalty")->capture_default_str();

  AnalyzeFlags af;
  auto* analyze = app.add_subcommand("analyze", "Fit basic/extended models and report the table");
  analyze->add_option("--corpus", af.corpus, "Corpus root directory")->required();
  analyze->add_option("--comparison", af.comparisons, "Query (A~B, C->(A~B)) or preset:table1")
      ->required();
  analyze->add_option("--outcomes", af.outcomes, "Comma-separated outcomes")->capture_default_str();
  analyze->add_flag("--bonferroni", af.bonferroni, "Bonferroni-adjust p-values");
  analyze->add_option("--min-rows", af.min_rows, "Minimum usable rows per cell")
      ->capture_default_str();
  analyze->add_option("--near-miss", af.near_miss, "Print p-values below this instead of ns")
      ->capture_default_str();
  analyze->add_option("--report", af.report, "Report output (default: stdout)");
  analyze->add_option("--cells", af.cells, "Machine-readable cell TSV output");
  analyze->add_option("--format", af.format, "markdown or tsv")->capture_default_str();
  analyze->add_flag("--no-cache", af.no_cache, "Neither read nor write the feature cache");
  af.extract.add_to(analyze);

  std::string synth_config, synth_out;
  std::optional<std::uint64_t> seed;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with known ground truth");
  synth->add_option("--config", synth_config, "Synthesis config (key=value)");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", seed, "Override the config seed");

  std::string cells_in, report_format = "markdown", report_out;
  auto* report = app.add_subcommand("report", "Render a report from a cell TSV");
  report->add_option("--cells", cells_in, "Cell TSV written by analyze --cells")->required();
  report->add_option("--format", report_format, "markdown or tsv")->capture_default_str();
  report->add_option("--out", report_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  if (workers > 0) omp_set_num_threads(workers);

  try {
    if (*ingest) return cmd_ingest(corpus_root);
    if (*extract) return cmd_extract(corpus_root, extract_flags);
    if (*train) return cmd_train(lexicon, model_out, lambda);
    if (*analyze) return cmd_analyze(af);
    if (*synth) return cmd_synth(synth_config, synth_out, seed);
    if (*report) return cmd_report(cells_in, report_format, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitUsage;
}
