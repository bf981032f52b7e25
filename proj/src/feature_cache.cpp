#include "prosyn/feature_cache.hpp"

#include <sstream>

#include "prosyn/text_io.hpp"

namespace prosyn {

namespace fs = std::filesystem;

std::string corpus_content_hash(const Corpus& corpus) {
  std::uint64_t h = io::fnv1a("");
  for (const auto& rec : corpus.recordings) {
    h = io::fnv1a(rec.recording_id, h);
    std::vector<fs::path> files = {rec.source_dir / kMetaFile, rec.source_dir / kTokensFile,
                                   rec.source_dir / kTrackFile};
    if (rec.audio) files.push_back(rec.source_dir / *rec.audio);
    for (const auto& f : files) {
      if (rec.source_dir.empty() || !fs::exists(f)) {
        h = io::fnv1a("<absent>", h);
        continue;
      }
      h = io::fnv1a(io::read_file(f), h);
    }
  }
  return io::hex64(h);
}

std::string extraction_config_hash(const ExtractConfig& c, const DurationModel& durations) {
  std::ostringstream s;
  s << io::format_double(c.pitch.frame_shift_ms) << ' ' << io::format_double(c.pitch.window_ms)
    << ' ' << io::format_double(c.pitch.min_f0_hz) << ' ' << io::format_double(c.pitch.max_f0_hz)
    << ' ' << io::format_double(c.pitch.voicing_threshold) << ' '
    << io::format_double(c.pitch.silence_floor_db) << ' ' << c.pitch.median_filter << ' '
    << io::format_double(c.outcome.min_pause_ms) << ' ' << c.pause_across_sentences << ' '
    << static_cast<int>(c.baseline_scope) << '\n'
    << durations.serialize();
  return io::hex64(io::fnv1a(s.str()));
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? io::format_double(*v) : ""; }

}  // namespace

std::string render_feature_cache(const FeatureTable& table, const FeatureCacheKey& key) {
  std::ostringstream out;
  out << "# " << kFeatureCacheVersion << "\tcorpus=" << key.corpus_hash
      << "\tconfig=" << key.config_hash << "\n";
  out << "# recording_id\tsentence_id\tindex\tspeaker_id\tcanonical_duration_ms\tposition"
         "\tsentence_length\tpitch_st\tpower_db\tduration_ms\tpause_ms\n";
  for (const auto& w : table.rows) {
    out << w.recording_id << '\t' << w.sentence_id << '\t' << w.token_index << '\t'
        << w.speaker_id << '\t' << io::format_double(w.canonical_duration_ms) << '\t'
        << w.position_in_sentence << '\t' << w.sentence_length << '\t'
        << opt(w.outcomes.mean_pitch_st) << '\t' << opt(w.outcomes.mean_power_db) << '\t'
        << io::format_double(w.outcomes.duration_ms) << '\t'
        << io::format_double(w.outcomes.pause_after_ms) << '\n';
  }
  return out.str();
}

void save_feature_cache(const FeatureTable& table, const FeatureCacheKey& key,
                        const fs::path& path) {
  io::write_file(path, render_feature_cache(table, key));
}

std::optional<FeatureTable> load_feature_cache(const fs::path& path,
                                               const FeatureCacheKey& expected) {
  if (!fs::exists(path)) return std::nullopt;
  const std::string content = io::read_file(path);
  const auto all = io::lines(content);
  if (all.empty()) return std::nullopt;
  const std::string want = std::string("# ") + kFeatureCacheVersion + "\tcorpus=" +
                           expected.corpus_hash + "\tconfig=" + expected.config_hash;
  if (all[0].text != want) return std::nullopt;

  FeatureTable table;
  const std::string name = path.string();
  for (const auto& line : all) {
    if (line.text.empty() || line.text.front() == '#') continue;
    const auto f = io::split(line.text, '\t');
    if (f.size() != 11) throw ParseError(name, line.number, "expected 11 tab-separated fields");
    WordFeatures w;
    w.recording_id = std::string(f[0]);
    w.sentence_id = std::string(f[1]);
    w.speaker_id = std::string(f[3]);
    const auto idx = io::parse_int(f[2]);
    const auto cdur = io::parse_double(f[4]);
    const auto pos = io::parse_int(f[5]);
    const auto len = io::parse_int(f[6]);
    const auto dur = io::parse_double(f[9]);
    const auto pause = io::parse_double(f[10]);
    if (!idx || !cdur || !pos || !len || !dur || !pause)
      throw ParseError(name, line.number, "invalid numeric field");
    w.token_index = static_cast<int>(*idx);
    w.canonical_duration_ms = *cdur;
    w.position_in_sentence = static_cast<int>(*pos);
    w.sentence_length = static_cast<int>(*len);
    w.outcomes.mean_pitch_st = io::parse_double(f[7]);
    w.outcomes.mean_power_db = io::parse_double(f[8]);
    w.outcomes.duration_ms = *dur;
    w.outcomes.pause_after_ms = *pause;
    table.rows.push_back(std::move(w));
  }
  table.reindex();
  return table;
}

}  // namespace prosyn
