#include "prosyn/synth.hpp"

#include <omp.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "prosyn/duration_model.hpp"
#include "prosyn/text_io.hpp"
#include "prosyn/wav.hpp"

namespace prosyn {

namespace fs = std::filesystem;

std::map<Outcome, OutcomeTruth> SynthConfig::default_truth() {
  return {
      {Outcome::kPitch, {{0.0, 0.0, -0.12, 0.02}, 0.5, 1.0}},
      {Outcome::kPower, {{-25.0, 0.004, -0.08, 0.0}, 1.5, 2.0}},
      {Outcome::kDuration, {{60.0, 0.8, 1.0, -1.0}, 15.0, 30.0}},
      {Outcome::kPause, {{80.0, 0.02, 0.5, 0.0}, 10.0, 15.0}},
  };
}

void SynthConfig::validate() const {
  const auto fail = [](const std::string& what) { throw Error("synth config: " + what); };
  if (n_speakers < 1 || recordings_per_speaker < 1) fail("need at least one recording");
  if (sentences_per_recording < 1) fail("zero sentences configured");
  if (sentence_length_min < 1 || sentence_length_max < sentence_length_min)
    fail("invalid sentence length range");
  if (!(alignment_dropout >= 0 && alignment_dropout <= 1)) fail("alignment_dropout not in [0,1]");
  if (!(unvoiced_rate >= 0 && unvoiced_rate <= 1)) fail("unvoiced_rate not in [0,1]");
  if (!(object_first_rate >= 0 && object_first_rate <= 1)) fail("object_first_rate not in [0,1]");
  if (!(speaker_pitch_sd_st >= 0)) fail("negative speaker pitch sd");
  if (!(frame_shift_ms > 0)) fail("frame_shift_ms must be positive");
  if (audio_sample_rate_hz < 8000) fail("audio sample rate below 8000 Hz");
  for (const auto& [o, t] : truth)
    if (!(t.sigma_b >= 0) || !(t.sigma_e >= 0))
      fail(std::string("negative standard deviation for ") + outcome_name(o));
  for (Outcome o : kAllOutcomes)
    if (!truth.count(o)) fail(std::string("missing truth for ") + outcome_name(o));
}

namespace {

// splitmix64: seeds derived per (seed, recording) independent of scheduling.
std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Distribution code is written out so output is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() { return state_ = splitmix(state_); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  int below(int n) { return static_cast<int>(uniform() * n); }
  bool chance(double p) { return uniform() < p; }
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(below(static_cast<int>(v.size())))]; }

 private:
  std::uint64_t state_;
};

const std::vector<std::string> kNouns = {"Katze",   "Hund",  "Stadt",   "Fluss",  "Kirche",
                                         "Regierung", "König", "Gemeinde", "Bahnhof", "Universität",
                                         "Sprache", "Insel", "Brücke",  "Partei", "Schule"};
const std::vector<std::string> kDets = {"der", "die", "das", "den", "ein", "eine", "einen"};
const std::vector<std::string> kAdjs = {"schwarze", "schnellen", "große", "kleinen",
                                        "alte",     "neuen",     "erste", "wichtigen"};
const std::vector<std::string> kVerbs = {"jagt", "sieht", "baut", "besitzt",
                                         "gründete", "erreicht", "verbindet", "nennt"};
const std::vector<std::string> kAux = {"hat", "wird", "wurde", "ist"};
const std::vector<std::string> kParticiples = {"gejagt", "gesehen", "gebaut", "gegründet",
                                               "erreicht", "verbunden"};
const std::vector<std::string> kChainAux = {"worden", "gewesen"};
const std::vector<std::string> kAdverbs = {"heute", "dort", "später", "bereits", "damals", "auch"};
const std::vector<std::string> kSubordinators = {"weil", "dass"};

struct Node {
  std::string surface, pos, deprel;
  int head = -1;  // 0-based node index, -1 for the root
};

class SentenceBuilder {
 public:
  SentenceBuilder(Rng& rng, double object_first_rate)
      : rng_(rng), object_first_rate_(object_first_rate) {}

  int add(std::string surface, std::string pos, std::string deprel, int head = -1) {
    nodes_.push_back({std::move(surface), std::move(pos), std::move(deprel), head});
    return static_cast<int>(nodes_.size()) - 1;
  }
  void attach(int node, int head) { nodes_[static_cast<std::size_t>(node)].head = head; }

  // Noun phrase: optional determiner and attribute before the noun.
  int noun_phrase(const std::string& role) {
    std::vector<int> mods;
    if (rng_.chance(0.85)) mods.push_back(add(rng_.pick(kDets), "ART", "det"));
    if (rng_.chance(0.45)) mods.push_back(add(rng_.pick(kAdjs), "ADJA", "attr"));
    const int noun = add(rng_.pick(kNouns), "NN", role);
    for (int m : mods) attach(m, noun);
    return noun;
  }

  // Verb group below a finite auxiliary: a participle, sometimes through an
  // auxiliary chain (participle -> "worden" -> finite).
  int verb_group(int object) {
    const int content = add(rng_.pick(kParticiples), "VVPP", "aux");
    attach(object, content);
    if (!rng_.chance(0.4)) return content;
    const int chain = add(rng_.pick(kChainAux), "VAPP", "aux");
    attach(content, chain);
    return chain;
  }

  // Verb-second main clause. The prefield holds an adverb or the first of the
  // two noun phrases; adverbs may separate the noun phrases in the middle field.
  int main_clause(const std::string& clause_role) {
    const bool with_aux = rng_.chance(0.5);
    const bool object_first = rng_.chance(object_first_rate_);
    const char* first_role = object_first ? "obja" : "subj";
    const char* second_role = object_first ? "subj" : "obja";
    std::vector<int> adverbs;
    int first = -1;
    if (rng_.chance(0.3)) adverbs.push_back(add(rng_.pick(kAdverbs), "ADV", "adv"));
    else first = noun_phrase(first_role);
    const int finite =
        add(rng_.pick(with_aux ? kAux : kVerbs), with_aux ? "VAFIN" : "VVFIN", clause_role);
    if (first < 0) first = noun_phrase(first_role);
    for (int k = rng_.below(3); k > 0; --k) adverbs.push_back(add(rng_.pick(kAdverbs), "ADV", "adv"));
    const int second = noun_phrase(second_role);
    const int obj = object_first ? first : second;
    const int group = with_aux ? verb_group(obj) : -1;
    attach(object_first ? second : first, finite);
    attach(with_aux ? group : obj, finite);
    for (int a : adverbs) attach(a, finite);
    return finite;
  }

  // Verb-final subordinate clause with subject, object and an optional auxiliary.
  int subordinate_clause(const std::string& clause_role) {
    const bool with_aux = rng_.chance(0.5);
    const bool object_first = rng_.chance(object_first_rate_);
    const int first = noun_phrase(object_first ? "obja" : "subj");
    const int second = noun_phrase(object_first ? "subj" : "obja");
    const int obj = object_first ? first : second;
    const int group = with_aux ? verb_group(obj) : -1;
    const int finite =
        add(rng_.pick(with_aux ? kAux : kVerbs), with_aux ? "VAFIN" : "VVFIN", clause_role);
    attach(object_first ? second : first, finite);
    attach(with_aux ? group : obj, finite);
    return finite;
  }

  // Relative clause modifying `noun`: the pronoun is the subject or, at the
  // object-first rate, the object; the other role is a full noun phrase.
  void relative_clause(int noun) {
    const bool with_aux = rng_.chance(0.5);
    const bool object_relative = rng_.chance(object_first_rate_);
    const int pron = add(object_relative ? "den" : "die", "PRELS", object_relative ? "obja" : "subj");
    const int np = noun_phrase(object_relative ? "subj" : "obja");
    const int obj = object_relative ? pron : np;
    const int group = with_aux ? verb_group(obj) : -1;
    const int finite =
        add(rng_.pick(with_aux ? kAux : kVerbs), with_aux ? "VAFIN" : "VVFIN", "rel");
    attach(object_relative ? np : pron, finite);
    attach(with_aux ? group : obj, finite);
    attach(finite, noun);
  }

  std::vector<Node> build(int target_length) {
    const int root = main_clause("s");
    const double r = rng_.uniform();
    if (r < 0.35) {
      const int conj = add(rng_.pick(kSubordinators), "KOUS", "konj");
      const int sub = subordinate_clause("neb");
      attach(conj, sub);
      attach(sub, root);
    } else if (r < 0.7) {
      // Attach to the last noun so far.
      int noun = -1;
      for (int i = 0; i < static_cast<int>(nodes_.size()); ++i)
        if (nodes_[static_cast<std::size_t>(i)].pos == "NN") noun = i;
      relative_clause(noun);
    }
    // Fillers up to the target length, and always one at the end so the
    // compared roles are never the last word of a recording.
    while (static_cast<int>(nodes_.size()) + 1 < target_length) add(rng_.pick(kAdverbs), "ADV", "adv", root);
    add(rng_.pick(kAdverbs), "ADV", "adv", root);
    return std::move(nodes_);
  }

 private:
  Rng& rng_;
  double object_first_rate_;
  std::vector<Node> nodes_;
};

bool in_first_group(const InjectedEffect& e, const std::vector<Node>& nodes, std::size_t i) {
  const Node& n = nodes[i];
  const ComparisonSpec& c = e.comparison;
  if (c.pos_whitelist && !c.pos_whitelist->count(n.pos)) return false;
  if (c.kind == ComparisonKind::kDirect) return n.deprel == c.label_a;
  if (n.deprel != c.child_label || n.head < 0) return false;
  return nodes[static_cast<std::size_t>(n.head)].deprel == c.label_a;
}

struct RecordingOutput {
  Recording recording;
  FrameTrack track;
  std::vector<double> audio;
  std::map<Outcome, double> intercepts;
  std::vector<SentenceTruth> sentences;
  std::vector<WordTruth> words;
};

constexpr double kSilenceDb = -90.0;

RecordingOutput generate_recording(const SynthConfig& cfg, int speaker, int rec_index,
                                   double speaker_pitch) {
  Rng rng(splitmix(cfg.seed ^ splitmix(static_cast<std::uint64_t>(rec_index) + 1)));
  RecordingOutput out;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "rec%04d", rec_index);
  out.recording.recording_id = buf;
  std::snprintf(buf, sizeof(buf), "spk%03d", speaker);
  out.recording.speaker_id = buf;
  for (Outcome o : kAllOutcomes) out.intercepts[o] = cfg.truth.at(o).sigma_b * rng.normal();

  const DurationModel& durations = default_duration_model();
  struct Span {
    double start, end;
    std::optional<double> f0;
    double power;
  };
  std::vector<Span> spans;
  double t = 200.0;
  for (int s = 0; s < cfg.sentences_per_recording; ++s) {
    const int target = cfg.sentence_length_min +
                       rng.below(cfg.sentence_length_max - cfg.sentence_length_min + 1);
    SentenceBuilder builder(rng, cfg.object_first_rate);
    const std::vector<Node> nodes = builder.build(target);
    Sentence sent;
    std::snprintf(buf, sizeof(buf), "s%03d", s + 1);
    sent.id = buf;
    const double slen = static_cast<double>(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Node& n = nodes[i];
      Token tok;
      tok.index = static_cast<int>(i) + 1;
      tok.surface = n.surface;
      tok.pos = n.pos;
      tok.head = n.head < 0 ? 0 : n.head + 1;
      tok.deprel = n.deprel;
      const double x[4] = {1.0, durations.predict(n.surface), static_cast<double>(tok.index), slen};
      std::map<Outcome, double> y;
      for (Outcome o : kAllOutcomes) {
        const OutcomeTruth& tr = cfg.truth.at(o);
        double v = out.intercepts[o] + tr.sigma_e * rng.normal();
        for (int k = 0; k < 4; ++k) v += tr.beta[static_cast<std::size_t>(k)] * x[k];
        y[o] = v;
      }
      for (const auto& e : cfg.effects)
        if (in_first_group(e, nodes, i)) y[e.outcome] += e.delta;
      const bool voiced = !rng.chance(cfg.unvoiced_rate);

      WordTruth w;
      w.recording_id = out.recording.recording_id;
      w.sentence_id = sent.id;
      w.token_index = tok.index;
      if (voiced) w.pitch_st = speaker_pitch + y[Outcome::kPitch];
      w.power_db = y[Outcome::kPower];
      w.duration_ms = std::max(y[Outcome::kDuration], 20.0);
      w.pause_ms = std::max(y[Outcome::kPause], 0.0);
      tok.start_ms = t;
      tok.end_ms = t + w.duration_ms;
      spans.push_back({t, *tok.end_ms,
                       w.pitch_st ? std::optional<double>(100.0 * std::exp2(*w.pitch_st / 12.0))
                                  : std::nullopt,
                       w.power_db});
      t = *tok.end_ms + w.pause_ms;
      sent.tokens.push_back(std::move(tok));
      out.words.push_back(w);
    }
    sent.fully_aligned = true;
    if (rng.chance(cfg.alignment_dropout)) {
      Token& lost = sent.tokens[static_cast<std::size_t>(rng.below(static_cast<int>(sent.tokens.size())))];
      lost.end_ms.reset();
      sent.fully_aligned = false;
    }
    out.sentences.push_back({out.recording.recording_id, sent.id, sent.fully_aligned});
    out.recording.sentences.push_back(std::move(sent));
  }
  // The last word of a recording has no following token.
  out.words.back().pause_ms = 0.0;
  const double total_ms = t + 200.0;

  // Frame track: every frame inside a word span carries that word's values.
  FrameTrack& track = out.track;
  track.frame_shift_ms = cfg.frame_shift_ms;
  track.start_ms = 0.0;
  track.frames.assign(static_cast<std::size_t>(std::ceil(total_ms / cfg.frame_shift_ms)) + 1,
                      Frame{std::nullopt, kSilenceDb});
  for (const Span& sp : spans) {
    const auto [lo, hi] = track.frames_in(sp.start, sp.end);
    for (std::size_t i = lo; i < hi; ++i) track.frames[i] = Frame{sp.f0, sp.power};
  }

  if (cfg.audio) {
    const double rate = cfg.audio_sample_rate_hz;
    out.audio.assign(static_cast<std::size_t>(std::ceil(total_ms * rate / 1000.0)), 0.0);
    for (const Span& sp : spans) {
      if (!sp.f0) continue;
      const double amp = std::min(0.95, std::sqrt(2.0 * std::pow(10.0, sp.power / 10.0)));
      const auto begin = static_cast<std::size_t>(std::ceil(sp.start * rate / 1000.0));
      const auto end = std::min(out.audio.size(), static_cast<std::size_t>(sp.end * rate / 1000.0));
      for (std::size_t i = begin; i < end; ++i)
        out.audio[i] = amp * std::sin(2.0 * std::numbers::pi * *sp.f0 * static_cast<double>(i - begin) / rate);
    }
    out.recording.audio = "audio.wav";
    out.recording.sample_rate_hz = cfg.audio_sample_rate_hz;
  }
  return out;
}

std::string join_beta(const std::array<double, 4>& b) {
  std::string s;
  for (std::size_t k = 0; k < b.size(); ++k) s += (k ? "," : "") + io::format_double(b[k]);
  return s;
}

}  // namespace

std::size_t SynthManifest::aligned_sentence_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.fully_aligned ? 1 : 0;
  return n;
}

std::string SynthManifest::render() const {
  std::ostringstream out;
  out << "# record\tfields...\n";
  for (const auto& [k, v] : parameters) out << "param\t" << k << '\t' << v << '\n';
  for (const auto& [rec, m] : random_intercepts)
    for (const auto& [o, v] : m)
      out << "intercept\t" << rec << '\t' << outcome_name(o) << '\t' << io::format_double(v) << '\n';
  for (const auto& s : sentences)
    out << "sentence\t" << s.recording_id << '\t' << s.sentence_id << '\t'
        << (s.fully_aligned ? "aligned" : "unaligned") << '\n';
  for (const auto& w : words)
    out << "word\t" << w.recording_id << '\t' << w.sentence_id << '\t' << w.token_index << '\t'
        << (w.pitch_st ? io::format_double(*w.pitch_st) : "") << '\t'
        << io::format_double(w.power_db) << '\t' << io::format_double(w.duration_ms) << '\t'
        << io::format_double(w.pause_ms) << '\n';
  return out.str();
}

std::string render_synth_config(const SynthConfig& c) {
  std::ostringstream out;
  out << "seed=" << c.seed << "\n"
      << "speakers=" << c.n_speakers << "\n"
      << "recordings_per_speaker=" << c.recordings_per_speaker << "\n"
      << "sentences_per_recording=" << c.sentences_per_recording << "\n"
      << "sentence_length_min=" << c.sentence_length_min << "\n"
      << "sentence_length_max=" << c.sentence_length_max << "\n"
      << "alignment_dropout=" << io::format_double(c.alignment_dropout) << "\n"
      << "unvoiced_rate=" << io::format_double(c.unvoiced_rate) << "\n"
      << "object_first_rate=" << io::format_double(c.object_first_rate) << "\n"
      << "speaker_pitch_mean_st=" << io::format_double(c.speaker_pitch_mean_st) << "\n"
      << "speaker_pitch_sd_st=" << io::format_double(c.speaker_pitch_sd_st) << "\n"
      << "audio=" << (c.audio ? 1 : 0) << "\n"
      << "audio_sample_rate=" << c.audio_sample_rate_hz << "\n"
      << "frame_shift_ms=" << io::format_double(c.frame_shift_ms) << "\n";
  for (const auto& [o, t] : c.truth) {
    out << "beta." << outcome_name(o) << "=" << join_beta(t.beta) << "\n";
    out << "sigma_b." << outcome_name(o) << "=" << io::format_double(t.sigma_b) << "\n";
    out << "sigma_e." << outcome_name(o) << "=" << io::format_double(t.sigma_e) << "\n";
  }
  for (const auto& e : c.effects)
    out << "delta." << e.comparison.name() << "." << outcome_name(e.outcome) << "="
        << io::format_double(e.delta) << "\n";
  return out.str();
}

SynthConfig parse_synth_config(std::string_view text, const std::string& name) {
  SynthConfig c;
  for (const auto& line : io::lines(text)) {
    const auto body = io::trim(line.text);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(name, line.number, "expected key=value");
    const std::string key(io::trim(body.substr(0, eq)));
    const std::string value(io::trim(body.substr(eq + 1)));
    const auto fail = [&](const std::string& what) { throw ParseError(name, line.number, what); };
    const auto num = [&] {
      const auto v = io::parse_double(value);
      if (!v) fail("invalid number for '" + key + "'");
      return *v;
    };
    const auto integer = [&] {
      const auto v = io::parse_int(value);
      if (!v) fail("invalid integer for '" + key + "'");
      return *v;
    };
    try {
      if (key == "seed") c.seed = static_cast<std::uint64_t>(integer());
      else if (key == "speakers") c.n_speakers = static_cast<int>(integer());
      else if (key == "recordings_per_speaker") c.recordings_per_speaker = static_cast<int>(integer());
      else if (key == "sentences_per_recording") c.sentences_per_recording = static_cast<int>(integer());
      else if (key == "sentence_length_min") c.sentence_length_min = static_cast<int>(integer());
      else if (key == "sentence_length_max") c.sentence_length_max = static_cast<int>(integer());
      else if (key == "alignment_dropout") c.alignment_dropout = num();
      else if (key == "unvoiced_rate") c.unvoiced_rate = num();
      else if (key == "object_first_rate") c.object_first_rate = num();
      else if (key == "speaker_pitch_mean_st") c.speaker_pitch_mean_st = num();
      else if (key == "speaker_pitch_sd_st") c.speaker_pitch_sd_st = num();
      else if (key == "audio") c.audio = integer() != 0;
      else if (key == "audio_sample_rate") c.audio_sample_rate_hz = static_cast<int>(integer());
      else if (key == "frame_shift_ms") c.frame_shift_ms = num();
      else if (key.rfind("beta.", 0) == 0) {
        const Outcome o = parse_outcome(key.substr(5));
        const auto parts = io::split(value, ',');
        if (parts.size() != 4) fail("beta needs 4 comma-separated values");
        for (std::size_t k = 0; k < 4; ++k) {
          const auto v = io::parse_double(parts[k]);
          if (!v) fail("invalid beta value");
          c.truth[o].beta[k] = *v;
        }
      } else if (key.rfind("sigma_b.", 0) == 0) {
        c.truth[parse_outcome(key.substr(8))].sigma_b = num();
      } else if (key.rfind("sigma_e.", 0) == 0) {
        c.truth[parse_outcome(key.substr(8))].sigma_e = num();
      } else if (key.rfind("delta.", 0) == 0) {
        const auto dot = key.rfind('.');
        if (dot <= 6) fail("expected delta.<comparison>.<outcome>");
        InjectedEffect e;
        e.comparison = parse_comparison(key.substr(6, dot - 6));
        e.outcome = parse_outcome(key.substr(dot + 1));
        e.delta = num();
        c.effects.push_back(std::move(e));
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  c.validate();
  return c;
}

SynthCorpus generate(const SynthConfig& cfg) {
  cfg.validate();
  const int n_rec = cfg.n_speakers * cfg.recordings_per_speaker;
  std::vector<double> speaker_pitch(static_cast<std::size_t>(cfg.n_speakers));
  Rng speaker_rng(splitmix(cfg.seed));
  for (auto& p : speaker_pitch) p = cfg.speaker_pitch_mean_st + cfg.speaker_pitch_sd_st * speaker_rng.normal();

  std::vector<RecordingOutput> recs(static_cast<std::size_t>(n_rec));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < n_rec; ++r) {
    const int speaker = r / cfg.recordings_per_speaker;
    recs[static_cast<std::size_t>(r)] =
        generate_recording(cfg, speaker, r, speaker_pitch[static_cast<std::size_t>(speaker)]);
  }

  SynthCorpus out;
  auto& m = out.manifest;
  const std::string rendered = render_synth_config(cfg);
  for (const auto& line : io::lines(rendered)) {
    const auto eq = line.text.find('=');
    m.parameters.emplace_back(std::string(line.text.substr(0, eq)),
                              std::string(line.text.substr(eq + 1)));
  }
  for (int s = 0; s < cfg.n_speakers; ++s)
    m.parameters.emplace_back("speaker_pitch_st.spk" + io::format("%03.0f", s),
                              io::format_double(speaker_pitch[static_cast<std::size_t>(s)]));
  for (auto& r : recs) {
    const std::string id = r.recording.recording_id;
    m.random_intercepts[id] = r.intercepts;
    m.sentences.insert(m.sentences.end(), r.sentences.begin(), r.sentences.end());
    m.words.insert(m.words.end(), r.words.begin(), r.words.end());
    out.tracks.emplace(id, std::move(r.track));
    if (cfg.audio) out.audio.emplace(id, std::move(r.audio));
    out.corpus.recordings.push_back(std::move(r.recording));
  }
  validate_corpus(out.corpus);
  return out;
}

void write_synth(const SynthCorpus& synth, const SynthConfig& config, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  for (const auto& rec : synth.corpus.recordings) {
    const fs::path dir = out_dir / rec.recording_id;
    save_recording(rec, dir);
    if (config.audio) {
      const auto& samples = synth.audio.at(rec.recording_id);
      write_wav(dir / *rec.audio, samples, config.audio_sample_rate_hz);
      fs::remove(dir / kTrackFile);
    } else {
      save_frame_track(synth.tracks.at(rec.recording_id), dir / kTrackFile);
    }
  }
  io::write_file(out_dir / "manifest.tsv", synth.manifest.render());
  io::write_file(out_dir / "synth.cfg", render_synth_config(config));
}

AnalysisInput synth_analysis_input(const SynthCorpus& synth, const ExtractConfig& config) {
  AnalysisInput input;
  input.features =
      extract_features(synth.corpus, synth.tracks, default_duration_model(), config).table;
  input.corpus = filter_fully_aligned(synth.corpus);
  return input;
}

}  // namespace prosyn
