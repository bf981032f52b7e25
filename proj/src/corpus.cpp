#include "prosyn/corpus.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <set>
#include <sstream>

#include "prosyn/error.hpp"
#include "prosyn/text_io.hpp"

namespace fs = std::filesystem;

namespace prosyn {

std::size_t Corpus::sentence_count() const {
  std::size_t n = 0;
  for (const auto& r : recordings) n += r.sentences.size();
  return n;
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& r : recordings)
    for (const auto& s : r.sentences) n += s.tokens.size();
  return n;
}

void validate_sentence(const Sentence& s) {
  const auto fail = [&](const std::string& what) {
    throw Error("sentence '" + s.id + "': " + what);
  };
  const int n = static_cast<int>(s.tokens.size());
  if (n == 0) fail("no tokens");
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Token& t = s.tokens[static_cast<std::size_t>(i)];
    if (t.index != i + 1) fail("token indices must run 1.." + std::to_string(n));
    if (t.head == t.index) fail("token " + std::to_string(t.index) + " is its own head");
    if (t.head < 0 || t.head > n)
      fail("token " + std::to_string(t.index) + " has head " + std::to_string(t.head) +
           " outside the sentence");
    if (t.head == 0) ++roots;
    if (t.start_ms && t.end_ms && !(*t.end_ms > *t.start_ms))
      fail("token " + std::to_string(t.index) + " has end_ms <= start_ms");
  }
  if (roots != 1) fail("expected exactly one root, found " + std::to_string(roots));
  // Every token must reach the root within n steps.
  for (const Token& t : s.tokens) {
    int cur = t.index;
    int steps = 0;
    while (cur != 0) {
      cur = s.token(cur).head;
      if (++steps > n) fail("cyclic head structure through token " + std::to_string(t.index));
    }
  }
  const bool aligned =
      std::all_of(s.tokens.begin(), s.tokens.end(), [](const Token& t) { return t.has_timing(); });
  if (aligned != s.fully_aligned) fail("fully_aligned flag does not match token timings");
}

namespace {

void validate_recording(const Recording& r) {
  if (r.recording_id.empty()) throw Error("recording with empty recording_id");
  if (r.speaker_id.empty()) throw Error("recording '" + r.recording_id + "': empty speaker_id");
  if (r.sample_rate_hz && *r.sample_rate_hz <= 0)
    throw Error("recording '" + r.recording_id + "': sample_rate must be positive");
  std::set<std::string> ids;
  double last = -std::numeric_limits<double>::infinity();
  for (const Sentence& s : r.sentences) {
    validate_sentence(s);
    if (!ids.insert(s.id).second)
      throw Error("recording '" + r.recording_id + "': duplicate sentence id '" + s.id + "'");
    for (const Token& t : s.tokens) {
      for (const auto& v : {t.start_ms, t.end_ms}) {
        if (!v) continue;
        if (*v < last)
          throw Error("recording '" + r.recording_id + "', sentence '" + s.id + "', token " +
                      std::to_string(t.index) + ": timings decrease along the token stream");
        last = *v;
      }
    }
  }
}

Recording parse_meta(const fs::path& file) {
  Recording r;
  const std::string content = io::read_file(file);
  for (const auto& line : io::lines(content)) {
    const auto text = io::trim(line.text);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(file.string(), line.number, "expected key=value");
    const std::string key(io::trim(text.substr(0, eq)));
    const std::string value(io::trim(text.substr(eq + 1)));
    if (key == "recording_id") {
      r.recording_id = value;
    } else if (key == "speaker_id") {
      r.speaker_id = value;
    } else if (key == "audio") {
      if (!value.empty()) r.audio = value;
    } else if (key == "sample_rate") {
      const auto v = io::parse_int(value);
      if (!v || *v <= 0) throw ParseError(file.string(), line.number, "invalid sample_rate");
      r.sample_rate_hz = static_cast<int>(*v);
    } else {
      throw ParseError(file.string(), line.number, "unknown key '" + key + "'");
    }
  }
  if (r.recording_id.empty()) throw ParseError(file.string(), 0, "missing recording_id");
  if (r.speaker_id.empty()) throw ParseError(file.string(), 0, "missing speaker_id");
  return r;
}

std::optional<double> parse_timing(std::string_view field, const fs::path& file, std::size_t line,
                                   const char* name) {
  if (io::trim(field).empty()) return std::nullopt;
  const auto v = io::parse_double(field);
  if (!v) throw ParseError(file.string(), line, std::string("invalid ") + name);
  return v;
}

std::vector<Sentence> parse_tokens(const fs::path& file) {
  std::vector<Sentence> sentences;
  std::set<std::string> closed;
  const std::string content = io::read_file(file);
  for (const auto& line : io::lines(content)) {
    if (line.text.empty() || line.text.front() == '#') continue;
    const auto f = io::split(line.text, '\t');
    if (f.size() != 8)
      throw ParseError(file.string(), line.number,
                       "expected 8 tab-separated fields, found " + std::to_string(f.size()));
    const std::string sid(f[0]);
    if (sid.empty()) throw ParseError(file.string(), line.number, "empty sentence_id");
    if (sentences.empty() || sentences.back().id != sid) {
      if (!sentences.empty()) closed.insert(sentences.back().id);
      if (closed.count(sid))
        throw ParseError(file.string(), line.number,
                         "rows of sentence '" + sid + "' are not contiguous");
      sentences.push_back(Sentence{sid, {}, false});
    }
    Token t;
    const auto index = io::parse_int(f[1]);
    const auto head = io::parse_int(f[4]);
    if (!index) throw ParseError(file.string(), line.number, "invalid index");
    if (!head) throw ParseError(file.string(), line.number, "invalid head");
    t.index = static_cast<int>(*index);
    t.surface = std::string(f[2]);
    t.pos = std::string(f[3]);
    t.head = static_cast<int>(*head);
    t.deprel = std::string(f[5]);
    if (t.surface.empty()) throw ParseError(file.string(), line.number, "empty surface");
    if (t.deprel.empty()) throw ParseError(file.string(), line.number, "empty deprel");
    t.start_ms = parse_timing(f[6], file, line.number, "start_ms");
    t.end_ms = parse_timing(f[7], file, line.number, "end_ms");
    sentences.back().tokens.push_back(std::move(t));
  }
  for (auto& s : sentences)
    s.fully_aligned = std::all_of(s.tokens.begin(), s.tokens.end(),
                                  [](const Token& t) { return t.has_timing(); });
  return sentences;
}

}  // namespace

void validate_corpus(const Corpus& c) {
  std::set<std::string> ids;
  for (const auto& r : c.recordings) {
    validate_recording(r);
    if (!ids.insert(r.recording_id).second)
      throw Error("duplicate recording_id '" + r.recording_id + "'");
  }
}

Recording load_recording(const fs::path& dir) {
  Recording r = parse_meta(dir / kMetaFile);
  r.sentences = parse_tokens(dir / kTokensFile);
  r.source_dir = dir;
  try {
    validate_recording(r);
  } catch (const Error& e) {
    throw Error((dir / kTokensFile).string() + ": " + e.what());
  }
  return r;
}

Corpus load_corpus(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error("corpus root is not a directory: " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory() && fs::exists(entry.path() / kMetaFile)) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());

  const long n = static_cast<long>(dirs.size());
  std::vector<Recording> recs(dirs.size());
  std::vector<std::exception_ptr> errors(dirs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      recs[static_cast<std::size_t>(i)] = load_recording(dirs[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Corpus c;
  c.recordings = std::move(recs);
  std::sort(c.recordings.begin(), c.recordings.end(),
            [](const Recording& a, const Recording& b) { return a.recording_id < b.recording_id; });
  for (std::size_t i = 1; i < c.recordings.size(); ++i)
    if (c.recordings[i].recording_id == c.recordings[i - 1].recording_id)
      throw Error("duplicate recording_id '" + c.recordings[i].recording_id + "' in " +
                  c.recordings[i - 1].source_dir.string() + " and " +
                  c.recordings[i].source_dir.string());
  return c;
}

void save_recording(const Recording& r, const fs::path& dir) {
  fs::create_directories(dir);
  std::ostringstream meta;
  meta << "recording_id=" << r.recording_id << "\n";
  meta << "speaker_id=" << r.speaker_id << "\n";
  if (r.audio) meta << "audio=" << *r.audio << "\n";
  if (r.sample_rate_hz) meta << "sample_rate=" << *r.sample_rate_hz << "\n";
  io::write_file(dir / kMetaFile, meta.str());

  std::ostringstream tok;
  tok << "# sentence_id\tindex\tsurface\tpos\thead\tdeprel\tstart_ms\tend_ms\n";
  for (const auto& s : r.sentences) {
    for (const auto& t : s.tokens) {
      tok << s.id << '\t' << t.index << '\t' << t.surface << '\t' << t.pos << '\t' << t.head << '\t'
          << t.deprel << '\t' << (t.start_ms ? io::format_double(*t.start_ms) : "") << '\t'
          << (t.end_ms ? io::format_double(*t.end_ms) : "") << '\n';
    }
  }
  io::write_file(dir / kTokensFile, tok.str());
}

void save_corpus(const Corpus& c, const fs::path& root) {
  validate_corpus(c);
  fs::create_directories(root);
  for (const auto& r : c.recordings) save_recording(r, root / r.recording_id);
}

Corpus filter_fully_aligned(const Corpus& c) {
  Corpus out;
  for (const auto& r : c.recordings) {
    Recording kept = r;
    kept.sentences.clear();
    for (const auto& s : r.sentences)
      if (s.fully_aligned) kept.sentences.push_back(s);
    if (!kept.sentences.empty()) out.recordings.push_back(std::move(kept));
  }
  return out;
}

}  // namespace prosyn
