#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace prosyn {

/// One aligned, dependency-parsed word.
struct Token {
  int index = 0;  ///< 1-based position in the sentence
  std::string surface;
  std::string pos;
  int head = 0;  ///< 0 for the root, otherwise the index of the head token
  std::string deprel;
  std::optional<double> start_ms;
  std::optional<double> end_ms;

  bool has_timing() const { return start_ms.has_value() && end_ms.has_value(); }
  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::string id;
  std::vector<Token> tokens;
  bool fully_aligned = false;

  const Token& token(int index) const { return tokens.at(static_cast<std::size_t>(index - 1)); }
  bool operator==(const Sentence&) const = default;
};

struct Recording {
  std::string recording_id;
  std::string speaker_id;
  std::vector<Sentence> sentences;
  std::optional<std::string> audio;  ///< path relative to the recording directory
  std::optional<int> sample_rate_hz;

  /// Directory the recording was loaded from; not part of the data model.
  std::filesystem::path source_dir;

  bool operator==(const Recording& o) const {
    return recording_id == o.recording_id && speaker_id == o.speaker_id &&
           sentences == o.sentences && audio == o.audio && sample_rate_hz == o.sample_rate_hz;
  }
};

struct Corpus {
  std::vector<Recording> recordings;  ///< sorted by recording_id

  std::size_t sentence_count() const;
  std::size_t token_count() const;
  bool operator==(const Corpus&) const = default;
};

inline constexpr const char* kMetaFile = "meta";
inline constexpr const char* kTokensFile = "tokens.tsv";
inline constexpr const char* kTrackFile = "track.tsv";

/// Checks the per-sentence tree structure; throws prosyn::Error naming the sentence.
void validate_sentence(const Sentence& s);

/// Checks every corpus invariant (trees, timings, unique ids).
void validate_corpus(const Corpus& c);

/// Loads one recording directory (meta + tokens.tsv).
Recording load_recording(const std::filesystem::path& dir);

/// Loads every recording subdirectory of `root`. Recordings are parsed in
/// parallel and sorted by recording_id afterwards.
Corpus load_corpus(const std::filesystem::path& root);

void save_recording(const Recording& r, const std::filesystem::path& dir);
void save_corpus(const Corpus& c, const std::filesystem::path& root);

/// Keeps only fully aligned sentences; recordings left empty are dropped.
Corpus filter_fully_aligned(const Corpus& c);

}  // namespace prosyn
