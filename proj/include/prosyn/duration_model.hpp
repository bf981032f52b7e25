#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prosyn {

/// Orthographic features used by the canonical-duration surrogate.
inline constexpr std::array<const char*, 10> kDurationFeatures = {
    "chars",       "vowel_clusters", "vowels",          "consonants",  "digits",
    "other",       "final_vowel",    "final_consonant", "final_digit", "final_other"};
inline constexpr std::size_t kNumDurationFeatures = kDurationFeatures.size();

using DurationFeatures = std::array<double, kNumDurationFeatures>;

/// Feature vector of a UTF-8 word; German umlauts count as vowels, case is folded.
DurationFeatures duration_features(std::string_view word);

struct LexiconEntry {
  std::string word;
  double duration_ms = 0.0;
};

inline constexpr double kMinPredictedDurationMs = 20.0;

/// Linear ridge model over orthographic features. Immutable once trained.
class DurationModel {
 public:
  DurationModel() = default;
  DurationModel(std::vector<double> weights, double bias);

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

  /// Linear response before clamping.
  double linear_response(std::string_view word) const;
  /// Predicted duration in ms, clamped to >= 20 ms. Throws on an empty word.
  double predict(std::string_view word) const;

  std::string serialize() const;
  static DurationModel deserialize(std::string_view text, const std::string& name = "model");

  bool operator==(const DurationModel&) const = default;

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
};

inline constexpr double kDefaultRidgeLambda = 1.0;

/// Ridge regression with unpenalized bias, solved through the normal equations.
DurationModel train_duration_model(const std::vector<LexiconEntry>& lexicon,
                                   double lambda = kDefaultRidgeLambda);

double predict_duration(const DurationModel& m, std::string_view word);

/// Lexicon TSV: word<TAB>duration_ms per line, '#' comments.
std::vector<LexiconEntry> load_lexicon(const std::filesystem::path& path);
std::vector<LexiconEntry> parse_lexicon(std::string_view content, const std::string& name);

/// Small built-in German seed lexicon.
const std::vector<LexiconEntry>& seed_lexicon();
/// Model trained on the seed lexicon with the default penalty.
const DurationModel& default_duration_model();

}  // namespace prosyn
