#include "prosyn/duration_model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "prosyn/error.hpp"
#include "prosyn/text_io.hpp"

namespace prosyn {

namespace {

enum class CharClass { kVowel, kConsonant, kDigit, kOther };

std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    int extra = 0;
    char32_t cp = c;
    if (c >= 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else if (c >= 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if (c >= 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    }
    if (extra > 0 && i + static_cast<std::size_t>(extra) >= s.size()) {
      out.push_back(0xFFFD);
      break;
    }
    for (int k = 1; k <= extra; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

char32_t fold(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c - U'A' + U'a';
  if (c == 0xC4 || c == 0xD6 || c == 0xDC) return c + 0x20;  // Ä Ö Ü
  return c;
}

CharClass classify(char32_t c) {
  c = fold(c);
  switch (c) {
    case U'a': case U'e': case U'i': case U'o': case U'u': case U'y':
    case 0xE4: case 0xF6: case 0xFC:
      return CharClass::kVowel;
    default:
      break;
  }
  if (c >= U'0' && c <= U'9') return CharClass::kDigit;
  if ((c >= U'a' && c <= U'z') || c == 0xDF) return CharClass::kConsonant;
  return CharClass::kOther;
}

const char* const kSeedLexiconText =
#include "seed_lexicon.inc"
    ;

}  // namespace

DurationFeatures duration_features(std::string_view word) {
  DurationFeatures f{};
  const auto cps = decode_utf8(word);
  bool in_vowel_run = false;
  for (char32_t c : cps) {
    const CharClass cls = classify(c);
    f[0] += 1.0;
    if (cls == CharClass::kVowel) {
      if (!in_vowel_run) f[1] += 1.0;
      in_vowel_run = true;
    } else {
      in_vowel_run = false;
    }
    f[2 + static_cast<std::size_t>(cls)] += 1.0;
  }
  if (!cps.empty()) f[6 + static_cast<std::size_t>(classify(cps.back()))] = 1.0;
  return f;
}

DurationModel::DurationModel(std::vector<double> weights, double bias)
    : weights_(std::move(weights)), bias_(bias) {
  if (weights_.size() != kNumDurationFeatures)
    throw Error("duration model needs " + std::to_string(kNumDurationFeatures) + " weights, got " +
                std::to_string(weights_.size()));
}

double DurationModel::linear_response(std::string_view word) const {
  const auto f = duration_features(word);
  double y = bias_;
  for (std::size_t k = 0; k < kNumDurationFeatures; ++k) y += weights_[k] * f[k];
  return y;
}

double DurationModel::predict(std::string_view word) const {
  if (word.empty()) throw Error("predict_duration: empty word");
  return std::max(kMinPredictedDurationMs, linear_response(word));
}

std::string DurationModel::serialize() const {
  std::ostringstream out;
  out << "# canonical duration model: feature<TAB>weight\n";
  out << "bias\t" << io::format_double(bias_) << "\n";
  for (std::size_t k = 0; k < kNumDurationFeatures; ++k)
    out << kDurationFeatures[k] << '\t' << io::format_double(weights_[k]) << "\n";
  return out.str();
}

DurationModel DurationModel::deserialize(std::string_view text, const std::string& name) {
  std::vector<double> w(kNumDurationFeatures, 0.0);
  std::vector<bool> seen(kNumDurationFeatures, false);
  std::optional<double> bias;
  for (const auto& line : io::lines(text)) {
    if (line.text.empty() || line.text.front() == '#') continue;
    const auto f = io::split(line.text, '\t');
    if (f.size() != 2) throw ParseError(name, line.number, "expected name<TAB>weight");
    const auto v = io::parse_double(f[1]);
    if (!v) throw ParseError(name, line.number, "invalid weight");
    if (f[0] == "bias") {
      bias = *v;
      continue;
    }
    const auto it = std::find_if(kDurationFeatures.begin(), kDurationFeatures.end(),
                                 [&](const char* n) { return f[0] == n; });
    if (it == kDurationFeatures.end())
      throw ParseError(name, line.number, "unknown feature '" + std::string(f[0]) + "'");
    const auto k = static_cast<std::size_t>(it - kDurationFeatures.begin());
    w[k] = *v;
    seen[k] = true;
  }
  if (!bias) throw ParseError(name, 0, "missing bias");
  for (std::size_t k = 0; k < kNumDurationFeatures; ++k)
    if (!seen[k]) throw ParseError(name, 0, std::string("missing feature ") + kDurationFeatures[k]);
  return DurationModel(std::move(w), *bias);
}

DurationModel train_duration_model(const std::vector<LexiconEntry>& lexicon, double lambda) {
  if (lexicon.empty()) throw Error("train_duration_model: empty lexicon");
  if (!(lambda >= 0)) throw Error("train_duration_model: negative ridge penalty");
  const auto n = static_cast<Eigen::Index>(lexicon.size());
  const auto p = static_cast<Eigen::Index>(kNumDurationFeatures);
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& e = lexicon[static_cast<std::size_t>(i)];
    if (e.word.empty()) throw Error("train_duration_model: empty word in lexicon");
    if (!(e.duration_ms > 0))
      throw Error("train_duration_model: non-positive duration for '" + e.word + "'");
    const auto f = duration_features(e.word);
    for (Eigen::Index k = 0; k < p; ++k) X(i, k) = f[static_cast<std::size_t>(k)];
    y(i) = e.duration_ms;
  }
  // Centering removes the bias from the penalized system.
  const Eigen::RowVectorXd x_mean = X.colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;
  Eigen::MatrixXd A = Xc.transpose() * Xc;
  A.diagonal().array() += lambda;
  const Eigen::VectorXd w = A.ldlt().solve(Xc.transpose() * yc);
  const double bias = y_mean - x_mean.dot(w);
  return DurationModel(std::vector<double>(w.data(), w.data() + w.size()), bias);
}

double predict_duration(const DurationModel& m, std::string_view word) { return m.predict(word); }

std::vector<LexiconEntry> parse_lexicon(std::string_view content, const std::string& name) {
  std::vector<LexiconEntry> out;
  for (const auto& line : io::lines(content)) {
    if (io::trim(line.text).empty() || line.text.front() == '#') continue;
    const auto f = io::split(line.text, '\t');
    if (f.size() != 2) throw ParseError(name, line.number, "expected word<TAB>duration_ms");
    const auto d = io::parse_double(f[1]);
    if (!d || !(*d > 0)) throw ParseError(name, line.number, "duration must be a positive number");
    const auto word = io::trim(f[0]);
    if (word.empty()) throw ParseError(name, line.number, "empty word");
    out.push_back({std::string(word), *d});
  }
  return out;
}

std::vector<LexiconEntry> load_lexicon(const std::filesystem::path& path) {
  return parse_lexicon(io::read_file(path), path.string());
}

const std::vector<LexiconEntry>& seed_lexicon() {
  static const std::vector<LexiconEntry> lex = parse_lexicon(kSeedLexiconText, "seed lexicon");
  return lex;
}

const DurationModel& default_duration_model() {
  static const DurationModel model = train_duration_model(seed_lexicon());
  return model;
}

}  // namespace prosyn
