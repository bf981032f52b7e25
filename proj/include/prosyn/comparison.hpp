#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "prosyn/corpus.hpp"
#include "prosyn/error.hpp"

namespace prosyn {

enum class ComparisonKind {
  kDirect,    ///< A~B: words with role A against words with role B
  kAttached,  ///< C->(A~B): words with role C whose heads have role A against role B
};

struct ComparisonSpec {
  ComparisonKind kind = ComparisonKind::kDirect;
  std::string label_a;  ///< first group, selected rows get flag 0
  std::string label_b;  ///< second group, flag 1
  std::optional<std::string> child_label;
  std::optional<std::set<std::string>> pos_whitelist;

  /// Canonical query text, e.g. `det->(subj~obja)` or `subj~obja[pos=NN|NE]`.
  std::string name() const;
  /// The same comparison with label_a and label_b exchanged.
  ComparisonSpec swapped() const;

  bool operator==(const ComparisonSpec&) const = default;
};

/// Query syntax error; `column` is 1-based, one past the end for premature end of input.
class QueryError : public Error {
 public:
  QueryError(std::size_t column, const std::string& what)
      : Error("column " + std::to_string(column) + ": " + what), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

/// Parses `A~B` or `C->(A~B)`, each with an optional `[pos=T1|T2]` suffix.
ComparisonSpec parse_comparison(std::string_view query);

/// The nine comparisons of the reference experiment grid, in report order.
std::vector<ComparisonSpec> table1_presets();

/// Accepts `preset:table1` (or `table1`) as well as a single query.
std::vector<ComparisonSpec> resolve_comparisons(std::string_view query);

/// Default POS whitelist for subject/object comparisons.
const std::set<std::string>& nominal_pos_tags();

struct TokenRef {
  std::size_t recording = 0;
  std::size_t sentence = 0;
  std::size_t token = 0;  ///< 0-based position in the sentence
  bool operator==(const TokenRef&) const = default;
  auto operator<=>(const TokenRef&) const = default;
};

struct SelectedToken {
  TokenRef ref;
  int flag = 0;  ///< 0 = label_a group, 1 = label_b group
};

/// Tokens taking part in the comparison, in corpus order.
std::vector<SelectedToken> select_pairs(const ComparisonSpec& spec, const Corpus& corpus);

/// Jaccard overlap of the surface forms of the two groups.
double surface_overlap(const std::vector<SelectedToken>& selection, const Corpus& corpus);

inline constexpr double kMinSurfaceOverlap = 0.01;

}  // namespace prosyn
