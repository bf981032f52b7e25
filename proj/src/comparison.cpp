#include "prosyn/comparison.hpp"

#include <cctype>

namespace prosyn {

namespace {

class QueryParser {
 public:
  explicit QueryParser(std::string_view text) : text_(text) {}

  ComparisonSpec parse() {
    ComparisonSpec spec;
    const std::string first = label();
    skip_ws();
    if (peek() == '~') {
      ++pos_;
      spec.kind = ComparisonKind::kDirect;
      spec.label_a = first;
      spec.label_b = label();
      label_b_column_ = last_label_column_;
    } else if (text_.substr(pos_, 2) == "->") {
      pos_ += 2;
      spec.kind = ComparisonKind::kAttached;
      spec.child_label = first;
      expect('(');
      spec.label_a = label();
      expect('~');
      spec.label_b = label();
      label_b_column_ = last_label_column_;
      expect(')');
    } else {
      fail("expected '~' or '->'");
    }
    skip_ws();
    if (peek() == '[') spec.pos_whitelist = pos_filter();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    if (spec.label_a == spec.label_b) {
      pos_ = label_b_column_;
      fail("the two compared labels are identical ('" + spec.label_a + "')");
    }
    return spec;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw QueryError(pos_ + 1, pos_ >= text_.size() ? what + " (end of input)" : what);
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string label() {
    skip_ws();
    const std::size_t begin = pos_;
    last_label_column_ = begin;
    while (pos_ < text_.size() && text_[pos_] >= 'a' && text_[pos_] <= 'z') ++pos_;
    if (pos_ == begin) fail("expected a dependency label [a-z]+");
    return std::string(text_.substr(begin, pos_ - begin));
  }

  std::set<std::string> pos_filter() {
    expect('[');
    skip_ws();
    if (text_.substr(pos_, 3) != "pos") fail("expected 'pos='");
    pos_ += 3;
    expect('=');
    std::set<std::string> tags;
    while (true) {
      skip_ws();
      const std::size_t begin = pos_;
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
             text_[pos_] != '|' && text_[pos_] != ']' && text_[pos_] != '[')
        ++pos_;
      if (pos_ == begin) fail("expected a POS tag");
      tags.insert(std::string(text_.substr(begin, pos_ - begin)));
      skip_ws();
      if (peek() == '|') {
        ++pos_;
        continue;
      }
      break;
    }
    expect(']');
    return tags;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t last_label_column_ = 0;
  std::size_t label_b_column_ = 0;
};

}  // namespace

std::string ComparisonSpec::name() const {
  std::string out;
  if (kind == ComparisonKind::kAttached)
    out = child_label.value_or("") + "->(" + label_a + "~" + label_b + ")";
  else
    out = label_a + "~" + label_b;
  if (pos_whitelist) {
    out += "[pos=";
    bool first = true;
    for (const auto& t : *pos_whitelist) {
      if (!first) out += "|";
      out += t;
      first = false;
    }
    out += "]";
  }
  return out;
}

ComparisonSpec ComparisonSpec::swapped() const {
  ComparisonSpec s = *this;
  std::swap(s.label_a, s.label_b);
  return s;
}

ComparisonSpec parse_comparison(std::string_view query) { return QueryParser(query).parse(); }

const std::set<std::string>& nominal_pos_tags() {
  static const std::set<std::string> tags = {"NE", "NN", "PDS", "PIS", "PPER"};
  return tags;
}

std::vector<ComparisonSpec> table1_presets() {
  std::vector<ComparisonSpec> out;
  for (const char* q : {"subj~obja", "det->(subj~obja)", "attr->(subj~obja)", "s~neb", "s~rel",
                        "s~aux", "aux->(s~neb)", "aux->(s~rel)", "aux->(s~aux)"})
    out.push_back(parse_comparison(q));
  out[0].pos_whitelist = nominal_pos_tags();
  return out;
}

std::vector<ComparisonSpec> resolve_comparisons(std::string_view query) {
  auto q = query;
  if (q.substr(0, 7) == "preset:") q.remove_prefix(7);
  if (q == "table1") return table1_presets();
  if (query.substr(0, 7) == "preset:")
    throw Error("unknown preset '" + std::string(q) + "' (available: table1)");
  return {parse_comparison(query)};
}

std::vector<SelectedToken> select_pairs(const ComparisonSpec& spec, const Corpus& corpus) {
  std::vector<SelectedToken> out;
  for (std::size_t r = 0; r < corpus.recordings.size(); ++r) {
    const auto& rec = corpus.recordings[r];
    for (std::size_t s = 0; s < rec.sentences.size(); ++s) {
      const auto& sent = rec.sentences[s];
      for (std::size_t t = 0; t < sent.tokens.size(); ++t) {
        const Token& tok = sent.tokens[t];
        if (spec.pos_whitelist && !spec.pos_whitelist->count(tok.pos)) continue;
        const std::string* role = nullptr;
        if (spec.kind == ComparisonKind::kDirect) {
          role = &tok.deprel;
        } else {
          if (tok.deprel != spec.child_label || tok.head == 0) continue;
          role = &sent.token(tok.head).deprel;
        }
        int flag = -1;
        if (*role == spec.label_a) flag = 0;
        else if (*role == spec.label_b) flag = 1;
        if (flag >= 0) out.push_back({{r, s, t}, flag});
      }
    }
  }
  return out;
}

double surface_overlap(const std::vector<SelectedToken>& selection, const Corpus& corpus) {
  std::set<std::string> a, b;
  for (const auto& sel : selection) {
    const auto& tok =
        corpus.recordings[sel.ref.recording].sentences[sel.ref.sentence].tokens[sel.ref.token];
    (sel.flag == 0 ? a : b).insert(tok.surface);
  }
  std::size_t common = 0;
  for (const auto& w : a) common += b.count(w);
  const std::size_t uni = a.size() + b.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

}  // namespace prosyn
