#include "prosyn/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "prosyn/text_io.hpp"

namespace prosyn {

ReportFormat parse_report_format(std::string_view name) {
  if (name == "tsv") return ReportFormat::kTsv;
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  throw Error("unknown report format '" + std::string(name) + "' (expected tsv or markdown)");
}

std::string format_effect(double effect) {
  std::string s = io::format("%.4g", effect);
  if (s == "-0") s = "0";
  return s;
}

namespace {

std::string p_cell(const ReportCell& c) {
  if (c.skipped()) return "skipped";
  return c.result->stars;
}

std::string effect_cell(const ReportCell& c) {
  if (c.skipped()) return "---";
  if (c.result->stars == "ns") return "---";
  return format_effect(c.result->effect);
}

}  // namespace

std::string render_report(const std::vector<ReportCell>& cells, ReportFormat format,
                          const std::vector<std::string>& header) {
  std::vector<std::string> comparisons;
  std::vector<Outcome> outcomes;
  std::map<std::pair<std::string, Outcome>, const ReportCell*> lookup;
  for (const auto& c : cells) {
    if (std::find(comparisons.begin(), comparisons.end(), c.comparison) == comparisons.end())
      comparisons.push_back(c.comparison);
    if (std::find(outcomes.begin(), outcomes.end(), c.outcome) == outcomes.end())
      outcomes.push_back(c.outcome);
    lookup[{c.comparison, c.outcome}] = &c;
  }

  std::vector<std::vector<std::string>> rows;
  {
    std::vector<std::string> head = {"outcome", ""};
    head.insert(head.end(), comparisons.begin(), comparisons.end());
    rows.push_back(std::move(head));
  }
  for (Outcome o : outcomes) {
    std::vector<std::string> prow = {outcome_name(o), "p-value"};
    std::vector<std::string> erow = {"", std::string("effect in ") + outcome_unit(o)};
    for (const auto& name : comparisons) {
      const auto it = lookup.find({name, o});
      prow.push_back(it == lookup.end() ? "" : p_cell(*it->second));
      erow.push_back(it == lookup.end() ? "" : effect_cell(*it->second));
    }
    rows.push_back(std::move(prow));
    rows.push_back(std::move(erow));
  }

  std::ostringstream out;
  if (format == ReportFormat::kTsv) {
    for (const auto& h : header) out << "# " << h << "\n";
    for (const auto& row : rows) {
      for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "\t" : "") << row[k];
      out << "\n";
    }
    return out.str();
  }

  for (const auto& h : header) out << "<!-- " << h << " -->\n";
  if (!header.empty()) out << "\n";
  const auto emit = [&](const std::vector<std::string>& row) {
    out << "|";
    for (const auto& v : row) {
      std::string cell;
      for (char ch : v) {
        if (ch == '|') cell += '\\';
        cell += ch;
      }
      out << " " << cell << " |";
    }
    out << "\n";
  };
  emit(rows[0]);
  out << "|---|---|";
  for (std::size_t k = 0; k < comparisons.size(); ++k) out << "---:|";
  out << "\n";
  for (std::size_t i = 1; i < rows.size(); ++i) emit(rows[i]);
  out << "\nSignificance levels: ***: < .001, **: < .01, *: < .05; clearly non-significant: ns. "
         "Near-miss p-values are printed. Effect is positive iff first > last.\n";
  return out.str();
}

std::string render_cells_tsv(const std::vector<ReportCell>& cells) {
  std::ostringstream out;
  out << "comparison\toutcome\tn\tgroups\tlr_stat\tp\tp_adjusted\teffect\tunit\tstars\n";
  for (const auto& c : cells) {
    out << c.comparison << '\t' << outcome_name(c.outcome) << '\t' << c.n_rows << '\t'
        << c.n_groups << '\t';
    if (c.skipped()) {
      out << "\t\t\t\t" << outcome_unit(c.outcome) << "\tskipped\n";
      continue;
    }
    const TestResult& t = *c.result;
    out << io::format_double(t.lr_stat) << '\t' << io::format_double(t.p_value) << '\t'
        << io::format_double(t.p_adjusted) << '\t' << io::format_double(t.effect) << '\t'
        << outcome_unit(c.outcome) << '\t' << t.stars << '\n';
  }
  return out.str();
}

std::vector<ReportCell> parse_cells_tsv(std::string_view content, const std::string& name) {
  std::vector<ReportCell> cells;
  bool header_seen = false;
  for (const auto& line : io::lines(content)) {
    if (line.text.empty() || line.text.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.text.substr(0, 10) == "comparison") continue;
    }
    const auto f = io::split(line.text, '\t');
    if (f.size() != 10) throw ParseError(name, line.number, "expected 10 tab-separated fields");
    ReportCell c;
    c.comparison = std::string(f[0]);
    try {
      c.outcome = parse_outcome(f[1]);
    } catch (const Error& e) {
      throw ParseError(name, line.number, e.what());
    }
    const auto n = io::parse_int(f[2]);
    const auto g = io::parse_int(f[3]);
    if (!n || !g) throw ParseError(name, line.number, "invalid n or groups");
    c.n_rows = static_cast<std::size_t>(*n);
    c.n_groups = static_cast<std::size_t>(*g);
    if (f[9] == "skipped") {
      c.skip_reason = "skipped";
      cells.push_back(std::move(c));
      continue;
    }
    const auto lr = io::parse_double(f[4]);
    const auto p = io::parse_double(f[5]);
    const auto pa = io::parse_double(f[6]);
    const auto eff = io::parse_double(f[7]);
    if (!lr || !p || !pa || !eff) throw ParseError(name, line.number, "invalid numeric field");
    TestResult t;
    t.lr_stat = *lr;
    t.p_value = *p;
    t.p_adjusted = *pa;
    t.effect = *eff;
    t.stars = std::string(f[9]);
    c.result = t;
    cells.push_back(std::move(c));
  }
  return cells;
}

}  // namespace prosyn
