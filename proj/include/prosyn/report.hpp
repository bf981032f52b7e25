#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "prosyn/pipeline.hpp"

namespace prosyn {

enum class ReportFormat { kTsv, kMarkdown };

ReportFormat parse_report_format(std::string_view name);

/// Table in the layout of the reference results table: outcomes as row
/// pairs (p-value, effect), comparisons as columns. Non-significant effects
/// print "---". `header` lines are emitted as comments.
std::string render_report(const std::vector<ReportCell>& cells, ReportFormat format,
                          const std::vector<std::string>& header = {});

/// Machine-readable dump, one cell per line:
/// comparison, outcome, n, groups, lr_stat, p, p_adjusted, effect, unit, stars.
std::string render_cells_tsv(const std::vector<ReportCell>& cells);
std::vector<ReportCell> parse_cells_tsv(std::string_view content, const std::string& name);

/// Effect as printed in the human-readable table.
std::string format_effect(double effect);

}  // namespace prosyn
