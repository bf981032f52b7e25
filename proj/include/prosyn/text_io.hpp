#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prosyn::io {

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

/// Reads a whole file; throws prosyn::Error if it cannot be opened.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);
/// printf-style fixed formatting helper.
std::string format(const char* fmt, double v);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// FNV-1a, used for content hashes of corpus files.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 1469598103934665603ULL);
std::string hex64(std::uint64_t v);

/// Lines of a text file with their 1-based line numbers; '\r' stripped.
struct Line {
  std::size_t number;
  std::string_view text;
};
std::vector<Line> lines(std::string_view content);
// The views would dangle.
std::vector<Line> lines(std::string&& content) = delete;

}  // namespace prosyn::io
