#include "prosyn/frame_track.hpp"

#include <cmath>
#include <sstream>

#include "prosyn/error.hpp"
#include "prosyn/text_io.hpp"

namespace prosyn {

std::pair<std::size_t, std::size_t> FrameTrack::frames_in(double begin_ms, double end_ms) const {
  const std::size_t n = frames.size();
  const auto first_at_or_after = [&](double t) {
    double guess = std::ceil((t - start_ms) / frame_shift_ms);
    std::size_t i = guess <= 0 ? 0 : std::min(n, static_cast<std::size_t>(guess));
    while (i < n && time_of(i) < t) ++i;
    while (i > 0 && time_of(i - 1) >= t) --i;
    return i;
  };
  const std::size_t lo = first_at_or_after(begin_ms);
  const std::size_t hi = first_at_or_after(end_ms);
  return {lo, std::max(lo, hi)};
}

FrameTrack parse_frame_track(std::string_view content, const std::string& name) {
  FrameTrack track;
  std::optional<double> declared_shift;
  std::vector<double> times;
  std::vector<std::size_t> line_numbers;
  for (const auto& line : io::lines(content)) {
    if (line.text.empty()) continue;
    if (line.text.front() == '#') {
      const auto key = line.text.find("frame_shift_ms=");
      if (key != std::string_view::npos) {
        auto rest = line.text.substr(key + 15);
        rest = rest.substr(0, rest.find_first_of(" \t"));
        declared_shift = io::parse_double(rest);
        if (!declared_shift || *declared_shift <= 0)
          throw ParseError(name, line.number, "invalid frame_shift_ms header");
      }
      continue;
    }
    const auto f = io::split(line.text, '\t');
    if (f.size() != 3)
      throw ParseError(name, line.number,
                       "expected 3 tab-separated fields, found " + std::to_string(f.size()));
    const auto t = io::parse_double(f[0]);
    const auto p = io::parse_double(f[2]);
    if (!t) throw ParseError(name, line.number, "invalid time_ms");
    if (!p) throw ParseError(name, line.number, "invalid power_db");
    Frame frame;
    frame.power_db = *p;
    if (!io::trim(f[1]).empty()) {
      const auto f0 = io::parse_double(f[1]);
      if (!f0 || !(*f0 > 0)) throw ParseError(name, line.number, "f0_hz must be positive or empty");
      frame.f0_hz = *f0;
    }
    times.push_back(*t);
    line_numbers.push_back(line.number);
    track.frames.push_back(frame);
  }
  if (times.empty()) throw ParseError(name, 0, "frame track has no rows");
  if (!declared_shift && times.size() < 2)
    throw ParseError(name, line_numbers[0], "cannot infer frame shift from a single row");
  const double shift = declared_shift ? *declared_shift : times[1] - times[0];
  if (!(shift > 0))
    throw ParseError(name, line_numbers[1], "row 2: time is not increasing");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double step = times[i] - times[i - 1];
    if (!(step > 0))
      throw ParseError(name, line_numbers[i],
                       "row " + std::to_string(i + 1) + ": time is not increasing");
    if (std::abs(step - shift) > 1e-6)
      throw ParseError(name, line_numbers[i],
                       "row " + std::to_string(i + 1) + ": spacing " + io::format_double(step) +
                           " ms differs from frame shift " + io::format_double(shift) + " ms");
  }
  track.frame_shift_ms = shift;
  track.start_ms = times[0];
  return track;
}

FrameTrack load_frame_track(const std::filesystem::path& path) {
  return parse_frame_track(io::read_file(path), path.string());
}

std::string render_frame_track(const FrameTrack& track) {
  std::ostringstream out;
  out << "# frame_shift_ms=" << io::format_double(track.frame_shift_ms) << "\n";
  out << "# time_ms\tf0_hz\tpower_db\n";
  for (std::size_t i = 0; i < track.frames.size(); ++i) {
    const Frame& f = track.frames[i];
    out << io::format_double(track.time_of(i)) << '\t'
        << (f.f0_hz ? io::format_double(*f.f0_hz) : "") << '\t' << io::format_double(f.power_db)
        << '\n';
  }
  return out.str();
}

void save_frame_track(const FrameTrack& track, const std::filesystem::path& path) {
  io::write_file(path, render_frame_track(track));
}

}  // namespace prosyn
