#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

namespace prosyn {

struct Frame {
  std::optional<double> f0_hz;  ///< empty when unvoiced
  double power_db = 0.0;
  bool operator==(const Frame&) const = default;
};

/// Equally spaced analysis frames. Frame i is stamped at start_ms + i * frame_shift_ms.
struct FrameTrack {
  double frame_shift_ms = 10.0;
  double start_ms = 0.0;
  std::vector<Frame> frames;

  double time_of(std::size_t i) const { return start_ms + static_cast<double>(i) * frame_shift_ms; }
  /// End of the covered interval: one shift past the last frame stamp.
  double end_ms() const { return time_of(frames.size()); }
  /// Half-open index range of frames stamped inside [begin_ms, end_ms).
  std::pair<std::size_t, std::size_t> frames_in(double begin_ms, double end_ms) const;

  bool operator==(const FrameTrack&) const = default;
};

/// Frame-track TSV: `time_ms  f0_hz  power_db`, empty f0 = unvoiced. The
/// frame shift is taken from an optional `# frame_shift_ms=` header, else
/// inferred from the first two rows.
FrameTrack load_frame_track(const std::filesystem::path& path);
FrameTrack parse_frame_track(std::string_view content, const std::string& name);
void save_frame_track(const FrameTrack& track, const std::filesystem::path& path);
std::string render_frame_track(const FrameTrack& track);

}  // namespace prosyn
