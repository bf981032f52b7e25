#pragma once

#include <span>

#include "prosyn/frame_track.hpp"

namespace prosyn {

struct PitchConfig {
  double frame_shift_ms = 10.0;
  double window_ms = 40.0;
  double min_f0_hz = 60.0;
  double max_f0_hz = 400.0;
  double voicing_threshold = 0.45;  ///< minimum peak normalized autocorrelation
  double silence_floor_db = -60.0;  ///< window RMS level below which a frame is unvoiced
  bool median_filter = true;        ///< 3-point median over the voiced contour
};

inline constexpr int kMinSampleRateHz = 8000;

/// Normalized-autocorrelation pitch and power tracker. Frames are centred at
/// multiples of the frame shift starting at 0 ms; edge windows are clipped
/// to the signal. Frames are analysed in parallel.
FrameTrack track_pitch(std::span<const double> samples, int sample_rate_hz,
                       const PitchConfig& config = {});

/// Same result as track_pitch, single-threaded. Kept as the reference for
/// tests and benchmarks.
FrameTrack track_pitch_serial(std::span<const double> samples, int sample_rate_hz,
                              const PitchConfig& config = {});

}  // namespace prosyn
