#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace prosyn {

struct PcmAudio {
  int sample_rate_hz = 0;
  std::vector<double> samples;  ///< mono, scaled to [-1, 1]
};

/// Reads a 16-bit linear PCM mono RIFF/WAVE file. Stereo and other sample
/// formats are rejected with prosyn::Error.
PcmAudio read_wav(const std::filesystem::path& path);

/// Writes 16-bit mono PCM; samples are clipped to [-1, 1].
void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               int sample_rate_hz);

}  // namespace prosyn
