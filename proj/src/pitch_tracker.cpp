#include "prosyn/pitch_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "prosyn/error.hpp"

namespace prosyn {

namespace {

struct Framing {
  long hop = 0;
  long window = 0;
  long min_lag = 0;
  long max_lag = 0;
  long n_frames = 0;
};

Framing make_framing(std::size_t n_samples, int rate, const PitchConfig& c) {
  if (n_samples == 0) throw Error("track_pitch: empty signal");
  if (rate < kMinSampleRateHz)
    throw Error("track_pitch: sample rate " + std::to_string(rate) + " Hz is below " +
                std::to_string(kMinSampleRateHz) + " Hz");
  if (!(c.frame_shift_ms > 0) || !(c.window_ms > 0) || !(c.min_f0_hz > 0) ||
      !(c.max_f0_hz > c.min_f0_hz))
    throw Error("track_pitch: invalid configuration");
  Framing f;
  f.hop = std::max(1L, std::lround(c.frame_shift_ms * rate / 1000.0));
  f.window = std::max(2L, std::lround(c.window_ms * rate / 1000.0));
  f.min_lag = std::max(2L, static_cast<long>(std::floor(rate / c.max_f0_hz)));
  f.max_lag = static_cast<long>(std::ceil(rate / c.min_f0_hz));
  const long n = static_cast<long>(n_samples);
  f.n_frames = (n + f.hop - 1) / f.hop;
  return f;
}

// Normalized autocorrelation of x at `lag` over the overlapping part.
double nacf(const std::vector<double>& x, long lag) {
  const long len = static_cast<long>(x.size());
  double cross = 0.0, e0 = 0.0, e1 = 0.0;
  for (long i = 0; i + lag < len; ++i) {
    cross += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i + lag)];
    e0 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    e1 += x[static_cast<std::size_t>(i + lag)] * x[static_cast<std::size_t>(i + lag)];
  }
  const double denom = std::sqrt(e0 * e1);
  return denom > 0 ? cross / denom : 0.0;
}

Frame analyze_frame(std::span<const double> samples, int rate, const Framing& fr,
                    const PitchConfig& c, long index) {
  const long n = static_cast<long>(samples.size());
  const long centre = index * fr.hop;
  const long begin = std::max(0L, centre - fr.window / 2);
  const long end = std::min(n, centre - fr.window / 2 + fr.window);

  std::vector<double> x(samples.begin() + begin, samples.begin() + end);
  double energy = 0.0, mean = 0.0;
  for (double v : x) {
    energy += v * v;
    mean += v;
  }
  const double mean_square = energy / static_cast<double>(x.size());
  mean /= static_cast<double>(x.size());

  Frame frame;
  frame.power_db = 10.0 * std::log10(mean_square + 1e-12);
  const double rms_db = mean_square > 0 ? 10.0 * std::log10(mean_square) : -300.0;
  if (rms_db < c.silence_floor_db) return frame;

  for (double& v : x) v -= mean;
  const long len = static_cast<long>(x.size());
  const long max_lag = std::min(fr.max_lag, len / 2);
  if (max_lag <= fr.min_lag) return frame;

  // r[k] holds the lag min_lag - 1 + k so that both neighbours of every
  // candidate are available for interpolation.
  std::vector<double> r(static_cast<std::size_t>(max_lag - fr.min_lag + 3));
  for (long lag = fr.min_lag - 1; lag <= max_lag + 1; ++lag)
    r[static_cast<std::size_t>(lag - fr.min_lag + 1)] = nacf(x, lag);
  const auto at = [&](long lag) { return r[static_cast<std::size_t>(lag - fr.min_lag + 1)]; };

  double best = -1.0;
  for (long lag = fr.min_lag; lag <= max_lag; ++lag) best = std::max(best, at(lag));
  if (best < c.voicing_threshold) return frame;

  // Shortest-period local maximum close to the global one; avoids picking
  // a multiple of the true period.
  long chosen = -1;
  for (long lag = fr.min_lag; lag <= max_lag; ++lag) {
    const double v = at(lag);
    if (v >= at(lag - 1) && v >= at(lag + 1) && v >= 0.9 * best) {
      chosen = lag;
      break;
    }
  }
  if (chosen < 0) return frame;
  if (at(chosen) < c.voicing_threshold) return frame;

  const double a = at(chosen - 1), b = at(chosen), d = at(chosen + 1);
  const double curvature = a - 2.0 * b + d;
  double offset = curvature < 0 ? 0.5 * (a - d) / curvature : 0.0;
  offset = std::clamp(offset, -0.5, 0.5);
  const double period = static_cast<double>(chosen) + offset;
  const double f0 = rate / period;
  if (f0 < c.min_f0_hz * 0.95 || f0 > c.max_f0_hz * 1.05) return frame;
  frame.f0_hz = f0;
  return frame;
}

void median_smooth(FrameTrack& track) {
  const auto& in = track.frames;
  std::vector<Frame> out = in;
  for (std::size_t i = 1; i + 1 < in.size(); ++i) {
    if (!in[i - 1].f0_hz || !in[i].f0_hz || !in[i + 1].f0_hz) continue;
    double v[3] = {*in[i - 1].f0_hz, *in[i].f0_hz, *in[i + 1].f0_hz};
    std::sort(v, v + 3);
    out[i].f0_hz = v[1];
  }
  track.frames = std::move(out);
}

FrameTrack make_track(const Framing& fr, const PitchConfig& c) {
  FrameTrack track;
  track.frame_shift_ms = c.frame_shift_ms;
  track.start_ms = 0.0;
  track.frames.resize(static_cast<std::size_t>(fr.n_frames));
  return track;
}

}  // namespace

FrameTrack track_pitch(std::span<const double> samples, int sample_rate_hz,
                       const PitchConfig& config) {
  const Framing fr = make_framing(samples.size(), sample_rate_hz, config);
  FrameTrack track = make_track(fr, config);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < fr.n_frames; ++i)
    track.frames[static_cast<std::size_t>(i)] =
        analyze_frame(samples, sample_rate_hz, fr, config, i);
  if (config.median_filter) median_smooth(track);
  return track;
}

FrameTrack track_pitch_serial(std::span<const double> samples, int sample_rate_hz,
                              const PitchConfig& config) {
  const Framing fr = make_framing(samples.size(), sample_rate_hz, config);
  FrameTrack track = make_track(fr, config);
  for (long i = 0; i < fr.n_frames; ++i)
    track.frames[static_cast<std::size_t>(i)] =
        analyze_frame(samples, sample_rate_hz, fr, config, i);
  if (config.median_filter) median_smooth(track);
  return track;
}

}  // namespace prosyn
