#include "prosyn/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>

#include "prosyn/error.hpp"
#include "prosyn/text_io.hpp"

namespace prosyn {

namespace {

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

PcmAudio read_wav(const std::filesystem::path& path) {
  const std::string bytes = io::read_file(path);
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();
  const auto fail = [&](const std::string& what) { throw Error(path.string() + ": " + what); };
  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0)
    fail("not a RIFF/WAVE file");

  int channels = 0, bits = 0, format = 0;
  int rate = 0;
  const unsigned char* pcm = nullptr;
  std::size_t pcm_bytes = 0;
  std::size_t off = 12;
  while (off + 8 <= size) {
    const std::uint32_t chunk = le32(data + off + 4);
    const unsigned char* body = data + off + 8;
    if (off + 8 + chunk > size) fail("truncated chunk");
    if (std::memcmp(data + off, "fmt ", 4) == 0) {
      if (chunk < 16) fail("short fmt chunk");
      format = le16(body);
      channels = le16(body + 2);
      rate = static_cast<int>(le32(body + 4));
      bits = le16(body + 14);
    } else if (std::memcmp(data + off, "data", 4) == 0) {
      pcm = body;
      pcm_bytes = chunk;
    }
    off += 8 + chunk + (chunk & 1u);
  }
  if (format == 0 || pcm == nullptr) fail("missing fmt or data chunk");
  if (format != 1) fail("only linear PCM is supported");
  if (channels != 1) fail("expected mono audio, found " + std::to_string(channels) + " channels");
  if (bits != 16) fail("expected 16-bit samples, found " + std::to_string(bits));

  PcmAudio audio;
  audio.sample_rate_hz = rate;
  audio.samples.resize(pcm_bytes / 2);
  for (std::size_t i = 0; i < audio.samples.size(); ++i) {
    const auto v = static_cast<std::int16_t>(le16(pcm + 2 * i));
    audio.samples[i] = static_cast<double>(v) / 32768.0;
  }
  return audio;
}

void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               int sample_rate_hz) {
  std::string out;
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(sample_rate_hz));
  put32(out, static_cast<std::uint32_t>(sample_rate_hz) * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, data_bytes);
  for (double s : samples) {
    const double c = std::clamp(s, -1.0, 1.0);
    const auto v = static_cast<std::int16_t>(std::lround(c * 32767.0));
    put16(out, static_cast<std::uint16_t>(v));
  }
  io::write_file(path, out);
}

}  // namespace prosyn
