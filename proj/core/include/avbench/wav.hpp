#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace avbench {

enum class SampleEncoding { pcm16, float32 };

/// Interleaved WAV content exactly as stored, scaled to float.
/// PCM16 values are s / 32768 so a write-back is bit-exact.
struct WavData {
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 1;
  SampleEncoding encoding = SampleEncoding::pcm16;
  std::vector<float> interleaved;

  std::size_t frames() const noexcept { return channels ? interleaved.size() / channels : 0; }
  friend bool operator==(const WavData&, const WavData&) = default;
};

/// Parses RIFF/WAVE bytes. Accepts PCM 16-bit and IEEE float 32-bit, mono or
/// stereo, including WAVE_FORMAT_EXTENSIBLE wrappers of those two. Throws
/// Error{malformed_riff | unsupported_encoding | truncated_data}.
WavData parse_wav(std::span<const std::byte> bytes);
WavData read_wav(const std::filesystem::path& path);

std::vector<std::byte> serialize_wav(const WavData& wav);
void write_wav(const std::filesystem::path& path, const WavData& wav);

/// Drops the first `frames` frames (clamped to the total).
WavData drop_leading_frames(const WavData& wav, std::size_t frames);

}  // namespace avbench
