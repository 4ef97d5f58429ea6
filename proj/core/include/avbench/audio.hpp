#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "avbench/wav.hpp"

namespace avbench {

/// Mono PCM audio normalized to [-1, 1].
struct AudioTrack {
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 1;  // channel count of the source before downmix
  std::vector<double> samples;

  /// round(1000 * len / sample_rate)
  std::int64_t duration_ms() const noexcept;
  friend bool operator==(const AudioTrack&, const AudioTrack&) = default;
};

/// Stereo is averaged per frame.
AudioTrack downmix(const WavData& wav);
AudioTrack decode_wav(const std::filesystem::path& path);

/// Mono PCM16/float32 WAV carrying the track's samples.
WavData to_wav(const AudioTrack& track, SampleEncoding encoding = SampleEncoding::pcm16);

inline constexpr double kRmsFloor = 1e-10;
inline constexpr double kDefaultWindowMs = 10.0;
inline constexpr double kDefaultHopMs = 5.0;

struct EnergyProfile {
  double window_ms = kDefaultWindowMs;
  double hop_ms = kDefaultHopMs;
  std::uint32_t sample_rate = 0;
  std::size_t window_samples = 0;
  std::size_t hop_samples = 0;
  std::size_t total_samples = 0;
  std::int64_t duration_ms = 0;
  /// 20 log10(max(rms, kRmsFloor)) per window, in dBFS.
  std::vector<double> rms_db;

  std::size_t n_windows() const noexcept { return rms_db.size(); }
  double window_start_ms(std::size_t i) const noexcept;
};

/// Windows are placed every hop while they fit entirely; a track shorter than
/// one window yields a single zero-padded window. Throws empty_track.
EnergyProfile energy_profile(const AudioTrack& track, double window_ms = kDefaultWindowMs,
                             double hop_ms = kDefaultHopMs);

}  // namespace avbench
