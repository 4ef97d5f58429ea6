#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>

namespace avbench {

struct VideoInfo {
  std::int64_t n_frames = 0;
  double fps = 0.0;
  std::int64_t duration_ms = 0;
};

/// Frame count and rate of the first video track of an ISO-BMFF (MP4/MOV)
/// file, read from the moov box (stsz sample count, mdhd timescale and
/// duration). nullopt when the container carries no usable video track.
std::optional<VideoInfo> probe_video(const std::filesystem::path& path);

/// Same, over the bytes of a moov box payload.
std::optional<VideoInfo> parse_moov(std::span<const std::byte> moov);

}  // namespace avbench
