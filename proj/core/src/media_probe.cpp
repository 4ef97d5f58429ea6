#include "avbench/media_probe.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

namespace avbench {
namespace {

std::uint32_t be32(const std::byte* p) {
  return (std::to_integer<std::uint32_t>(p[0]) << 24) | (std::to_integer<std::uint32_t>(p[1]) << 16) |
         (std::to_integer<std::uint32_t>(p[2]) << 8) | std::to_integer<std::uint32_t>(p[3]);
}

std::uint64_t be64(const std::byte* p) {
  return (static_cast<std::uint64_t>(be32(p)) << 32) | be32(p + 4);
}

struct Box {
  char type[5] = {};
  std::span<const std::byte> payload;
};

// Children of a container payload; stops silently at the first malformed box.
std::vector<Box> children(std::span<const std::byte> data) {
  std::vector<Box> out;
  std::size_t pos = 0;
  while (pos + 8 <= data.size()) {
    std::uint64_t size = be32(data.data() + pos);
    std::size_t header = 8;
    if (size == 1) {
      if (pos + 16 > data.size()) break;
      size = be64(data.data() + pos + 8);
      header = 16;
    } else if (size == 0) {
      size = data.size() - pos;
    }
    if (size < header || pos + size > data.size()) break;
    Box box;
    std::memcpy(box.type, data.data() + pos + 4, 4);
    box.payload = data.subspan(pos + header, static_cast<std::size_t>(size) - header);
    out.push_back(box);
    pos += static_cast<std::size_t>(size);
  }
  return out;
}

const Box* child(const std::vector<Box>& boxes, const char* type) {
  for (const auto& b : boxes) {
    if (std::memcmp(b.type, type, 4) == 0) return &b;
  }
  return nullptr;
}

}  // namespace

std::optional<VideoInfo> parse_moov(std::span<const std::byte> moov) {
  for (const auto& trak : children(moov)) {
    if (std::memcmp(trak.type, "trak", 4) != 0) continue;
    const auto trak_children = children(trak.payload);
    const Box* mdia = child(trak_children, "mdia");
    if (!mdia) continue;
    const auto mdia_children = children(mdia->payload);
    const Box* hdlr = child(mdia_children, "hdlr");
    if (!hdlr || hdlr->payload.size() < 12 || std::memcmp(hdlr->payload.data() + 8, "vide", 4) != 0) continue;
    const Box* mdhd = child(mdia_children, "mdhd");
    const Box* minf = child(mdia_children, "minf");
    if (!mdhd || !minf || mdhd->payload.empty()) continue;

    std::uint32_t timescale = 0;
    std::uint64_t duration = 0;
    const auto* p = mdhd->payload.data();
    const auto version = std::to_integer<unsigned>(p[0]);
    if (version == 1) {
      if (mdhd->payload.size() < 32) continue;
      timescale = be32(p + 20);
      duration = be64(p + 24);
    } else {
      if (mdhd->payload.size() < 20) continue;
      timescale = be32(p + 12);
      duration = be32(p + 16);
    }

    const auto minf_children = children(minf->payload);
    const Box* stbl = child(minf_children, "stbl");
    if (!stbl) continue;
    const auto stbl_children = children(stbl->payload);
    const Box* stsz = child(stbl_children, "stsz");
    if (!stsz || stsz->payload.size() < 12) continue;
    const std::uint32_t sample_count = be32(stsz->payload.data() + 8);

    VideoInfo info;
    info.n_frames = sample_count;
    if (timescale > 0 && duration > 0) {
      const double seconds = static_cast<double>(duration) / timescale;
      info.duration_ms = std::llround(seconds * 1000.0);
      info.fps = sample_count / seconds;
    }
    return info;
  }
  return std::nullopt;
}

std::optional<VideoInfo> probe_video(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  in.seekg(0, std::ios::end);
  const auto file_size = static_cast<std::uint64_t>(in.tellg());
  std::uint64_t pos = 0;
  while (pos + 8 <= file_size) {
    in.seekg(static_cast<std::streamoff>(pos));
    unsigned char header[16];
    if (!in.read(reinterpret_cast<char*>(header), 8)) return std::nullopt;
    auto bytes = reinterpret_cast<const std::byte*>(header);
    std::uint64_t size = be32(bytes);
    std::uint64_t header_len = 8;
    if (size == 1) {
      if (!in.read(reinterpret_cast<char*>(header + 8), 8)) return std::nullopt;
      size = be64(bytes + 8);
      header_len = 16;
    } else if (size == 0) {
      size = file_size - pos;
    }
    if (size < header_len || pos + size > file_size) return std::nullopt;
    if (std::memcmp(header + 4, "moov", 4) == 0) {
      std::vector<std::byte> payload(static_cast<std::size_t>(size - header_len));
      in.seekg(static_cast<std::streamoff>(pos + header_len));
      if (!in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()))) {
        return std::nullopt;
      }
      return parse_moov(payload);
    }
    pos += size;
  }
  return std::nullopt;
}

}  // namespace avbench
