#include "avbench/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "avbench/error.hpp"

namespace avbench {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const std::byte* p) {
  return static_cast<std::uint16_t>(std::to_integer<unsigned>(p[0]) |
                                    (std::to_integer<unsigned>(p[1]) << 8));
}

std::uint32_t le32(const std::byte* p) {
  return std::to_integer<std::uint32_t>(p[0]) | (std::to_integer<std::uint32_t>(p[1]) << 8) |
         (std::to_integer<std::uint32_t>(p[2]) << 16) | (std::to_integer<std::uint32_t>(p[3]) << 24);
}

bool tag_is(const std::byte* p, const char* tag) { return std::memcmp(p, tag, 4) == 0; }

struct FormatChunk {
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits_per_sample = 0;
};

FormatChunk parse_fmt(const std::byte* p, std::uint32_t size) {
  if (size < 16) throw Error(Errc::malformed_riff, "fmt chunk shorter than 16 bytes");
  FormatChunk fmt;
  fmt.format_tag = le16(p);
  fmt.channels = le16(p + 2);
  fmt.sample_rate = le32(p + 4);
  fmt.block_align = le16(p + 12);
  fmt.bits_per_sample = le16(p + 14);
  if (fmt.format_tag == kFormatExtensible) {
    if (size < 40) throw Error(Errc::malformed_riff, "extensible fmt chunk shorter than 40 bytes");
    // First two bytes of the sub-format GUID carry the real format tag.
    fmt.format_tag = le16(p + 24);
  }
  return fmt;
}

void write_le16(std::vector<std::byte>& out, std::uint16_t v) {
  out.push_back(static_cast<std::byte>(v & 0xFF));
  out.push_back(static_cast<std::byte>(v >> 8));
}

void write_le32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
}

void write_tag(std::vector<std::byte>& out, const char* tag) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(tag[i]));
}

}  // namespace

WavData parse_wav(std::span<const std::byte> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes.data(), "RIFF") || !tag_is(bytes.data() + 8, "WAVE")) {
    throw Error(Errc::malformed_riff, "missing RIFF/WAVE magic");
  }
  const std::uint32_t riff_size = le32(bytes.data() + 4);
  if (riff_size < 4) throw Error(Errc::malformed_riff, "RIFF size smaller than WAVE tag");
  // Tolerate a RIFF size that overshoots the buffer; chunk bounds are checked below.
  const std::size_t end = std::min<std::size_t>(bytes.size(), std::size_t{8} + riff_size);

  std::optional<FormatChunk> fmt;
  std::size_t pos = 12;
  while (pos + 8 <= end) {
    const std::byte* header = bytes.data() + pos;
    const std::uint32_t chunk_size = le32(header + 4);
    const std::size_t body = pos + 8;
    if (tag_is(header, "fmt ")) {
      if (body + chunk_size > end) throw Error(Errc::malformed_riff, "fmt chunk exceeds file");
      fmt = parse_fmt(bytes.data() + body, chunk_size);
    } else if (tag_is(header, "data")) {
      if (!fmt) throw Error(Errc::malformed_riff, "data chunk before fmt chunk");
      if (fmt->channels < 1 || fmt->channels > 2) {
        throw Error(Errc::unsupported_encoding,
                    std::to_string(fmt->channels) + " channels (only mono/stereo supported)");
      }
      SampleEncoding encoding;
      if (fmt->format_tag == kFormatPcm && fmt->bits_per_sample == 16) {
        encoding = SampleEncoding::pcm16;
      } else if (fmt->format_tag == kFormatFloat && fmt->bits_per_sample == 32) {
        encoding = SampleEncoding::float32;
      } else {
        throw Error(Errc::unsupported_encoding,
                    "format tag " + std::to_string(fmt->format_tag) + " with " +
                        std::to_string(fmt->bits_per_sample) + " bits per sample");
      }
      if (fmt->sample_rate == 0) throw Error(Errc::malformed_riff, "zero sample rate");
      const std::size_t bytes_per_sample = encoding == SampleEncoding::pcm16 ? 2 : 4;
      if (fmt->block_align != bytes_per_sample * fmt->channels) {
        throw Error(Errc::malformed_riff, "block align inconsistent with channels and bit depth");
      }
      if (body + chunk_size > bytes.size()) {
        throw Error(Errc::truncated_data, "data chunk declares " + std::to_string(chunk_size) +
                                              " bytes but only " +
                                              std::to_string(bytes.size() - body) + " remain");
      }
      const std::size_t frames = chunk_size / fmt->block_align;
      WavData wav;
      wav.sample_rate = fmt->sample_rate;
      wav.channels = fmt->channels;
      wav.encoding = encoding;
      wav.interleaved.resize(frames * fmt->channels);
      const std::byte* src = bytes.data() + body;
      for (std::size_t i = 0; i < wav.interleaved.size(); ++i) {
        if (encoding == SampleEncoding::pcm16) {
          auto s = static_cast<std::int16_t>(le16(src + 2 * i));
          wav.interleaved[i] = static_cast<float>(s) / 32768.0f;
        } else {
          float f = std::bit_cast<float>(le32(src + 4 * i));
          if (!std::isfinite(f)) f = 0.0f;
          wav.interleaved[i] = std::clamp(f, -1.0f, 1.0f);
        }
      }
      return wav;
    }
    // Chunks are word aligned.
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (!fmt) throw Error(Errc::malformed_riff, "no fmt chunk");
  throw Error(Errc::malformed_riff, "no data chunk");
}

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_wav(std::as_bytes(std::span<const char>(raw)));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::byte> serialize_wav(const WavData& wav) {
  const bool pcm = wav.encoding == SampleEncoding::pcm16;
  const std::uint16_t bytes_per_sample = pcm ? 2 : 4;
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(wav.interleaved.size() * bytes_per_sample);
  std::vector<std::byte> out;
  out.reserve(44 + data_size);
  write_tag(out, "RIFF");
  write_le32(out, 36 + data_size + (data_size & 1u));
  write_tag(out, "WAVE");
  write_tag(out, "fmt ");
  write_le32(out, 16);
  write_le16(out, pcm ? kFormatPcm : kFormatFloat);
  write_le16(out, wav.channels);
  write_le32(out, wav.sample_rate);
  write_le32(out, wav.sample_rate * wav.channels * bytes_per_sample);
  write_le16(out, static_cast<std::uint16_t>(wav.channels * bytes_per_sample));
  write_le16(out, static_cast<std::uint16_t>(bytes_per_sample * 8));
  write_tag(out, "data");
  write_le32(out, data_size);
  for (float x : wav.interleaved) {
    if (pcm) {
      long q = std::lround(static_cast<double>(x) * 32768.0);
      q = std::clamp(q, -32768L, 32767L);
      write_le16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    } else {
      write_le32(out, std::bit_cast<std::uint32_t>(x));
    }
  }
  if (data_size & 1u) out.push_back(std::byte{0});
  return out;
}

void write_wav(const std::filesystem::path& path, const WavData& wav) {
  const auto bytes = serialize_wav(wav);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

WavData drop_leading_frames(const WavData& wav, std::size_t frames) {
  WavData out = wav;
  const std::size_t drop = std::min(frames, wav.frames()) * wav.channels;
  out.interleaved.erase(out.interleaved.begin(), out.interleaved.begin() + static_cast<std::ptrdiff_t>(drop));
  return out;
}

}  // namespace avbench
