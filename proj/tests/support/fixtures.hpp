#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "avbench/audio.hpp"
#include "avbench/manifest.hpp"
#include "avbench/protocol.hpp"
#include "avbench/wav.hpp"

namespace avbench::testing {

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// `silence_ms` of digital zeros, then a 440 Hz sine of amplitude 0.5*gain
/// up to `total_ms`. silence_ms >= total_ms gives an all-zero track.
AudioTrack planted_track(std::uint32_t sample_rate, double silence_ms, double total_ms, double gain = 1.0);

void write_track(const std::filesystem::path& path, const AudioTrack& track, SampleEncoding encoding);

/// Manifest of `identities` identities, each contributing one real sample
/// and `per_combo` samples of every fake combo in the taxonomy. Identity
/// sizes are therefore uniform.
Manifest synthetic_manifest(const Taxonomy& taxonomy, std::size_t identities, std::size_t per_combo = 1,
                            std::size_t reals_per_identity = 1);

/// Same, with provided phases: every `test_every`-th identity is provided test.
Manifest synthetic_deepspeak(std::size_t identities, std::size_t test_every = 4);

/// Identities on the train/val side and on the test side of an instance.
std::vector<std::string> identity_overlap(const ProtocolInstance& instance);

std::string read_file(const std::filesystem::path& path);

}  // namespace avbench::testing
