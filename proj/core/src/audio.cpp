#include "avbench/audio.hpp"

#include <algorithm>
#include <cmath>

#include "avbench/error.hpp"

namespace avbench {

std::int64_t AudioTrack::duration_ms() const noexcept {
  if (sample_rate == 0) return 0;
  return std::llround(1000.0 * static_cast<double>(samples.size()) / sample_rate);
}

AudioTrack downmix(const WavData& wav) {
  AudioTrack track;
  track.sample_rate = wav.sample_rate;
  track.channels = wav.channels;
  const std::size_t frames = wav.frames();
  track.samples.resize(frames);
  if (wav.channels == 1) {
    std::copy_n(wav.interleaved.begin(), frames, track.samples.begin());
    return track;
  }
  for (std::size_t f = 0; f < frames; ++f) {
    double sum = 0.0;
    for (std::size_t c = 0; c < wav.channels; ++c) sum += wav.interleaved[f * wav.channels + c];
    track.samples[f] = sum / wav.channels;
  }
  return track;
}

AudioTrack decode_wav(const std::filesystem::path& path) { return downmix(read_wav(path)); }

WavData to_wav(const AudioTrack& track, SampleEncoding encoding) {
  WavData wav;
  wav.sample_rate = track.sample_rate;
  wav.channels = 1;
  wav.encoding = encoding;
  wav.interleaved.assign(track.samples.begin(), track.samples.end());
  return wav;
}

double EnergyProfile::window_start_ms(std::size_t i) const noexcept {
  return 1000.0 * static_cast<double>(i * hop_samples) / sample_rate;
}

EnergyProfile energy_profile(const AudioTrack& track, double window_ms, double hop_ms) {
  if (!(hop_ms > 0.0) || window_ms < hop_ms) {
    throw Error(Errc::invalid_argument, "energy_profile requires window_ms >= hop_ms > 0");
  }
  if (track.samples.empty()) throw Error(Errc::empty_track, "track has no samples");
  if (track.sample_rate == 0) throw Error(Errc::invalid_argument, "track has zero sample rate");

  EnergyProfile profile;
  profile.window_ms = window_ms;
  profile.hop_ms = hop_ms;
  profile.sample_rate = track.sample_rate;
  profile.window_samples =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window_ms * track.sample_rate / 1000.0)));
  profile.hop_samples =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(hop_ms * track.sample_rate / 1000.0)));
  profile.total_samples = track.samples.size();
  profile.duration_ms = track.duration_ms();

  const std::size_t n = profile.total_samples;
  const std::size_t w = profile.window_samples;
  const std::size_t h = profile.hop_samples;
  const std::size_t windows = n >= w ? (n - w) / h + 1 : 1;
  profile.rms_db.resize(windows);

  auto to_db = [](double sum_sq, std::size_t len) {
    const double rms = std::sqrt(sum_sq / static_cast<double>(len));
    return 20.0 * std::log10(std::max(rms, kRmsFloor));
  };

  if (n < w) {
    double sum_sq = 0.0;
    for (double x : track.samples) sum_sq += x * x;
    profile.rms_db[0] = to_db(sum_sq, w);
    return profile;
  }
  for (std::size_t i = 0; i < windows; ++i) {
    const std::size_t start = i * h;
    double sum_sq = 0.0;
    for (std::size_t k = start; k < start + w; ++k) {
      const double x = track.samples[k];
      sum_sq += x * x;
    }
    profile.rms_db[i] = to_db(sum_sq, w);
  }
  return profile;
}

}  // namespace avbench
