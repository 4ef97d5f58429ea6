#include "avbench/silence.hpp"

#include <algorithm>
#include <cmath>

#include "avbench/error.hpp"

namespace avbench {
namespace {

// Anything at the epsilon floor is digital silence regardless of the
// relative threshold (otherwise an all-zero track would have no silence).
constexpr double kFloorDb = -199.0;

}  // namespace

SilenceReport detect_leading_silence(const EnergyProfile& profile, const SilenceOptions& options) {
  if (profile.rms_db.empty()) throw Error(Errc::empty_track, "energy profile has no windows");
  const double loudest = *std::max_element(profile.rms_db.begin(), profile.rms_db.end());
  const double cutoff =
      options.mode == ThresholdMode::relative ? loudest - options.threshold_db : -options.threshold_db;

  SilenceReport report;
  report.threshold_db = options.threshold_db;
  report.min_ms = options.min_ms;
  report.window_samples = profile.window_samples;

  std::size_t first_voiced = profile.n_windows();
  for (std::size_t i = 0; i < profile.n_windows(); ++i) {
    const double db = profile.rms_db[i];
    if (db >= cutoff && db > kFloorDb) {
      first_voiced = i;
      break;
    }
  }

  double leading_ms;
  std::size_t onset;
  if (first_voiced == profile.n_windows()) {
    leading_ms = static_cast<double>(profile.duration_ms);
    onset = profile.total_samples;
  } else {
    onset = std::min(first_voiced * profile.hop_samples, profile.total_samples);
    leading_ms = profile.window_start_ms(first_voiced);
  }

  if (leading_ms >= options.min_ms) {
    report.leading_silence_ms = leading_ms;
    report.onset_sample = onset;
    report.exceeds_min = true;
  }
  return report;
}

std::size_t trim_frames(std::size_t total_frames, const SilenceReport& report) {
  if (report.onset_sample < total_frames) return report.onset_sample;
  const std::size_t keep = std::max<std::size_t>(1, report.window_samples);
  return total_frames > keep ? total_frames - keep : 0;
}

AudioTrack trim_leading_silence(const AudioTrack& track, const SilenceReport& report) {
  if (report.onset_sample == 0) return track;
  const std::size_t drop = trim_frames(track.samples.size(), report);
  AudioTrack out;
  out.sample_rate = track.sample_rate;
  out.channels = track.channels;
  out.samples.assign(track.samples.begin() + static_cast<std::ptrdiff_t>(drop), track.samples.end());
  return out;
}

std::size_t SilenceHistogram::count(const std::string& group, std::int64_t bin) const {
  auto g = counts.find(group);
  if (g == counts.end()) return 0;
  auto b = g->second.find(bin);
  return b == g->second.end() ? 0 : b->second;
}

std::size_t SilenceHistogram::total(const std::string& group) const {
  auto g = counts.find(group);
  if (g == counts.end()) return 0;
  std::size_t sum = 0;
  for (const auto& [bin, n] : g->second) sum += n;
  return sum;
}

std::int64_t SilenceHistogram::max_bin() const {
  std::int64_t best = -1;
  for (const auto& [group, bins] : counts) {
    if (!bins.empty()) best = std::max(best, bins.rbegin()->first);
  }
  return best;
}

std::string silence_group(const SampleRecord& record, const Taxonomy& taxonomy, HistogramGrouping grouping) {
  if (grouping == HistogramGrouping::real_fake) return record.is_fake() ? "fake" : "real";
  return taxonomy.label(taxonomy.canonicalize(record.combo()));
}

SilenceHistogram silence_histogram(std::span<const SilenceReport> reports, const Manifest& manifest,
                                   double bin_width_ms, HistogramGrouping grouping) {
  if (!(bin_width_ms > 0.0)) throw Error(Errc::invalid_argument, "bin width must be positive");
  SilenceHistogram hist;
  hist.bin_width_ms = bin_width_ms;
  hist.grouping = grouping;
  const auto index = manifest.index();
  for (const auto& report : reports) {
    auto it = index.find(report.sample_id);
    if (it == index.end()) {
      throw Error(Errc::unknown_sample, "report for '" + report.sample_id + "' has no manifest record");
    }
    const auto bin = static_cast<std::int64_t>(std::floor(report.leading_silence_ms / bin_width_ms));
    ++hist.counts[silence_group(manifest.records[it->second], manifest.taxonomy, grouping)][bin];
  }
  return hist;
}

}  // namespace avbench
