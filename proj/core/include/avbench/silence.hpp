#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "avbench/audio.hpp"
#include "avbench/manifest.hpp"

namespace avbench {

enum class ThresholdMode {
  relative,  // silent iff below (loudest window - threshold_db)
  absolute,  // silent iff below -threshold_db dBFS
};

struct SilenceOptions {
  double threshold_db = 20.0;
  double min_ms = 20.0;
  ThresholdMode mode = ThresholdMode::relative;
};

struct SilenceReport {
  std::string sample_id;
  /// Start of the first non-silent window, or the full duration when every
  /// window is silent; reported as 0 when shorter than min_ms.
  double leading_silence_ms = 0.0;
  /// Sample offset matching leading_silence_ms; what trimming removes.
  std::size_t onset_sample = 0;
  /// Analysis window of the profile the report came from.
  std::size_t window_samples = 0;
  double threshold_db = 20.0;
  double min_ms = 20.0;
  bool exceeds_min = false;
};

SilenceReport detect_leading_silence(const EnergyProfile& profile, const SilenceOptions& options = {});

/// Removes report.onset_sample leading samples. A fully silent track keeps
/// its final window so the result is never empty.
AudioTrack trim_leading_silence(const AudioTrack& track, const SilenceReport& report);

/// Frames to drop from the source WAV for the same cut (onset_sample, capped
/// so one analysis window remains).
std::size_t trim_frames(std::size_t total_frames, const SilenceReport& report);

enum class HistogramGrouping { manipulation, real_fake };

struct SilenceHistogram {
  double bin_width_ms = 20.0;
  HistogramGrouping grouping = HistogramGrouping::manipulation;
  /// group -> bin index -> count; only non-empty bins are stored.
  std::map<std::string, std::map<std::int64_t, std::size_t>> counts;

  std::size_t count(const std::string& group, std::int64_t bin) const;
  std::size_t total(const std::string& group) const;
  /// Highest populated bin over all groups, -1 when empty.
  std::int64_t max_bin() const;
};

/// Group key of a record: its combo label ("real" for reals) or real/fake.
std::string silence_group(const SampleRecord& record, const Taxonomy& taxonomy, HistogramGrouping grouping);

/// Half-open bins [k w, (k+1) w). Throws unknown_sample for ids missing
/// from the manifest.
SilenceHistogram silence_histogram(std::span<const SilenceReport> reports, const Manifest& manifest,
                                   double bin_width_ms, HistogramGrouping grouping);

}  // namespace avbench
