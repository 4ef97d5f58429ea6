#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avbench/manifest.hpp"
#include "avbench/rng.hpp"

namespace avbench {

struct SamplingConfig {
  std::int64_t n_frames = 16;  // N
  std::int64_t step = 5;       // M; 1 means consecutive frames
  bool jitter = false;
  std::uint64_t seed = 0;

  /// N*M, the window one clip occupies when clips are tiled.
  std::int64_t span() const noexcept { return n_frames * step; }
  void validate() const;
};

struct Clip {
  std::int64_t start = 0;
  std::vector<std::int64_t> indices;  // length N, already padded
  std::vector<bool> padded;           // true where the index was replaced by T-1

  friend bool operator==(const Clip&, const Clip&) = default;
};

enum class EvalStrategy { beginning, clips_mean, clips_max };
std::string_view to_string(EvalStrategy strategy) noexcept;
std::optional<EvalStrategy> parse_eval_strategy(std::string_view text);

enum class Aggregation { mean, max };

struct SamplingPlan {
  std::string sample_id;
  std::int64_t total_frames = 0;
  EvalStrategy strategy = EvalStrategy::beginning;
  std::vector<Clip> clips;

  friend bool operator==(const SamplingPlan&, const SamplingPlan&) = default;
};

/// One training clip over T frames. Without jitter it starts at 0, otherwise
/// uniformly in [0, max(0, T - N*M)].
Clip training_clip(std::int64_t total_frames, const SamplingConfig& config, Rng& rng);

/// beginning: one clip at 0. clips_*: min(max_clips, floor(T / (N*M))) tiles
/// at k*N*M, at least one.
SamplingPlan eval_plan(std::int64_t total_frames, const SamplingConfig& config, EvalStrategy strategy,
                       std::size_t max_clips = 5);

double aggregate(std::span<const double> clip_scores, Aggregation mode);
/// mean for beginning and clips_mean, max for clips_max.
Aggregation aggregation_for(EvalStrategy strategy) noexcept;

struct SamplePlans {
  std::string sample_id;
  std::int64_t total_frames = 0;
  std::vector<Clip> train;  // one clip per epoch
  SamplingPlan eval;
};

/// Training clips draw from rng_for(config.seed, sample_id), so a sample's
/// plan does not depend on which other samples are planned with it.
SamplePlans plan_sample(const SampleRecord& record, const SamplingConfig& config, EvalStrategy strategy,
                        std::size_t epochs, std::size_t max_clips = 5);

std::vector<SamplePlans> plan_manifest(const Manifest& manifest, const SamplingConfig& config,
                                       EvalStrategy strategy, std::size_t epochs, std::size_t max_clips = 5);

/// Deterministic JSON document for trainers.
std::string plans_json(std::span<const SamplePlans> plans, const SamplingConfig& config, EvalStrategy strategy,
                       std::size_t epochs, std::size_t max_clips = 5);

}  // namespace avbench
