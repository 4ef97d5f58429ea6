#include "avbench/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "avbench/error.hpp"
#include "json_io.hpp"

namespace avbench {

void SamplingConfig::validate() const {
  if (n_frames < 1) throw Error(Errc::invalid_argument, "n_frames must be >= 1");
  if (step < 1) throw Error(Errc::invalid_argument, "step must be >= 1");
}

std::string_view to_string(EvalStrategy s) noexcept {
  switch (s) {
    case EvalStrategy::beginning: return "beginning";
    case EvalStrategy::clips_mean: return "clips_mean";
    case EvalStrategy::clips_max: return "clips_max";
  }
  return "?";
}

std::optional<EvalStrategy> parse_eval_strategy(std::string_view text) {
  for (auto s : {EvalStrategy::beginning, EvalStrategy::clips_mean, EvalStrategy::clips_max}) {
    if (to_string(s) == text) return s;
  }
  if (text == "clips-mean" || text == "mean") return EvalStrategy::clips_mean;
  if (text == "clips-max" || text == "max") return EvalStrategy::clips_max;
  return std::nullopt;
}

namespace {

void require_frames(std::int64_t total_frames) {
  if (total_frames < 1) throw Error(Errc::invalid_argument, "frame count must be >= 1");
}

Clip make_clip(std::int64_t start, std::int64_t total_frames, const SamplingConfig& config) {
  Clip clip;
  clip.start = start;
  clip.indices.reserve(static_cast<std::size_t>(config.n_frames));
  clip.padded.reserve(static_cast<std::size_t>(config.n_frames));
  for (std::int64_t i = 0; i < config.n_frames; ++i) {
    const std::int64_t idx = start + i * config.step;
    const bool pad = idx >= total_frames;
    clip.indices.push_back(pad ? total_frames - 1 : idx);
    clip.padded.push_back(pad);
  }
  return clip;
}

}  // namespace

Clip training_clip(std::int64_t total_frames, const SamplingConfig& config, Rng& rng) {
  config.validate();
  require_frames(total_frames);
  std::int64_t start = 0;
  if (config.jitter) start = uniform_between(rng, 0, std::max<std::int64_t>(0, total_frames - config.span()));
  return make_clip(start, total_frames, config);
}

SamplingPlan eval_plan(std::int64_t total_frames, const SamplingConfig& config, EvalStrategy strategy,
                       std::size_t max_clips) {
  config.validate();
  require_frames(total_frames);
  if (max_clips < 1) throw Error(Errc::invalid_argument, "max_clips must be >= 1");
  SamplingPlan plan;
  plan.total_frames = total_frames;
  plan.strategy = strategy;
  std::size_t count = 1;
  if (strategy != EvalStrategy::beginning) {
    const auto tiles = static_cast<std::size_t>(total_frames / config.span());
    count = std::clamp<std::size_t>(tiles, 1, max_clips);
  }
  for (std::size_t k = 0; k < count; ++k) {
    plan.clips.push_back(make_clip(static_cast<std::int64_t>(k) * config.span(), total_frames, config));
  }
  return plan;
}

double aggregate(std::span<const double> clip_scores, Aggregation mode) {
  if (clip_scores.empty()) throw Error(Errc::empty_scores, "no clip scores to aggregate");
  if (mode == Aggregation::max) return *std::max_element(clip_scores.begin(), clip_scores.end());
  return std::accumulate(clip_scores.begin(), clip_scores.end(), 0.0) / static_cast<double>(clip_scores.size());
}

Aggregation aggregation_for(EvalStrategy strategy) noexcept {
  return strategy == EvalStrategy::clips_max ? Aggregation::max : Aggregation::mean;
}

SamplePlans plan_sample(const SampleRecord& record, const SamplingConfig& config, EvalStrategy strategy,
                        std::size_t epochs, std::size_t max_clips) {
  if (!record.n_frames || *record.n_frames <= 0) {
    throw Error(Errc::invalid_argument, "sample '" + record.sample_id + "' has no frame count");
  }
  const std::int64_t total = *record.n_frames;
  SamplePlans out;
  out.sample_id = record.sample_id;
  out.total_frames = total;
  Rng rng = rng_for(config.seed, record.sample_id);
  for (std::size_t e = 0; e < epochs; ++e) out.train.push_back(training_clip(total, config, rng));
  out.eval = eval_plan(total, config, strategy, max_clips);
  out.eval.sample_id = record.sample_id;
  return out;
}

std::vector<SamplePlans> plan_manifest(const Manifest& manifest, const SamplingConfig& config,
                                       EvalStrategy strategy, std::size_t epochs, std::size_t max_clips) {
  std::vector<SamplePlans> out;
  out.reserve(manifest.records.size());
  for (const auto& r : manifest.records) out.push_back(plan_sample(r, config, strategy, epochs, max_clips));
  std::sort(out.begin(), out.end(), [](const SamplePlans& a, const SamplePlans& b) { return a.sample_id < b.sample_id; });
  return out;
}

namespace {

detail::Json clip_json(const Clip& c) {
  detail::Json padded = detail::Json::array();
  for (std::size_t i = 0; i < c.padded.size(); ++i) {
    if (c.padded[i]) padded.push_back(i);
  }
  return detail::Json{{"start", c.start}, {"indices", c.indices}, {"padded", padded}};
}

}  // namespace

std::string plans_json(std::span<const SamplePlans> plans, const SamplingConfig& config, EvalStrategy strategy,
                       std::size_t epochs, std::size_t max_clips) {
  using detail::Json;
  Json j;
  j["schema_version"] = 1;
  j["config"] = {{"n_frames", config.n_frames},
                 {"step", config.step},
                 {"span", config.span()},
                 {"jitter", config.jitter},
                 {"seed", config.seed},
                 {"strategy", to_string(strategy)},
                 {"aggregation", aggregation_for(strategy) == Aggregation::max ? "max" : "mean"},
                 {"max_clips", max_clips},
                 {"epochs", epochs}};
  Json items = Json::array();
  for (const auto& p : plans) {
    Json train = Json::array();
    for (const auto& c : p.train) train.push_back(clip_json(c));
    Json eval = Json::array();
    for (const auto& c : p.eval.clips) eval.push_back(clip_json(c));
    items.push_back({{"sample_id", p.sample_id}, {"total_frames", p.total_frames}, {"train", train}, {"eval", eval}});
  }
  j["plans"] = items;
  return j.dump(1) + "\n";
}

}  // namespace avbench
