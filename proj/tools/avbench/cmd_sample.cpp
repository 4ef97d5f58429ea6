#include <iostream>

#include "avbench/error.hpp"
#include "avbench/sampling.hpp"
#include "common.hpp"

namespace avbench::cli {

void register_sample_commands(CLI::App& app, Globals& g, Action& action) {
  auto* sample = app.add_subcommand("sample", "Frame-index sampling plans");
  sample->require_subcommand(1);

  struct PlanArgs {
    std::filesystem::path manifest, out;
    SamplingConfig config;
    std::string strategy = "beginning";
    std::size_t epochs = 1;
    std::size_t max_clips = 5;
  };
  auto pa = std::make_shared<PlanArgs>();
  auto* plan = sample->add_subcommand("plan", "Write training and evaluation clips for every sample");
  plan->add_option("--manifest", pa->manifest)->required();
  plan->add_option("--out", pa->out, "Plans JSON to write")->required();
  plan->add_option("--n", pa->config.n_frames, "Frames per clip")->capture_default_str();
  plan->add_option("--step", pa->config.step, "Frame step (1 = consecutive)")->capture_default_str();
  plan->add_flag("--jitter", pa->config.jitter, "Random training start");
  plan->add_option("--strategy", pa->strategy)
      ->check(CLI::IsMember({"beginning", "clips_mean", "clips_max"}))
      ->capture_default_str();
  plan->add_option("--epochs", pa->epochs, "Training clips per sample")->capture_default_str();
  plan->add_option("--max-clips", pa->max_clips)->capture_default_str();
  plan->callback([&action, &g, pa] {
    action = [&g, pa] {
      Run run(g, "sample plan");
      run.input_manifest(pa->manifest);
      const Manifest m = load_manifest(pa->manifest);
      SamplingConfig cfg = pa->config;
      cfg.seed = g.seed;
      const EvalStrategy strategy = *parse_eval_strategy(pa->strategy);
      const auto plans = plan_manifest(m, cfg, strategy, pa->epochs, pa->max_clips);
      run.write(pa->out, plans_json(plans, cfg, strategy, pa->epochs, pa->max_clips));
      run.finish(pa->out.parent_path());
      std::cout << "planned " << plans.size() << " samples\n";
      return 0;
    };
  });
}

}  // namespace avbench::cli
