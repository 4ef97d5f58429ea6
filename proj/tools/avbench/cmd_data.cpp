#include <algorithm>
#include <iostream>
#include <optional>

#include "avbench/audio.hpp"
#include "avbench/csv.hpp"
#include "avbench/error.hpp"
#include "avbench/ingest.hpp"
#include "avbench/silence.hpp"
#include "avbench/wav.hpp"
#include "common.hpp"
#include "json.hpp"

namespace avbench::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct DetectionFlags {
  double threshold_db = 20.0;
  double min_ms = 20.0;
  std::string db_mode = "relative";
  double window_ms = kDefaultWindowMs;
  double hop_ms = kDefaultHopMs;
  bool skip_bad = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--threshold-db", threshold_db, "dB below the loudest window (relative) or dBFS floor")
        ->capture_default_str();
    cmd->add_option("--min-ms", min_ms, "Silences shorter than this count as none")->capture_default_str();
    cmd->add_option("--db-mode", db_mode, "Threshold reference")
        ->check(CLI::IsMember({"relative", "absolute"}))
        ->capture_default_str();
    cmd->add_option("--window-ms", window_ms)->capture_default_str();
    cmd->add_option("--hop-ms", hop_ms)->capture_default_str();
    cmd->add_flag("--skip-bad", skip_bad, "Skip undecodable files instead of failing");
  }

  SilenceOptions options() const {
    return {threshold_db, min_ms, db_mode == "absolute" ? ThresholdMode::absolute : ThresholdMode::relative};
  }
};

Manifest load_nonempty(Run& run, const fs::path& path) {
  run.input_manifest(path);
  Manifest m = load_manifest(path);
  if (m.records.empty()) throw Error(Errc::invalid_argument, "no samples in '" + path.string() + "'");
  return m;
}

struct Outcome {
  std::optional<SilenceReport> report;
  Errc code = Errc::io_error;
  std::string error;
};

template <typename F>
Outcome guarded(F&& f) {
  Outcome o;
  try {
    o.report = f();
  } catch (const Error& e) {
    o.code = e.code();
    o.error = e.what();
  } catch (const fs::filesystem_error& e) {
    o.error = e.what();
  }
  return o;
}

/// Raises the first failure in manifest order unless skipping.
std::vector<std::string> check_outcomes(const Manifest& m, const std::vector<Outcome>& outcomes, bool skip_bad) {
  std::vector<std::string> skipped;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].report) continue;
    if (!skip_bad) throw Error(outcomes[i].code, m.records[i].sample_id + ": " + outcomes[i].error);
    std::cerr << "skipped " << m.records[i].sample_id << ": " << outcomes[i].error << "\n";
    skipped.push_back(m.records[i].sample_id);
  }
  return skipped;
}

fs::path audio_of(const Manifest& m, const SampleRecord& r) {
  if (r.audio_path.empty()) throw Error(Errc::io_error, "record has no audio_path");
  return resolve_media(m, r.audio_path);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int run_audit(const Globals& g, const fs::path& manifest_path, const fs::path& out, const DetectionFlags& det,
              double bin_width, const std::string& group_by) {
  Run run(g, "audit");
  const Manifest m = load_nonempty(run, manifest_path);
  const SilenceOptions opts = det.options();
  if (!(bin_width > 0.0)) throw Error(Errc::invalid_argument, "bin width must be positive");

  std::vector<Outcome> outcomes(m.records.size());
  parallel_for(m.records.size(), g.worker_count(), [&](std::size_t i) {
    outcomes[i] = guarded([&] {
      const AudioTrack track = decode_wav(audio_of(m, m.records[i]));
      SilenceReport r = detect_leading_silence(energy_profile(track, det.window_ms, det.hop_ms), opts);
      r.sample_id = m.records[i].sample_id;
      return r;
    });
  });
  const auto skipped = check_outcomes(m, outcomes, det.skip_bad);

  std::vector<SilenceReport> reports;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].report) continue;
    reports.push_back(*outcomes[i].report);
    run.input(audio_of(m, m.records[i]));
  }
  std::sort(reports.begin(), reports.end(),
            [](const SilenceReport& a, const SilenceReport& b) { return a.sample_id < b.sample_id; });
  if (reports.empty()) throw Error(Errc::invalid_argument, "no samples could be decoded");

  const auto grouping = group_by == "real-fake" ? HistogramGrouping::real_fake : HistogramGrouping::manipulation;
  const SilenceHistogram hist = silence_histogram(reports, m, bin_width, grouping);
  const auto idx = m.index();
  std::map<std::string, std::vector<double>> by_group;
  std::vector<std::string> group_of;
  for (const auto& r : reports) {
    group_of.push_back(silence_group(m.records[idx.at(r.sample_id)], m.taxonomy, grouping));
    by_group[group_of.back()].push_back(r.leading_silence_ms);
  }

  fs::create_directories(out);
  if (g.want_csv()) {
    std::string silence = csv::format_row({"sample_id", "leading_silence_ms", "exceeds_min", "group"});
    for (std::size_t i = 0; i < reports.size(); ++i) {
      silence += csv::format_row({reports[i].sample_id, number(reports[i].leading_silence_ms),
                                  reports[i].exceeds_min ? "true" : "false", group_of[i]});
    }
    run.write(out / "silence.csv", silence);

    std::string histogram = csv::format_row({"group", "bin_start_ms", "count"});
    for (const auto& [group, bins] : hist.counts) {
      for (std::int64_t b = 0; b <= hist.max_bin(); ++b) {
        histogram += csv::format_row(
            {group, number(static_cast<double>(b) * bin_width), std::to_string(hist.count(group, b))});
      }
    }
    run.write(out / "histogram.csv", histogram);
  }
  if (g.want_json()) {
    Json groups = Json::object();
    for (const auto& [group, values] : by_group) {
      double sum = 0.0;
      std::size_t over = 0;
      for (double v : values) {
        sum += v;
        over += v >= opts.min_ms && v > 0.0;
      }
      groups[group] = {{"samples", values.size()},
                       {"mean_ms", sum / static_cast<double>(values.size())},
                       {"median_ms", median(values)},
                       {"max_ms", *std::max_element(values.begin(), values.end())},
                       {"fraction_exceeding_min", static_cast<double>(over) / static_cast<double>(values.size())}};
    }
    Json summary{{"manifest", manifest_path.string()},
                 {"threshold_db", opts.threshold_db},
                 {"db_mode", det.db_mode},
                 {"min_ms", opts.min_ms},
                 {"window_ms", det.window_ms},
                 {"hop_ms", det.hop_ms},
                 {"bin_width_ms", bin_width},
                 {"group_by", group_by},
                 {"samples", reports.size()},
                 {"skipped", skipped.size()},
                 {"skipped_ids", skipped},
                 {"groups", groups}};
    run.write(out / "summary.json", summary.dump(2) + "\n");
  }
  run.finish(out);
  std::cout << "audited " << reports.size() << " samples";
  if (!skipped.empty()) std::cout << " (" << skipped.size() << " skipped)";
  std::cout << "\n";
  for (const auto& [group, values] : by_group) {
    std::cout << "  " << group << ": n=" << values.size() << " median=" << number(median(values)) << " ms\n";
  }
  return 0;
}

int run_trim(const Globals& g, const fs::path& manifest_path, const fs::path& out, const DetectionFlags& det) {
  Run run(g, "trim");
  const Manifest m = load_nonempty(run, manifest_path);
  const SilenceOptions opts = det.options();
  fs::create_directories(out);
  const fs::path root = fs::absolute(out);

  std::vector<Outcome> outcomes(m.records.size());
  std::vector<std::size_t> removed(m.records.size(), 0);
  parallel_for(m.records.size(), g.worker_count(), [&](std::size_t i) {
    outcomes[i] = guarded([&] {
      const SampleRecord& rec = m.records[i];
      const fs::path src = audio_of(m, rec);
      const WavData wav = read_wav(src);
      SilenceReport r = detect_leading_silence(energy_profile(downmix(wav), det.window_ms, det.hop_ms), opts);
      r.sample_id = rec.sample_id;
      const fs::path dst = root / "audio" / (rec.sample_id + ".wav");
      fs::create_directories(dst.parent_path());
      removed[i] = trim_frames(wav.frames(), r);
      if (removed[i] == 0) {
        fs::copy_file(src, dst, fs::copy_options::overwrite_existing);
      } else {
        write_wav(dst, drop_leading_frames(wav, removed[i]));
      }
      return r;
    });
  });
  const auto skipped = check_outcomes(m, outcomes, det.skip_bad);

  Manifest trimmed = m;
  trimmed.records.clear();
  trimmed.provenance.root = root.string();
  trimmed.provenance.condition = "trimmed";
  std::string log = csv::format_row({"sample_id", "leading_silence_ms", "frames_removed", "audio_path"});
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    if (!outcomes[i].report) continue;
    SampleRecord rec = m.records[i];
    run.input(audio_of(m, rec));
    if (!rec.video_path.empty()) rec.video_path = fs::absolute(resolve_media(m, rec.video_path)).lexically_normal().string();
    rec.audio_path = (fs::path("audio") / (rec.sample_id + ".wav")).generic_string();
    run.wrote(root / rec.audio_path);
    log += csv::format_row({rec.sample_id, number(outcomes[i].report->leading_silence_ms),
                            std::to_string(removed[i]), rec.audio_path});
    trimmed.records.push_back(std::move(rec));
  }
  save_manifest(trimmed, out / "manifest.csv");
  run.wrote(out / "manifest.csv");
  run.wrote(sidecar_path(out / "manifest.csv"));
  run.write(out / "trim.csv", log);
  run.finish(out);
  std::cout << "trimmed " << trimmed.records.size() << " samples into " << out.string() << "\n";
  return 0;
}

}  // namespace

void register_data_commands(CLI::App& app, Globals& g, Action& action) {
  auto* ingest = app.add_subcommand("ingest", "Build a manifest from a dataset tree");
  ingest->require_subcommand(1);

  struct IngestArgs {
    fs::path root, out;
    std::vector<fs::path> metadata;
    bool probe = false;
  };
  auto args = std::make_shared<IngestArgs>();
  auto* favc = ingest->add_subcommand("favc", "FakeAVCeleb directory layout");
  auto* ds = ingest->add_subcommand("deepspeak", "DeepSpeak v1 annotation tables");
  for (auto* cmd : {favc, ds}) {
    cmd->add_option("--root", args->root, "Dataset root")->required();
    cmd->add_option("--out", args->out, "Manifest CSV to write")->required();
    cmd->add_flag("--probe-frames", args->probe, "Read frame counts from MP4 headers");
  }
  ds->add_option("--metadata", args->metadata, "Annotation CSVs (default: metadata.csv, annotations/*.csv)");
  auto ingest_action = [&g, args](bool deepspeak) {
    return [&g, args, deepspeak] {
      Run run(g, deepspeak ? "ingest deepspeak" : "ingest favc");
      const IngestOptions opts{args->probe};
      Manifest m = deepspeak ? ingest_deepspeak(args->root, args->metadata, opts) : ingest_fakeavceleb(args->root, opts);
      for (const auto& f : args->metadata) run.input(f);
      save_manifest(m, args->out);
      run.wrote(args->out);
      run.wrote(sidecar_path(args->out));
      run.finish(args->out.parent_path());
      std::cout << "ingested " << m.records.size() << " samples (" << m.taxonomy.dataset << ")\n";
      return 0;
    };
  };
  favc->callback([&action, ingest_action] { action = ingest_action(false); });
  ds->callback([&action, ingest_action] { action = ingest_action(true); });

  struct ValidateArgs {
    fs::path manifest;
    bool check_files = false;
  };
  auto va = std::make_shared<ValidateArgs>();
  auto* validate = app.add_subcommand("validate", "Check manifest invariants");
  validate->add_option("--manifest", va->manifest)->required();
  validate->add_flag("--check-files", va->check_files, "Also require media files to exist");
  validate->callback([&action, va] {
    action = [va] {
      const Manifest m = load_manifest(va->manifest);
      const auto issues = validate_manifest(m, va->check_files);
      for (const auto& i : issues) std::cout << i.sample_id << "\t" << to_string(i.kind) << "\t" << i.message << "\n";
      std::cout << m.records.size() << " records, " << issues.size() << " issue(s)\n";
      return issues.empty() ? 0 : 3;
    };
  });

  struct AuditArgs {
    fs::path manifest, out;
    DetectionFlags det;
    double bin_width = 20.0;
    std::string group_by = "manipulation";
  };
  auto aa = std::make_shared<AuditArgs>();
  auto* audit = app.add_subcommand("audit", "Leading-silence report and histogram");
  audit->add_option("--manifest", aa->manifest)->required();
  audit->add_option("--out", aa->out, "Output directory")->required();
  audit->add_option("--bin-width", aa->bin_width, "Histogram bin width in ms")->capture_default_str();
  audit->add_option("--group-by", aa->group_by)
      ->check(CLI::IsMember({"manipulation", "real-fake"}))
      ->capture_default_str();
  aa->det.add_to(audit);
  audit->callback([&action, &g, aa] {
    action = [&g, aa] { return run_audit(g, aa->manifest, aa->out, aa->det, aa->bin_width, aa->group_by); };
  });

  struct TrimArgs {
    fs::path manifest, out;
    DetectionFlags det;
  };
  auto ta = std::make_shared<TrimArgs>();
  auto* trim = app.add_subcommand("trim", "Write copies of the audio with leading silence removed");
  trim->add_option("--manifest", ta->manifest)->required();
  trim->add_option("--out", ta->out, "Output directory")->required();
  ta->det.add_to(trim);
  trim->callback([&action, &g, ta] { action = [&g, ta] { return run_trim(g, ta->manifest, ta->out, ta->det); }; });
}

}  // namespace avbench::cli
