#include <iostream>

#include "avbench/error.hpp"
#include "avbench/protocol.hpp"
#include "common.hpp"

namespace avbench::cli {
namespace {

namespace fs = std::filesystem;

struct AssignFlags {
  std::vector<double> fractions{0.60, 0.10, 0.30};
  double val_fraction = 0.2;
  std::string val_carve = "identity";
  std::string dataset;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--fractions", fractions, "train,val,test fractions for identity splits")
        ->delimiter(',')
        ->expected(3);
    cmd->add_option("--val-fraction", val_fraction, "Share of provided-train samples moved to validation")
        ->capture_default_str();
    cmd->add_option("--val-carve", val_carve)->check(CLI::IsMember({"identity", "random"}))->capture_default_str();
  }

  SplitAssignment assign(const Manifest& m, std::uint64_t seed) const {
    const std::string id = canonical_dataset_id(dataset.empty() ? m.taxonomy.dataset : dataset);
    if (id == kDeepSpeak) {
      return assign_deepspeak(m, val_fraction, seed, val_carve == "random" ? ValCarve::random : ValCarve::identity);
    }
    return assign_fakeavceleb(m, {fractions[0], fractions[1], fractions[2]}, seed);
  }
};

void print_instance(const ProtocolInstance& inst) {
  const auto& d = inst.diagnosis;
  std::cout << inst.spec.name() << ": train=" << inst.train.size() << " val=" << inst.val.size()
            << " test=" << inst.test.size() << " identity_leaks=" << d.identity_leaks.size()
            << " manipulation_leaks=" << d.manipulation_leaks.size() << "\n";
  for (const auto& leak : d.manipulation_leaks) {
    std::cout << "  leak " << leak.method << ":";
    for (const auto& c : leak.train_combos) std::cout << " " << c;
    std::cout << " -> ";
    for (const auto& c : leak.test_combos) std::cout << " " << c;
    std::cout << "\n";
  }
  if (!d.shared_methods.empty()) {
    std::cout << "  shared methods:";
    for (const auto& s : d.shared_methods) std::cout << " " << s;
    std::cout << "\n";
  }
}

void print_gaps(const std::vector<CoverageGap>& gaps) {
  std::cout << "coverage gaps: " << gaps.size();
  for (const auto& gap : gaps) std::cout << " " << gap.combo;
  std::cout << "\n";
}

int run_cross(const Globals& g, const fs::path& train_path, const fs::path& test_path, const fs::path& out,
              const AssignFlags& flags);

int run_make(const Globals& g, const fs::path& manifest_path, const std::string& protocol, const fs::path& out,
             const AssignFlags& flags, const fs::path& test_manifest) {
  if (protocol.rfind("cross:", 0) == 0) {
    if (test_manifest.empty()) throw Error(Errc::invalid_argument, "--protocol cross:<ds> needs --test-manifest");
    const std::string wanted = canonical_dataset_id(protocol.substr(6));
    const std::string got = canonical_dataset_id(load_manifest(test_manifest).taxonomy.dataset);
    if (wanted != got) {
      throw Error(Errc::invalid_argument, "test manifest is " + got + ", protocol asks for " + wanted);
    }
    return run_cross(g, manifest_path, test_manifest, out, flags);
  }
  Run run(g, "splits make");
  run.input_manifest(manifest_path);
  const Manifest m = load_manifest(manifest_path);
  const SplitAssignment assignment = flags.assign(m, g.seed);

  if (protocol.rfind("suite:", 0) == 0) {
    const std::string name = protocol.substr(6);
    std::vector<ProtocolInstance> suite;
    for (const auto& spec : suite_specs(name, m.taxonomy, g.seed)) suite.push_back(build_protocol(assignment, m, spec));
    write_suite(suite, name, out, m.provenance);
    for (const auto& inst : suite) print_instance(inst);
    print_gaps(coverage_gaps(suite));
  } else {
    const auto inst = build_protocol(assignment, m, ProtocolSpec::parse(protocol, m.taxonomy, g.seed));
    write_protocol(inst, out, m.provenance);
    print_instance(inst);
  }
  for (const auto& e : fs::recursive_directory_iterator(out)) {
    if (e.is_regular_file() && e.path().filename() != "run_report.json") run.wrote(e.path());
  }
  run.finish(out);
  return 0;
}

int run_check(const Globals& g, const std::vector<fs::path>& dirs, bool strict, const fs::path& out) {
  Run run(g, "splits check");
  std::vector<ProtocolInstance> all;
  for (const auto& d : dirs) {
    run.input(d);
    for (auto& inst : read_protocols(d)) all.push_back(std::move(inst));
  }
  const SuiteDiagnosis diag = diagnose_suite(all);
  bool identity_leak = false, other = !diag.coverage_gaps.empty();
  for (std::size_t i = 0; i < all.size(); ++i) {
    all[i].diagnosis = diag.instances[i].second;
    print_instance(all[i]);
    identity_leak |= !all[i].diagnosis.identity_leaks.empty();
    other |= !all[i].diagnosis.manipulation_leaks.empty();
  }
  print_gaps(diag.coverage_gaps);
  if (!out.empty()) {
    run.write(out / "suite_diagnosis.json", suite_diagnosis_json(diag));
    run.finish(out);
  }
  return identity_leak || (strict && other) ? 3 : 0;
}

int run_cross(const Globals& g, const fs::path& train_path, const fs::path& test_path, const fs::path& out,
              const AssignFlags& flags) {
  Run run(g, "cross");
  run.input_manifest(train_path);
  run.input_manifest(test_path);
  const Manifest train = load_manifest(train_path);
  const Manifest test = load_manifest(test_path);
  AssignFlags per = flags;
  per.dataset.clear();
  const auto inst = cross_dataset_protocol(train, per.assign(train, g.seed), test, per.assign(test, g.seed));
  write_protocol(inst, out, train.provenance);
  for (const auto& e : fs::directory_iterator(out)) {
    if (e.is_regular_file() && e.path().filename() != "run_report.json") run.wrote(e.path());
  }
  print_instance(inst);
  run.finish(out);
  return 0;
}

}  // namespace

void register_split_commands(CLI::App& app, Globals& g, Action& action) {
  auto* splits = app.add_subcommand("splits", "Identity-disjoint splits and protocol diagnosis");
  splits->require_subcommand(1);

  struct MakeArgs {
    fs::path manifest, out;
    std::string protocol = "standard";
    AssignFlags flags;
    fs::path test_manifest;
  };
  auto ma = std::make_shared<MakeArgs>();
  auto* make = splits->add_subcommand("make", "Write a protocol or suite directory");
  make->add_option("--manifest", ma->manifest)->required();
  make->add_option("--out", ma->out, "Output directory")->required();
  make->add_option("--protocol", ma->protocol,
                   "standard, method:<group>, family:<family>, established:<combo>, cross:<dataset> or suite:<name>")
      ->capture_default_str();
  make->add_option("--dataset", ma->flags.dataset, "Assignment rule (default: the manifest's dataset)");
  make->add_option("--test-manifest", ma->test_manifest, "Test-side manifest for cross:<dataset>");
  ma->flags.add_to(make);
  make->callback([&action, &g, ma] {
    action = [&g, ma] { return run_make(g, ma->manifest, ma->protocol, ma->out, ma->flags, ma->test_manifest); };
  });

  struct CheckArgs {
    std::vector<fs::path> dirs;
    bool strict = false;
    fs::path out;
  };
  auto ca = std::make_shared<CheckArgs>();
  auto* check = splits->add_subcommand("check", "Re-diagnose protocol directories");
  check->add_option("dirs", ca->dirs, "Protocol or suite directories")->required();
  check->add_flag("--strict", ca->strict, "Fail on manipulation leaks and coverage gaps too");
  check->add_option("--out", ca->out, "Directory for suite_diagnosis.json");
  check->callback([&action, &g, ca] { action = [&g, ca] { return run_check(g, ca->dirs, ca->strict, ca->out); }; });

  struct CrossArgs {
    fs::path train, test, out;
    AssignFlags flags;
  };
  auto xa = std::make_shared<CrossArgs>();
  auto* cross = app.add_subcommand("cross", "Train on one dataset, test on another");
  cross->add_option("--train", xa->train, "Training manifest")->required();
  cross->add_option("--test", xa->test, "Test manifest")->required();
  cross->add_option("--out", xa->out, "Output directory")->required();
  xa->flags.add_to(cross);
  cross->callback([&action, &g, xa] { action = [&g, xa] { return run_cross(g, xa->train, xa->test, xa->out, xa->flags); }; });
}

}  // namespace avbench::cli
