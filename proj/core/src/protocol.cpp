#include "avbench/protocol.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "avbench/error.hpp"
#include "avbench/rng.hpp"

namespace avbench {
namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct IdentityBucket {
  std::string identity;
  std::vector<std::string> samples;
};

std::vector<IdentityBucket> bucket_by_identity(std::span<const SampleRecord* const> records) {
  std::map<std::string, std::vector<std::string>> by_id;
  for (const SampleRecord* r : records) {
    if (r->identity.empty()) {
      throw Error(Errc::invalid_argument, "sample '" + r->sample_id + "' has no source identity");
    }
    by_id[r->identity].push_back(r->sample_id);
  }
  std::vector<IdentityBucket> buckets;
  buckets.reserve(by_id.size());
  for (auto& [id, samples] : by_id) buckets.push_back({id, std::move(samples)});
  return buckets;
}

// Shuffle, then largest identity first into the phase with the largest
// remaining deficit. Phases with a zero target never receive identities.
std::vector<std::size_t> greedy_place(std::vector<IdentityBucket>& buckets, std::span<const double> targets,
                                      Rng& rng) {
  shuffle(std::span<IdentityBucket>(buckets), rng);
  std::stable_sort(buckets.begin(), buckets.end(), [](const IdentityBucket& a, const IdentityBucket& b) {
    return a.samples.size() > b.samples.size();
  });
  std::vector<double> filled(targets.size(), 0.0);
  std::vector<std::size_t> phase(buckets.size(), 0);
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    std::size_t best = targets.size();
    double best_deficit = 0.0;
    for (std::size_t p = 0; p < targets.size(); ++p) {
      if (targets[p] <= 0.0) continue;
      const double deficit = targets[p] - filled[p];
      if (best == targets.size() || deficit > best_deficit) {
        best = p;
        best_deficit = deficit;
      }
    }
    phase[b] = best;
    filled[best] += static_cast<double>(buckets[b].samples.size());
  }
  return phase;
}

void check_fraction(double f, const char* name) {
  if (!(f >= 0.0) || f > 1.0) {
    throw Error(Errc::invalid_argument, std::string(name) + " fraction must lie in [0, 1]");
  }
}

bool is_generalization(ProtocolKind kind) {
  return kind == ProtocolKind::method || kind == ProtocolKind::family || kind == ProtocolKind::established;
}

}  // namespace

std::size_t SplitAssignment::count(Phase phase) const {
  return static_cast<std::size_t>(std::count_if(phase_of.begin(), phase_of.end(),
                                               [&](const auto& kv) { return kv.second == phase; }));
}

SplitAssignment assign_fakeavceleb(const Manifest& manifest, SplitFractions fractions, std::uint64_t seed) {
  check_fraction(fractions.train, "train");
  check_fraction(fractions.val, "val");
  check_fraction(fractions.test, "test");
  const double sum = fractions.train + fractions.val + fractions.test;
  if (!(sum > 0.0)) throw Error(Errc::invalid_argument, "fractions sum to zero");

  std::vector<const SampleRecord*> records;
  for (const auto& r : manifest.records) records.push_back(&r);
  auto buckets = bucket_by_identity(records);
  if (buckets.size() < 3) {
    throw Error(Errc::too_few_identities,
                "need at least 3 identities, manifest has " + std::to_string(buckets.size()));
  }
  const double total = static_cast<double>(manifest.records.size());
  const std::array<double, 3> targets = {total * fractions.train / sum, total * fractions.val / sum,
                                         total * fractions.test / sum};
  Rng rng = rng_for(seed, "identity-split");
  const auto placed = greedy_place(buckets, targets, rng);

  SplitAssignment out;
  out.seed = seed;
  out.fractions = fractions;
  constexpr std::array<Phase, 3> phases = {Phase::train, Phase::val, Phase::test};
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    for (const auto& id : buckets[b].samples) out.phase_of[id] = phases[placed[b]];
  }
  return out;
}

SplitAssignment assign_deepspeak(const Manifest& manifest, double val_fraction, std::uint64_t seed, ValCarve carve) {
  check_fraction(val_fraction, "validation");
  SplitAssignment out;
  out.seed = seed;
  out.fractions = SplitFractions{1.0 - val_fraction, val_fraction, 0.0};

  std::vector<const SampleRecord*> provided_train;
  for (const auto& r : manifest.records) {
    if (!r.provided_phase) {
      throw Error(Errc::missing_phase_tag, "sample '" + r.sample_id + "' carries no provided train/test tag");
    }
    if (*r.provided_phase == Phase::test) {
      out.phase_of[r.sample_id] = Phase::test;
    } else {
      provided_train.push_back(&r);
    }
  }
  Rng rng = rng_for(seed, "validation-carve");
  if (carve == ValCarve::random) {
    std::vector<std::string> ids;
    for (const SampleRecord* r : provided_train) ids.push_back(r->sample_id);
    std::sort(ids.begin(), ids.end());
    shuffle(std::span<std::string>(ids), rng);
    const auto n_val = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(ids.size())));
    for (std::size_t i = 0; i < ids.size(); ++i) out.phase_of[ids[i]] = i < n_val ? Phase::val : Phase::train;
    return out;
  }
  auto buckets = bucket_by_identity(provided_train);
  const double total = static_cast<double>(provided_train.size());
  const std::array<double, 2> targets = {total * (1.0 - val_fraction), total * val_fraction};
  const auto placed = greedy_place(buckets, targets, rng);
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    for (const auto& id : buckets[b].samples) out.phase_of[id] = placed[b] == 0 ? Phase::train : Phase::val;
  }
  return out;
}

SplitAssignment default_assignment(const Manifest& manifest, std::uint64_t seed) {
  const bool provided = !manifest.records.empty() &&
                        std::all_of(manifest.records.begin(), manifest.records.end(),
                                    [](const SampleRecord& r) { return r.provided_phase.has_value(); });
  if (provided) return assign_deepspeak(manifest, 0.2, seed);
  return assign_fakeavceleb(manifest, SplitFractions{}, seed);
}

std::string method_group_of(const Taxonomy& taxonomy, const Combo& combo) {
  if (combo.video_methods.empty()) return "realVideo-fakeAudio";
  for (const auto& v : combo.video_methods) {
    if (taxonomy.family_of(v) == Family::face_animation) return v;
  }
  return combo.video_methods.front();
}

std::vector<MethodGroup> method_groups(const Taxonomy& taxonomy) {
  std::vector<MethodGroup> groups;
  for (const Combo& c : taxonomy.combos) {
    const std::string name = method_group_of(taxonomy, c);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const MethodGroup& g) { return g.name == name; });
    if (it == groups.end()) {
      groups.push_back({name, {c}});
    } else {
      it->combos.push_back(c);
    }
  }
  return groups;
}

std::string_view to_string(ProtocolKind kind) noexcept {
  switch (kind) {
    case ProtocolKind::standard: return "standard";
    case ProtocolKind::method: return "method";
    case ProtocolKind::family: return "family";
    case ProtocolKind::established: return "established";
    case ProtocolKind::cross_dataset: return "cross";
  }
  return "?";
}

std::string_view to_string(Severity severity) noexcept {
  switch (severity) {
    case Severity::info: return "info";
    case Severity::warning: return "warning";
    case Severity::error: return "error";
  }
  return "?";
}

std::string ProtocolSpec::name() const {
  if (kind == ProtocolKind::standard) return "standard";
  return std::string(to_string(kind)) + ":" + target;
}

ProtocolSpec ProtocolSpec::parse(std::string_view text, const Taxonomy& taxonomy, std::uint64_t seed) {
  ProtocolSpec spec;
  spec.dataset = taxonomy.dataset;
  spec.seed = seed;
  const auto colon = text.find(':');
  const std::string kind = lower(text.substr(0, colon));
  const std::string target = colon == std::string_view::npos ? std::string() : std::string(text.substr(colon + 1));
  auto fail = [&](const std::string& why) {
    return Error(Errc::invalid_protocol, "'" + std::string(text) + "': " + why);
  };

  if (kind == "standard") {
    if (!target.empty()) throw fail("standard takes no argument");
    spec.kind = ProtocolKind::standard;
    return spec;
  }
  if (target.empty()) throw fail("missing argument after ':'");
  if (kind == "method") {
    spec.kind = ProtocolKind::method;
    const auto groups = method_groups(taxonomy);
    std::string want = target;
    if (const MethodInfo* m = taxonomy.resolve_video(target)) want = m->name;
    const std::string key = lower(want);
    for (const auto& g : groups) {
      const std::string gname = lower(g.name);
      if (gname == key || (key == "rvfa" && g.name == "realVideo-fakeAudio") ||
          (key == "realvideo+fakeaudio" && g.name == "realVideo-fakeAudio")) {
        spec.target = g.name;
        return spec;
      }
    }
    throw fail("no method group '" + target + "' in " + taxonomy.dataset);
  }
  if (kind == "family") {
    spec.kind = ProtocolKind::family;
    const auto family = parse_family(target);
    if (!family) throw fail("unknown family (use LipSynthesis or FaceAnimation)");
    const bool populated = std::any_of(taxonomy.combos.begin(), taxonomy.combos.end(),
                                       [&](const Combo& c) { return taxonomy.combo_in_family(c, *family); });
    if (!populated) throw fail("family has no manipulations in " + taxonomy.dataset);
    spec.target = std::string(to_string(*family));
    return spec;
  }
  if (kind == "established") {
    spec.kind = ProtocolKind::established;
    if (taxonomy.established_categories.empty()) {
      throw fail(taxonomy.dataset + " has no established leave-one-out protocol");
    }
    const auto combo = taxonomy.parse_combo(target);
    if (!combo || std::find(taxonomy.established_categories.begin(), taxonomy.established_categories.end(), *combo) ==
                      taxonomy.established_categories.end()) {
      throw fail("not one of the established held-out categories");
    }
    spec.target = taxonomy.label(*combo);
    return spec;
  }
  if (kind == "cross") {
    spec.kind = ProtocolKind::cross_dataset;
    spec.target = canonical_dataset_id(target);
    if (spec.target == taxonomy.dataset) throw fail("cross-dataset protocol needs a different test dataset");
    return spec;
  }
  throw fail("unknown protocol kind '" + kind + "'");
}

const std::vector<SampleRecord>& ProtocolInstance::phase(Phase p) const {
  switch (p) {
    case Phase::train: return train;
    case Phase::val: return val;
    case Phase::test: return test;
  }
  return test;
}

std::set<std::string> ProtocolInstance::inventory(Phase p) const {
  const Taxonomy& tax = p == Phase::test ? test_taxonomy : train_taxonomy;
  std::set<std::string> out;
  for (const auto& r : phase(p)) {
    if (r.is_fake()) out.insert(tax.label(tax.canonicalize(r.combo())));
  }
  return out;
}

ProtocolInstance build_protocol(const SplitAssignment& assignment, const Manifest& manifest, const ProtocolSpec& spec) {
  const Taxonomy& tax = manifest.taxonomy;
  if (spec.kind == ProtocolKind::cross_dataset) {
    throw Error(Errc::invalid_protocol, "cross-dataset protocols are built with cross_dataset_protocol");
  }

  // Decides for one fake whether it is held out (test-only) or trainable.
  std::optional<Family> family;
  std::optional<Combo> held_out;
  if (spec.kind == ProtocolKind::family) {
    family = parse_family(spec.target);
    if (!family) throw Error(Errc::invalid_protocol, "unknown family '" + spec.target + "'");
  }
  if (spec.kind == ProtocolKind::established) {
    held_out = tax.parse_combo(spec.target);
    if (!held_out) throw Error(Errc::invalid_protocol, "unknown held-out category '" + spec.target + "'");
  }
  if (spec.kind == ProtocolKind::method) {
    const auto groups = method_groups(tax);
    if (std::none_of(groups.begin(), groups.end(), [&](const MethodGroup& g) { return g.name == spec.target; })) {
      throw Error(Errc::invalid_protocol, "unknown method group '" + spec.target + "'");
    }
  }
  const auto& established = tax.established_categories;

  enum class Route { keep, held_out, dropped };
  auto route = [&](const SampleRecord& r) {
    if (!r.is_fake()) return Route::keep;
    const Combo combo = tax.canonicalize(r.combo());
    switch (spec.kind) {
      case ProtocolKind::standard:
        return Route::keep;
      case ProtocolKind::method:
        return method_group_of(tax, combo) == spec.target ? Route::held_out : Route::keep;
      case ProtocolKind::family:
        return tax.combo_in_family(combo, *family) ? Route::held_out : Route::keep;
      case ProtocolKind::established:
        if (combo == *held_out) return Route::held_out;
        // The literature protocol only ever uses its five categories.
        return std::find(established.begin(), established.end(), combo) != established.end() ? Route::keep
                                                                                             : Route::dropped;
      case ProtocolKind::cross_dataset:
        break;
    }
    return Route::dropped;
  };

  ProtocolInstance inst;
  inst.spec = spec;
  inst.spec.dataset = tax.dataset;
  inst.train_taxonomy = tax;
  inst.test_taxonomy = tax;
  for (const auto& r : manifest.records) {
    auto it = assignment.phase_of.find(r.sample_id);
    if (it == assignment.phase_of.end()) {
      throw Error(Errc::invalid_argument, "assignment does not cover sample '" + r.sample_id + "'");
    }
    const Route where = route(r);
    if (where == Route::dropped) continue;
    switch (it->second) {
      case Phase::train:
        if (where == Route::keep) inst.train.push_back(r);
        break;
      case Phase::val:
        if (where == Route::keep) inst.val.push_back(r);
        break;
      case Phase::test:
        if (spec.kind == ProtocolKind::standard || !r.is_fake() || where == Route::held_out) inst.test.push_back(r);
        break;
    }
  }
  if (inst.train.empty()) throw Error(Errc::empty_train_set, spec.name() + " leaves no training samples");
  const bool has_real = std::any_of(inst.test.begin(), inst.test.end(), [](const SampleRecord& r) { return !r.is_fake(); });
  const bool has_fake = std::any_of(inst.test.begin(), inst.test.end(), [](const SampleRecord& r) { return r.is_fake(); });
  if (!has_real || !has_fake) {
    throw Error(Errc::empty_test_set, spec.name() + " test phase needs both real and fake samples");
  }
  inst.diagnosis = diagnose(inst);
  return inst;
}

ProtocolInstance cross_dataset_protocol(const Manifest& train_manifest, const SplitAssignment& train_assignment,
                                        const Manifest& test_manifest, const SplitAssignment& test_assignment) {
  if (train_manifest.taxonomy.dataset == test_manifest.taxonomy.dataset) {
    throw Error(Errc::distinct_datasets_required,
                "both manifests belong to '" + train_manifest.taxonomy.dataset + "'");
  }
  ProtocolInstance inst;
  inst.spec.kind = ProtocolKind::cross_dataset;
  inst.spec.dataset = train_manifest.taxonomy.dataset;
  inst.spec.target = test_manifest.taxonomy.dataset;
  inst.spec.seed = train_assignment.seed;
  inst.train_taxonomy = train_manifest.taxonomy;
  inst.test_taxonomy = test_manifest.taxonomy;
  for (const auto& r : train_manifest.records) {
    auto it = train_assignment.phase_of.find(r.sample_id);
    if (it == train_assignment.phase_of.end()) {
      throw Error(Errc::invalid_argument, "training assignment does not cover '" + r.sample_id + "'");
    }
    if (it->second == Phase::train) inst.train.push_back(r);
    if (it->second == Phase::val) inst.val.push_back(r);
  }
  for (const auto& r : test_manifest.records) {
    auto it = test_assignment.phase_of.find(r.sample_id);
    if (it == test_assignment.phase_of.end()) {
      throw Error(Errc::invalid_argument, "test assignment does not cover '" + r.sample_id + "'");
    }
    if (it->second == Phase::test) inst.test.push_back(r);
  }
  if (inst.train.empty()) throw Error(Errc::empty_train_set, "cross-dataset training side is empty");
  if (inst.test.empty()) throw Error(Errc::empty_test_set, "cross-dataset test side is empty");
  inst.diagnosis = diagnose(inst);
  return inst;
}

DiagnosisReport diagnose(const ProtocolInstance& inst) {
  DiagnosisReport report;

  // Identities are compared per dataset so cross-dataset ids never collide.
  std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>> counts;
  for (const auto* phase : {&inst.train, &inst.val}) {
    for (const auto& r : *phase) ++counts[{r.dataset, r.identity}].first;
  }
  for (const auto& r : inst.test) ++counts[{r.dataset, r.identity}].second;
  for (const auto& [key, n] : counts) {
    if (n.first > 0 && n.second > 0) {
      report.identity_leaks.push_back({key.second, n.first, n.second, Severity::error});
    }
  }

  // method -> carrier combo labels per side
  auto carriers = [](const std::vector<const std::vector<SampleRecord>*>& phases, const Taxonomy& tax) {
    std::map<std::string, std::set<std::string>> out;
    for (const auto* phase : phases) {
      for (const auto& r : *phase) {
        if (!r.is_fake()) continue;
        const Combo combo = tax.canonicalize(r.combo());
        for (const auto& v : combo.video_methods) out[v].insert(tax.label(combo));
      }
    }
    return out;
  };
  const auto train_side = carriers({&inst.train, &inst.val}, inst.train_taxonomy);
  const auto test_side = carriers({&inst.test}, inst.test_taxonomy);

  if (inst.spec.kind == ProtocolKind::cross_dataset) {
    for (const auto& [method, combos] : test_side) {
      if (train_side.count(method)) report.shared_methods.push_back(method);
    }
  } else if (is_generalization(inst.spec.kind)) {
    // Only the methods a split holds out can leak; FaceSwap in a held-out
    // FaceSwap+Wav2Lip is fair game for a lip-synthesis split.
    const Taxonomy& tax = inst.test_taxonomy;
    auto held_out = [&](const std::string& method) {
      switch (inst.spec.kind) {
        case ProtocolKind::family: return tax.family_of(method) == parse_family(inst.spec.target);
        case ProtocolKind::method: return method == inst.spec.target;
        case ProtocolKind::established: {
          const auto combo = tax.parse_combo(inst.spec.target);
          return combo && combo->has_video_method(method);
        }
        default: return false;
      }
    };
    for (const auto& [method, test_combos] : test_side) {
      if (!held_out(method)) continue;
      auto it = train_side.find(method);
      if (it == train_side.end()) continue;
      ManipulationLeak leak;
      leak.method = method;
      leak.train_combos.assign(it->second.begin(), it->second.end());
      leak.test_combos.assign(test_combos.begin(), test_combos.end());
      report.manipulation_leaks.push_back(std::move(leak));
    }
  }
  return report;
}

std::vector<CoverageGap> coverage_gaps(std::span<const ProtocolInstance> suite) {
  std::set<std::string> addressable;
  std::set<std::string> tested;
  std::vector<std::string> order;
  for (const auto& inst : suite) {
    const Taxonomy& tax = inst.test_taxonomy;
    for (const Combo& c : tax.combos) {
      if (inst.spec.kind == ProtocolKind::family && c.video_methods.empty()) continue;
      const std::string label = tax.label(c);
      if (addressable.insert(label).second) order.push_back(label);
    }
    const auto inv = inst.inventory(Phase::test);
    tested.insert(inv.begin(), inv.end());
  }
  std::vector<CoverageGap> gaps;
  for (const auto& label : order) {
    if (!tested.count(label)) gaps.push_back({label, Severity::warning});
  }
  return gaps;
}

SuiteDiagnosis diagnose_suite(std::span<const ProtocolInstance> suite) {
  SuiteDiagnosis out;
  for (const auto& inst : suite) out.instances.emplace_back(inst.spec.name(), diagnose(inst));
  out.coverage_gaps = coverage_gaps(suite);
  return out;
}

std::vector<ProtocolSpec> suite_specs(std::string_view suite, const Taxonomy& taxonomy, std::uint64_t seed) {
  const std::string key = lower(suite);
  std::vector<ProtocolSpec> specs;
  auto add = [&](ProtocolKind kind, std::string target) {
    ProtocolSpec s;
    s.kind = kind;
    s.target = std::move(target);
    s.dataset = taxonomy.dataset;
    s.seed = seed;
    specs.push_back(std::move(s));
  };
  if (key == "established") {
    if (taxonomy.established_categories.empty()) {
      throw Error(Errc::invalid_protocol, taxonomy.dataset + " has no established leave-one-out protocol");
    }
    for (const auto& c : taxonomy.established_categories) add(ProtocolKind::established, taxonomy.label(c));
    return specs;
  }
  const bool methods = key == "method" || key == "proposed";
  const bool families = key == "family" || key == "proposed";
  if (!methods && !families) throw Error(Errc::invalid_protocol, "unknown suite '" + std::string(suite) + "'");
  if (methods) {
    for (const auto& g : method_groups(taxonomy)) add(ProtocolKind::method, g.name);
  }
  if (families) {
    for (Family f : {Family::lip_synthesis, Family::face_animation}) {
      const bool populated = std::any_of(taxonomy.combos.begin(), taxonomy.combos.end(),
                                         [&](const Combo& c) { return taxonomy.combo_in_family(c, f); });
      if (populated) add(ProtocolKind::family, std::string(to_string(f)));
    }
  }
  return specs;
}

}  // namespace avbench
