#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avbench/manifest.hpp"

namespace avbench {

struct SplitFractions {
  double train = 0.60;
  double val = 0.10;
  double test = 0.30;
  friend bool operator==(const SplitFractions&, const SplitFractions&) = default;
};

struct SplitAssignment {
  std::map<std::string, Phase> phase_of;  // sample_id -> phase
  std::uint64_t seed = 0;
  SplitFractions fractions;

  std::size_t count(Phase phase) const;
  friend bool operator==(const SplitAssignment&, const SplitAssignment&) = default;
};

/// Identity-disjoint train/val/test split. Identities are shuffled with the
/// seed, then placed largest first into whichever phase is furthest below
/// its target sample count (ties go to the earlier phase). Throws
/// too_few_identities for fewer than three identities.
SplitAssignment assign_fakeavceleb(const Manifest& manifest, SplitFractions fractions = {},
                                   std::uint64_t seed = 0);

enum class ValCarve { identity, random };

/// Keeps the dataset's own test designation and carves `val_fraction` of the
/// provided training samples into validation, by identity (default) or by
/// individual sample. Throws missing_phase_tag when a record has none.
SplitAssignment assign_deepspeak(const Manifest& manifest, double val_fraction = 0.2,
                                 std::uint64_t seed = 0, ValCarve carve = ValCarve::identity);

/// Dispatches on the manifest's dataset: DeepSpeak-style manifests (records
/// with provided phases) use assign_deepspeak, everything else
/// assign_fakeavceleb.
SplitAssignment default_assignment(const Manifest& manifest, std::uint64_t seed = 0);

struct MethodGroup {
  std::string name;
  std::vector<Combo> combos;
};

/// One group per video method, keyed by the face-animation method when a
/// combo carries one (FaceSwap+Wav2Lip belongs to FaceSwap), plus a
/// "realVideo-fakeAudio" group for audio-only fakes.
std::vector<MethodGroup> method_groups(const Taxonomy& taxonomy);
/// Group name of one fake combo.
std::string method_group_of(const Taxonomy& taxonomy, const Combo& combo);

enum class ProtocolKind { standard, method, family, established, cross_dataset };

std::string_view to_string(ProtocolKind kind) noexcept;

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::standard;
  /// Method-group name, family name, held-out combo label or test dataset.
  std::string target;
  std::string dataset;
  std::uint64_t seed = 0;

  /// "standard", "method:FaceSwap", "family:LipSynthesis",
  /// "established:Wav2Lip+realAudio", "cross:deepspeak_v1".
  std::string name() const;
  /// Parses the CLI form ("method:<name>", ...); validates the target
  /// against the taxonomy. Throws invalid_protocol.
  static ProtocolSpec parse(std::string_view text, const Taxonomy& taxonomy, std::uint64_t seed = 0);

  friend bool operator==(const ProtocolSpec&, const ProtocolSpec&) = default;
};

enum class Severity { info, warning, error };
std::string_view to_string(Severity severity) noexcept;

struct IdentityLeak {
  std::string identity;
  std::size_t train_side_samples = 0;
  std::size_t test_samples = 0;
  Severity severity = Severity::error;
};

struct ManipulationLeak {
  std::string method;
  std::vector<std::string> train_combos;  // carrier combos on the train/val side
  std::vector<std::string> test_combos;
  Severity severity = Severity::warning;
};

struct CoverageGap {
  std::string combo;
  Severity severity = Severity::warning;
};

struct DiagnosisReport {
  std::vector<IdentityLeak> identity_leaks;
  std::vector<ManipulationLeak> manipulation_leaks;
  std::vector<CoverageGap> coverage_gaps;
  /// Cross-dataset only: video methods both datasets contain. Informational.
  std::vector<std::string> shared_methods;

  bool empty() const noexcept {
    return identity_leaks.empty() && manipulation_leaks.empty() && coverage_gaps.empty();
  }
  bool has_leaks() const noexcept { return !identity_leaks.empty() || !manipulation_leaks.empty(); }
};

struct ProtocolInstance {
  ProtocolSpec spec;
  Taxonomy train_taxonomy;
  Taxonomy test_taxonomy;  // differs from train_taxonomy for cross-dataset instances
  std::vector<SampleRecord> train;
  std::vector<SampleRecord> val;
  std::vector<SampleRecord> test;
  DiagnosisReport diagnosis;

  const std::vector<SampleRecord>& phase(Phase p) const;
  /// Distinct fake combos present in a phase, as canonical labels.
  std::set<std::string> inventory(Phase p) const;
};

/// Applies a protocol to a base assignment. Throws invalid_protocol,
/// empty_test_set (no reals or no fakes in test) or empty_train_set.
ProtocolInstance build_protocol(const SplitAssignment& assignment, const Manifest& manifest,
                                const ProtocolSpec& spec);

/// Train/val: full assignment of the training dataset. Test: test phase of
/// the other dataset with every manipulation. Throws
/// distinct_datasets_required when both manifests share a dataset id.
ProtocolInstance cross_dataset_protocol(const Manifest& train_manifest, const SplitAssignment& train_assignment,
                                        const Manifest& test_manifest, const SplitAssignment& test_assignment);

/// Identity and manipulation leaks of one instance (coverage needs a suite).
DiagnosisReport diagnose(const ProtocolInstance& instance);

/// Combos the suite is able to evaluate but never has in any test set.
/// Family splits only address combos carrying a video method; every other
/// kind addresses the whole taxonomy.
std::vector<CoverageGap> coverage_gaps(std::span<const ProtocolInstance> suite);

/// Per-instance diagnoses plus suite-level coverage gaps.
struct SuiteDiagnosis {
  std::vector<std::pair<std::string, DiagnosisReport>> instances;
  std::vector<CoverageGap> coverage_gaps;
};
SuiteDiagnosis diagnose_suite(std::span<const ProtocolInstance> suite);

/// Named protocol suites: "established", "method", "family", "proposed"
/// (method + family). Returns the specs in row order.
std::vector<ProtocolSpec> suite_specs(std::string_view suite, const Taxonomy& taxonomy, std::uint64_t seed = 0);

// Protocol directories: train.csv / val.csv / test.csv manifests (with their
// JSON sidecars), protocol.json, diagnosis.json.
void write_protocol(const ProtocolInstance& instance, const std::filesystem::path& dir,
                    const Provenance& provenance = {});
ProtocolInstance read_protocol(const std::filesystem::path& dir);

// Suite directories hold suite.json (ordered instance subdirectories) and
// suite_diagnosis.json next to one protocol directory per instance.
void write_suite(std::span<const ProtocolInstance> suite, std::string_view name, const std::filesystem::path& dir,
                 const Provenance& provenance = {});
bool is_suite_dir(const std::filesystem::path& dir);
/// A suite directory yields all its instances; a protocol directory yields one.
std::vector<ProtocolInstance> read_protocols(const std::filesystem::path& dir);

std::string diagnosis_json(const DiagnosisReport& report);
std::string suite_diagnosis_json(const SuiteDiagnosis& report);

}  // namespace avbench
