#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "avbench/taxonomy.hpp"

namespace avbench {

enum class Label { real, fake };
enum class Phase { train, val, test };

std::string_view to_string(Label label) noexcept;
std::string_view to_string(Phase phase) noexcept;
std::optional<Phase> parse_phase(std::string_view text);

struct SampleRecord {
  std::string sample_id;
  std::string dataset;
  /// Source identity; for fakes the identity the manipulation started from.
  std::string identity;
  std::string video_path;
  std::string audio_path;
  std::vector<std::string> video_methods;  // empty => real video
  std::optional<std::string> audio_method;  // nullopt => real audio
  Label video_label = Label::real;
  Label audio_label = Label::real;
  std::optional<std::int64_t> n_frames;
  std::optional<double> fps;
  std::optional<std::int64_t> duration_ms;
  /// Train/test designation shipped with the dataset, when it has one.
  std::optional<Phase> provided_phase;

  Combo combo() const { return Combo{video_methods, audio_method}; }
  bool is_fake() const noexcept { return !video_methods.empty() || audio_method.has_value(); }
  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

/// Labels as a pure function of the method fields.
Label derived_video_label(const SampleRecord& record) noexcept;
Label derived_audio_label(const SampleRecord& record) noexcept;
SampleRecord with_derived_labels(SampleRecord record);

struct Provenance {
  std::string root;
  std::string ingested_at;  // ISO-8601 UTC
  std::string tool_version;
  std::string source;       // adapter that produced the manifest
  std::string condition = "untrimmed";

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Manifest {
  Taxonomy taxonomy;
  std::vector<SampleRecord> records;
  Provenance provenance;

  /// sample_id -> position in records.
  std::unordered_map<std::string, std::size_t> index() const;
  const SampleRecord* find(std::string_view sample_id) const;
  void sort_records();

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

inline constexpr int kManifestSchemaVersion = 1;

/// Writes `path` (CSV) and the taxonomy/provenance sidecar returned by
/// sidecar_path(path).
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Column order of the manifest CSV.
std::span<const std::string_view> manifest_columns();

enum class IssueKind {
  missing_file,
  unknown_method,
  combo_violation,
  audio_on_face_animation,
  label_derivation,
  duplicate_sample_id,
  missing_identity,
};

std::string_view to_string(IssueKind kind) noexcept;

struct Issue {
  std::string sample_id;
  IssueKind kind;
  std::string message;
};

std::vector<Issue> validate_manifest(const Manifest& manifest, bool check_files = false);

/// Now as ISO-8601 UTC, or SOURCE_DATE_EPOCH when that is set.
std::string timestamp_now();
std::string_view tool_version() noexcept;

}  // namespace avbench
