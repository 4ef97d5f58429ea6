#include "avbench/manifest.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <set>

namespace avbench {

std::string_view to_string(Label label) noexcept { return label == Label::real ? "real" : "fake"; }

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::train: return "train";
    case Phase::val: return "val";
    case Phase::test: return "test";
  }
  return "?";
}

std::optional<Phase> parse_phase(std::string_view text) {
  if (text == "train" || text == "training") return Phase::train;
  if (text == "val" || text == "valid" || text == "validation") return Phase::val;
  if (text == "test" || text == "testing") return Phase::test;
  return std::nullopt;
}

Label derived_video_label(const SampleRecord& record) noexcept {
  return record.video_methods.empty() ? Label::real : Label::fake;
}

Label derived_audio_label(const SampleRecord& record) noexcept {
  return record.audio_method ? Label::fake : Label::real;
}

SampleRecord with_derived_labels(SampleRecord record) {
  record.video_label = derived_video_label(record);
  record.audio_label = derived_audio_label(record);
  return record;
}

std::unordered_map<std::string, std::size_t> Manifest::index() const {
  std::unordered_map<std::string, std::size_t> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) out.emplace(records[i].sample_id, i);
  return out;
}

const SampleRecord* Manifest::find(std::string_view sample_id) const {
  for (const auto& r : records) {
    if (r.sample_id == sample_id) return &r;
  }
  return nullptr;
}

void Manifest::sort_records() {
  std::sort(records.begin(), records.end(),
            [](const SampleRecord& a, const SampleRecord& b) { return a.sample_id < b.sample_id; });
}

std::string_view to_string(IssueKind kind) noexcept {
  switch (kind) {
    case IssueKind::missing_file: return "missing_file";
    case IssueKind::unknown_method: return "unknown_method";
    case IssueKind::combo_violation: return "combo_violation";
    case IssueKind::audio_on_face_animation: return "audio_on_face_animation";
    case IssueKind::label_derivation: return "label_derivation";
    case IssueKind::duplicate_sample_id: return "duplicate_sample_id";
    case IssueKind::missing_identity: return "missing_identity";
  }
  return "?";
}

std::vector<Issue> validate_manifest(const Manifest& manifest, bool check_files) {
  const Taxonomy& tax = manifest.taxonomy;
  std::vector<Issue> issues;
  std::set<std::string> seen;
  const std::filesystem::path root = manifest.provenance.root;

  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || root.empty() ? path : root / path;
  };

  for (const auto& r : manifest.records) {
    if (!seen.insert(r.sample_id).second) {
      issues.push_back({r.sample_id, IssueKind::duplicate_sample_id, "sample_id appears more than once"});
    }
    if (r.identity.empty()) {
      issues.push_back({r.sample_id, IssueKind::missing_identity, "record has no source identity"});
    }
    bool methods_known = true;
    for (const auto& v : r.video_methods) {
      if (!tax.find_video(v)) {
        issues.push_back({r.sample_id, IssueKind::unknown_method, "unknown video method '" + v + "'"});
        methods_known = false;
      }
    }
    if (r.audio_method && !tax.find_audio(*r.audio_method)) {
      issues.push_back(
          {r.sample_id, IssueKind::unknown_method, "unknown audio method '" + *r.audio_method + "'"});
      methods_known = false;
    }
    if (r.video_label != derived_video_label(r)) {
      issues.push_back({r.sample_id, IssueKind::label_derivation,
                        "video_label=" + std::string(to_string(r.video_label)) +
                            " disagrees with video_methods"});
    }
    if (r.audio_label != derived_audio_label(r)) {
      issues.push_back({r.sample_id, IssueKind::label_derivation,
                        "audio_label=" + std::string(to_string(r.audio_label)) +
                            " disagrees with audio_method"});
    }
    if (methods_known && r.is_fake()) {
      const bool face_animation = tax.combo_in_family(r.combo(), Family::face_animation);
      if (tax.audio_requires_lip_synthesis && r.audio_method && face_animation) {
        issues.push_back({r.sample_id, IssueKind::audio_on_face_animation,
                          "audio manipulation on face-animation sample"});
      } else if (!tax.contains(tax.canonicalize(r.combo()))) {
        issues.push_back({r.sample_id, IssueKind::combo_violation,
                          "combination " + tax.label(tax.canonicalize(r.combo())) + " is not part of " +
                              tax.dataset});
      }
    }
    if (check_files) {
      if (!r.video_path.empty() && !std::filesystem::exists(resolve(r.video_path))) {
        issues.push_back({r.sample_id, IssueKind::missing_file, "video file not found: " + r.video_path});
      }
      if (!r.audio_path.empty() && !std::filesystem::exists(resolve(r.audio_path))) {
        issues.push_back({r.sample_id, IssueKind::missing_file, "audio file not found: " + r.audio_path});
      }
    }
  }
  return issues;
}

std::string timestamp_now() {
  std::time_t t;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string_view tool_version() noexcept { return AVBENCH_VERSION; }

}  // namespace avbench
