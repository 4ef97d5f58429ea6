#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace avbench {

/// Machine-readable failure categories. Each one maps onto a CLI exit code
/// (see exit_code_for) so callers never need to parse messages.
enum class Errc {
  // audio
  malformed_riff,
  unsupported_encoding,
  truncated_data,
  empty_track,
  unknown_sample,
  // manifests and ingestion
  layout_mismatch,
  unknown_method_folder,
  missing_metadata,
  annotation_parse,
  schema_version_mismatch,
  duplicate_sample_id,
  unknown_method,
  // protocols
  too_few_identities,
  missing_phase_tag,
  invalid_protocol,
  empty_test_set,
  empty_train_set,
  distinct_datasets_required,
  // metrics
  invalid_distribution,
  degenerate_labels,
  no_positives,
  missing_prediction,
  group_mismatch,
  empty_scores,
  // generic
  io_error,
  parse_error,
  invalid_argument,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// 1 usage/empty input, 2 I/O or decode, 3 coverage/validation.
int exit_code_for(Errc code) noexcept;

}  // namespace avbench
