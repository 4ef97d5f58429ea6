#include "avbench/error.hpp"

namespace avbench {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::malformed_riff: return "MalformedRiff";
    case Errc::unsupported_encoding: return "UnsupportedEncoding";
    case Errc::truncated_data: return "TruncatedData";
    case Errc::empty_track: return "EmptyTrack";
    case Errc::unknown_sample: return "UnknownSample";
    case Errc::layout_mismatch: return "LayoutMismatch";
    case Errc::unknown_method_folder: return "UnknownMethodFolder";
    case Errc::missing_metadata: return "MissingMetadata";
    case Errc::annotation_parse: return "AnnotationParse";
    case Errc::schema_version_mismatch: return "SchemaVersionMismatch";
    case Errc::duplicate_sample_id: return "DuplicateSampleId";
    case Errc::unknown_method: return "UnknownMethod";
    case Errc::too_few_identities: return "TooFewIdentities";
    case Errc::missing_phase_tag: return "MissingPhaseTag";
    case Errc::invalid_protocol: return "InvalidProtocol";
    case Errc::empty_test_set: return "EmptyTestSet";
    case Errc::empty_train_set: return "EmptyTrainSet";
    case Errc::distinct_datasets_required: return "DistinctDatasetsRequired";
    case Errc::invalid_distribution: return "InvalidDistribution";
    case Errc::degenerate_labels: return "DegenerateLabels";
    case Errc::no_positives: return "NoPositives";
    case Errc::missing_prediction: return "MissingPrediction";
    case Errc::group_mismatch: return "GroupMismatch";
    case Errc::empty_scores: return "EmptyScores";
    case Errc::io_error: return "IoError";
    case Errc::parse_error: return "ParseError";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::malformed_riff:
    case Errc::unsupported_encoding:
    case Errc::truncated_data:
    case Errc::io_error:
    case Errc::parse_error:
    case Errc::layout_mismatch:
    case Errc::unknown_method_folder:
    case Errc::missing_metadata:
    case Errc::annotation_parse:
    case Errc::schema_version_mismatch:
      return 2;
    case Errc::invalid_argument:
    case Errc::empty_track:
    case Errc::too_few_identities:
    case Errc::invalid_protocol:
    case Errc::distinct_datasets_required:
      return 1;
    default:
      return 3;
  }
}

}  // namespace avbench
