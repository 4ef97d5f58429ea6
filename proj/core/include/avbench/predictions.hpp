#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "avbench/taxonomy.hpp"

namespace avbench {

/// Detector output files:
///
///   # detector=SIMBA-binary unimodal=video        (optional key=value line)
///   sample_id,condition,score
///   sample_id,condition,p_real,p_<class1>,...,p_<classC-1>
///
/// condition is "untrimmed" or "trimmed". `unimodal=video|audio` marks a
/// single-modality detector; groups containing only fakes it cannot see are
/// then pinned to AUC 0.5.
struct PredictionRow {
  std::string sample_id;
  std::string condition;
  double score = 0.0;                // scalar files, or fake_score of the distribution
  std::vector<double> distribution;  // multiclass files only
};

struct PredictionFile {
  std::string detector;
  std::optional<Modality> unimodal;
  std::vector<std::string> class_names;  // multiclass files: fake classes after p_real
  std::vector<PredictionRow> rows;

  bool multiclass() const noexcept { return !class_names.empty(); }
  std::set<std::string> conditions() const;
};

PredictionFile parse_prediction_csv(std::string_view text);
PredictionFile read_prediction_file(const std::filesystem::path& path);
std::string format_prediction_csv(const PredictionFile& file);

struct PredictionSet {
  std::string detector;
  std::string condition;
  std::optional<Modality> unimodal;
  std::unordered_map<std::string, double> scores;  // sample_id -> fake score
};

/// Rows of one condition. An empty `condition` picks the only condition in
/// the file. Throws parse_error on duplicates or an ambiguous selection.
PredictionSet select_condition(const PredictionFile& file, std::string_view condition = {});

}  // namespace avbench
