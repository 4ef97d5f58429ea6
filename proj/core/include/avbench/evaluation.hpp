#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avbench/predictions.hpp"
#include "avbench/protocol.hpp"

namespace avbench {

enum class GroupBy { split, combo, method, family, audio_label };
enum class AvgMode { unweighted, weighted };

std::string_view to_string(GroupBy group_by) noexcept;
std::optional<GroupBy> parse_group_by(std::string_view text);

struct EvalRow {
  std::string group;
  double auc = 0.0;  // [0, 1]
  double ap = 0.0;   // [0, 1]
  std::size_t n_real = 0;
  std::size_t n_fake = 0;
  bool pinned = false;  // unimodal convention applied

  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

struct EvalTable {
  GroupBy group_by = GroupBy::split;
  AvgMode avg_mode = AvgMode::unweighted;
  std::string condition;
  std::string detector;
  std::vector<EvalRow> rows;
  EvalRow avg;  // group "AVG"

  const EvalRow* find(std::string_view group) const;
  friend bool operator==(const EvalTable&, const EvalTable&) = default;
};

/// Test ids of the instances without a prediction, sorted.
std::vector<std::string> missing_predictions(const PredictionSet& predictions,
                                             std::span<const ProtocolInstance> suite);

/// Each group's fakes ranked against all test reals of the instance.
/// Throws missing_prediction (listing ids) when a test sample has no score.
EvalTable grouped_eval(const PredictionSet& predictions, const ProtocolInstance& instance, GroupBy group_by,
                       AvgMode avg_mode = AvgMode::unweighted);

/// One row per instance (its protocol name): all test fakes vs all test reals.
EvalTable evaluate_suite(const PredictionSet& predictions, std::span<const ProtocolInstance> suite,
                         AvgMode avg_mode = AvgMode::unweighted);

/// Concatenated grouped evaluation over a suite, rows prefixed "<split>/".
EvalTable evaluate_suite_grouped(const PredictionSet& predictions, std::span<const ProtocolInstance> suite,
                                 GroupBy group_by, AvgMode avg_mode = AvgMode::unweighted);

enum class DeltaFlag { none, negative_significant, positive_significant };
std::string_view to_string(DeltaFlag flag) noexcept;

struct DeltaRow {
  std::string group;
  double auc_untrimmed = 0.0;  // [0, 1]
  double auc_trimmed = 0.0;
  double delta_pp = 0.0;       // percentage points, trimmed - untrimmed
  DeltaFlag flag = DeltaFlag::none;
};

struct DeltaTable {
  double threshold_pp = 10.0;
  std::vector<DeltaRow> rows;  // AVG last
};

/// Flags strictly beyond +/- threshold_pp. Throws group_mismatch unless both
/// tables list the same groups.
DeltaTable delta_report(const EvalTable& untrimmed, const EvalTable& trimmed, double threshold_pp);

/// Significance threshold conventionally used per dataset: 10 points for
/// FakeAVCeleb, 3 for DeepSpeak v1.
double threshold_preset(std::string_view dataset);

std::string eval_table_json(const EvalTable& table);
/// group,auc,ap,n_real,n_fake,pinned with metrics in percent (2 decimals).
std::string eval_table_csv(const EvalTable& table);
EvalTable eval_table_from_json(std::string_view text);
EvalTable read_eval_table(const std::filesystem::path& path);

std::string delta_table_json(const DeltaTable& table);
std::string delta_table_csv(const DeltaTable& table);

std::string roc_points_csv(const PredictionSet& predictions, const ProtocolInstance& instance);

}  // namespace avbench
