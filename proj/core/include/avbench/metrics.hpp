#pragma once

#include <span>
#include <vector>

#include "avbench/manifest.hpp"

namespace avbench {

/// Sum of the fake-class probabilities; index 0 is the real class.
/// Throws invalid_distribution unless entries are finite, non-negative and
/// sum to 1 within 1e-6.
double fake_score(std::span<const double> distribution);

/// Fake iff some fake class strictly beats the real class (ties -> real).
Label argmax_decision(std::span<const double> distribution);

void validate_distribution(std::span<const double> distribution);

/// ROC-AUC as the Mann-Whitney statistic: the fraction of (positive,
/// negative) pairs ranked correctly, ties counting one half. Computed from
/// mid-ranks in O(n log n). Labels are 0/1; throws degenerate_labels when
/// only one class is present.
double auc(std::span<const int> labels, std::span<const double> scores);

/// Average precision, sum over thresholds of (R_k - R_{k-1}) P_k. Samples
/// with equal scores enter together, so ties share one precision value.
/// Throws no_positives.
double average_precision(std::span<const int> labels, std::span<const double> scores);

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

/// One point per distinct score (descending), starting at (0, 0).
std::vector<RocPoint> roc_curve(std::span<const int> labels, std::span<const double> scores);

}  // namespace avbench
