#include "avbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "avbench/error.hpp"

namespace avbench {
namespace {

void check_inputs(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) {
    throw Error(Errc::invalid_argument, "labels and scores differ in length");
  }
  for (int l : labels) {
    if (l != 0 && l != 1) throw Error(Errc::invalid_argument, "labels must be 0 or 1");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) throw Error(Errc::invalid_argument, "scores must be finite");
  }
}

// Indices sorted by descending score.
std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

void validate_distribution(std::span<const double> d) {
  if (d.empty()) throw Error(Errc::invalid_distribution, "empty distribution");
  double sum = 0.0;
  for (double p : d) {
    if (!std::isfinite(p) || p < 0.0) throw Error(Errc::invalid_distribution, "probabilities must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(Errc::invalid_distribution, "probabilities sum to " + std::to_string(sum));
  }
}

double fake_score(std::span<const double> d) {
  validate_distribution(d);
  double s = 0.0;
  for (std::size_t c = 1; c < d.size(); ++c) s += d[c];
  return std::clamp(s, 0.0, 1.0);
}

Label argmax_decision(std::span<const double> d) {
  validate_distribution(d);
  for (std::size_t c = 1; c < d.size(); ++c) {
    if (d[c] > d[0]) return Label::fake;
  }
  return Label::real;
}

double auc(std::span<const int> labels, std::span<const double> scores) {
  check_inputs(labels, scores);
  const auto positives = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const double negatives = static_cast<double>(labels.size()) - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(Errc::degenerate_labels, "AUC needs at least one positive and one negative");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of mid-ranks (1-based) of the positives.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) rank_sum += mid_rank;
    }
    i = j + 1;
  }
  const double u = rank_sum - positives * (positives + 1.0) / 2.0;
  return u / (positives * negatives);
}

double average_precision(std::span<const int> labels, std::span<const double> scores) {
  check_inputs(labels, scores);
  const auto positives = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  if (positives == 0) throw Error(Errc::no_positives, "average precision needs at least one positive");
  const auto order = descending_order(scores);
  double ap = 0.0;
  double tp = 0.0;
  double seen = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    double block_tp = 0.0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      block_tp += labels[order[j]];
      ++j;
    }
    tp += block_tp;
    seen += static_cast<double>(j - i);
    if (block_tp > 0) ap += (block_tp / positives) * (tp / seen);
    i = j;
  }
  return ap;
}

std::vector<RocPoint> roc_curve(std::span<const int> labels, std::span<const double> scores) {
  check_inputs(labels, scores);
  const auto positives = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const double negatives = static_cast<double>(labels.size()) - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(Errc::degenerate_labels, "ROC curve needs at least one positive and one negative");
  }
  const auto order = descending_order(scores);
  std::vector<RocPoint> points;
  points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  double tp = 0.0, fp = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? tp : fp) += 1.0;
      ++j;
    }
    points.push_back({scores[order[i]], fp / negatives, tp / positives});
    i = j;
  }
  return points;
}

}  // namespace avbench
