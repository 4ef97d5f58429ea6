#include "avbench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "avbench/csv.hpp"
#include "avbench/error.hpp"
#include "avbench/metrics.hpp"
#include "json_io.hpp"

namespace avbench {
namespace {

using detail::Json;

bool invisible_to(const std::optional<Modality>& unimodal, const SampleRecord& r) {
  if (!unimodal) return false;
  return *unimodal == Modality::video ? r.video_methods.empty() : !r.audio_method.has_value();
}

EvalRow score_group(std::string name, const PredictionSet& predictions, const std::vector<const SampleRecord*>& reals,
                    const std::vector<const SampleRecord*>& fakes) {
  std::vector<int> labels;
  std::vector<double> scores;
  labels.reserve(reals.size() + fakes.size());
  scores.reserve(reals.size() + fakes.size());
  for (const auto* r : reals) {
    labels.push_back(0);
    scores.push_back(predictions.scores.at(r->sample_id));
  }
  for (const auto* r : fakes) {
    labels.push_back(1);
    scores.push_back(predictions.scores.at(r->sample_id));
  }
  EvalRow row;
  row.group = std::move(name);
  row.n_real = reals.size();
  row.n_fake = fakes.size();
  row.auc = auc(labels, scores);
  row.ap = average_precision(labels, scores);
  if (std::all_of(fakes.begin(), fakes.end(), [&](const SampleRecord* r) { return invisible_to(predictions.unimodal, *r); })) {
    row.auc = 0.5;
    row.pinned = true;
  }
  return row;
}

EvalRow average(const std::vector<EvalRow>& rows, AvgMode mode) {
  EvalRow avg;
  avg.group = "AVG";
  if (rows.empty()) return avg;
  double w_sum = 0.0;
  for (const auto& r : rows) {
    const double w = mode == AvgMode::weighted ? static_cast<double>(r.n_fake) : 1.0;
    avg.auc += w * r.auc;
    avg.ap += w * r.ap;
    w_sum += w;
    avg.n_real = std::max(avg.n_real, r.n_real);
    avg.n_fake += r.n_fake;
  }
  avg.auc /= w_sum;
  avg.ap /= w_sum;
  return avg;
}

void require_coverage(const PredictionSet& predictions, std::span<const ProtocolInstance> suite) {
  const auto missing = missing_predictions(predictions, suite);
  if (missing.empty()) return;
  std::string msg = std::to_string(missing.size()) + " test sample(s) lack a " + predictions.condition +
                    " prediction:";
  for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 20); ++i) msg += " " + missing[i];
  if (missing.size() > 20) msg += " ...";
  throw Error(Errc::missing_prediction, msg);
}

// Group keys a fake belongs to, in display order.
std::vector<std::string> keys_for(const SampleRecord& r, const Taxonomy& tax, GroupBy by) {
  const Combo combo = tax.canonicalize(r.combo());
  switch (by) {
    case GroupBy::split: return {};
    case GroupBy::combo: return {tax.label(combo)};
    case GroupBy::method: return {method_group_of(tax, combo)};
    case GroupBy::family: {
      std::vector<std::string> out;
      for (Family f : {Family::lip_synthesis, Family::face_animation}) {
        if (tax.combo_in_family(combo, f)) out.emplace_back(to_string(f));
      }
      if (out.empty()) out.emplace_back("realVideo");
      return out;
    }
    case GroupBy::audio_label: return {combo.audio_method ? "fakeAudio" : "realAudio"};
  }
  return {};
}

std::vector<std::string> display_order(const Taxonomy& tax, GroupBy by) {
  std::vector<std::string> out;
  switch (by) {
    case GroupBy::combo:
      for (const auto& c : tax.combos) out.push_back(tax.label(c));
      break;
    case GroupBy::method:
      for (const auto& g : method_groups(tax)) out.push_back(g.name);
      break;
    case GroupBy::family:
      out = {"LipSynthesis", "FaceAnimation", "realVideo"};
      break;
    case GroupBy::audio_label:
      out = {"fakeAudio", "realAudio"};
      break;
    case GroupBy::split:
      break;
  }
  return out;
}

}  // namespace

std::string_view to_string(GroupBy g) noexcept {
  switch (g) {
    case GroupBy::split: return "split";
    case GroupBy::combo: return "combo";
    case GroupBy::method: return "method";
    case GroupBy::family: return "family";
    case GroupBy::audio_label: return "audio_label";
  }
  return "?";
}

std::optional<GroupBy> parse_group_by(std::string_view text) {
  for (GroupBy g : {GroupBy::split, GroupBy::combo, GroupBy::method, GroupBy::family, GroupBy::audio_label}) {
    if (to_string(g) == text) return g;
  }
  return std::nullopt;
}

const EvalRow* EvalTable::find(std::string_view group) const {
  if (group == "AVG") return &avg;
  for (const auto& r : rows) {
    if (r.group == group) return &r;
  }
  return nullptr;
}

std::vector<std::string> missing_predictions(const PredictionSet& predictions, std::span<const ProtocolInstance> suite) {
  std::set<std::string> missing;
  for (const auto& inst : suite) {
    for (const auto& r : inst.test) {
      if (!predictions.scores.count(r.sample_id)) missing.insert(r.sample_id);
    }
  }
  return {missing.begin(), missing.end()};
}

EvalTable grouped_eval(const PredictionSet& predictions, const ProtocolInstance& instance, GroupBy group_by,
                       AvgMode avg_mode) {
  require_coverage(predictions, std::span<const ProtocolInstance>(&instance, 1));
  EvalTable table;
  table.group_by = group_by;
  table.avg_mode = avg_mode;
  table.condition = predictions.condition;
  table.detector = predictions.detector;

  std::vector<const SampleRecord*> reals;
  std::map<std::string, std::vector<const SampleRecord*>> fakes;
  std::vector<const SampleRecord*> all_fakes;
  for (const auto& r : instance.test) {
    if (!r.is_fake()) {
      reals.push_back(&r);
      continue;
    }
    all_fakes.push_back(&r);
    for (const auto& key : keys_for(r, instance.test_taxonomy, group_by)) fakes[key].push_back(&r);
  }
  if (reals.empty()) throw Error(Errc::degenerate_labels, instance.spec.name() + ": test phase has no reals");

  if (group_by == GroupBy::split) {
    table.rows.push_back(score_group(instance.spec.name(), predictions, reals, all_fakes));
  } else {
    std::vector<std::string> order = display_order(instance.test_taxonomy, group_by);
    for (const auto& [key, members] : fakes) {
      if (std::find(order.begin(), order.end(), key) == order.end()) order.push_back(key);
    }
    for (const auto& key : order) {
      auto it = fakes.find(key);
      if (it == fakes.end()) continue;
      table.rows.push_back(score_group(key, predictions, reals, it->second));
    }
  }
  table.avg = average(table.rows, avg_mode);
  return table;
}

EvalTable evaluate_suite(const PredictionSet& predictions, std::span<const ProtocolInstance> suite, AvgMode avg_mode) {
  require_coverage(predictions, suite);
  EvalTable table;
  table.group_by = GroupBy::split;
  table.avg_mode = avg_mode;
  table.condition = predictions.condition;
  table.detector = predictions.detector;
  for (const auto& inst : suite) {
    auto single = grouped_eval(predictions, inst, GroupBy::split, avg_mode);
    table.rows.push_back(single.rows.front());
  }
  table.avg = average(table.rows, avg_mode);
  return table;
}

EvalTable evaluate_suite_grouped(const PredictionSet& predictions, std::span<const ProtocolInstance> suite,
                                 GroupBy group_by, AvgMode avg_mode) {
  if (group_by == GroupBy::split) return evaluate_suite(predictions, suite, avg_mode);
  require_coverage(predictions, suite);
  EvalTable table;
  table.group_by = group_by;
  table.avg_mode = avg_mode;
  table.condition = predictions.condition;
  table.detector = predictions.detector;
  for (const auto& inst : suite) {
    auto single = grouped_eval(predictions, inst, group_by, avg_mode);
    for (auto row : single.rows) {
      if (suite.size() > 1) row.group = inst.spec.name() + "/" + row.group;
      table.rows.push_back(std::move(row));
    }
  }
  table.avg = average(table.rows, avg_mode);
  return table;
}

std::string_view to_string(DeltaFlag flag) noexcept {
  switch (flag) {
    case DeltaFlag::none: return "none";
    case DeltaFlag::negative_significant: return "negative-significant";
    case DeltaFlag::positive_significant: return "positive-significant";
  }
  return "?";
}

DeltaTable delta_report(const EvalTable& untrimmed, const EvalTable& trimmed, double threshold_pp) {
  if (!(threshold_pp >= 0.0)) throw Error(Errc::invalid_argument, "threshold must be non-negative");
  if (untrimmed.rows.size() != trimmed.rows.size()) {
    throw Error(Errc::group_mismatch, "tables have " + std::to_string(untrimmed.rows.size()) + " and " +
                                          std::to_string(trimmed.rows.size()) + " groups");
  }
  DeltaTable out;
  out.threshold_pp = threshold_pp;
  auto make = [&](const EvalRow& u, const EvalRow& t) {
    DeltaRow row;
    row.group = u.group;
    row.auc_untrimmed = u.auc;
    row.auc_trimmed = t.auc;
    // Snapped to 1e-8 pp so decimal inputs such as 79.50 - 90.39 compare
    // the way they read.
    row.delta_pp = std::round((t.auc - u.auc) * 100.0 * 1e8) / 1e8;
    if (row.delta_pp < -threshold_pp) row.flag = DeltaFlag::negative_significant;
    else if (row.delta_pp > threshold_pp) row.flag = DeltaFlag::positive_significant;
    return row;
  };
  for (const auto& u : untrimmed.rows) {
    const EvalRow* t = trimmed.find(u.group);
    if (!t) throw Error(Errc::group_mismatch, "group '" + u.group + "' missing from trimmed table");
    out.rows.push_back(make(u, *t));
  }
  out.rows.push_back(make(untrimmed.avg, trimmed.avg));
  return out;
}

double threshold_preset(std::string_view dataset) {
  const std::string id = canonical_dataset_id(dataset);
  if (id == kFakeAvCeleb) return 10.0;
  if (id == kDeepSpeak) return 3.0;
  throw Error(Errc::invalid_argument, "no threshold preset for dataset '" + std::string(dataset) + "'");
}

namespace {

Json row_json(const EvalRow& r) {
  return Json{{"group", r.group}, {"auc", r.auc}, {"ap", r.ap}, {"n_real", r.n_real},
              {"n_fake", r.n_fake}, {"pinned", r.pinned}};
}

EvalRow row_from_json(const Json& j) {
  EvalRow r;
  r.group = j.at("group").get<std::string>();
  r.auc = j.at("auc").get<double>();
  r.ap = j.at("ap").get<double>();
  r.n_real = j.value("n_real", std::size_t{0});
  r.n_fake = j.value("n_fake", std::size_t{0});
  r.pinned = j.value("pinned", false);
  return r;
}

}  // namespace

std::string eval_table_json(const EvalTable& t) {
  Json j;
  j["group_by"] = to_string(t.group_by);
  j["avg_mode"] = t.avg_mode == AvgMode::weighted ? "weighted" : "unweighted";
  j["condition"] = t.condition;
  j["detector"] = t.detector;
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(row_json(r));
  j["rows"] = rows;
  j["avg"] = row_json(t.avg);
  return j.dump(2) + "\n";
}

std::string eval_table_csv(const EvalTable& t) {
  std::string out = csv::format_row({"group", "auc", "ap", "n_real", "n_fake", "pinned"});
  auto emit = [&](const EvalRow& r) {
    out += csv::format_row({r.group, csv::fixed(100.0 * r.auc, 2), csv::fixed(100.0 * r.ap, 2),
                            std::to_string(r.n_real), std::to_string(r.n_fake), r.pinned ? "true" : "false"});
  };
  for (const auto& r : t.rows) emit(r);
  emit(t.avg);
  return out;
}

EvalTable eval_table_from_json(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    EvalTable t;
    const auto g = parse_group_by(j.at("group_by").get<std::string>());
    if (!g) throw Error(Errc::parse_error, "unknown group_by in evaluation table");
    t.group_by = *g;
    t.avg_mode = j.value("avg_mode", "unweighted") == "weighted" ? AvgMode::weighted : AvgMode::unweighted;
    t.condition = j.value("condition", "");
    t.detector = j.value("detector", "");
    for (const auto& r : j.at("rows")) t.rows.push_back(row_from_json(r));
    t.avg = row_from_json(j.at("avg"));
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("evaluation table: ") + e.what());
  }
}

EvalTable read_eval_table(const std::filesystem::path& path) {
  return eval_table_from_json(detail::read_text_file(path));
}

std::string delta_table_json(const DeltaTable& t) {
  Json j;
  j["threshold_pp"] = t.threshold_pp;
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"group", r.group},
                    {"auc_untrimmed", r.auc_untrimmed},
                    {"auc_trimmed", r.auc_trimmed},
                    {"delta_pp", r.delta_pp},
                    {"flag", to_string(r.flag)}});
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string delta_table_csv(const DeltaTable& t) {
  std::string out = csv::format_row({"group", "auc_untrimmed", "auc_trimmed", "delta", "flag", "threshold"});
  for (const auto& r : t.rows) {
    out += csv::format_row({r.group, csv::fixed(100.0 * r.auc_untrimmed, 2), csv::fixed(100.0 * r.auc_trimmed, 2),
                            csv::fixed(r.delta_pp, 2), std::string(to_string(r.flag)),
                            csv::fixed(t.threshold_pp, 2)});
  }
  return out;
}

std::string roc_points_csv(const PredictionSet& predictions, const ProtocolInstance& instance) {
  require_coverage(predictions, std::span<const ProtocolInstance>(&instance, 1));
  std::vector<int> labels;
  std::vector<double> scores;
  for (const auto& r : instance.test) {
    labels.push_back(r.is_fake() ? 1 : 0);
    scores.push_back(predictions.scores.at(r.sample_id));
  }
  std::string out = csv::format_row({"threshold", "fpr", "tpr"});
  for (const auto& p : roc_curve(labels, scores)) {
    out += csv::format_row({std::isinf(p.threshold) ? "inf" : detail::shortest(p.threshold), detail::shortest(p.fpr),
                            detail::shortest(p.tpr)});
  }
  return out;
}

}  // namespace avbench
