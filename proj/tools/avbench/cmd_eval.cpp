#include <iostream>

#include "avbench/csv.hpp"
#include "avbench/error.hpp"
#include "avbench/evaluation.hpp"
#include "common.hpp"

namespace avbench::cli {
namespace {

namespace fs = std::filesystem;

struct EvalArgs {
  fs::path scores, protocol, out;
  std::string group_by = "split";
  std::string condition;
  std::string avg = "unweighted";
  bool roc = false;
};

struct CompareArgs {
  fs::path untrimmed, trimmed, scores, protocol, out;
  std::string group_by = "split";
  std::string avg = "unweighted";
  std::optional<double> threshold;
  std::string preset;
};

AvgMode avg_mode(const std::string& s) { return s == "weighted" ? AvgMode::weighted : AvgMode::unweighted; }

GroupBy group_by(const std::string& s) {
  const auto g = parse_group_by(s);
  if (!g) throw Error(Errc::invalid_argument, "unknown --group-by '" + s + "'");
  return *g;
}

EvalTable evaluate(const PredictionSet& ps, const std::vector<ProtocolInstance>& suite, GroupBy by, AvgMode avg) {
  return by == GroupBy::split ? evaluate_suite(ps, suite, avg) : evaluate_suite_grouped(ps, suite, by, avg);
}

void print_table(const EvalTable& t) {
  std::cout << eval_table_csv(t);
}

int run_eval(const Globals& g, const EvalArgs& a) {
  if (a.scores.empty() || a.protocol.empty() || a.out.empty()) {
    throw Error(Errc::invalid_argument, "eval needs --scores, --protocol and --out");
  }
  Run run(g, "eval");
  run.input(a.scores);
  run.input(a.protocol);
  const auto suite = read_protocols(a.protocol);
  const PredictionSet ps = select_condition(read_prediction_file(a.scores), a.condition);
  const EvalTable table = evaluate(ps, suite, group_by(a.group_by), avg_mode(a.avg));
  fs::create_directories(a.out);
  if (g.want_json()) run.write(a.out / "eval.json", eval_table_json(table));
  if (g.want_csv()) run.write(a.out / "eval.csv", eval_table_csv(table));
  if (a.roc) {
    for (std::size_t i = 0; i < suite.size(); ++i) {
      const std::string name = suite.size() == 1 ? "roc.csv" : "roc_" + std::to_string(i) + ".csv";
      run.write(a.out / name, roc_points_csv(ps, suite[i]));
    }
  }
  run.finish(a.out);
  print_table(table);
  return 0;
}

int run_compare(const Globals& g, const CompareArgs& a) {
  if (a.out.empty()) throw Error(Errc::invalid_argument, "eval compare needs --out");
  Run run(g, "eval compare");
  EvalTable untrimmed, trimmed;
  std::string dataset;
  const bool tables = a.protocol.empty();
  if (tables) {
    if (a.untrimmed.empty() || a.trimmed.empty()) {
      throw Error(Errc::invalid_argument, "without --protocol, --untrimmed and --trimmed must be eval.json tables");
    }
    run.input(a.untrimmed);
    run.input(a.trimmed);
    untrimmed = read_eval_table(a.untrimmed);
    trimmed = read_eval_table(a.trimmed);
  } else {
    run.input(a.protocol);
    const auto suite = read_protocols(a.protocol);
    if (!suite.empty()) dataset = suite.front().spec.dataset;
    PredictionFile uf, tf;
    if (!a.scores.empty()) {
      run.input(a.scores);
      uf = tf = read_prediction_file(a.scores);
    } else {
      if (a.untrimmed.empty() || a.trimmed.empty()) {
        throw Error(Errc::invalid_argument, "give --scores with both conditions, or --untrimmed and --trimmed");
      }
      run.input(a.untrimmed);
      run.input(a.trimmed);
      uf = read_prediction_file(a.untrimmed);
      tf = read_prediction_file(a.trimmed);
    }
    const PredictionSet us = select_condition(uf, uf.conditions().size() > 1 || !a.scores.empty() ? "untrimmed" : "");
    const PredictionSet ts = select_condition(tf, tf.conditions().size() > 1 || !a.scores.empty() ? "trimmed" : "");
    const GroupBy by = group_by(a.group_by);
    untrimmed = evaluate(us, suite, by, avg_mode(a.avg));
    trimmed = evaluate(ts, suite, by, avg_mode(a.avg));
  }

  double threshold = 10.0;
  if (a.threshold) {
    threshold = *a.threshold;
  } else if (!a.preset.empty()) {
    threshold = threshold_preset(a.preset);
  } else if (!dataset.empty()) {
    try {
      threshold = threshold_preset(dataset);
    } catch (const Error&) {
    }
  }
  const DeltaTable delta = delta_report(untrimmed, trimmed, threshold);

  fs::create_directories(a.out);
  if (g.want_json()) {
    run.write(a.out / "delta.json", delta_table_json(delta));
    if (!tables) {
      run.write(a.out / "eval_untrimmed.json", eval_table_json(untrimmed));
      run.write(a.out / "eval_trimmed.json", eval_table_json(trimmed));
    }
  }
  if (g.want_csv()) {
    run.write(a.out / "delta.csv", delta_table_csv(delta));
    if (!tables) {
      run.write(a.out / "eval_untrimmed.csv", eval_table_csv(untrimmed));
      run.write(a.out / "eval_trimmed.csv", eval_table_csv(trimmed));
    }
  }
  run.finish(a.out);
  std::cout << delta_table_csv(delta);
  return 0;
}

}  // namespace

void register_eval_commands(CLI::App& app, Globals& g, Action& action) {
  auto ea = std::make_shared<EvalArgs>();
  auto* eval = app.add_subcommand("eval", "AUC/AP of a prediction file on protocol test sets");
  eval->require_subcommand(0, 1);
  eval->add_option("--scores", ea->scores, "Prediction CSV");
  eval->add_option("--protocol", ea->protocol, "Protocol or suite directory");
  eval->add_option("--out", ea->out, "Output directory");
  eval->add_option("--group-by", ea->group_by)
      ->check(CLI::IsMember({"split", "combo", "method", "family", "audio_label"}))
      ->capture_default_str();
  eval->add_option("--condition", ea->condition, "untrimmed or trimmed (default: the file's only condition)");
  eval->add_option("--avg", ea->avg)->check(CLI::IsMember({"unweighted", "weighted"}))->capture_default_str();
  eval->add_flag("--roc", ea->roc, "Also write ROC points");

  auto ca = std::make_shared<CompareArgs>();
  auto* compare = eval->add_subcommand("compare", "Untrimmed vs trimmed AUC deltas");
  compare->add_option("--untrimmed", ca->untrimmed, "Prediction CSV, or eval.json without --protocol");
  compare->add_option("--trimmed", ca->trimmed, "Prediction CSV, or eval.json without --protocol");
  compare->add_option("--scores", ca->scores, "Prediction CSV holding both conditions");
  compare->add_option("--protocol", ca->protocol, "Protocol or suite directory");
  compare->add_option("--out", ca->out, "Output directory")->required();
  compare->add_option("--group-by", ca->group_by)
      ->check(CLI::IsMember({"split", "combo", "method", "family", "audio_label"}))
      ->capture_default_str();
  compare->add_option("--avg", ca->avg)->check(CLI::IsMember({"unweighted", "weighted"}))->capture_default_str();
  compare->add_option("--threshold", ca->threshold, "Significance threshold in AUC points");
  compare->add_option("--preset", ca->preset, "Threshold preset by dataset (fakeavceleb 10, deepspeak 3)");

  eval->callback([&action, &g, ea, eval] {
    if (eval->get_subcommands().empty()) action = [&g, ea] { return run_eval(g, *ea); };
  });
  compare->callback([&action, &g, ca] { action = [&g, ca] { return run_compare(g, *ca); }; });
}

}  // namespace avbench::cli
