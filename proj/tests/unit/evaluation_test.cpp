#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "avbench/error.hpp"
#include "avbench/evaluation.hpp"
#include "avbench/predictions.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace avbench {
namespace {

using testing::synthetic_manifest;

const Taxonomy kFavc = Taxonomy::fakeavceleb();

TEST(PredictionCsv, Scalar) {
  const auto f = parse_prediction_csv(
      "sample_id,condition,score\n"
      "a,untrimmed,0.25\n"
      "b,untrimmed,1e-3\n"
      "a,trimmed,0.5\n");
  EXPECT_FALSE(f.multiclass());
  EXPECT_EQ(f.rows.size(), 3u);
  EXPECT_EQ(f.conditions(), (std::set<std::string>{"trimmed", "untrimmed"}));
  const auto u = select_condition(f, "untrimmed");
  EXPECT_EQ(u.scores.at("b"), 1e-3);
  EXPECT_THROW(select_condition(f), Error);
}

TEST(PredictionCsv, MulticlassAndMarker) {
  const auto f = parse_prediction_csv(
      "# detector=SIMBA-multi unimodal=video\n"
      "sample_id,condition,p_real,p_w2l,p_fsgan\n"
      "a,untrimmed,0.6,0.3,0.1\n"
      "b,untrimmed,0.2,0.7,0.1\n");
  EXPECT_TRUE(f.multiclass());
  EXPECT_EQ(f.detector, "SIMBA-multi");
  EXPECT_EQ(f.unimodal, Modality::video);
  EXPECT_EQ(f.class_names, (std::vector<std::string>{"w2l", "fsgan"}));
  const auto s = select_condition(f);
  EXPECT_NEAR(s.scores.at("a"), 0.4, 1e-12);
  EXPECT_NEAR(s.scores.at("b"), 0.8, 1e-12);
  const auto again = parse_prediction_csv(format_prediction_csv(f));
  EXPECT_EQ(again.rows.size(), 2u);
  EXPECT_EQ(again.unimodal, Modality::video);
  EXPECT_EQ(again.rows[1].distribution, f.rows[1].distribution);
}

TEST(PredictionCsv, Rejects) {
  EXPECT_THROW(parse_prediction_csv("sample_id,condition,score\na,raw,0.1\n"), Error);
  EXPECT_THROW(parse_prediction_csv("sample_id,condition,score\na,untrimmed,nan\n"), Error);
  EXPECT_THROW(parse_prediction_csv("sample_id,condition,p_real,p_x\na,untrimmed,0.6,0.6\n"), Error);
  EXPECT_THROW(parse_prediction_csv("id,score\na,0.1\n"), Error);
  EXPECT_THROW(select_condition(parse_prediction_csv("sample_id,condition,score\na,untrimmed,0.1\na,untrimmed,0.2\n")),
               Error);
}

struct World {
  Manifest m = synthetic_manifest(kFavc, 12, 2);
  SplitAssignment a = assign_fakeavceleb(m, {}, 3);

  ProtocolInstance build(std::string_view spec) const { return build_protocol(a, m, ProtocolSpec::parse(spec, kFavc)); }
};

PredictionSet scores_for(const Manifest& m, const std::function<double(const SampleRecord&)>& f,
                         std::string condition = "untrimmed") {
  PredictionSet p;
  p.condition = std::move(condition);
  for (const auto& r : m.records) p.scores[r.sample_id] = f(r);
  return p;
}

TEST(GroupedEval, PerfectSeparation) {
  World w;
  const auto inst = w.build("standard");
  const auto p = scores_for(w.m, [](const SampleRecord& r) { return r.is_fake() ? 1.0 : 0.0; });
  for (GroupBy by : {GroupBy::split, GroupBy::combo, GroupBy::method, GroupBy::family, GroupBy::audio_label}) {
    const auto t = grouped_eval(p, inst, by);
    ASSERT_FALSE(t.rows.empty());
    for (const auto& row : t.rows) {
      EXPECT_EQ(row.auc, 1.0) << row.group;
      EXPECT_EQ(row.ap, 1.0) << row.group;
    }
    EXPECT_EQ(t.avg.auc, 1.0);
  }
}

TEST(GroupedEval, GroupsAgainstAllReals) {
  World w;
  const auto inst = w.build("standard");
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(0, 1);
  const auto p = scores_for(w.m, [&](const SampleRecord&) { return u(gen); });
  const auto t = grouped_eval(p, inst, GroupBy::combo);
  EXPECT_EQ(t.rows.size(), 7u);
  std::size_t reals = 0;
  for (const auto& r : inst.test) reals += !r.is_fake();
  double mean = 0.0;
  for (const auto& row : t.rows) {
    EXPECT_EQ(row.n_real, reals);
    std::vector<int> y;
    std::vector<double> s;
    for (const auto& r : inst.test) {
      if (r.is_fake() && kFavc.label(kFavc.canonicalize(r.combo())) != row.group) continue;
      y.push_back(r.is_fake());
      s.push_back(p.scores.at(r.sample_id));
    }
    EXPECT_NEAR(row.auc, testing::pairwise_auc(y, s), 1e-12);
    EXPECT_NEAR(row.ap, testing::staircase_ap(y, s), 1e-12);
    mean += row.auc / 7.0;
  }
  EXPECT_NEAR(t.avg.auc, mean, 1e-12);
}

TEST(GroupedEval, FamilyRowsAndWeightedAverage) {
  World w;
  const auto inst = w.build("standard");
  const auto p = scores_for(w.m, [](const SampleRecord& r) { return r.video_methods.empty() ? 0.0 : 1.0; });
  const auto t = grouped_eval(p, inst, GroupBy::family, AvgMode::weighted);
  ASSERT_TRUE(t.find("LipSynthesis") && t.find("FaceAnimation") && t.find("realVideo"));
  EXPECT_EQ(t.find("realVideo")->auc, 0.5);
  double num = 0, den = 0;
  for (const auto& row : t.rows) {
    num += row.auc * row.n_fake;
    den += row.n_fake;
  }
  EXPECT_NEAR(t.avg.auc, num / den, 1e-12);
}

TEST(GroupedEval, UnimodalVideoPinnedOnAudioOnlyFakes) {
  World w;
  const auto inst = w.build("standard");
  auto p = scores_for(w.m, [](const SampleRecord& r) { return r.video_methods.empty() ? 0.1 : 0.9; });
  p.unimodal = Modality::video;
  const auto t = grouped_eval(p, inst, GroupBy::method);
  const auto* row = t.find("realVideo-fakeAudio");
  ASSERT_TRUE(row);
  EXPECT_EQ(row->auc, 0.5);
  EXPECT_TRUE(row->pinned);
  EXPECT_FALSE(t.find("FaceSwap")->pinned);

  p.unimodal.reset();
  const auto* unpinned = grouped_eval(p, inst, GroupBy::method).find("realVideo-fakeAudio");
  EXPECT_FALSE(unpinned->pinned);
}

TEST(GroupedEval, MissingPredictionNamesIds) {
  World w;
  const auto inst = w.build("standard");
  auto p = scores_for(w.m, [](const SampleRecord&) { return 0.5; });
  const std::string victim = inst.test.front().sample_id;
  p.scores.erase(victim);
  try {
    grouped_eval(p, inst, GroupBy::split);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::missing_prediction);
    EXPECT_NE(std::string(e.what()).find(victim), std::string::npos);
  }
  const std::vector<ProtocolInstance> suite{inst};
  EXPECT_EQ(missing_predictions(p, suite), std::vector<std::string>{victim});
}

TEST(GroupedEval, PermutationInvariant) {
  World w;
  auto inst = w.build("family:FaceAnimation");
  std::mt19937 gen(8);
  std::uniform_real_distribution<double> u(0, 1);
  const auto p = scores_for(w.m, [&](const SampleRecord&) { return std::round(u(gen) * 5) / 5; });
  const auto before = grouped_eval(p, inst, GroupBy::combo);
  std::shuffle(inst.test.begin(), inst.test.end(), gen);
  const auto after = grouped_eval(p, inst, GroupBy::combo);
  ASSERT_EQ(before.rows.size(), after.rows.size());
  for (std::size_t i = 0; i < before.rows.size(); ++i) {
    EXPECT_EQ(before.rows[i].group, after.rows[i].group);
    EXPECT_NEAR(before.rows[i].auc, after.rows[i].auc, 1e-12);
    EXPECT_NEAR(before.rows[i].ap, after.rows[i].ap, 1e-12);
  }
}

TEST(EvaluateSuite, OneRowPerSplit) {
  World w;
  std::vector<ProtocolInstance> suite;
  for (const auto& s : suite_specs("method", kFavc)) suite.push_back(build_protocol(w.a, w.m, s));
  const auto p = scores_for(w.m, [](const SampleRecord& r) { return r.is_fake() ? 0.8 : 0.2; });
  const auto t = evaluate_suite(p, suite);
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[0].group, suite[0].spec.name());
  EXPECT_EQ(t.avg.group, "AVG");
  const auto g = evaluate_suite_grouped(p, suite, GroupBy::combo);
  EXPECT_EQ(g.rows.size(), 7u);
  EXPECT_NE(g.rows[0].group.find('/'), std::string::npos);
}

TEST(EvalTableIo, JsonRoundTripAndCsvPercent) {
  World w;
  const auto p = scores_for(w.m, [](const SampleRecord& r) { return r.is_fake() ? 0.8 : 0.2; });
  auto t = grouped_eval(p, w.build("standard"), GroupBy::combo);
  t.detector = "det";
  EXPECT_EQ(eval_table_from_json(eval_table_json(t)), t);
  const std::string csv = eval_table_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "group,auc,ap,n_real,n_fake,pinned");
  EXPECT_NE(csv.find(",100.00,100.00,"), std::string::npos);
  EXPECT_NE(csv.find("AVG,"), std::string::npos);
}

EvalTable table(std::vector<std::pair<std::string, double>> rows, double avg) {
  EvalTable t;
  for (auto& [g, a] : rows) {
    EvalRow r;
    r.group = g;
    r.auc = a;
    t.rows.push_back(r);
  }
  t.avg.group = "AVG";
  t.avg.auc = avg;
  return t;
}

TEST(Delta, KnownPairs) {
  const auto d = delta_report(table({{"x", 0.9039}}, 0.9039), table({{"x", 0.7950}}, 0.7950), 10.0);
  ASSERT_EQ(d.rows.size(), 2u);
  EXPECT_NEAR(d.rows[0].delta_pp, -10.89, 1e-9);
  EXPECT_EQ(d.rows[0].flag, DeltaFlag::negative_significant);
  EXPECT_EQ(d.rows.back().group, "AVG");

  const auto g = delta_report(table({{"FaceFusionGAN", 0.6963}}, 0.6963), table({{"FaceFusionGAN", 0.7966}}, 0.7966), 3.0);
  EXPECT_NEAR(g.rows[0].delta_pp, 10.03, 1e-9);
  EXPECT_EQ(g.rows[0].flag, DeltaFlag::positive_significant);
}

TEST(Delta, IdenticalIsNone) {
  const auto t = table({{"a", 0.7}, {"b", 0.9}}, 0.8);
  for (const auto& row : delta_report(t, t, 3.0).rows) {
    EXPECT_EQ(row.delta_pp, 0.0);
    EXPECT_EQ(row.flag, DeltaFlag::none);
  }
}

TEST(Delta, StrictThreshold) {
  const auto d = delta_report(table({{"a", 0.90}}, 0.9), table({{"a", 0.80}}, 0.8), 10.0);
  EXPECT_EQ(d.rows[0].flag, DeltaFlag::none);
}

TEST(Delta, GroupMismatch) {
  try {
    delta_report(table({{"a", 0.5}}, 0.5), table({{"b", 0.5}}, 0.5), 10.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::group_mismatch);
  }
  EXPECT_THROW(delta_report(table({{"a", 0.5}}, 0.5), table({{"a", 0.5}, {"b", 0.5}}, 0.5), 10.0), Error);
}

TEST(Delta, Presets) {
  EXPECT_EQ(threshold_preset("favc"), 10.0);
  EXPECT_EQ(threshold_preset("fakeavceleb"), 10.0);
  EXPECT_EQ(threshold_preset("deepspeak"), 3.0);
  EXPECT_THROW(threshold_preset("other"), Error);
}

TEST(Delta, CsvShape) {
  const auto d = delta_report(table({{"x", 0.9039}}, 0.9039), table({{"x", 0.7950}}, 0.7950), 10.0);
  const std::string csv = delta_table_csv(d);
  EXPECT_NE(csv.find("x,90.39,79.50,-10.89,negative-significant,10.00"), std::string::npos) << csv;
}

}  // namespace
}  // namespace avbench
