#include <gtest/gtest.h>

#include <map>
#include <set>

#include "avbench/error.hpp"
#include "avbench/protocol.hpp"
#include "fixtures.hpp"

namespace avbench {
namespace {

using testing::identity_overlap;
using testing::synthetic_deepspeak;
using testing::synthetic_manifest;

const Taxonomy kFavc = Taxonomy::fakeavceleb();
const Taxonomy kDs = Taxonomy::deepspeak();

std::map<std::string, std::set<Phase>> phases_by_identity(const Manifest& m, const SplitAssignment& a) {
  std::map<std::string, std::set<Phase>> out;
  for (const auto& r : m.records) out[r.identity].insert(a.phase_of.at(r.sample_id));
  return out;
}

TEST(AssignFakeAvCeleb, UniformTenByTen) {
  Manifest m = synthetic_manifest(kFavc, 10, 1, 3);  // 1*7 fakes + 3 reals = 10 per identity
  ASSERT_EQ(m.records.size(), 100u);
  const auto a = assign_fakeavceleb(m, {0.6, 0.1, 0.3}, 42);
  EXPECT_EQ(a.count(Phase::train), 60u);
  EXPECT_EQ(a.count(Phase::val), 10u);
  EXPECT_EQ(a.count(Phase::test), 30u);
  for (const auto& [id, phases] : phases_by_identity(m, a)) EXPECT_EQ(phases.size(), 1u) << id;
}

TEST(AssignFakeAvCeleb, DeterministicAndSeedSensitive) {
  const Manifest m = synthetic_manifest(kFavc, 30);
  EXPECT_EQ(assign_fakeavceleb(m, {}, 5), assign_fakeavceleb(m, {}, 5));
  EXPECT_NE(assign_fakeavceleb(m, {}, 5).phase_of, assign_fakeavceleb(m, {}, 6).phase_of);
}

TEST(AssignFakeAvCeleb, UnequalIdentitySizesStayDisjoint) {
  Manifest m = synthetic_manifest(kFavc, 9);
  Manifest extra = synthetic_manifest(kFavc, 3, 4);
  for (auto r : extra.records) {
    r.identity = "big" + r.identity;
    r.sample_id = "big" + r.sample_id;
    m.records.push_back(r);
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = assign_fakeavceleb(m, {}, seed);
    EXPECT_EQ(a.phase_of.size(), m.records.size());
    for (const auto& [id, phases] : phases_by_identity(m, a)) EXPECT_EQ(phases.size(), 1u);
  }
}

TEST(AssignFakeAvCeleb, TooFewIdentities) {
  try {
    assign_fakeavceleb(synthetic_manifest(kFavc, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::too_few_identities);
  }
}

TEST(AssignDeepSpeak, KeepsProvidedTest) {
  const Manifest m = synthetic_deepspeak(40);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = assign_deepspeak(m, 0.2, seed);
    for (const auto& r : m.records) {
      if (r.provided_phase == Phase::test) {
        EXPECT_EQ(a.phase_of.at(r.sample_id), Phase::test);
      } else {
        EXPECT_NE(a.phase_of.at(r.sample_id), Phase::test);
      }
    }
    for (const auto& [id, phases] : phases_by_identity(m, a)) EXPECT_EQ(phases.size(), 1u);
    const double train_side = static_cast<double>(a.count(Phase::train) + a.count(Phase::val));
    EXPECT_NEAR(a.count(Phase::val) / train_side, 0.2, 0.05);
  }
}

TEST(AssignDeepSpeak, ZeroValidation) {
  EXPECT_EQ(assign_deepspeak(synthetic_deepspeak(12), 0.0, 1).count(Phase::val), 0u);
}

TEST(AssignDeepSpeak, RandomCarveIsBySample) {
  const Manifest m = synthetic_deepspeak(40);
  const auto a = assign_deepspeak(m, 0.2, 3, ValCarve::random);
  const double train_side = static_cast<double>(a.count(Phase::train) + a.count(Phase::val));
  EXPECT_NEAR(a.count(Phase::val) / train_side, 0.2, 0.01);
}

TEST(AssignDeepSpeak, MissingPhaseTag) {
  Manifest m = synthetic_deepspeak(8);
  m.records[3].provided_phase.reset();
  try {
    assign_deepspeak(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::missing_phase_tag);
  }
}

std::map<std::string, std::set<std::string>> group_labels(const Taxonomy& t) {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& g : method_groups(t)) {
    for (const auto& c : g.combos) out[g.name].insert(t.label(c));
  }
  return out;
}

TEST(MethodGroups, FakeAvCeleb) {
  using S = std::set<std::string>;
  const auto g = group_labels(kFavc);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g.at("Wav2Lip"), (S{"Wav2Lip+realAudio", "Wav2Lip+fakeAudio"}));
  EXPECT_EQ(g.at("FaceSwap"), (S{"FaceSwap+realAudio", "FaceSwap+Wav2Lip+fakeAudio"}));
  EXPECT_EQ(g.at("FSGAN"), (S{"FSGAN+realAudio", "FSGAN+Wav2Lip+fakeAudio"}));
  EXPECT_EQ(g.at("realVideo-fakeAudio"), (S{"realVideo+fakeAudio"}));
  EXPECT_EQ(method_group_of(kFavc, Combo{{"FaceSwap", "Wav2Lip"}, "SV2TTS"}), "FaceSwap");
}

TEST(MethodGroups, DeepSpeak) {
  using S = std::set<std::string>;
  const auto g = group_labels(kDs);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.at("Wav2Lip").size(), 2u);
  EXPECT_EQ(g.at("Retalking").size(), 2u);
  EXPECT_EQ(g.at("FaceFusion"), (S{"FaceFusion+realAudio"}));
  EXPECT_EQ(g.at("FaceFusionGAN"), (S{"FaceFusionGAN+realAudio"}));
  EXPECT_EQ(g.at("FaceFusionLive"), (S{"FaceFusionLive+realAudio"}));
}

TEST(MethodGroups, PartitionProperty) {
  for (const auto& t : {kFavc, kDs}) {
    std::multiset<std::string> all;
    for (const auto& [name, labels] : group_labels(t)) all.insert(labels.begin(), labels.end());
    std::multiset<std::string> expect;
    for (const auto& c : t.combos) expect.insert(t.label(c));
    EXPECT_EQ(all, expect);
  }
}

TEST(ProtocolSpec, ParseAndName) {
  for (auto text : {"standard", "method:FaceSwap", "family:LipSynthesis", "established:Wav2Lip+realAudio"}) {
    EXPECT_EQ(ProtocolSpec::parse(text, kFavc).name(), text);
  }
  EXPECT_EQ(ProtocolSpec::parse("established:W2L+rA", kFavc).name(), "established:Wav2Lip+realAudio");
  EXPECT_THROW(ProtocolSpec::parse("method:Retalking", kFavc), Error);
  EXPECT_THROW(ProtocolSpec::parse("bogus", kFavc), Error);
  EXPECT_THROW(ProtocolSpec::parse("established:FaceSwap+realAudio", kFavc), Error);
}

struct Fixture {
  Manifest m = synthetic_manifest(kFavc, 12);
  SplitAssignment a = assign_fakeavceleb(m, {}, 11);

  ProtocolInstance build(std::string_view spec) const { return build_protocol(a, m, ProtocolSpec::parse(spec, m.taxonomy)); }
  std::vector<ProtocolInstance> suite(std::string_view name) const {
    std::vector<ProtocolInstance> out;
    for (const auto& s : suite_specs(name, m.taxonomy)) out.push_back(build_protocol(a, m, s));
    return out;
  }
};

std::set<std::string> train_side_inventory(const ProtocolInstance& i) {
  auto t = i.inventory(Phase::train);
  auto v = i.inventory(Phase::val);
  t.insert(v.begin(), v.end());
  return t;
}

TEST(BuildProtocol, FamilyLipSynthesis) {
  Fixture f;
  const auto inst = f.build("family:LipSynthesis");
  for (const auto* phase : {&inst.train, &inst.val}) {
    for (const auto& r : *phase) EXPECT_FALSE(Combo(r.combo()).has_video_method("Wav2Lip")) << r.sample_id;
  }
  EXPECT_EQ(inst.inventory(Phase::test),
            (std::set<std::string>{"Wav2Lip+realAudio", "Wav2Lip+fakeAudio", "FaceSwap+Wav2Lip+fakeAudio",
                                   "FSGAN+Wav2Lip+fakeAudio"}));
  EXPECT_TRUE(inst.diagnosis.manipulation_leaks.empty());
}

TEST(BuildProtocol, FamilyFaceAnimation) {
  Fixture f;
  const auto inst = f.build("family:FaceAnimation");
  EXPECT_EQ(inst.inventory(Phase::test),
            (std::set<std::string>{"FaceSwap+realAudio", "FSGAN+realAudio", "FaceSwap+Wav2Lip+fakeAudio",
                                   "FSGAN+Wav2Lip+fakeAudio"}));
  EXPECT_EQ(train_side_inventory(inst),
            (std::set<std::string>{"Wav2Lip+realAudio", "Wav2Lip+fakeAudio", "realVideo+fakeAudio"}));
}

TEST(BuildProtocol, MethodSplitTestsOneGroup) {
  Fixture f;
  for (const auto& g : method_groups(kFavc)) {
    const auto inst = f.build("method:" + g.name);
    std::set<std::string> expect;
    for (const auto& c : g.combos) expect.insert(kFavc.label(c));
    EXPECT_EQ(inst.inventory(Phase::test), expect);
    for (const auto& label : train_side_inventory(inst)) EXPECT_FALSE(expect.count(label));
  }
}

TEST(BuildProtocol, DeepSpeakSingletonMethod) {
  const Manifest m = synthetic_deepspeak(16);
  const auto a = assign_deepspeak(m, 0.2, 1);
  const auto inst = build_protocol(a, m, ProtocolSpec::parse("method:FaceFusionGAN", kDs));
  for (const auto& r : inst.test) {
    if (r.is_fake()) {
      EXPECT_EQ(r.video_methods, std::vector<std::string>{"FaceFusionGAN"});
    }
  }
  EXPECT_EQ(inst.inventory(Phase::test), std::set<std::string>{"FaceFusionGAN+realAudio"});
}

TEST(BuildProtocol, StandardKeepsAssignment) {
  Fixture f;
  const auto inst = f.build("standard");
  EXPECT_EQ(inst.train.size(), f.a.count(Phase::train));
  EXPECT_EQ(inst.val.size(), f.a.count(Phase::val));
  EXPECT_EQ(inst.test.size(), f.a.count(Phase::test));
  EXPECT_TRUE(inst.diagnosis.manipulation_leaks.empty());
}

TEST(BuildProtocol, EstablishedW2LRealAudioLeaks) {
  Fixture f;
  const auto inst = f.build("established:Wav2Lip+realAudio");
  EXPECT_TRUE(train_side_inventory(inst).count("Wav2Lip+fakeAudio"));
  EXPECT_FALSE(train_side_inventory(inst).count("FaceSwap+realAudio"));
  EXPECT_EQ(inst.inventory(Phase::test), std::set<std::string>{"Wav2Lip+realAudio"});
  ASSERT_FALSE(inst.diagnosis.manipulation_leaks.empty());
  const auto& leak = inst.diagnosis.manipulation_leaks.front();
  EXPECT_EQ(leak.method, "Wav2Lip");
  EXPECT_NE(std::find(leak.train_combos.begin(), leak.train_combos.end(), "Wav2Lip+fakeAudio"),
            leak.train_combos.end());
}

TEST(BuildProtocol, Errors) {
  Fixture f;
  Manifest only_reals = f.m;
  std::erase_if(only_reals.records, [](const SampleRecord& r) { return r.is_fake(); });
  const auto a = assign_fakeavceleb(only_reals, {}, 1);
  try {
    build_protocol(a, only_reals, ProtocolSpec::parse("standard", kFavc));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_test_set);
  }
}

TEST(Diagnosis, EstablishedSuite) {
  Fixture f;
  const auto suite = f.suite("established");
  ASSERT_EQ(suite.size(), 5u);
  const auto d = diagnose_suite(suite);
  std::set<std::string> gaps;
  for (const auto& g : d.coverage_gaps) gaps.insert(g.combo);
  EXPECT_EQ(gaps, (std::set<std::string>{"FaceSwap+realAudio", "FSGAN+realAudio"}));
}

TEST(Diagnosis, ProposedFamilySuiteIsClean) {
  Fixture f;
  const auto suite = f.suite("family");
  ASSERT_EQ(suite.size(), 2u);
  const auto d = diagnose_suite(suite);
  EXPECT_TRUE(d.coverage_gaps.empty());
  for (const auto& [name, report] : d.instances) {
    EXPECT_TRUE(report.empty()) << name;
  }
}

TEST(Diagnosis, MethodSuiteCoversEverything) {
  Fixture f;
  const auto suite = f.suite("method");
  EXPECT_EQ(suite.size(), 4u);
  EXPECT_TRUE(coverage_gaps(suite).empty());
  std::multiset<std::string> tested;
  for (const auto& inst : suite) {
    const auto inv = inst.inventory(Phase::test);
    tested.insert(inv.begin(), inv.end());
  }
  EXPECT_EQ(tested.size(), 7u);
  EXPECT_EQ(std::set<std::string>(tested.begin(), tested.end()).size(), 7u);
}

TEST(Diagnosis, FamilyExclusivity) {
  Fixture f;
  const auto lip = f.build("family:LipSynthesis");
  const auto face = f.build("family:FaceAnimation");
  std::set<std::string> lip_fakes;
  for (const auto& r : lip.test) {
    if (r.is_fake()) lip_fakes.insert(r.sample_id);
  }
  std::set<std::string> both;
  for (const auto& r : face.test) {
    if (r.is_fake() && lip_fakes.count(r.sample_id)) both.insert(kFavc.label(kFavc.canonicalize(r.combo())));
  }
  EXPECT_EQ(both, (std::set<std::string>{"FaceSwap+Wav2Lip+fakeAudio", "FSGAN+Wav2Lip+fakeAudio"}));

  const Manifest m = synthetic_deepspeak(16);
  const auto a = assign_deepspeak(m, 0.2, 1);
  const auto dl = build_protocol(a, m, ProtocolSpec::parse("family:LipSynthesis", kDs));
  const auto df = build_protocol(a, m, ProtocolSpec::parse("family:FaceAnimation", kDs));
  std::set<std::string> ds_lip;
  for (const auto& r : dl.test) {
    if (r.is_fake()) ds_lip.insert(r.sample_id);
  }
  for (const auto& r : df.test) {
    if (r.is_fake()) {
      EXPECT_FALSE(ds_lip.count(r.sample_id));
    }
  }
}

TEST(Diagnosis, IdentityLeakDetected) {
  Fixture f;
  auto inst = f.build("standard");
  inst.test.push_back(inst.train.front());
  inst.test.back().sample_id = "moved";
  const auto d = diagnose(inst);
  ASSERT_EQ(d.identity_leaks.size(), 1u);
  EXPECT_EQ(d.identity_leaks[0].identity, inst.train.front().identity);
  EXPECT_TRUE(d.has_leaks());
}

TEST(Protocols, HoldoutsPreserveDisjointness) {
  Fixture f;
  for (const auto& name : {"established", "method", "family"}) {
    for (const auto& inst : f.suite(name)) {
      EXPECT_TRUE(identity_overlap(inst).empty()) << inst.spec.name();
      std::set<std::string> train_ids;
      for (const auto& r : inst.train) train_ids.insert(r.sample_id);
      for (const auto& r : inst.val) train_ids.insert(r.sample_id);
      for (const auto& r : inst.test) EXPECT_FALSE(train_ids.count(r.sample_id));
      for (const auto& r : inst.train) EXPECT_EQ(f.a.phase_of.at(r.sample_id), Phase::train);
    }
  }
}

TEST(CrossDataset, SharedWav2Lip) {
  const Manifest favc = synthetic_manifest(kFavc, 12);
  const Manifest ds = synthetic_deepspeak(12);
  const auto inst = cross_dataset_protocol(favc, assign_fakeavceleb(favc, {}, 1), ds, assign_deepspeak(ds, 0.2, 1));
  EXPECT_EQ(inst.diagnosis.shared_methods, std::vector<std::string>{"Wav2Lip"});
  EXPECT_TRUE(inst.diagnosis.manipulation_leaks.empty());
  EXPECT_EQ(inst.inventory(Phase::test).size(), 7u);

  const auto back = cross_dataset_protocol(ds, assign_deepspeak(ds, 0.2, 1), favc, assign_fakeavceleb(favc, {}, 1));
  EXPECT_TRUE(back.inventory(Phase::test).count("realVideo+fakeAudio"));
}

TEST(CrossDataset, SameDatasetRejected) {
  const Manifest favc = synthetic_manifest(kFavc, 12);
  const auto a = assign_fakeavceleb(favc, {}, 1);
  try {
    cross_dataset_protocol(favc, a, favc, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::distinct_datasets_required);
  }
}

TEST(ProtocolIo, RoundTrip) {
  testing::TempDir dir;
  Fixture f;
  const auto inst = f.build("established:Wav2Lip+realAudio");
  write_protocol(inst, dir / "p", f.m.provenance);
  const auto back = read_protocol(dir / "p");
  EXPECT_EQ(back.spec, inst.spec);
  EXPECT_EQ(back.train, inst.train);
  EXPECT_EQ(back.val, inst.val);
  EXPECT_EQ(back.test, inst.test);
  EXPECT_EQ(back.diagnosis.manipulation_leaks.size(), inst.diagnosis.manipulation_leaks.size());

  const auto suite = f.suite("proposed");
  write_suite(suite, "proposed", dir / "s", f.m.provenance);
  EXPECT_TRUE(is_suite_dir(dir / "s"));
  EXPECT_FALSE(is_suite_dir(dir / "p"));
  const auto loaded = read_protocols(dir / "s");
  ASSERT_EQ(loaded.size(), suite.size());
  for (std::size_t i = 0; i < suite.size(); ++i) EXPECT_EQ(loaded[i].spec, suite[i].spec);
  EXPECT_EQ(read_protocols(dir / "p").size(), 1u);
}

}  // namespace
}  // namespace avbench
