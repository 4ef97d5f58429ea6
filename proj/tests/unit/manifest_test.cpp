#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <random>

#include "avbench/error.hpp"
#include "avbench/ingest.hpp"
#include "avbench/manifest.hpp"
#include "avbench/media_probe.hpp"
#include "fixtures.hpp"

namespace avbench {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::invalid_argument;
}

TEST(Taxonomy, FakeAvCelebMethods) {
  const auto t = Taxonomy::fakeavceleb();
  EXPECT_EQ(t.family_of("Wav2Lip"), Family::lip_synthesis);
  EXPECT_EQ(t.family_of("FaceSwap"), Family::face_animation);
  EXPECT_EQ(t.family_of("FSGAN"), Family::face_animation);
  ASSERT_EQ(t.audio_methods.size(), 1u);
  EXPECT_EQ(t.audio_methods[0].name, "SV2TTS");
  EXPECT_EQ(t.combos.size(), 7u);
}

TEST(Taxonomy, DeepSpeakMethods) {
  const auto t = Taxonomy::deepspeak();
  EXPECT_EQ(t.family_of("Wav2Lip"), Family::lip_synthesis);
  EXPECT_EQ(t.family_of("Retalking"), Family::lip_synthesis);
  for (auto m : {"FaceFusion", "FaceFusionGAN", "FaceFusionLive"}) EXPECT_EQ(t.family_of(m), Family::face_animation);
  EXPECT_EQ(t.audio_methods[0].name, "ElevenLabs");
  EXPECT_EQ(t.combos.size(), 7u);
  for (const auto& c : t.combos) {
    if (c.audio_method) {
      EXPECT_EQ(t.family_of(c.video_methods.at(0)), Family::lip_synthesis);
    }
  }
}

TEST(Taxonomy, LabelsRoundTrip) {
  for (const auto& t : {Taxonomy::fakeavceleb(), Taxonomy::deepspeak()}) {
    std::set<std::string> seen;
    for (const auto& c : t.combos) {
      const auto label = t.label(c);
      EXPECT_TRUE(seen.insert(label).second);
      EXPECT_EQ(t.parse_combo(label), c) << label;
    }
  }
  const auto f = Taxonomy::fakeavceleb();
  EXPECT_EQ(f.label(Combo{{"FaceSwap", "Wav2Lip"}, "SV2TTS"}), "FaceSwap+Wav2Lip+fakeAudio");
  EXPECT_EQ(f.label(Combo{{}, "SV2TTS"}), "realVideo+fakeAudio");
  EXPECT_EQ(f.label(Combo{}), "real");
  EXPECT_EQ(f.parse_combo("W2L+rA"), (Combo{{"Wav2Lip"}, std::nullopt}));
  EXPECT_EQ(f.parse_combo("rV+fA"), (Combo{{}, "SV2TTS"}));
  EXPECT_EQ(f.parse_combo("FS+fA"), (Combo{{"FaceSwap", "Wav2Lip"}, "SV2TTS"}));
  EXPECT_EQ(f.canonicalize(Combo{{"Wav2Lip", "FSGAN"}, "SV2TTS"}).video_methods,
            (std::vector<std::string>{"FSGAN", "Wav2Lip"}));
  EXPECT_FALSE(f.parse_combo("Retalking+realAudio"));
}

TEST(Labels, DerivationIsPureInMethods) {
  std::mt19937 gen(7);
  const auto t = Taxonomy::fakeavceleb();
  for (int i = 0; i < 500; ++i) {
    SampleRecord r;
    r.sample_id = "s" + std::to_string(i);
    r.identity = "id1";
    r.video_label = gen() % 2 ? Label::fake : Label::real;
    r.audio_label = gen() % 2 ? Label::fake : Label::real;
    for (const auto& m : t.video_methods) {
      if (gen() % 2) r.video_methods.push_back(m.name);
    }
    if (gen() % 2) r.audio_method = "SV2TTS";
    const auto d = with_derived_labels(r);
    EXPECT_EQ(d.video_label == Label::fake, !r.video_methods.empty());
    EXPECT_EQ(d.audio_label == Label::fake, r.audio_method.has_value());
    EXPECT_EQ(d.video_label, derived_video_label(r));
    EXPECT_EQ(d.audio_label, derived_audio_label(r));
  }
}

Manifest three_records() {
  Manifest m;
  m.taxonomy = Taxonomy::fakeavceleb();
  m.provenance = {"/data/favc", "2024-01-01T00:00:00Z", "0.3.0", "test", "untrimmed"};
  SampleRecord a;
  a.sample_id = "a";
  a.dataset = m.taxonomy.dataset;
  a.identity = "id00001";
  a.video_path = "a.mp4";
  a.audio_path = "a.wav";
  a.n_frames = 120;
  a.fps = 29.97;
  a.duration_ms = 4004;
  SampleRecord b = a;
  b.sample_id = "b, with \"quotes\"";
  b.video_methods = {"FaceSwap", "Wav2Lip"};
  b.audio_method = "SV2TTS";
  b.n_frames.reset();
  SampleRecord c = a;
  c.sample_id = "c";
  c.identity = "id00002";
  c.video_methods = {"Wav2Lip"};
  c.provided_phase = Phase::test;
  for (auto* r : {&a, &b, &c}) m.records.push_back(with_derived_labels(*r));
  return m;
}

TEST(ManifestIo, RoundTrip) {
  TempDir dir;
  const Manifest m = three_records();
  save_manifest(m, dir / "m.csv");
  EXPECT_TRUE(fs::exists(sidecar_path(dir / "m.csv")));
  EXPECT_EQ(load_manifest(dir / "m.csv"), m);
}

TEST(ManifestIo, HeaderOrder) {
  TempDir dir;
  save_manifest(three_records(), dir / "m.csv");
  const std::string text = testing::read_file(dir / "m.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "sample_id,dataset,identity,video_path,audio_path,video_methods,audio_method,n_frames,fps,duration_ms,"
            "provided_phase");
  EXPECT_NE(text.find("FaceSwap;Wav2Lip"), std::string::npos);
}

void rewrite(const fs::path& p, const std::string& from, const std::string& to) {
  std::string text = testing::read_file(p);
  text.replace(text.find(from), from.size(), to);
  std::ofstream(p, std::ios::binary) << text;
}

TEST(ManifestIo, DuplicateId) {
  TempDir dir;
  save_manifest(three_records(), dir / "m.csv");
  std::string text = testing::read_file(dir / "m.csv");
  text += text.substr(text.find("\nc,") + 1);
  std::ofstream(dir / "m.csv", std::ios::binary) << text;
  EXPECT_EQ(code_of([&] { load_manifest(dir / "m.csv"); }), Errc::duplicate_sample_id);
}

TEST(ManifestIo, UnknownMethodNamed) {
  TempDir dir;
  save_manifest(three_records(), dir / "m.csv");
  rewrite(dir / "m.csv", "FaceSwap;Wav2Lip", "FaceSwap;DeepFaceLab");
  try {
    load_manifest(dir / "m.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unknown_method);
    EXPECT_NE(std::string(e.what()).find("DeepFaceLab"), std::string::npos);
  }
}

TEST(ManifestIo, SchemaVersion) {
  TempDir dir;
  save_manifest(three_records(), dir / "m.csv");
  rewrite(sidecar_path(dir / "m.csv"), "\"schema_version\": 1", "\"schema_version\": 99");
  EXPECT_EQ(code_of([&] { load_manifest(dir / "m.csv"); }), Errc::schema_version_mismatch);
}

TEST(Validate, CleanMiniature) {
  EXPECT_TRUE(validate_manifest(three_records()).empty());
  EXPECT_TRUE(validate_manifest(testing::synthetic_manifest(Taxonomy::fakeavceleb(), 4)).empty());
  EXPECT_TRUE(validate_manifest(testing::synthetic_deepspeak(8)).empty());
}

bool has_issue(const std::vector<Issue>& issues, IssueKind kind) {
  return std::any_of(issues.begin(), issues.end(), [&](const Issue& i) { return i.kind == kind; });
}

TEST(Validate, FaceAnimationWithClonedVoice) {
  Manifest m = testing::synthetic_deepspeak(4);
  SampleRecord r = m.records.front();
  r.sample_id = "bad";
  r.video_methods = {"FaceFusion"};
  r.audio_method = "ElevenLabs";
  m.records.push_back(with_derived_labels(r));
  const auto issues = validate_manifest(m);
  ASSERT_TRUE(has_issue(issues, IssueKind::audio_on_face_animation));
  for (const auto& i : issues) {
    if (i.kind == IssueKind::audio_on_face_animation) {
      EXPECT_NE(i.message.find("audio manipulation on face-animation sample"), std::string::npos);
    }
  }
}

TEST(Validate, LabelDerivation) {
  Manifest m = three_records();
  m.records[0].video_label = Label::fake;
  EXPECT_TRUE(has_issue(validate_manifest(m), IssueKind::label_derivation));
}

TEST(Validate, ComboRestriction) {
  Manifest m = three_records();
  m.records[0].video_methods = {"FaceSwap", "FSGAN"};
  m.records[0] = with_derived_labels(m.records[0]);
  EXPECT_TRUE(has_issue(validate_manifest(m), IssueKind::combo_violation));
}

TEST(Validate, MissingFilesOnlyWhenAsked) {
  TempDir dir;
  Manifest m = three_records();
  m.provenance.root = dir.path().string();
  EXPECT_FALSE(has_issue(validate_manifest(m, false), IssueKind::missing_file));
  EXPECT_TRUE(has_issue(validate_manifest(m, true), IssueKind::missing_file));
}

// --- ingestion -------------------------------------------------------------

void touch(const fs::path& p, const std::string& bytes = "x") {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << bytes;
}

std::string be32(std::uint32_t v) {
  return {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8), static_cast<char>(v)};
}

std::string box(const std::string& type, const std::string& payload) {
  return be32(static_cast<std::uint32_t>(payload.size() + 8)) + type + payload;
}

// ftyp + moov with a single video trak: `frames` samples over
// `duration` ticks of `timescale`.
std::string tiny_mp4(std::uint32_t frames, std::uint32_t timescale, std::uint32_t duration) {
  const std::string hdlr = box("hdlr", std::string(8, '\0') + "vide" + std::string(12, '\0') + "v" + '\0');
  const std::string mdhd = box("mdhd", std::string(12, '\0') + be32(timescale) + be32(duration) + std::string(4, '\0'));
  const std::string stsz = box("stsz", std::string(4, '\0') + be32(0) + be32(frames));
  const std::string minf = box("minf", box("stbl", stsz));
  const std::string trak = box("trak", box("tkhd", std::string(84, '\0')) + box("mdia", mdhd + hdlr + minf));
  return box("ftyp", "isom" + std::string(4, '\0')) + box("moov", box("mvhd", std::string(100, '\0')) + trak);
}

void favc_tree(const fs::path& root) {
  touch(root / "RealVideo-RealAudio/African/men/id00076/00109.mp4", tiny_mp4(250, 12800, 128000));
  touch(root / "RealVideo-RealAudio/African/men/id00076/00109.wav");
  touch(root / "RealVideo-FakeAudio/African/men/id00076/00109_fake.mp4");
  touch(root / "FakeVideo-RealAudio/wav2lip/Asian/women/id00077/00001.mp4");
  touch(root / "FakeVideo-RealAudio/faceswap/Asian/women/id00077/00002.mp4");
  touch(root / "FakeVideo-FakeAudio/wav2lip/Asian/women/id00077/00003.mp4");
  touch(root / "FakeVideo-FakeAudio/fsgan-wav2lip/Asian/women/id00078/00004.mp4");
  touch(root / "FakeVideo-FakeAudio/faceswap-wav2lip/Asian/women/id00078/00005.mp4");
  touch(root / "README.txt");
}

TEST(IngestFakeAvCeleb, LayoutRules) {
  TempDir dir;
  favc_tree(dir.path());
  const Manifest m = ingest_fakeavceleb(dir.path());
  ASSERT_EQ(m.records.size(), 7u);
  EXPECT_TRUE(std::is_sorted(m.records.begin(), m.records.end(),
                             [](const auto& a, const auto& b) { return a.sample_id < b.sample_id; }));
  const auto* w2l = m.find("FakeVideo-FakeAudio/wav2lip/Asian/women/id00077/00003");
  ASSERT_TRUE(w2l);
  EXPECT_EQ(w2l->video_methods, std::vector<std::string>{"Wav2Lip"});
  EXPECT_EQ(w2l->audio_method, "SV2TTS");
  EXPECT_EQ(w2l->identity, "id00077");

  const auto* rvfa = m.find("RealVideo-FakeAudio/African/men/id00076/00109_fake");
  ASSERT_TRUE(rvfa);
  EXPECT_TRUE(rvfa->video_methods.empty());
  EXPECT_EQ(rvfa->audio_method, "SV2TTS");
  EXPECT_EQ(rvfa->video_label, Label::real);
  EXPECT_EQ(rvfa->audio_label, Label::fake);

  const auto* combo = m.find("FakeVideo-FakeAudio/fsgan-wav2lip/Asian/women/id00078/00004");
  ASSERT_TRUE(combo);
  EXPECT_EQ(combo->video_methods, (std::vector<std::string>{"FSGAN", "Wav2Lip"}));

  const auto* real = m.find("RealVideo-RealAudio/African/men/id00076/00109");
  ASSERT_TRUE(real);
  EXPECT_EQ(real->audio_path, "RealVideo-RealAudio/African/men/id00076/00109.wav");
  EXPECT_TRUE(validate_manifest(m).empty());
}

TEST(IngestFakeAvCeleb, Deterministic) {
  TempDir dir;
  favc_tree(dir.path());
  auto a = ingest_fakeavceleb(dir.path());
  auto b = ingest_fakeavceleb(dir.path());
  EXPECT_EQ(a.records, b.records);
}

TEST(IngestFakeAvCeleb, ProbesFrames) {
  TempDir dir;
  favc_tree(dir.path());
  const Manifest m = ingest_fakeavceleb(dir.path(), {true});
  const auto* real = m.find("RealVideo-RealAudio/African/men/id00076/00109");
  ASSERT_TRUE(real && real->n_frames);
  EXPECT_EQ(*real->n_frames, 250);
  EXPECT_DOUBLE_EQ(*real->fps, 25.0);
  EXPECT_EQ(*real->duration_ms, 10000);
  EXPECT_FALSE(m.find("FakeVideo-RealAudio/wav2lip/Asian/women/id00077/00001")->n_frames);
}

TEST(IngestFakeAvCeleb, Errors) {
  TempDir dir;
  touch(dir / "RealVideo-RealAudio/id00001/a.mp4");
  EXPECT_EQ(code_of([&] { ingest_fakeavceleb(dir.path()); }), Errc::layout_mismatch);
  favc_tree(dir.path());
  touch(dir / "FakeVideo-RealAudio/deepfacelab/id00001/x.mp4");
  EXPECT_EQ(code_of([&] { ingest_fakeavceleb(dir.path()); }), Errc::unknown_method_folder);
}

TEST(ProbeVideo, NotAnMp4) {
  TempDir dir;
  touch(dir / "x.mp4", "garbage");
  EXPECT_FALSE(probe_video(dir / "x.mp4"));
  EXPECT_FALSE(probe_video(dir / "none.mp4"));
}

TEST(IngestDeepSpeak, AnnotationRules) {
  TempDir dir;
  touch(dir / "metadata.csv",
        "path,split,identity,video_method,audio\n"
        "real/a.mp4,train,p01,real,real\n"
        "fake/b.mp4,train,p01,facefusion_live,\n"
        "fake/c.mp4,test,p02,retalking,cloned\n"
        "fake/d.mp4,test,p02,FaceFusionGAN,none\n");
  touch(dir / "real/a.wav");
  const Manifest m = ingest_deepspeak(dir.path(), {});
  ASSERT_EQ(m.records.size(), 4u);
  const auto* live = m.find("fake/b");
  EXPECT_EQ(live->video_methods, std::vector<std::string>{"FaceFusionLive"});
  EXPECT_FALSE(live->audio_method);
  const auto* rt = m.find("fake/c");
  EXPECT_EQ(rt->video_methods, std::vector<std::string>{"Retalking"});
  EXPECT_EQ(rt->audio_method, "ElevenLabs");
  EXPECT_EQ(rt->provided_phase, Phase::test);
  EXPECT_EQ(m.find("real/a")->audio_path, "real/a.wav");
  EXPECT_EQ(m.find("real/a")->provided_phase, Phase::train);
}

TEST(IngestDeepSpeak, Errors) {
  TempDir dir;
  fs::create_directories(dir.path());
  EXPECT_EQ(code_of([&] { ingest_deepspeak(dir.path(), {}); }), Errc::missing_metadata);
  touch(dir / "metadata.csv", "path,split,identity,video_method\nx.mp4,train\n");
  EXPECT_EQ(code_of([&] { ingest_deepspeak(dir.path(), {}); }), Errc::annotation_parse);
  touch(dir / "metadata.csv", "path,split,identity,video_method\nx.mp4,train,p1,deepfacelab\n");
  EXPECT_EQ(code_of([&] { ingest_deepspeak(dir.path(), {}); }), Errc::annotation_parse);
  touch(dir / "metadata.csv", "path,split,identity,video_method,audio\nx.mp4,train,p1,facefusion,fake\n");
  EXPECT_EQ(code_of([&] { ingest_deepspeak(dir.path(), {}); }), Errc::annotation_parse);
  const std::vector<fs::path> missing{dir / "nope.csv"};
  EXPECT_EQ(code_of([&] { ingest_deepspeak(dir.path(), missing); }), Errc::missing_metadata);
}

}  // namespace
}  // namespace avbench
