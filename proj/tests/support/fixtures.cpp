#include "fixtures.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace avbench::testing {

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "avbench-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::permissions(path_, std::filesystem::perms::owner_all, std::filesystem::perm_options::add, ec);
  std::filesystem::remove_all(path_, ec);
}

AudioTrack planted_track(std::uint32_t sample_rate, double silence_ms, double total_ms, double gain) {
  AudioTrack t;
  t.sample_rate = sample_rate;
  const auto total = static_cast<std::size_t>(std::llround(total_ms * sample_rate / 1000.0));
  const auto onset = static_cast<std::size_t>(std::llround(silence_ms * sample_rate / 1000.0));
  t.samples.assign(total, 0.0);
  for (std::size_t i = onset; i < total; ++i) {
    const double time = static_cast<double>(i - onset) / sample_rate;
    t.samples[i] = 0.5 * gain * std::sin(2.0 * std::numbers::pi * 440.0 * time);
  }
  return t;
}

void write_track(const std::filesystem::path& path, const AudioTrack& track, SampleEncoding encoding) {
  std::filesystem::create_directories(path.parent_path());
  write_wav(path, to_wav(track, encoding));
}

Manifest synthetic_manifest(const Taxonomy& taxonomy, std::size_t identities, std::size_t per_combo,
                            std::size_t reals_per_identity) {
  Manifest m;
  m.taxonomy = taxonomy;
  m.provenance.source = "synthetic";
  for (std::size_t i = 0; i < identities; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "id%05zu", i);
    auto add = [&](const Combo& c, const std::string& tag) {
      SampleRecord r;
      r.dataset = taxonomy.dataset;
      r.identity = id;
      r.sample_id = std::string(id) + "/" + tag;
      r.video_path = r.sample_id + ".mp4";
      r.audio_path = r.sample_id + ".wav";
      r.video_methods = c.video_methods;
      r.audio_method = c.audio_method;
      r.n_frames = 250;
      r.fps = 25.0;
      r.duration_ms = 10000;
      m.records.push_back(with_derived_labels(std::move(r)));
    };
    for (std::size_t k = 0; k < reals_per_identity; ++k) add(Combo{}, "real_" + std::to_string(k));
    for (std::size_t c = 0; c < taxonomy.combos.size(); ++c) {
      for (std::size_t k = 0; k < per_combo; ++k) {
        add(taxonomy.combos[c], "fake" + std::to_string(c) + "_" + std::to_string(k));
      }
    }
  }
  m.sort_records();
  return m;
}

Manifest synthetic_deepspeak(std::size_t identities, std::size_t test_every) {
  Manifest m = synthetic_manifest(Taxonomy::deepspeak(), identities);
  for (auto& r : m.records) {
    const auto n = std::stoul(r.identity.substr(2));
    r.provided_phase = n % test_every == 0 ? Phase::test : Phase::train;
  }
  return m;
}

std::vector<std::string> identity_overlap(const ProtocolInstance& instance) {
  std::set<std::string> train_side;
  for (const auto& r : instance.train) train_side.insert(r.identity);
  for (const auto& r : instance.val) train_side.insert(r.identity);
  std::set<std::string> out;
  for (const auto& r : instance.test) {
    if (train_side.count(r.identity)) out.insert(r.identity);
  }
  return {out.begin(), out.end()};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace avbench::testing
