#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "avbench/audio.hpp"
#include "avbench/metrics.hpp"
#include "avbench/protocol.hpp"
#include "avbench/silence.hpp"

namespace {

using namespace avbench;

void scores(std::size_t n, std::vector<int>& y, std::vector<double>& s) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> noise;
  y.resize(n);
  s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<int>(gen() % 2);
    s[i] = std::round((noise(gen) + y[i]) * 100.0) / 100.0;  // plenty of ties
  }
}

void BM_Auc(benchmark::State& state) {
  std::vector<int> y;
  std::vector<double> s;
  scores(static_cast<std::size_t>(state.range(0)), y, s);
  for (auto _ : state) benchmark::DoNotOptimize(auc(y, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Auc)->Range(1 << 10, 1 << 17);

void BM_AveragePrecision(benchmark::State& state) {
  std::vector<int> y;
  std::vector<double> s;
  scores(static_cast<std::size_t>(state.range(0)), y, s);
  for (auto _ : state) benchmark::DoNotOptimize(average_precision(y, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AveragePrecision)->Range(1 << 10, 1 << 17);

// One FakeAVCeleb clip is ~10 s of 16 kHz mono.
void BM_EnergyProfile(benchmark::State& state) {
  AudioTrack t;
  t.sample_rate = static_cast<std::uint32_t>(state.range(0));
  t.channels = 1;
  t.samples.resize(t.sample_rate * 10);
  for (std::size_t i = 0; i < t.samples.size(); ++i) t.samples[i] = 0.5 * std::sin(0.0577 * i);
  for (auto _ : state) {
    auto p = energy_profile(t);
    benchmark::DoNotOptimize(detect_leading_silence(p));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(t.samples.size() * sizeof(double)));
}
BENCHMARK(BM_EnergyProfile)->Arg(16000)->Arg(48000);

Manifest uniform_manifest(std::size_t identities, std::size_t per_identity) {
  Manifest m;
  m.taxonomy = Taxonomy::fakeavceleb();
  for (std::size_t i = 0; i < identities; ++i) {
    for (std::size_t k = 0; k < per_identity; ++k) {
      SampleRecord r;
      r.dataset = m.taxonomy.dataset;
      r.identity = "id" + std::to_string(i);
      r.sample_id = r.identity + "/" + std::to_string(k);
      if (k) r.video_methods = {"Wav2Lip"};
      m.records.push_back(with_derived_labels(std::move(r)));
    }
  }
  m.sort_records();
  return m;
}

// Full-size FakeAVCeleb is ~500 identities and ~21k samples.
void BM_AssignFakeAvCeleb(benchmark::State& state) {
  const Manifest m = uniform_manifest(static_cast<std::size_t>(state.range(0)), 42);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(assign_fakeavceleb(m, {}, seed++));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.records.size()));
}
BENCHMARK(BM_AssignFakeAvCeleb)->Arg(50)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
