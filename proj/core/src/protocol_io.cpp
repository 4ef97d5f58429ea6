#include <algorithm>

#include "avbench/error.hpp"
#include "avbench/protocol.hpp"
#include "json_io.hpp"

namespace avbench {
namespace {

namespace fs = std::filesystem;
using detail::Json;

constexpr int kProtocolSchemaVersion = 1;

Json diagnosis_to_json(const DiagnosisReport& d) {
  Json j;
  j["clean"] = d.empty();
  Json ids = Json::array();
  for (const auto& l : d.identity_leaks) {
    ids.push_back({{"identity", l.identity},
                   {"train_side_samples", l.train_side_samples},
                   {"test_samples", l.test_samples},
                   {"severity", to_string(l.severity)}});
  }
  j["identity_leaks"] = ids;
  Json leaks = Json::array();
  for (const auto& l : d.manipulation_leaks) {
    leaks.push_back({{"method", l.method},
                     {"train_combos", l.train_combos},
                     {"test_combos", l.test_combos},
                     {"severity", to_string(l.severity)}});
  }
  j["manipulation_leaks"] = leaks;
  Json gaps = Json::array();
  for (const auto& g : d.coverage_gaps) gaps.push_back({{"combo", g.combo}, {"severity", to_string(g.severity)}});
  j["coverage_gaps"] = gaps;
  j["shared_methods"] = d.shared_methods;
  return j;
}

Manifest phase_manifest(const ProtocolInstance& inst, Phase phase, const Provenance& provenance) {
  Manifest m;
  m.taxonomy = phase == Phase::test ? inst.test_taxonomy : inst.train_taxonomy;
  m.records = inst.phase(phase);
  m.provenance = provenance;
  return m;
}

std::string dir_name(const ProtocolSpec& spec) {
  std::string name = spec.name();
  std::replace(name.begin(), name.end(), ':', '_');
  return name;
}

}  // namespace

std::string diagnosis_json(const DiagnosisReport& report) { return diagnosis_to_json(report).dump(2) + "\n"; }

std::string suite_diagnosis_json(const SuiteDiagnosis& report) {
  Json j;
  Json inst = Json::array();
  bool leaks = false;
  for (const auto& [name, d] : report.instances) {
    Json e = diagnosis_to_json(d);
    e["protocol"] = name;
    inst.push_back(e);
    leaks = leaks || d.has_leaks();
  }
  Json gaps = Json::array();
  for (const auto& g : report.coverage_gaps) gaps.push_back({{"combo", g.combo}, {"severity", to_string(g.severity)}});
  j["clean"] = !leaks && report.coverage_gaps.empty();
  j["coverage_gaps"] = gaps;
  j["instances"] = inst;
  return j.dump(2) + "\n";
}

void write_protocol(const ProtocolInstance& inst, const fs::path& dir, const Provenance& provenance) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + dir.string() + ": " + ec.message());
  save_manifest(phase_manifest(inst, Phase::train, provenance), dir / "train.csv");
  save_manifest(phase_manifest(inst, Phase::val, provenance), dir / "val.csv");
  save_manifest(phase_manifest(inst, Phase::test, provenance), dir / "test.csv");

  Json j;
  j["schema_version"] = kProtocolSchemaVersion;
  j["name"] = inst.spec.name();
  j["kind"] = to_string(inst.spec.kind);
  j["target"] = inst.spec.target;
  j["dataset"] = inst.spec.dataset;
  j["test_dataset"] = inst.test_taxonomy.dataset;
  j["seed"] = inst.spec.seed;
  j["counts"] = {{"train", inst.train.size()}, {"val", inst.val.size()}, {"test", inst.test.size()}};
  Json inv;
  for (Phase p : {Phase::train, Phase::val, Phase::test}) {
    const auto set = inst.inventory(p);
    inv[std::string(to_string(p))] = std::vector<std::string>(set.begin(), set.end());
  }
  j["inventories"] = inv;
  detail::write_json_file(dir / "protocol.json", j);
  detail::write_text_file(dir / "diagnosis.json", diagnosis_json(inst.diagnosis));
}

ProtocolInstance read_protocol(const fs::path& dir) {
  if (!fs::exists(dir / "protocol.json")) {
    throw Error(Errc::io_error, dir.string() + " is not a protocol directory (no protocol.json)");
  }
  const Json j = detail::read_json_file(dir / "protocol.json");
  if (j.value("schema_version", -1) != kProtocolSchemaVersion) {
    throw Error(Errc::schema_version_mismatch, (dir / "protocol.json").string());
  }
  ProtocolInstance inst;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "standard") inst.spec.kind = ProtocolKind::standard;
  else if (kind == "method") inst.spec.kind = ProtocolKind::method;
  else if (kind == "family") inst.spec.kind = ProtocolKind::family;
  else if (kind == "established") inst.spec.kind = ProtocolKind::established;
  else if (kind == "cross") inst.spec.kind = ProtocolKind::cross_dataset;
  else throw Error(Errc::parse_error, "unknown protocol kind '" + kind + "'");
  inst.spec.target = j.value("target", "");
  inst.spec.dataset = j.value("dataset", "");
  inst.spec.seed = j.value("seed", std::uint64_t{0});

  Manifest train = load_manifest(dir / "train.csv");
  Manifest val = load_manifest(dir / "val.csv");
  Manifest test = load_manifest(dir / "test.csv");
  inst.train_taxonomy = train.taxonomy;
  inst.test_taxonomy = test.taxonomy;
  inst.train = std::move(train.records);
  inst.val = std::move(val.records);
  inst.test = std::move(test.records);
  inst.diagnosis = diagnose(inst);
  return inst;
}

void write_suite(std::span<const ProtocolInstance> suite, std::string_view name, const fs::path& dir,
                 const Provenance& provenance) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + dir.string() + ": " + ec.message());
  Json entries = Json::array();
  for (const auto& inst : suite) {
    const std::string sub = dir_name(inst.spec);
    write_protocol(inst, dir / sub, provenance);
    entries.push_back(sub);
  }
  Json j;
  j["schema_version"] = kProtocolSchemaVersion;
  j["suite"] = name;
  j["instances"] = entries;
  detail::write_json_file(dir / "suite.json", j);
  detail::write_text_file(dir / "suite_diagnosis.json", suite_diagnosis_json(diagnose_suite(suite)));
}

bool is_suite_dir(const fs::path& dir) { return fs::exists(dir / "suite.json"); }

std::vector<ProtocolInstance> read_protocols(const fs::path& dir) {
  std::vector<ProtocolInstance> out;
  if (!is_suite_dir(dir)) {
    out.push_back(read_protocol(dir));
    return out;
  }
  const Json j = detail::read_json_file(dir / "suite.json");
  for (const auto& sub : j.at("instances")) out.push_back(read_protocol(dir / sub.get<std::string>()));
  return out;
}

}  // namespace avbench
