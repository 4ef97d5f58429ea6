#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "avbench/csv.hpp"
#include "avbench/error.hpp"
#include "avbench/manifest.hpp"
#include "json_io.hpp"

namespace avbench {
namespace detail {

Json to_json(const Combo& combo) {
  Json j;
  j["video"] = combo.video_methods;
  j["audio"] = combo.audio_method ? Json(*combo.audio_method) : Json(nullptr);
  return j;
}

Combo combo_from_json(const Json& j) {
  Combo c;
  c.video_methods = j.at("video").get<std::vector<std::string>>();
  if (!j.at("audio").is_null()) c.audio_method = j.at("audio").get<std::string>();
  return c;
}

Json to_json(const Taxonomy& t) {
  Json j;
  j["dataset"] = t.dataset;
  Json video = Json::array();
  for (const auto& m : t.video_methods) {
    Json e;
    e["name"] = m.name;
    e["family"] = m.family ? Json(std::string(to_string(*m.family))) : Json(nullptr);
    e["aliases"] = m.aliases;
    video.push_back(e);
  }
  j["video_methods"] = video;
  Json audio = Json::array();
  for (const auto& m : t.audio_methods) {
    Json e;
    e["name"] = m.name;
    e["aliases"] = m.aliases;
    audio.push_back(e);
  }
  j["audio_methods"] = audio;
  Json combos = Json::array();
  for (const auto& c : t.combos) combos.push_back(to_json(c));
  j["combos"] = combos;
  Json established = Json::array();
  for (const auto& c : t.established_categories) established.push_back(to_json(c));
  j["established_categories"] = established;
  j["audio_requires_lip_synthesis"] = t.audio_requires_lip_synthesis;
  return j;
}

Taxonomy taxonomy_from_json(const Json& j) {
  Taxonomy t;
  t.dataset = j.at("dataset").get<std::string>();
  for (const auto& e : j.at("video_methods")) {
    MethodInfo m;
    m.name = e.at("name").get<std::string>();
    m.modality = Modality::video;
    if (!e.at("family").is_null()) {
      m.family = parse_family(e.at("family").get<std::string>());
      if (!m.family) throw Error(Errc::parse_error, "unknown family for method " + m.name);
    }
    m.aliases = e.value("aliases", std::vector<std::string>{});
    t.video_methods.push_back(std::move(m));
  }
  for (const auto& e : j.at("audio_methods")) {
    MethodInfo m;
    m.name = e.at("name").get<std::string>();
    m.modality = Modality::audio;
    m.aliases = e.value("aliases", std::vector<std::string>{});
    t.audio_methods.push_back(std::move(m));
  }
  for (const auto& c : j.at("combos")) t.combos.push_back(combo_from_json(c));
  if (j.contains("established_categories")) {
    for (const auto& c : j.at("established_categories")) {
      t.established_categories.push_back(combo_from_json(c));
    }
  }
  t.audio_requires_lip_synthesis = j.value("audio_requires_lip_synthesis", false);
  return t;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string shortest(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return csv::fixed(value, 6);
  return std::string(buf.data(), end);
}

}  // namespace detail

namespace {

constexpr std::array<std::string_view, 11> kColumns = {
    "sample_id", "dataset", "identity",  "video_path",  "audio_path",     "video_methods",
    "audio_method", "n_frames", "fps", "duration_ms", "provided_phase",
};

std::string join_methods(const std::vector<std::string>& methods) {
  std::string out;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i) out += ';';
    out += methods[i];
  }
  return out;
}

std::vector<std::string> split_methods(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(';', pos);
    if (next == std::string::npos) next = text.size();
    if (next > pos) out.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(const std::string& text, const std::string& what, std::size_t line) {
  if (text.empty()) return std::nullopt;
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::parse_error, "line " + std::to_string(line) + ": bad " + what + " '" + text + "'");
  }
  return value;
}

}  // namespace

std::span<const std::string_view> manifest_columns() { return kColumns; }

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".json");
  return p;
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  std::string text;
  text += csv::format_row(csv::Row(kColumns.begin(), kColumns.end()));
  for (const auto& r : manifest.records) {
    csv::Row row;
    row.push_back(r.sample_id);
    row.push_back(r.dataset);
    row.push_back(r.identity);
    row.push_back(r.video_path);
    row.push_back(r.audio_path);
    row.push_back(join_methods(r.video_methods));
    row.push_back(r.audio_method.value_or(""));
    row.push_back(r.n_frames ? std::to_string(*r.n_frames) : "");
    row.push_back(r.fps ? detail::shortest(*r.fps) : "");
    row.push_back(r.duration_ms ? std::to_string(*r.duration_ms) : "");
    row.push_back(r.provided_phase ? std::string(to_string(*r.provided_phase)) : "");
    text += csv::format_row(row);
  }
  detail::write_text_file(path, text);

  detail::Json side;
  side["schema_version"] = kManifestSchemaVersion;
  side["taxonomy"] = detail::to_json(manifest.taxonomy);
  detail::Json prov;
  prov["root"] = manifest.provenance.root;
  prov["ingested_at"] = manifest.provenance.ingested_at;
  prov["tool_version"] = manifest.provenance.tool_version;
  prov["source"] = manifest.provenance.source;
  prov["condition"] = manifest.provenance.condition;
  side["provenance"] = prov;
  side["record_count"] = manifest.records.size();
  detail::write_json_file(sidecar_path(path), side);
}

Manifest load_manifest(const std::filesystem::path& path) {
  Manifest manifest;
  const auto side_path = sidecar_path(path);
  if (!std::filesystem::exists(side_path)) {
    throw Error(Errc::io_error, "missing manifest sidecar " + side_path.string());
  }
  const detail::Json side = detail::read_json_file(side_path);
  const int version = side.value("schema_version", -1);
  if (version != kManifestSchemaVersion) {
    throw Error(Errc::schema_version_mismatch, side_path.string() + " has schema_version " +
                                                   std::to_string(version) + ", expected " +
                                                   std::to_string(kManifestSchemaVersion));
  }
  try {
    manifest.taxonomy = detail::taxonomy_from_json(side.at("taxonomy"));
    const auto& prov = side.at("provenance");
    manifest.provenance.root = prov.value("root", "");
    manifest.provenance.ingested_at = prov.value("ingested_at", "");
    manifest.provenance.tool_version = prov.value("tool_version", "");
    manifest.provenance.source = prov.value("source", "");
    manifest.provenance.condition = prov.value("condition", "untrimmed");
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, side_path.string() + ": " + e.what());
  }

  const csv::Table table = csv::read_file(path);
  if (table.header != csv::Row(kColumns.begin(), kColumns.end())) {
    throw Error(Errc::schema_version_mismatch, path.string() + ": unexpected manifest header");
  }
  const Taxonomy& tax = manifest.taxonomy;
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t line = 1;
  for (const auto& row : table.rows) {
    ++line;
    if (row.size() != kColumns.size()) {
      throw Error(Errc::parse_error, path.string() + ": line " + std::to_string(line) + " has " +
                                         std::to_string(row.size()) + " fields");
    }
    SampleRecord r;
    r.sample_id = row[0];
    r.dataset = row[1];
    r.identity = row[2];
    r.video_path = row[3];
    r.audio_path = row[4];
    r.video_methods = split_methods(row[5]);
    for (const auto& v : r.video_methods) {
      if (!tax.find_video(v)) {
        throw Error(Errc::unknown_method, "line " + std::to_string(line) + ": unknown video method '" +
                                              v + "' in sample " + r.sample_id);
      }
    }
    if (!row[6].empty()) {
      if (!tax.find_audio(row[6])) {
        throw Error(Errc::unknown_method, "line " + std::to_string(line) + ": unknown audio method '" +
                                              row[6] + "' in sample " + r.sample_id);
      }
      r.audio_method = row[6];
    }
    r.n_frames = parse_number<std::int64_t>(row[7], "n_frames", line);
    r.fps = parse_number<double>(row[8], "fps", line);
    r.duration_ms = parse_number<std::int64_t>(row[9], "duration_ms", line);
    if (!row[10].empty()) {
      r.provided_phase = parse_phase(row[10]);
      if (!r.provided_phase) {
        throw Error(Errc::parse_error, "line " + std::to_string(line) + ": bad provided_phase '" + row[10] + "'");
      }
    }
    if (!seen.emplace(r.sample_id, line).second) {
      throw Error(Errc::duplicate_sample_id, "sample_id '" + r.sample_id + "' on lines " +
                                                 std::to_string(seen[r.sample_id]) + " and " +
                                                 std::to_string(line));
    }
    manifest.records.push_back(with_derived_labels(std::move(r)));
  }
  return manifest;
}

}  // namespace avbench
