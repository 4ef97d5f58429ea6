#include "avbench/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <map>
#include <regex>
#include <set>

#include "avbench/csv.hpp"
#include "avbench/error.hpp"
#include "avbench/media_probe.hpp"

namespace avbench {
namespace {

namespace fs = std::filesystem;

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string squash(std::string_view text) {
  std::string out;
  for (char c : lower(text)) {
    if (c != '-' && c != '_' && c != ' ') out.push_back(c);
  }
  return out;
}

bool is_video_file(const fs::path& p) {
  static const std::set<std::string> exts = {".mp4", ".avi", ".mov", ".mkv", ".webm"};
  return exts.count(lower(p.extension().string())) > 0;
}

std::string relative_id(const fs::path& file, const fs::path& root) {
  fs::path rel = fs::relative(file, root);
  rel.replace_extension();
  return rel.generic_string();
}

std::vector<fs::path> video_files_under(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && is_video_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

void attach_media(SampleRecord& r, const fs::path& video, const fs::path& root, const IngestOptions& options) {
  r.video_path = fs::relative(video, root).generic_string();
  fs::path wav = video;
  wav.replace_extension(".wav");
  if (fs::exists(wav)) r.audio_path = fs::relative(wav, root).generic_string();
  if (options.probe_frames) {
    if (auto info = probe_video(video)) {
      r.n_frames = info->n_frames;
      if (info->fps > 0) r.fps = info->fps;
      if (info->duration_ms > 0) r.duration_ms = info->duration_ms;
    }
  }
}

void ensure_clean(const Manifest& manifest, Errc code) {
  const auto issues = validate_manifest(manifest, false);
  if (issues.empty()) return;
  std::string msg = std::to_string(issues.size()) + " validation issue(s) after ingestion:";
  for (std::size_t i = 0; i < std::min<std::size_t>(issues.size(), 5); ++i) {
    msg += " [" + issues[i].sample_id + ": " + issues[i].message + "]";
  }
  throw Error(code, msg);
}

Provenance make_provenance(const fs::path& root, std::string source) {
  Provenance p;
  p.root = fs::absolute(root).lexically_normal().generic_string();
  p.ingested_at = timestamp_now();
  p.tool_version = std::string(tool_version());
  p.source = std::move(source);
  return p;
}

}  // namespace

Manifest ingest_fakeavceleb(const fs::path& root, const IngestOptions& options) {
  if (!fs::is_directory(root)) throw Error(Errc::layout_mismatch, root.string() + " is not a directory");
  const Taxonomy tax = Taxonomy::fakeavceleb();
  const std::string audio_fake = tax.audio_methods.front().name;

  struct Category {
    std::string key;
    bool fake_video;
    bool fake_audio;
    fs::path dir;
  };
  std::array<Category, 4> categories = {{
      {"realvideorealaudio", false, false, {}},
      {"realvideofakeaudio", false, true, {}},
      {"fakevideorealaudio", true, false, {}},
      {"fakevideofakeaudio", true, true, {}},
  }};
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const std::string key = squash(entry.path().filename().string());
    for (auto& c : categories) {
      if (c.key == key) c.dir = entry.path();
    }
  }
  std::string missing;
  for (const auto& c : categories) {
    if (c.dir.empty()) missing += (missing.empty() ? "" : ", ") + c.key;
  }
  if (!missing.empty()) {
    throw Error(Errc::layout_mismatch, root.string() + " lacks category folder(s): " + missing);
  }

  static const std::regex id_pattern("^id[0-9]+$", std::regex::icase);
  Manifest manifest;
  manifest.taxonomy = tax;
  manifest.provenance = make_provenance(root, "fakeavceleb-layout");

  for (const auto& cat : categories) {
    for (const auto& file : video_files_under(cat.dir)) {
      const fs::path rel = fs::relative(file, cat.dir);
      SampleRecord r;
      r.sample_id = relative_id(file, root);
      r.dataset = tax.dataset;
      auto part = rel.begin();
      if (cat.fake_video) {
        const std::string folder = part->string();
        ++part;
        std::vector<std::string> methods;
        if (const MethodInfo* m = tax.resolve_video(folder)) {
          methods.push_back(m->name);
        } else {
          std::string token;
          bool ok = true;
          const std::string text = lower(folder) + "+";
          for (char c : text) {
            if (c == '-' || c == '_' || c == '+') {
              const MethodInfo* m = tax.resolve_video(token);
              if (!m) {
                ok = false;
                break;
              }
              methods.push_back(m->name);
              token.clear();
            } else {
              token.push_back(c);
            }
          }
          if (!ok || methods.empty()) {
            throw Error(Errc::unknown_method_folder,
                        "'" + folder + "' under " + cat.dir.filename().string() + " is not a known method");
          }
        }
        r.video_methods = tax.canonicalize(Combo{methods, std::nullopt}).video_methods;
      }
      if (cat.fake_audio) r.audio_method = audio_fake;
      for (; part != rel.end(); ++part) {
        if (std::regex_match(part->string(), id_pattern)) {
          r.identity = part->string();
          break;
        }
      }
      if (r.identity.empty()) {
        throw Error(Errc::layout_mismatch, "no idNNNNN component in " + rel.generic_string());
      }
      attach_media(r, file, root, options);
      manifest.records.push_back(with_derived_labels(std::move(r)));
    }
  }
  manifest.sort_records();
  ensure_clean(manifest, Errc::layout_mismatch);
  return manifest;
}

namespace {

int find_column(const csv::Table& table, std::initializer_list<std::string_view> names) {
  for (auto name : names) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      if (lower(table.header[i]) == name) return static_cast<int>(i);
    }
  }
  return -1;
}

bool is_real_token(const std::string& v) {
  const std::string key = lower(v);
  return key.empty() || key == "real" || key == "none" || key == "original" || key == "-";
}

}  // namespace

Manifest ingest_deepspeak(const fs::path& root, std::span<const fs::path> metadata, const IngestOptions& options) {
  std::vector<fs::path> files(metadata.begin(), metadata.end());
  if (files.empty()) {
    if (fs::exists(root / "metadata.csv")) files.push_back(root / "metadata.csv");
    if (fs::is_directory(root / "annotations")) {
      std::vector<fs::path> extra;
      for (const auto& e : fs::directory_iterator(root / "annotations")) {
        if (e.is_regular_file() && lower(e.path().extension().string()) == ".csv") extra.push_back(e.path());
      }
      std::sort(extra.begin(), extra.end());
      files.insert(files.end(), extra.begin(), extra.end());
    }
  }
  if (files.empty()) throw Error(Errc::missing_metadata, "no DeepSpeak annotation files under " + root.string());

  const Taxonomy tax = Taxonomy::deepspeak();
  Manifest manifest;
  manifest.taxonomy = tax;
  manifest.provenance = make_provenance(root, "deepspeak-annotations");

  for (const auto& file : files) {
    if (!fs::exists(file)) throw Error(Errc::missing_metadata, file.string() + " does not exist");
    csv::Table table;
    try {
      table = csv::read_file(file);
    } catch (const Error& e) {
      throw Error(Errc::annotation_parse, file.string() + ": " + e.what());
    }
    const int c_path = find_column(table, {"path", "video_path", "file"});
    const int c_split = find_column(table, {"split", "phase"});
    const int c_ident = find_column(table, {"identity", "source_identity", "source"});
    const int c_video = find_column(table, {"video_method", "method"});
    const int c_audio = find_column(table, {"audio", "audio_method"});
    const int c_id = find_column(table, {"sample_id"});
    const int c_audio_path = find_column(table, {"audio_path"});
    const int c_frames = find_column(table, {"n_frames", "frames"});
    const int c_fps = find_column(table, {"fps"});
    if (c_path < 0 || c_split < 0 || c_ident < 0 || c_video < 0) {
      throw Error(Errc::annotation_parse,
                  file.string() + ": header must provide path, split, identity and video_method columns");
    }
    std::size_t line = 1;
    for (const auto& row : table.rows) {
      ++line;
      auto where = [&] { return file.string() + ":" + std::to_string(line); };
      if (row.size() != table.header.size()) {
        throw Error(Errc::annotation_parse, where() + ": expected " + std::to_string(table.header.size()) +
                                                " fields, got " + std::to_string(row.size()));
      }
      SampleRecord r;
      r.dataset = tax.dataset;
      const std::string& path = row[static_cast<std::size_t>(c_path)];
      if (path.empty()) throw Error(Errc::annotation_parse, where() + ": empty path");
      if (c_id >= 0 && !row[static_cast<std::size_t>(c_id)].empty()) {
        r.sample_id = row[static_cast<std::size_t>(c_id)];
      } else {
        fs::path p(path);
        p.replace_extension();
        r.sample_id = p.generic_string();
      }
      r.provided_phase = parse_phase(lower(row[static_cast<std::size_t>(c_split)]));
      if (!r.provided_phase || *r.provided_phase == Phase::val) {
        throw Error(Errc::annotation_parse,
                    where() + ": split must be train or test, got '" + row[static_cast<std::size_t>(c_split)] + "'");
      }
      r.identity = row[static_cast<std::size_t>(c_ident)];
      const std::string& video = row[static_cast<std::size_t>(c_video)];
      if (!is_real_token(video)) {
        const MethodInfo* m = tax.resolve_video(video);
        if (!m) throw Error(Errc::annotation_parse, where() + ": unknown video method '" + video + "'");
        r.video_methods.push_back(m->name);
      }
      if (c_audio >= 0) {
        const std::string& audio = row[static_cast<std::size_t>(c_audio)];
        const std::string key = lower(audio);
        if (key == "fake" || key == "cloned" || key == "synthetic") {
          r.audio_method = tax.audio_methods.front().name;
        } else if (!is_real_token(audio)) {
          const MethodInfo* m = tax.resolve_audio(audio);
          if (!m) throw Error(Errc::annotation_parse, where() + ": unknown audio method '" + audio + "'");
          r.audio_method = m->name;
        }
      }
      const fs::path video_file = root / path;
      r.video_path = fs::path(path).generic_string();
      if (c_audio_path >= 0 && !row[static_cast<std::size_t>(c_audio_path)].empty()) {
        r.audio_path = row[static_cast<std::size_t>(c_audio_path)];
      } else {
        fs::path wav = video_file;
        wav.replace_extension(".wav");
        if (fs::exists(wav)) r.audio_path = fs::relative(wav, root).generic_string();
      }
      if (c_frames >= 0 && !row[static_cast<std::size_t>(c_frames)].empty()) {
        std::int64_t n = 0;
        const auto& t = row[static_cast<std::size_t>(c_frames)];
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), n);
        if (ec != std::errc() || ptr != t.data() + t.size()) {
          throw Error(Errc::annotation_parse, where() + ": bad n_frames '" + t + "'");
        }
        r.n_frames = n;
      }
      if (c_fps >= 0 && !row[static_cast<std::size_t>(c_fps)].empty()) {
        const auto& t = row[static_cast<std::size_t>(c_fps)];
        double v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) {
          throw Error(Errc::annotation_parse, where() + ": bad fps '" + t + "'");
        }
        r.fps = v;
      }
      if (options.probe_frames && !r.n_frames) {
        if (auto info = probe_video(video_file)) {
          r.n_frames = info->n_frames;
          if (info->fps > 0) r.fps = info->fps;
          if (info->duration_ms > 0) r.duration_ms = info->duration_ms;
        }
      }
      manifest.records.push_back(with_derived_labels(std::move(r)));
    }
  }
  manifest.sort_records();
  for (std::size_t i = 1; i < manifest.records.size(); ++i) {
    if (manifest.records[i].sample_id == manifest.records[i - 1].sample_id) {
      throw Error(Errc::duplicate_sample_id, "annotation files list '" + manifest.records[i].sample_id + "' twice");
    }
  }
  ensure_clean(manifest, Errc::annotation_parse);
  return manifest;
}

}  // namespace avbench
