#include "avbench/predictions.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "avbench/csv.hpp"
#include "avbench/error.hpp"
#include "avbench/metrics.hpp"
#include "json_io.hpp"

namespace avbench {
namespace {

double parse_double(const std::string& text, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::parse_error, "line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return v;
}

void apply_marker(PredictionFile& file, const std::string& comment) {
  std::istringstream words(comment);
  std::string word;
  while (words >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = word.substr(0, eq);
    const std::string value = word.substr(eq + 1);
    if (key == "detector") {
      file.detector = value;
    } else if (key == "unimodal") {
      if (value == "video") file.unimodal = Modality::video;
      else if (value == "audio") file.unimodal = Modality::audio;
      else throw Error(Errc::parse_error, "unimodal marker must be video or audio, got '" + value + "'");
    }
  }
}

}  // namespace

std::set<std::string> PredictionFile::conditions() const {
  std::set<std::string> out;
  for (const auto& r : rows) out.insert(r.condition);
  return out;
}

PredictionFile parse_prediction_csv(std::string_view text) {
  const csv::Table table = csv::parse(text);
  PredictionFile file;
  for (const auto& c : table.comments) apply_marker(file, c);
  if (table.header.size() < 3 || table.header[0] != "sample_id" || table.header[1] != "condition") {
    throw Error(Errc::parse_error, "prediction header must start with sample_id,condition");
  }
  const bool scalar = table.header.size() == 3 && table.header[2] == "score";
  if (!scalar) {
    if (table.header[2] != "p_real") {
      throw Error(Errc::parse_error, "third column must be 'score' or 'p_real'");
    }
    for (std::size_t i = 3; i < table.header.size(); ++i) {
      const auto& h = table.header[i];
      if (h.rfind("p_", 0) != 0 || h.size() < 3) {
        throw Error(Errc::parse_error, "class column '" + h + "' must be named p_<class>");
      }
      file.class_names.push_back(h.substr(2));
    }
  }
  std::size_t line = 1 + table.comments.size();
  for (const auto& row : table.rows) {
    ++line;
    if (row.size() != table.header.size()) {
      throw Error(Errc::parse_error, "line " + std::to_string(line) + ": field count mismatch");
    }
    PredictionRow r;
    r.sample_id = row[0];
    r.condition = row[1];
    if (r.condition != "untrimmed" && r.condition != "trimmed") {
      throw Error(Errc::parse_error, "line " + std::to_string(line) + ": condition must be untrimmed or trimmed");
    }
    if (scalar) {
      r.score = parse_double(row[2], line);
      if (!std::isfinite(r.score)) throw Error(Errc::parse_error, "line " + std::to_string(line) + ": non-finite score");
    } else {
      for (std::size_t i = 2; i < row.size(); ++i) r.distribution.push_back(parse_double(row[i], line));
      try {
        r.score = fake_score(r.distribution);
      } catch (const Error& e) {
        throw Error(Errc::invalid_distribution, "line " + std::to_string(line) + ": " + e.what());
      }
    }
    file.rows.push_back(std::move(r));
  }
  return file;
}

PredictionFile read_prediction_file(const std::filesystem::path& path) {
  try {
    return parse_prediction_csv(detail::read_text_file(path));
  } catch (const Error& e) {
    if (e.code() == Errc::io_error) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string format_prediction_csv(const PredictionFile& file) {
  std::string out;
  std::string marker;
  if (!file.detector.empty()) marker += " detector=" + file.detector;
  if (file.unimodal) marker += std::string(" unimodal=") + (*file.unimodal == Modality::video ? "video" : "audio");
  if (!marker.empty()) out += "#" + marker + "\n";
  csv::Row header = {"sample_id", "condition"};
  if (file.multiclass()) {
    header.push_back("p_real");
    for (const auto& c : file.class_names) header.push_back("p_" + c);
  } else {
    header.push_back("score");
  }
  out += csv::format_row(header);
  for (const auto& r : file.rows) {
    csv::Row row = {r.sample_id, r.condition};
    if (file.multiclass()) {
      for (double p : r.distribution) row.push_back(detail::shortest(p));
    } else {
      row.push_back(detail::shortest(r.score));
    }
    out += csv::format_row(row);
  }
  return out;
}

PredictionSet select_condition(const PredictionFile& file, std::string_view condition) {
  std::string wanted(condition);
  if (wanted.empty()) {
    const auto conds = file.conditions();
    if (conds.size() > 1) {
      throw Error(Errc::parse_error, "prediction file mixes conditions; select untrimmed or trimmed");
    }
    wanted = conds.empty() ? "untrimmed" : *conds.begin();
  }
  PredictionSet set;
  set.detector = file.detector;
  set.condition = wanted;
  set.unimodal = file.unimodal;
  for (const auto& r : file.rows) {
    if (r.condition != wanted) continue;
    if (!set.scores.emplace(r.sample_id, r.score).second) {
      throw Error(Errc::parse_error, "duplicate prediction for '" + r.sample_id + "' (" + wanted + ")");
    }
  }
  return set;
}

}  // namespace avbench
