#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace avbench {

/// Hex SHA-256 of a file's bytes. Throws io_error.
std::string file_sha256(const std::filesystem::path& path);

struct InputDigest {
  std::string path;
  std::string sha256;
};

/// Everything run-specific lives here so the other outputs of a command stay
/// byte-identical between reruns.
struct RunReport {
  std::string command;
  std::vector<std::string> arguments;
  std::string version;
  std::string started_at;
  std::vector<InputDigest> inputs;
  std::vector<std::string> outputs;
  double wall_time_s = 0.0;

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
};

std::string run_report_json(const RunReport& report);
/// Writes run_report.json into `dir`. Throws io_error if a listed output is
/// missing.
void write_run_report(const std::filesystem::path& dir, const RunReport& report);

}  // namespace avbench
