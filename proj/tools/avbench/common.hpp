#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "avbench/manifest.hpp"
#include "avbench/run_report.hpp"

namespace avbench::cli {

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
  std::string format = "both";
  std::vector<std::string> argv;

  bool want_json() const { return format != "csv"; }
  bool want_csv() const { return format != "json"; }
  unsigned worker_count() const;
};

using Action = std::function<int()>;

/// Bookkeeping shared by every command: timing, digests, written files.
class Run {
 public:
  Run(const Globals& globals, std::string command);

  void input(const std::filesystem::path& path);
  void input_manifest(const std::filesystem::path& csv_path);
  void write(const std::filesystem::path& path, const std::string& text);
  void wrote(const std::filesystem::path& path);
  void finish(const std::filesystem::path& dir);

 private:
  RunReport report_;
  std::chrono::steady_clock::time_point start_;
};

/// Media path of a record, resolved against the manifest root.
std::filesystem::path resolve_media(const Manifest& manifest, const std::string& path);

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

std::string number(double value);

void register_data_commands(CLI::App& app, Globals& globals, Action& action);
void register_split_commands(CLI::App& app, Globals& globals, Action& action);
void register_eval_commands(CLI::App& app, Globals& globals, Action& action);
void register_sample_commands(CLI::App& app, Globals& globals, Action& action);

}  // namespace avbench::cli
