#include "common.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <system_error>
#include <thread>

#include "avbench/error.hpp"

namespace avbench::cli {

unsigned Globals::worker_count() const {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

Run::Run(const Globals& globals, std::string command) : start_(std::chrono::steady_clock::now()) {
  report_.command = std::move(command);
  report_.arguments = globals.argv;
  report_.version = std::string(tool_version());
  report_.started_at = timestamp_now();
}

void Run::input(const std::filesystem::path& path) { report_.add_input(path); }

void Run::input_manifest(const std::filesystem::path& csv_path) {
  report_.add_input(csv_path);
  if (std::filesystem::exists(sidecar_path(csv_path))) report_.add_input(sidecar_path(csv_path));
}

void Run::write(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(Errc::io_error, "short write to '" + path.string() + "'");
  wrote(path);
}

void Run::wrote(const std::filesystem::path& path) { report_.add_output(path); }

void Run::finish(const std::filesystem::path& dir) {
  report_.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  write_run_report(dir.empty() ? std::filesystem::path(".") : dir, report_);
}

std::filesystem::path resolve_media(const Manifest& manifest, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || manifest.provenance.root.empty()) return p;
  return std::filesystem::path(manifest.provenance.root) / p;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
  workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(n, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

}  // namespace avbench::cli
