#include "avbench/run_report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <memory>

#include "avbench/error.hpp"
#include "json_io.hpp"

namespace avbench {

std::string file_sha256(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path.string() + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::io_error, "sha256 unavailable");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw Error(Errc::io_error, "read failed for '" + path.string() + "'");
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

void RunReport::add_input(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) inputs.push_back({f.string(), file_sha256(f)});
    return;
  }
  inputs.push_back({path.string(), file_sha256(path)});
}

void RunReport::add_output(const std::filesystem::path& path) { outputs.push_back(path.string()); }

std::string run_report_json(const RunReport& r) {
  detail::Json inputs = detail::Json::array();
  for (const auto& d : r.inputs) inputs.push_back({{"path", d.path}, {"sha256", d.sha256}});
  detail::Json j{{"command", r.command},
                 {"arguments", r.arguments},
                 {"version", r.version},
                 {"started_at", r.started_at},
                 {"inputs", inputs},
                 {"outputs", r.outputs},
                 {"wall_time_s", r.wall_time_s}};
  return j.dump(2) + "\n";
}

void write_run_report(const std::filesystem::path& dir, const RunReport& report) {
  for (const auto& o : report.outputs) {
    if (!std::filesystem::exists(o)) throw Error(Errc::io_error, "listed output '" + o + "' was not written");
  }
  detail::write_text_file(dir / "run_report.json", run_report_json(report));
}

}  // namespace avbench
