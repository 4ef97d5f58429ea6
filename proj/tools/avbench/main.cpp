#include <filesystem>
#include <iostream>

#include "avbench/error.hpp"
#include "avbench/manifest.hpp"
#include "common.hpp"

int main(int argc, char** argv) {
  using namespace avbench;
  cli::Globals globals;
  for (int i = 1; i < argc; ++i) globals.argv.emplace_back(argv[i]);

  CLI::App app{"Diagnostics and benchmarking for audio-video deepfake datasets", "avbench"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.set_config("--config", "", "TOML/INI file whose keys mirror the command-line flags");
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--seed", globals.seed, "Seed for splits and sampling")->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--format", globals.format, "Report formats to write")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();

  cli::Action action;
  cli::register_data_commands(app, globals, action);
  cli::register_split_commands(app, globals, action);
  cli::register_eval_commands(app, globals, action);
  cli::register_sample_commands(app, globals, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (!action) {
    std::cerr << app.help();
    return 1;
  }
  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "avbench: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "avbench: IoError: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "avbench: " << e.what() << "\n";
    return 1;
  }
}
