// hermrank: command-line front end.
//
//   hermrank <command> [flags]        run a command
//   hermrank --config run.json        re-run the config echoed in a report
//
// Exit codes: 0 success, 1 runtime or model error, 2 usage or parse error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "hermrank/cli.hpp"

namespace {

int fail(int code, const std::string& what) {
  std::cerr << "hermrank: error: " << what << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hermrank;

  CLI::App app{"Hermite rank, long-range dependence and Breuer-Major experiments"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path, out_path;
  unsigned threads = 0;
  app.add_option("--config", config_path, "config file: key = value lines, or JSON (a report's config is reused)");
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--threads", threads, "worker threads (default: HERMRANK_THREADS or hardware concurrency)")
      ->check(CLI::NonNegativeNumber);

  // Flag values stay as text; RunConfig parses and validates them.
  std::map<std::string, std::map<std::string, std::string>> flags;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  for (const auto& cmd : command_specs()) {
    const std::string name(cmd.name);
    CLI::App* sub = app.add_subcommand(name, std::string(cmd.help));
    for (auto key : cmd.keys) {
      const KeySpec& spec = key_spec(key);
      std::string help(spec.help);
      if (auto d = cmd.defaults.find(key); d != cmd.defaults.end()) help += " [" + std::string(d->second) + "]";
      const std::string k(key);
      options[name][k] = sub->add_option("--" + RunConfig::flag_name(k), flags[name][k], help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  json report;
  try {
    RunConfig config;
    if (!config_path.empty()) config = RunConfig::from_file(config_path);
    const auto chosen = app.get_subcommands();
    if (!chosen.empty()) {
      const std::string name = chosen.front()->get_name();
      config.set_command(name);
      for (const auto& [key, opt] : options[name])
        if (opt->count() > 0) config.set(key, flags[name][key]);
    } else if (config.command().empty()) {
      return fail(2, "no command given (see --help)");
    }
    config.finalize();
    report = run_command(config, threads, std::cerr);
  } catch (const ConfigError& e) {
    return fail(2, e.what());
  } catch (const ParseError& e) {
    return fail(2, std::string("syntax error: ") + e.what());
  } catch (const DegreeCapError& e) {
    return fail(2, e.what());
  } catch (const DomainError& e) {
    return fail(2, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }

  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    return std::cout ? 0 : 1;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!(out << text)) return fail(1, "cannot write '" + out_path + "'");
  return 0;
}
