#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "afpk/errors.hpp"
#include "afpk/parallel.hpp"
#include "config.hpp"
#include "experiments.hpp"

#ifndef AFPK_VERSION
#define AFPK_VERSION "unknown"
#endif

namespace {

constexpr int kOk = 0, kConfigError = 2, kAcceptanceFailed = 3, kInternalError = 4;

unsigned threads_from_env(unsigned fallback) {
  const char* env = std::getenv("AFPK_THREADS");
  if (!env || !*env) return fallback;
  try {
    std::size_t pos = 0;
    const long v = std::stol(env, &pos);
    if (pos == std::string(env).size() && v >= 0) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  std::cerr << "warning: ignoring malformed AFPK_THREADS='" << env << "'\n";
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace afpk::tool;
  CLI::App app{"afpk: kernels, solvers and probes for fractional-in-time equations with anisotropic non-local operators"};
  app.footer(csv_schemas());
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "execute the experiment described by a config file");
  run->add_option("config", config_path, "flat 'section.key = value' config")->required();
  auto* validate = app.add_subcommand("validate", "parse and check a config without running it");
  validate->add_option("config", config_path, "config file")->required();
  auto* version = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  if (version->parsed()) {
    std::cout << "afpk " << AFPK_VERSION << '\n';
    return kOk;
  }

  ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (validate->parsed()) {
    std::cout << config.effective();
    return kOk;
  }
  (void)run;

  afpk::set_thread_count(threads_from_env(config.threads));
  try {
    const RunResult r = run_experiment(config, std::cerr);
    return r.accepted ? kOk : kAcceptanceFailed;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const afpk::ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kAcceptanceFailed;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}
