// Command-line front end; drives everything through the shared library's C
// interface.
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "otoclab/otoclab.h"

namespace {

struct CommonFlags {
  std::string config;
  std::string suite;
  std::string out_dir;
  std::string seed;
  int workers = 0;
  bool sensitivity = false;
  bool test_mode = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_config) {
  auto* opt = cmd->add_option("--config", flags.config, "experiment config (JSON)");
  if (needs_config) opt->required();
  cmd->add_option("--seed", flags.seed, "override the config seed");
  cmd->add_option("--workers", flags.workers, "worker thread count");
  cmd->add_option("--out", flags.out_dir, "output directory override");
  cmd->add_flag("--sensitivity", flags.sensitivity,
                "shrink the certified constants to demonstrate check sensitivity");
  cmd->add_flag("--test-mode", flags.test_mode, "suppress timestamps for byte-stable outputs");
}

int run(const CommonFlags& flags, const char* command) {
  otoclab_run* run = nullptr;
  otoclab_status st;
  if (!flags.config.empty()) {
    st = otoclab_run_create_from_file(flags.config.c_str(), &run);
  } else {
    // Synthesized config for commands that only need flags (regression).
    std::string text = R"({"experiment":{"command":")" + std::string(command) +
                       R"(","suite":")" + flags.suite + R"("}})";
    st = otoclab_run_create(text.c_str(), &run);
  }
  std::unique_ptr<otoclab_run, decltype(&otoclab_run_destroy)> guard(run, &otoclab_run_destroy);
  if (st != OTOCLAB_OK) {
    std::fprintf(stderr, "otoclab: %s: %s\n", otoclab_status_name(st),
                 run ? otoclab_run_last_error(run) : "allocation failed");
    return static_cast<int>(st);
  }
  if (!flags.seed.empty()) otoclab_run_set_option(run, "seed", flags.seed.c_str());
  if (flags.workers > 0)
    otoclab_run_set_option(run, "workers", std::to_string(flags.workers).c_str());
  if (!flags.out_dir.empty()) otoclab_run_set_option(run, "out-dir", flags.out_dir.c_str());
  otoclab_run_set_option(run, "sensitivity", flags.sensitivity ? "1" : "0");
  otoclab_run_set_option(run, "test-mode", flags.test_mode ? "1" : "0");

  st = otoclab_run_execute(run, command);
  const char* report = otoclab_run_report_json(run);
  if (report && *report) std::fputs(report, stdout);
  if (st != OTOCLAB_OK) {
    std::fprintf(stderr, "otoclab: %s: %s\n", otoclab_status_name(st),
                 otoclab_run_last_error(run));
  }
  return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"otoclab: exact OTOC and locality-bound laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(otoclab_version()));

  struct Sub {
    const char* name;
    const char* help;
    bool needs_config;
  };
  const Sub subs[] = {
      {"lattice-info", "certify lattice constants and shell tables", true},
      {"model-check", "certify the power-law assumption and derived constants", true},
      {"otoc", "compute an OTOC grid", true},
      {"bound-check", "measured quantities against the rigorous right-hand sides", true},
      {"cluster-audit", "connected-string sums, graph counts, series consistency", true},
      {"fit", "front extraction, exponent fit, cone containment", true},
      {"regression", "re-run the golden suite", false},
  };

  CommonFlags flags[std::size(subs)];
  CLI::App* cmds[std::size(subs)];
  for (std::size_t k = 0; k < std::size(subs); ++k) {
    cmds[k] = app.add_subcommand(subs[k].name, subs[k].help);
    add_common(cmds[k], flags[k], subs[k].needs_config);
    if (std::string(subs[k].name) == "regression")
      cmds[k]->add_option("--suite", flags[k].suite, "suite manifest path");
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t k = 0; k < std::size(subs); ++k)
    if (cmds[k]->parsed()) return run(flags[k], subs[k].name);
  return 1;
}
