#include "ptmu/ptmu.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

int exit_code(ptmu_status s) {
  switch (s) {
  case PTMU_OK:
    return 0;
  case PTMU_E_ARGUMENT:
  case PTMU_E_VALIDATION:
    return 2;
  case PTMU_E_NUMERIC:
    return 3;
  case PTMU_E_IO:
    return 4;
  }
  return 3;
}

void print_and_free(char* s, FILE* to = stdout) {
  if (!s) return;
  std::fputs(s, to);
  ptmu_string_free(s);
}

int cmd_validate(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "ptmu: cannot read %s\n", path.c_str());
    return 4;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  char* report = nullptr;
  const ptmu_status s = ptmu_validate(ss.str().c_str(), &report);
  print_and_free(report);
  return exit_code(s);
}

// Name field of a loaded config, from its canonical JSON.
std::string config_name(const ptmu_config* cfg) {
  char* text = nullptr;
  if (ptmu_config_json(cfg, &text) != PTMU_OK) return "experiment";
  const auto doc = nlohmann::json::parse(text);
  ptmu_string_free(text);
  return doc.at("name").get<std::string>();
}

int cmd_run(const std::vector<std::string>& configs, const std::string& out) {
  std::vector<ptmu_config*> handles(configs.size(), nullptr);
  int worst = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const ptmu_status s = ptmu_config_load(configs[i].c_str(), &handles[i]);
    if (s != PTMU_OK) {
      std::fprintf(stderr, "ptmu: %s: %s\n", configs[i].c_str(), ptmu_last_error());
      worst = std::max(worst, exit_code(s));
    }
  }
  if (worst != 0) {
    for (ptmu_config* h : handles) ptmu_config_free(h);
    return worst;
  }
  // One experiment writes into <out>; a batch writes <out>/<name> and runs in parallel.
  std::vector<ptmu_status> status(configs.size(), PTMU_OK);
  std::vector<std::string> errors(configs.size());
  auto one = [&](std::size_t i) {
    const std::string dir = configs.size() == 1 ? out : (std::filesystem::path(out) / config_name(handles[i])).string();
    status[i] = ptmu_run(handles[i], dir.c_str(), nullptr);
    if (status[i] != PTMU_OK) errors[i] = ptmu_last_error();
  };
  if (configs.size() == 1) {
    one(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < configs.size(); ++i) pool.emplace_back(one, i);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (status[i] != PTMU_OK) std::fprintf(stderr, "ptmu: %s: %s\n", configs[i].c_str(), errors[i].c_str());
    worst = std::max(worst, exit_code(status[i]));
    ptmu_config_free(handles[i]);
  }
  return worst;
}

int cmd_goldens(const std::string& check, const std::string& update) {
  if (!update.empty()) {
    const ptmu_status s = ptmu_goldens_update(update.c_str());
    if (s != PTMU_OK) std::fprintf(stderr, "ptmu: %s\n", ptmu_last_error());
    return exit_code(s);
  }
  char* mismatches = nullptr;
  const ptmu_status s = ptmu_goldens_check(check.c_str(), &mismatches);
  print_and_free(mismatches);
  if (s != PTMU_OK) std::fprintf(stderr, "ptmu: %s\n", ptmu_last_error());
  return exit_code(s);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclicity experiments for weighted polynomial approximation on the disk"};
  app.set_version_flag("--version", std::string(ptmu_version()));
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config and print diagnostics as JSON");
  validate->add_option("config", validate_path, "Experiment config (JSON)")->required();

  std::vector<std::string> run_paths;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run experiments and write CSV and JSON artifacts");
  run->add_option("config", run_paths, "Experiment config(s) (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory")->required();

  std::string check_dir, update_dir;
  auto* goldens = app.add_subcommand("goldens", "Compare or regenerate golden artifacts");
  auto* check = goldens->add_option("--check", check_dir, "Golden directory with manifest.json");
  auto* update = goldens->add_option("--update", update_dir, "Regenerate goldens in this directory");
  check->excludes(update);
  goldens->require_option(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (validate->parsed()) return cmd_validate(validate_path);
  if (run->parsed()) return cmd_run(run_paths, out_dir);
  return cmd_goldens(check_dir, update_dir);
}
