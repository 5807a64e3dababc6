#include <CLI11.hpp>

#include <array>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mulab/reports.hpp"

namespace {

mulab::RunConfig base_config() {
  mulab::RunConfig config;
  if (const char* out = std::getenv("MULAB_OUT")) config.output_dir = out;
  return config;
}

int count_fails(const std::vector<mulab::ExperimentReport>& reports) {
  int fails = 0;
  for (const auto& r : reports)
    if (r.verdict == mulab::Verdict::fails) ++fails;
  return fails;
}

void print_summary(const std::vector<mulab::ExperimentReport>& reports) {
  std::map<std::string, std::array<int, 3>> tally;
  for (const auto& r : reports)
    ++tally[r.experiment][static_cast<int>(r.verdict)];
  for (const auto& [id, counts] : tally) {
    std::cout << id << ": " << counts[0] << " holds, " << counts[1] << " fails, " << counts[2]
              << " recorded\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"experiment runner for the rearrangement laboratory"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run experiment suites and write reports");
  std::vector<std::string> suites;
  std::string config_path, out_dir, format = "all";
  std::uint64_t seed = 0;
  long grid = 0, samples = 0;
  bool timing = false;
  run_cmd->add_option("--suite", suites, "suite id (repeatable); default all");
  run_cmd->add_option("--config", config_path, "key=value config file");
  run_cmd->add_option("--seed", seed, "RNG seed");
  run_cmd->add_option("--grid", grid, "grid points per axis override");
  run_cmd->add_option("--samples", samples, "sample count override");
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--format", format, "csv, json, plotdata, or all")
      ->check(CLI::IsMember({"csv", "json", "plotdata", "all"}));
  run_cmd->add_flag("--timing", timing, "record wall times in the reports");

  auto* list_cmd = app.add_subcommand("list", "list suite ids and their claim tags");

  auto* emit_cmd = app.add_subcommand("emit", "re-emit reports from a JSON file");
  std::string input_path, emit_format = "all", emit_out;
  emit_cmd->add_option("--input", input_path, "reports.json produced by run")->required();
  emit_cmd->add_option("--format", emit_format, "csv, json, plotdata, or all")
      ->check(CLI::IsMember({"csv", "json", "plotdata", "all"}));
  emit_cmd->add_option("--out", emit_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) {
      for (const auto& id : mulab::suite_ids())
        std::cout << id << "  " << mulab::suite_claim(id) << "\n";
      return 0;
    }

    if (run_cmd->parsed()) {
      mulab::RunConfig config = base_config();
      if (!config_path.empty()) config = mulab::load_config_file(config_path, config);
      if (!suites.empty()) config.selection = suites;
      if (config.selection.empty()) config.selection = {"all"};
      if (run_cmd->count("--seed")) config.seed = seed;
      if (run_cmd->count("--grid")) config.grid_points = grid;
      if (run_cmd->count("--samples")) config.sample_count = samples;
      if (run_cmd->count("--out")) config.output_dir = out_dir;
      if (timing) config.record_timing = true;

      const auto start = std::chrono::steady_clock::now();
      const auto reports = mulab::run(config);
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      mulab::emit_files(reports, format, config.output_dir);
      print_summary(reports);
      std::cerr << "ran " << reports.size() << " rows in " << mulab::format_significant(elapsed, 3)
                << " s; reports written to " << config.output_dir << "\n";
      return count_fails(reports) > 0 ? 1 : 0;
    }

    if (emit_cmd->parsed()) {
      std::ifstream in(input_path, std::ios::binary);
      if (!in) throw std::runtime_error("cannot read " + input_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      const auto reports = mulab::reports_from_json(buf.str());
      mulab::RunConfig defaults = base_config();
      mulab::emit_files(reports, emit_format, emit_out.empty() ? defaults.output_dir : emit_out);
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
