// Command-line front end: single runs, density sweeps, metric recomputation
// from saved event logs, and map dumps.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uvr/batch.hpp"
#include "uvr/config.hpp"
#include "uvr/metrics.hpp"
#include "uvr/road_map.hpp"
#include "uvr/sim.hpp"
#include "uvr/sweep.hpp"

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<int> parse_int_list(const std::string& spec) {
  std::vector<int> values;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) values.push_back(std::stoi(item));
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uvr - UAV-assisted urban VANET routing simulator"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "simulate one scenario and print its metrics");
  std::string run_config, run_log, run_out, run_trace, run_dump_trace;
  std::uint64_t run_seed = 0;
  bool run_seed_set = false;
  run_cmd->add_option("--config", run_config, "scenario config file")->required();
  run_cmd->add_option("--seed", run_seed, "override the config seed")
      ->each([&](const std::string&) { run_seed_set = true; });
  run_cmd->add_option("--log", run_log, "write the protocol event log to a file");
  run_cmd->add_option("--out", run_out, "write the metrics report to a file");
  run_cmd->add_option("--trace", run_trace, "replay mobility from a trace file");
  run_cmd->add_option("--dump-trace", run_dump_trace, "record mobility to a trace file");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "density sweep over protocol variants");
  std::string sweep_config_path, sweep_out, sweep_densities = "80,120,160,200";
  int sweep_seeds = 15;
  int sweep_parallel = 0;
  sweep_cmd->add_option("--config", sweep_config_path, "scenario config file")->required();
  sweep_cmd->add_option("--densities", sweep_densities, "comma-separated vehicle counts");
  sweep_cmd->add_option("--seeds", sweep_seeds, "number of seeds per configuration");
  sweep_cmd->add_option("--out", sweep_out, "write the CSV table to a file");
  sweep_cmd->add_option("--parallel", sweep_parallel, "max concurrent runs (0 = auto)");

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "recompute metrics from an event log");
  std::string metrics_log;
  metrics_cmd->add_option("--log", metrics_log, "event log file")->required();

  // map
  auto* map_cmd = app.add_subcommand("map", "dump the zone table as CSV");
  std::string map_config, map_out;
  map_cmd->add_option("--config", map_config, "scenario config file")->required();
  map_cmd->add_option("--out", map_out, "write the CSV to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      uvr::ScenarioConfig cfg = uvr::ScenarioConfig::from_file(run_config);
      if (run_seed_set) cfg.seed = run_seed;
      if (!run_trace.empty()) {
        cfg.mobility = "trace";
        cfg.trace_file = run_trace;
      }
      if (!run_dump_trace.empty()) cfg.trace_dump_file = run_dump_trace;
      cfg.validate();
      uvr::RunResult result = uvr::Simulator(cfg).run();
      if (!run_log.empty()) write_file(run_log, result.log);
      const std::string report = uvr::format_report(result.report);
      if (!run_out.empty()) write_file(run_out, report);
      std::cout << report;
    } else if (sweep_cmd->parsed()) {
      uvr::ScenarioConfig cfg = uvr::ScenarioConfig::from_file(sweep_config_path);
      const std::vector<int> densities = parse_int_list(sweep_densities);
      if (densities.empty()) throw std::runtime_error("no densities given");
      if (sweep_seeds <= 0) throw std::runtime_error("--seeds must be positive");
      const std::string csv = uvr::density_sweep_csv(
          cfg, densities, uvr::seed_range(cfg.seed, sweep_seeds), sweep_parallel);
      if (!sweep_out.empty())
        write_file(sweep_out, csv);
      else
        std::cout << csv;
    } else if (metrics_cmd->parsed()) {
      const uvr::MetricsReport report = uvr::compute_metrics(read_file(metrics_log));
      std::cout << uvr::format_report(report);
    } else if (map_cmd->parsed()) {
      uvr::ScenarioConfig cfg = uvr::ScenarioConfig::from_file(map_config);
      const uvr::RoadMap map =
          uvr::RoadMap::build_grid(cfg.rows, cfg.cols, cfg.block_length_m, cfg.zone_size_m);
      if (!map_out.empty())
        write_file(map_out, map.zones_csv());
      else
        std::cout << map.zones_csv();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
