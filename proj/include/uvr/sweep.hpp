#pragma once

#include <string>
#include <vector>

#include "uvr/batch.hpp"
#include "uvr/config.hpp"
#include "uvr/metrics.hpp"

namespace uvr {

// The three protocol variants compared in a density sweep. The UAV-free
// variant runs the proposed protocol with the UAV count forced to zero, to
// isolate what the relays contribute.
inline const std::vector<std::string>& sweep_variants() {
  static const std::vector<std::string> variants = {"proposed", "baseline", "proposed-no-uav"};
  return variants;
}

inline ScenarioConfig sweep_config(const ScenarioConfig& base, int vehicles,
                                   const std::string& variant) {
  ScenarioConfig cfg = base;
  cfg.vehicles = vehicles;
  if (variant == "baseline") {
    cfg.protocol = "baseline";
  } else if (variant == "proposed-no-uav") {
    cfg.protocol = "proposed";
    cfg.uavs = 0;
  } else {
    cfg.protocol = "proposed";
  }
  return cfg;
}

struct SweepRow {
  int vehicles{0};
  std::string variant;
  AggregateReport agg;
};

inline std::vector<SweepRow> density_sweep(const ScenarioConfig& base,
                                           const std::vector<int>& densities,
                                           const std::vector<std::uint64_t>& seeds,
                                           int max_parallel = 0) {
  if (densities.empty()) throw std::invalid_argument("density_sweep: no vehicle counts");
  std::vector<SweepRow> rows;
  for (int vehicles : densities)
    for (const std::string& variant : sweep_variants()) {
      SweepRow row;
      row.vehicles = vehicles;
      row.variant = variant;
      row.agg = run_batch_aggregate(sweep_config(base, vehicles, variant), seeds, max_parallel);
      rows.push_back(std::move(row));
    }
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string csv =
      "vehicles,protocol,pdr_mean,pdr_sd,eed_mean,eed_sd,hops_mean,hops_sd,"
      "overhead_mean,overhead_sd\n";
  for (const SweepRow& row : rows) {
    csv += std::to_string(row.vehicles) + "," + row.variant;
    for (const Aggregate* a :
         {&row.agg.pdr, &row.agg.eed_s, &row.agg.avg_hops, &row.agg.overhead}) {
      csv += "," + format_double(a->mean);
      csv += "," + format_double(a->sd);
    }
    csv += "\n";
  }
  return csv;
}

inline std::string density_sweep_csv(const ScenarioConfig& base, const std::vector<int>& densities,
                                     const std::vector<std::uint64_t>& seeds,
                                     int max_parallel = 0) {
  return sweep_csv(density_sweep(base, densities, seeds, max_parallel));
}

}  // namespace uvr
