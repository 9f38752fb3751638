#pragma once

#include <algorithm>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "uvr/config.hpp"
#include "uvr/metrics.hpp"
#include "uvr/sim.hpp"

namespace uvr {

// Runs the scenario once per seed. Instances share nothing mutable, so
// seeds execute concurrently; results are ordered by seed value before
// aggregation, which makes the outcome independent of scheduling and of
// the seed list's order.
inline std::vector<std::pair<std::uint64_t, MetricsReport>> run_batch(
    const ScenarioConfig& base, const std::vector<std::uint64_t>& seeds, int max_parallel = 0) {
  if (seeds.empty()) throw std::invalid_argument("run_batch: no seeds");
  if (max_parallel <= 0)
    max_parallel = std::max(1u, std::thread::hardware_concurrency());

  std::vector<std::pair<std::uint64_t, MetricsReport>> results(seeds.size());
  std::vector<std::string> errors(seeds.size());
  std::size_t next = 0;
  for (std::size_t start = 0; start < seeds.size(); start = next) {
    next = std::min(seeds.size(), start + static_cast<std::size_t>(max_parallel));
    std::vector<std::future<void>> wave;
    for (std::size_t i = start; i < next; ++i) {
      wave.push_back(std::async(std::launch::async, [&, i] {
        try {
          ScenarioConfig cfg = base;
          cfg.seed = seeds[i];
          results[i] = {seeds[i], Simulator(cfg).run().report};
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }));
    }
    for (auto& f : wave) f.get();
  }
  for (std::size_t i = 0; i < seeds.size(); ++i)
    if (!errors[i].empty())
      throw std::runtime_error("run failed for seed " + std::to_string(seeds[i]) + ": " +
                               errors[i]);

  std::sort(results.begin(), results.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return results;
}

inline AggregateReport run_batch_aggregate(const ScenarioConfig& base,
                                           const std::vector<std::uint64_t>& seeds,
                                           int max_parallel = 0) {
  std::vector<MetricsReport> reports;
  for (auto& [seed, report] : run_batch(base, seeds, max_parallel)) reports.push_back(report);
  return aggregate_reports(reports);
}

inline std::vector<std::uint64_t> seed_range(std::uint64_t first, int count) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(first + static_cast<std::uint64_t>(i));
  return seeds;
}

}  // namespace uvr
