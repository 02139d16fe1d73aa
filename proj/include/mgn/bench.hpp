#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mgn/dynamics.hpp"

namespace mgn {

struct BenchEntry {
  int rows = 0;
  int cols = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  int repetitions = 0;
  int steps = 0;
  double mean_step_seconds = 0.0;
  double stddev_step_seconds = 0.0;
  std::vector<double> samples;  // per-step seconds of each timed repetition
  std::string error;            // non-empty when the size could not be run
};

struct BenchReport {
  int threads = 1;
  std::vector<BenchEntry> entries;
};

struct BenchOptions {
  int steps = 10;
  int repetitions = 5;  // timed runs per size, after one warm-up run
  int threads = 1;
  double perturbation = 0.01;  // random initial displacement, in units of L0
  std::uint64_t seed = 0;
};

/// Times Stepper::step on rows x cols lattices built from `base` (whose
/// rows/cols are replaced). steps == 0 yields an empty report. Sizes that run
/// out of memory are reported in their entry and do not stop the others.
BenchReport bench_scaling(const std::vector<std::pair<int, int>>& sizes, const EdgeEnergyModel& model,
                          const LatticeSpec& base, const BenchOptions& options = {});

std::string bench_csv(const BenchReport& report);

}  // namespace mgn
