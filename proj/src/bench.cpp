#include "mgn/bench.hpp"

#include <chrono>
#include <cmath>
#include <new>

#include "mgn/error.hpp"
#include "mgn/io.hpp"

namespace mgn {

BenchReport bench_scaling(const std::vector<std::pair<int, int>>& sizes, const EdgeEnergyModel& model,
                          const LatticeSpec& base, const BenchOptions& o) {
  if (o.repetitions < 5) fail(ErrorCode::kInvalidArgument, "benchmark needs at least 5 repetitions");
  if (o.steps < 0) fail(ErrorCode::kInvalidArgument, "benchmark steps must be >= 0");
  BenchReport report;
  report.threads = o.threads;
  if (o.steps == 0) return report;

  for (const auto& [rows, cols] : sizes) {
    BenchEntry entry;
    entry.rows = rows;
    entry.cols = cols;
    entry.steps = o.steps;
    try {
      LatticeSpec spec = base;
      spec.rows = rows;
      spec.cols = cols;
      const Lattice lattice = build_lattice(spec);
      entry.nodes = lattice.node_count();
      entry.edges = lattice.edge_count();
      const LoadProtocol free_protocol;
      const double dt = default_timestep(model, lattice);
      const Stepper st(lattice, model, free_protocol, dt, {}, o.threads);
      InitialConditions ic;
      ic.perturb_position = o.perturbation * lattice.L0();
      ic.perturb_theta = o.perturbation;
      ic.seed = o.seed;
      const SystemState start = st.initialize(st.initial_state(ic)).first;

      for (int rep = 0; rep <= o.repetitions; ++rep) {
        SystemState s = start;
        const auto t0 = std::chrono::steady_clock::now();
        for (int k = 0; k < o.steps; ++k) st.step(s);
        const auto t1 = std::chrono::steady_clock::now();
        if (rep == 0) continue;  // warm-up
        entry.samples.push_back(std::chrono::duration<double>(t1 - t0).count() / o.steps);
      }
      entry.repetitions = static_cast<int>(entry.samples.size());
      double mean = 0.0;
      for (double v : entry.samples) mean += v;
      mean /= static_cast<double>(entry.samples.size());
      double var = 0.0;
      for (double v : entry.samples) var += (v - mean) * (v - mean);
      entry.mean_step_seconds = mean;
      entry.stddev_step_seconds = std::sqrt(var / static_cast<double>(entry.samples.size() - 1));
    } catch (const std::bad_alloc&) {
      entry.error = "out of memory";
      entry.samples.clear();
    } catch (const std::length_error&) {
      entry.error = "out of memory";
      entry.samples.clear();
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

std::string bench_csv(const BenchReport& r) {
  std::string out = "rows,cols,nodes,edges,threads,steps,repetitions,mean_step_seconds,stddev_step_seconds,error\n";
  for (const auto& e : r.entries) {
    out += std::to_string(e.rows) + "," + std::to_string(e.cols) + "," + std::to_string(e.nodes) + "," +
           std::to_string(e.edges) + "," + std::to_string(r.threads) + "," + std::to_string(e.steps) +
           "," + std::to_string(e.repetitions) + "," + format_double(e.mean_step_seconds) + "," +
           format_double(e.stddev_step_seconds) + "," + e.error + "\n";
  }
  return out;
}

}  // namespace mgn
