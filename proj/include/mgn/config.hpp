#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mgn/io.hpp"
#include "mgn/svg.hpp"

namespace mgn {

struct LatticeConfig {
  int rows = 8;
  int cols = 8;
  double xi = 0.0;
  double phi0 = 0.5;
  double L0 = 1.0;
  double density = 1.0;
  std::optional<double> inertia;  // unset: solid-square value
  DefectPattern defects;
};

struct DataConfig {
  std::size_t n = 1000;
  std::string path;  // empty: <output>/data.csv
  SplitRatios split;
  std::optional<std::uint64_t> split_seed;  // unset: the run seed
};

struct GprConfig {
  GprHyperparams init{1.0, 1.0, 1e-4};
  int restarts = 8;
  int max_iterations = 200;
  bool optimize = true;
};

struct MlpConfig {
  int preset = 1;
  MlpSettings settings = mlp_preset(1);
};

struct SurrogateConfig {
  std::string model = "gpr";  // train: gpr | mlp | all
  GprConfig gpr;
  MlpConfig mlp;
  std::string model_path;     // model used by simulate/relax/...; empty: the oracle
};

struct SimulationConfig {
  std::string protocol = "impulse";
  ProtocolParams params;
  double dt = 0.0;         // <= 0: default timestep
  double duration = 0.05;
  Damping damping;
  int snapshot_stride = 10;
  std::vector<int> tracked_rows{0};
  double perturb_position = 0.0;  // in units of L0
  double perturb_theta = 0.0;
};

struct RelaxConfig {
  double tol_v = 1e-8;
  double tol_omega = 1e-8;
  double tol_force = -1.0;
  long max_steps = 2'000'000;
  double ramp_time = -1.0;
};

struct WaveConfig {
  int source_row = -1;  // negative counts from the top
  int target_row = 0;
  double threshold = 0.01;
};

struct ContourConfig {
  std::vector<double> d{-0.2, 0.2};  // in units of L0
  int resolution = 101;
};

struct RenderConfig {
  SvgOptions svg;
  std::string state;  // snapshot CSV; empty renders the reference state
};

struct BenchConfig {
  std::vector<std::pair<int, int>> sizes{{16, 16}, {32, 32}, {64, 64}, {128, 128}};
  int steps = 10;
  int repetitions = 5;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output_dir;
  LatticeConfig lattice;
  AnalyticOracleSpec oracle;
  DataConfig data;
  SurrogateConfig surrogate;
  SimulationConfig simulation;
  RelaxConfig relax;
  WaveConfig wave;
  ContourConfig contour;
  RenderConfig render;
  BenchConfig bench;
};

Json config_to_json(const ExperimentConfig& config);
/// Unknown keys and wrong types throw kSchema. A run manifest is accepted as
/// well; its embedded config is used.
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const fs::path& path);

Lattice make_lattice(const LatticeConfig& config);

Json defects_to_json(const DefectPattern& p);
DefectPattern defects_from_json(const Json& j);

}  // namespace mgn
