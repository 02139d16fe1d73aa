#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgn/config.hpp"

namespace mgn {

struct CandidateReport {
  std::string name;  // gpr, mlp1, mlp2, mlp3
  bool ok = true;
  std::string error;
  double train_smse = 0.0;
  double validation_smse = 0.0;
  double seconds = 0.0;
  Json details = Json::object();
};

struct TrainOutcome {
  ModelPtr best;
  std::string best_name;
  std::vector<CandidateReport> candidates;
  std::vector<ModelPtr> models;  // per candidate, null when it failed
  ScalingBounds bounds;
  DataSplit split;
};

/// Fits the requested surrogates ("gpr", "mlp" or "all") on the training
/// split and keeps the one with the lowest validation SMSE. Candidates that
/// fail are reported; the run fails only when none succeeds.
TrainOutcome train_surrogates(const Dataset& data, const std::string& which, const GprConfig& gpr,
                              const MlpConfig& mlp, const SplitRatios& ratios,
                              std::uint64_t split_seed, std::uint64_t seed, double L0, int threads);

struct ContourGrid {
  double d = 0.0;              // absolute elongation
  std::vector<double> axis;    // angle samples shared by theta_a and theta_b
  std::vector<double> energy;  // energy[j * n + i] at (axis[i], axis[j])
  int minima = 0;
};

/// Energy over the (theta_a, theta_b) square of the sampling cube at fixed d.
ContourGrid energy_contour(const EdgeEnergyModel& model, double d, int resolution);

/// Grid points strictly below all of their (up to 8) neighbours.
int count_local_minima(const std::vector<double>& grid, int n);

std::string contour_csv(const ContourGrid& grid);

}  // namespace mgn
