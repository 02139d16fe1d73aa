#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mgn/features.hpp"

namespace mgn {

struct EnergyAndGradient {
  double energy = 0.0;
  Vec3 gradient = Vec3::Zero();
};

/// Reduced edge update function: spring energy over (theta_a, theta_b, d).
///
/// Implementations provide the raw (uncalibrated) energy and its gradient.
/// energy() subtracts reference_offset so that a calibrated model is exactly
/// zero at the undeformed configuration. Instances are immutable once shared,
/// so evaluation is safe from any number of threads.
class EdgeEnergyModel {
 public:
  virtual ~EdgeEnergyModel() = default;

  virtual std::string kind() const = 0;
  virtual double raw_energy(const EdgeFeatures& z) const = 0;
  virtual Vec3 gradient(const EdgeFeatures& z) const = 0;
  virtual std::unique_ptr<EdgeEnergyModel> clone() const = 0;

  /// Energy and gradient together; surrogates override this to share work.
  virtual EnergyAndGradient evaluate(const EdgeFeatures& z) const {
    return {energy(z), gradient(z)};
  }

  double energy(const EdgeFeatures& z) const { return raw_energy(z) - reference_offset_; }

  double reference_offset() const { return reference_offset_; }
  void set_reference_offset(double offset) { reference_offset_ = offset; }

 protected:
  EdgeEnergyModel() = default;
  EdgeEnergyModel(const EdgeEnergyModel&) = default;
  EdgeEnergyModel& operator=(const EdgeEnergyModel&) = default;

  double reference_offset_ = 0.0;
};

using ModelPtr = std::shared_ptr<const EdgeEnergyModel>;

// ---------------------------------------------------------------------------
// Analytic ground-truth family.
//
//   psi = k_d d^2 / 2 + k_s (ta + tb)^2 / 2 + k_t (ta - tb)^2 / 2
//       + c_couple d (ta + tb) + q4 ((ta - tb)^2 - d_star max(-d, 0))^2
//
// The last term makes the landscape bistable in (ta - tb) under compression.
struct AnalyticOracleSpec {
  double k_d = 1.0;
  double k_s = 0.2;
  double k_t = 0.1;
  double c_couple = 0.1;
  double q4 = 1.0;
  double d_star = 2.0;

  /// Only the axial term: psi = k_d d^2 / 2.
  static AnalyticOracleSpec axial(double k_d);
};

double oracle_energy(const AnalyticOracleSpec& spec, const EdgeFeatures& z);
Vec3 oracle_gradient(const AnalyticOracleSpec& spec, const EdgeFeatures& z);

class AnalyticOracle final : public EdgeEnergyModel {
 public:
  explicit AnalyticOracle(AnalyticOracleSpec spec = {}) : spec_(spec) {}

  std::string kind() const override { return "oracle"; }
  double raw_energy(const EdgeFeatures& z) const override { return oracle_energy(spec_, z); }
  Vec3 gradient(const EdgeFeatures& z) const override { return oracle_gradient(spec_, z); }
  std::unique_ptr<EdgeEnergyModel> clone() const override {
    return std::make_unique<AnalyticOracle>(*this);
  }

  const AnalyticOracleSpec& spec() const { return spec_; }

 private:
  AnalyticOracleSpec spec_;
};

// ---------------------------------------------------------------------------
// Data handling.

struct Dataset {
  std::vector<Vec3> inputs;  // (theta_a, theta_b, d), d in absolute length
  std::vector<double> outputs;
  std::string provenance;

  std::size_t size() const { return inputs.size(); }
  /// Throws kInvalidArgument on length mismatch or non-finite entries.
  void validate() const;
};

/// Half-width of the sampling cube: angles in (-pi/5, pi/5), d in (-0.2 L0, 0.2 L0).
inline constexpr double kAngleHalfWidth = 0.6283185307179586;  // pi / 5
inline constexpr double kStretchHalfWidth = 0.2;                // times L0

/// i.i.d. uniform samples from the open sampling cube.
std::vector<Vec3> sample_features(std::size_t n, double L0, std::uint64_t seed);

bool inside_sampling_cube(const Vec3& z, double L0);

Dataset label_dataset(const EdgeEnergyModel& model, const std::vector<Vec3>& inputs,
                      std::string provenance);

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct DataSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

DataSplit split_dataset(const Dataset& data, SplitRatios ratios, std::uint64_t seed);
Dataset subset(const Dataset& data, const std::vector<std::size_t>& indices);

struct ScalingBounds {
  double y_min = 0.0;
  double y_max = 1.0;

  static ScalingBounds from_outputs(const std::vector<double>& outputs);
  double scale(double y) const { return (y - y_min) / (y_max - y_min); }
};

/// Mean squared error of min-max scaled values; bounds come from training data.
double smse(const std::vector<double>& predictions, const std::vector<double>& truths,
            const ScalingBounds& bounds);

std::vector<double> predict_all(const EdgeEnergyModel& model, const std::vector<Vec3>& inputs);

}  // namespace mgn
