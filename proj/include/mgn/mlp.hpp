#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "mgn/surrogate.hpp"

namespace mgn {

struct MlpLayer {
  Eigen::MatrixXd W;  // out x in
  Eigen::VectorXd b;
};

/// Fully connected rectifier network R^3 -> R. Hidden layers apply
/// max(0, W z + b); the output layer is affine. Inputs are (ta, tb, d / L0).
class MlpModel final : public EdgeEnergyModel {
 public:
  MlpModel(std::vector<MlpLayer> layers, double L0);

  std::string kind() const override { return "mlp"; }
  double raw_energy(const EdgeFeatures& z) const override;
  Vec3 gradient(const EdgeFeatures& z) const override;
  EnergyAndGradient evaluate(const EdgeFeatures& z) const override;
  std::unique_ptr<EdgeEnergyModel> clone() const override {
    return std::make_unique<MlpModel>(*this);
  }

  /// Network output on already scaled inputs.
  double forward(const Vec3& scaled_input) const;
  /// d(output)/d(scaled input) by reverse accumulation; slope 0 at kinks.
  Vec3 input_gradient(const Vec3& scaled_input) const;

  const std::vector<MlpLayer>& layers() const { return layers_; }
  std::vector<int> layer_sizes() const;
  double L0() const { return L0_; }

 private:
  std::vector<MlpLayer> layers_;
  double L0_ = 1.0;
};

struct MlpSettings {
  int hidden_layers = 2;
  int width = 32;
  double learning_rate = 4e-4;
  int batch_size = 32;
  int epochs = 2000;
  int patience = 200;  // epochs without validation improvement before stopping
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// The three architectures compared against GPR (index 1, 2 or 3).
MlpSettings mlp_preset(int index);

struct MlpTrainResult {
  MlpModel model;
  std::vector<double> train_smse;       // per epoch
  std::vector<double> validation_smse;  // per epoch, empty without validation data
  int best_epoch = -1;
  bool stopped_early = false;
};

/// Mini-batch Adam on mean squared error. When a validation set is given the
/// weights with the lowest validation SMSE are returned. Throws kDivergence
/// when the loss becomes non-finite.
MlpTrainResult mlp_train(const Dataset& train, const Dataset* validation,
                         const MlpSettings& settings, std::uint64_t seed, double L0);

}  // namespace mgn
