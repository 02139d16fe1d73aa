#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "mgn/surrogate.hpp"

namespace mgn {

/// Squared-exponential kernel parameters: k = sigma2 exp(-|z - z'|^2 / (2 l^2)),
/// observations carry additive noise of variance noise2.
struct GprHyperparams {
  double sigma2 = 1.0;
  double length_scale = 1.0;
  double noise2 = 1e-4;

  bool valid() const { return sigma2 > 0.0 && length_scale > 0.0 && noise2 >= 0.0; }
  Vec3 log_params() const;
  static GprHyperparams from_log(const Vec3& p);
};

double se_kernel(const Vec3& z, const Vec3& z_prime, const GprHyperparams& hp);

/// GP inputs are (theta_a, theta_b, d / L0): all three order one.
Eigen::MatrixXd scaled_inputs(const std::vector<Vec3>& inputs, double L0);

struct LogMarginalLikelihood {
  double value = 0.0;
  Vec3 gradient = Vec3::Zero();  // w.r.t. (log sigma2, log l, log noise2)
};

/// log p(y | Z) = -y^T alpha / 2 - sum log diag(L) - n/2 log 2 pi.
/// Throws kConditioning when K + noise2 I cannot be factorized.
LogMarginalLikelihood log_marginal_likelihood(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                                              const GprHyperparams& hp,
                                              bool with_gradient = true);

struct GprOptimizeOptions {
  int restarts = 8;
  int max_iterations = 200;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct GprOptimizeResult {
  GprHyperparams hyperparams;
  double lml = 0.0;
  double initial_lml = 0.0;
  int successful_runs = 0;
};

/// Maximizes the log marginal likelihood with L-BFGS in log-parameter space,
/// starting from `init` and from `restarts` log-uniform random draws. The
/// result is never worse than `init`.
GprOptimizeResult gpr_optimize_hyperparams(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                                           const GprHyperparams& init,
                                           const GprOptimizeOptions& options = {});

struct GprPrediction {
  double mean = 0.0;      // offset-corrected
  double variance = 0.0;  // clamped at zero
  double raw_variance = 0.0;
};

class GprModel final : public EdgeEnergyModel {
 public:
  /// Fits on scaled inputs Z (n x 3) and raw outputs y.
  GprModel(Eigen::MatrixXd Z, Eigen::VectorXd y, GprHyperparams hp, double L0);

  /// Rebuilds a persisted model: alpha is taken verbatim, the factor is recomputed.
  GprModel(Eigen::MatrixXd Z, Eigen::VectorXd y, Eigen::VectorXd alpha, GprHyperparams hp,
           double L0);

  std::string kind() const override { return "gpr"; }
  double raw_energy(const EdgeFeatures& z) const override;
  Vec3 gradient(const EdgeFeatures& z) const override;
  EnergyAndGradient evaluate(const EdgeFeatures& z) const override;
  std::unique_ptr<EdgeEnergyModel> clone() const override {
    return std::make_unique<GprModel>(*this);
  }

  GprPrediction predict(const EdgeFeatures& z) const;

  const GprHyperparams& hyperparams() const { return hp_; }
  const Eigen::MatrixXd& inputs() const { return Z_; }
  const Eigen::VectorXd& outputs() const { return y_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::MatrixXd& factor() const { return L_; }
  double L0() const { return L0_; }

 private:
  Vec3 scaled(const EdgeFeatures& z) const { return {z.theta_a, z.theta_b, z.d / L0_}; }
  void factorize();

  Eigen::MatrixXd Z_;
  Eigen::VectorXd y_;
  GprHyperparams hp_;
  double L0_ = 1.0;
  Eigen::MatrixXd L_;  // lower Cholesky factor of K + noise2 I
  Eigen::VectorXd alpha_;
};

/// Fits a GP and calibrates its reference offset to the raw mean at the origin.
GprModel gpr_fit(const Dataset& train, const GprHyperparams& hp, double L0);

}  // namespace mgn
