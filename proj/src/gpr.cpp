#include "mgn/gpr.hpp"

#include <Eigen/Cholesky>
#include <ceres/ceres.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mgn/error.hpp"
#include "mgn/parallel.hpp"

namespace mgn {

Vec3 GprHyperparams::log_params() const {
  return {std::log(sigma2), std::log(length_scale), std::log(noise2)};
}

GprHyperparams GprHyperparams::from_log(const Vec3& p) {
  return {std::exp(p[0]), std::exp(p[1]), std::exp(p[2])};
}

double se_kernel(const Vec3& z, const Vec3& z_prime, const GprHyperparams& hp) {
  const double r2 = (z - z_prime).squaredNorm();
  return hp.sigma2 * std::exp(-r2 / (2.0 * hp.length_scale * hp.length_scale));
}

Eigen::MatrixXd scaled_inputs(const std::vector<Vec3>& inputs, double L0) {
  Eigen::MatrixXd Z(static_cast<Eigen::Index>(inputs.size()), 3);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    Z(r, 0) = inputs[i][0];
    Z(r, 1) = inputs[i][1];
    Z(r, 2) = inputs[i][2] / L0;
  }
  return Z;
}

namespace {

std::string describe(const GprHyperparams& hp) {
  std::ostringstream os;
  os.precision(6);
  os << "sigma2=" << hp.sigma2 << " l=" << hp.length_scale << " noise2=" << hp.noise2;
  return os.str();
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& Z) {
  const Eigen::Index n = Z.rows();
  Eigen::MatrixXd D(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) D(i, j) = (Z.row(i) - Z.row(j)).squaredNorm();
  }
  return D;
}

Eigen::MatrixXd kernel_from_distances(const Eigen::MatrixXd& D2, const GprHyperparams& hp) {
  const double inv = -0.5 / (hp.length_scale * hp.length_scale);
  return (hp.sigma2 * (inv * D2.array()).exp()).matrix();
}

struct Factorization {
  Eigen::LLT<Eigen::MatrixXd> llt;
  bool ok = false;
};

Factorization factor_covariance(const Eigen::MatrixXd& K, double noise2) {
  Eigen::MatrixXd Ky = K;
  Ky.diagonal().array() += noise2;
  Factorization f;
  f.llt.compute(Ky);
  f.ok = f.llt.info() == Eigen::Success;
  if (f.ok) {
    const auto& L = f.llt.matrixLLT();
    f.ok = (L.diagonal().array() > 0.0).all() && L.diagonal().allFinite();
  }
  return f;
}

LogMarginalLikelihood lml_from_distances(const Eigen::MatrixXd& D2, const Eigen::VectorXd& y,
                                         const GprHyperparams& hp, bool with_gradient) {
  if (!hp.valid()) {
    fail(ErrorCode::kInvalidArgument, "lml: invalid hyperparameters " + describe(hp));
  }
  const Eigen::MatrixXd K = kernel_from_distances(D2, hp);
  auto f = factor_covariance(K, hp.noise2);
  if (!f.ok) {
    fail(ErrorCode::kConditioning,
         "K + noise2 I is not positive definite for " + describe(hp));
  }
  const Eigen::VectorXd alpha = f.llt.solve(y);
  const auto n = static_cast<double>(y.size());
  LogMarginalLikelihood out;
  out.value = -0.5 * y.dot(alpha) - f.llt.matrixLLT().diagonal().array().log().sum() -
              0.5 * n * std::log(2.0 * std::numbers::pi);
  if (!std::isfinite(out.value)) {
    fail(ErrorCode::kConditioning, "non-finite log marginal likelihood for " + describe(hp));
  }
  if (!with_gradient) return out;

  // dLML/dp = tr((alpha alpha^T - Ky^{-1}) dKy/dp) / 2
  const Eigen::MatrixXd Kinv =
      f.llt.solve(Eigen::MatrixXd::Identity(y.size(), y.size()));
  const Eigen::MatrixXd W = alpha * alpha.transpose() - Kinv;
  const double inv_l2 = 1.0 / (hp.length_scale * hp.length_scale);
  out.gradient[0] = 0.5 * (W.array() * K.array()).sum();
  out.gradient[1] = 0.5 * (W.array() * K.array() * D2.array()).sum() * inv_l2;
  out.gradient[2] = 0.5 * hp.noise2 * W.trace();
  return out;
}

class NegativeLml final : public ceres::FirstOrderFunction {
 public:
  NegativeLml(const Eigen::MatrixXd& D2, const Eigen::VectorXd& y) : D2_(D2), y_(y) {}

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    const Vec3 p(parameters[0], parameters[1], parameters[2]);
    if ((p.array().abs() > 30.0).any()) return false;
    try {
      const auto lml =
          lml_from_distances(D2_, y_, GprHyperparams::from_log(p), gradient != nullptr);
      *cost = -lml.value;
      if (gradient) {
        for (int i = 0; i < 3; ++i) gradient[i] = -lml.gradient[i];
      }
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  int NumParameters() const override { return 3; }

 private:
  const Eigen::MatrixXd& D2_;
  const Eigen::VectorXd& y_;
};

struct RunResult {
  bool ok = false;
  Vec3 log_params = Vec3::Zero();
  double lml = -std::numeric_limits<double>::infinity();
};

RunResult optimize_from(const Eigen::MatrixXd& D2, const Eigen::VectorXd& y, const Vec3& start,
                        int max_iterations) {
  RunResult r;
  double params[3] = {start[0], start[1], start[2]};
  double start_cost = 0.0;
  NegativeLml probe(D2, y);
  if (!probe.Evaluate(params, &start_cost, nullptr)) return r;

  ceres::GradientProblem problem(new NegativeLml(D2, y));
  ceres::GradientProblemSolver::Options opts;
  opts.line_search_direction_type = ceres::LBFGS;
  opts.max_num_iterations = max_iterations;
  opts.logging_type = ceres::SILENT;
  opts.minimizer_progress_to_stdout = false;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(opts, problem, params, &summary);

  double final_cost = 0.0;
  if (probe.Evaluate(params, &final_cost, nullptr) && final_cost <= start_cost) {
    r.ok = true;
    r.log_params = Vec3(params[0], params[1], params[2]);
    r.lml = -final_cost;
  } else {
    r.ok = true;
    r.log_params = start;
    r.lml = -start_cost;
  }
  return r;
}

}  // namespace

LogMarginalLikelihood log_marginal_likelihood(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                                              const GprHyperparams& hp, bool with_gradient) {
  if (Z.rows() != y.size() || Z.rows() == 0) {
    fail(ErrorCode::kInvalidArgument, "lml: inputs and outputs must be non-empty and aligned");
  }
  return lml_from_distances(squared_distances(Z), y, hp, with_gradient);
}

GprOptimizeResult gpr_optimize_hyperparams(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                                           const GprHyperparams& init,
                                           const GprOptimizeOptions& options) {
  if (Z.rows() == 0 || Z.rows() != y.size()) {
    fail(ErrorCode::kInvalidArgument, "gpr optimize: empty or misaligned training set");
  }
  const Eigen::MatrixXd D2 = squared_distances(Z);

  // Start 0 is the caller's guess; the rest are log-uniform draws.
  std::vector<Vec3> starts{init.log_params()};
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) {
    return std::log(lo) + u(rng) * (std::log(hi) - std::log(lo));
  };
  for (int r = 0; r < options.restarts; ++r) {
    const double s = log_uniform(1e-2, 1e1);
    const double l = log_uniform(1e-1, 1e1);
    const double n = log_uniform(1e-6, 1e-2);
    starts.emplace_back(s, l, n);
  }

  std::vector<RunResult> runs(starts.size());
  parallel_for(starts.size(), options.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      runs[i] = optimize_from(D2, y, starts[i], options.max_iterations);
    }
  });

  GprOptimizeResult out;
  std::size_t best = runs.size();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].ok) continue;
    ++out.successful_runs;
    if (best == runs.size() || runs[i].lml > runs[best].lml) best = i;
  }
  if (best == runs.size()) {
    fail(ErrorCode::kConditioning,
         "gpr optimize: every restart failed to factorize K + noise2 I (init " + describe(init) +
             ")");
  }
  out.hyperparams = GprHyperparams::from_log(runs[best].log_params);
  out.lml = runs[best].lml;
  out.initial_lml = runs[0].ok ? lml_from_distances(D2, y, init, false).value
                               : -std::numeric_limits<double>::infinity();
  if (runs[0].ok && out.lml < out.initial_lml) {
    out.hyperparams = init;
    out.lml = out.initial_lml;
  }
  return out;
}

GprModel::GprModel(Eigen::MatrixXd Z, Eigen::VectorXd y, GprHyperparams hp, double L0)
    : Z_(std::move(Z)), y_(std::move(y)), hp_(hp), L0_(L0) {
  if (Z_.rows() == 0 || Z_.cols() != 3 || Z_.rows() != y_.size()) {
    fail(ErrorCode::kInvalidArgument, "gpr fit: need n x 3 inputs aligned with n outputs");
  }
  if (!hp_.valid() || !(L0_ > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "gpr fit: invalid hyperparameters " + describe(hp_));
  }
  factorize();
  alpha_ = y_;
  L_.triangularView<Eigen::Lower>().solveInPlace(alpha_);
  L_.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha_);
}

GprModel::GprModel(Eigen::MatrixXd Z, Eigen::VectorXd y, Eigen::VectorXd alpha,
                   GprHyperparams hp, double L0)
    : Z_(std::move(Z)), y_(std::move(y)), hp_(hp), L0_(L0), alpha_(std::move(alpha)) {
  if (Z_.rows() == 0 || Z_.cols() != 3 || Z_.rows() != y_.size() ||
      alpha_.size() != y_.size()) {
    fail(ErrorCode::kInvalidArgument, "gpr model: inconsistent array sizes");
  }
  if (!hp_.valid() || !(L0_ > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "gpr model: invalid hyperparameters " + describe(hp_));
  }
  factorize();
}

void GprModel::factorize() {
  auto f = factor_covariance(kernel_from_distances(squared_distances(Z_), hp_), hp_.noise2);
  if (!f.ok) {
    fail(ErrorCode::kConditioning,
         "gpr fit: K + noise2 I is not positive definite for " + describe(hp_) +
             " (duplicate inputs with zero noise?)");
  }
  L_ = f.llt.matrixL();
}

namespace {

// Kernel weights k(z*, z_i) into a reusable per-thread buffer.
const Eigen::ArrayXd& kernel_row(const Eigen::MatrixXd& Z, const Vec3& q,
                                 const GprHyperparams& hp) {
  thread_local Eigen::ArrayXd k;
  k.resize(Z.rows());
  const double inv = -0.5 / (hp.length_scale * hp.length_scale);
  k = (inv * ((Z.col(0).array() - q[0]).square() + (Z.col(1).array() - q[1]).square() +
              (Z.col(2).array() - q[2]).square()))
          .exp() *
      hp.sigma2;
  return k;
}

}  // namespace

double GprModel::raw_energy(const EdgeFeatures& z) const {
  // Same reduction as evaluate(), so both agree to the last bit.
  const auto& k = kernel_row(Z_, scaled(z), hp_);
  thread_local Eigen::ArrayXd w;
  w = k * alpha_.array();
  return w.sum();
}

EnergyAndGradient GprModel::evaluate(const EdgeFeatures& z) const {
  const Vec3 q = scaled(z);
  const auto& k = kernel_row(Z_, q, hp_);
  thread_local Eigen::ArrayXd w;
  w = k * alpha_.array();
  const double sum_w = w.sum();
  const double inv_l2 = 1.0 / (hp_.length_scale * hp_.length_scale);
  Vec3 g;
  for (int j = 0; j < 3; ++j) g[j] = ((Z_.col(j).array() * w).sum() - q[j] * sum_w) * inv_l2;
  g[2] /= L0_;
  return {sum_w - reference_offset_, g};
}

Vec3 GprModel::gradient(const EdgeFeatures& z) const { return evaluate(z).gradient; }

GprPrediction GprModel::predict(const EdgeFeatures& z) const {
  const auto& k = kernel_row(Z_, scaled(z), hp_);
  GprPrediction p;
  p.mean = (k * alpha_.array()).sum() - reference_offset_;
  Eigen::VectorXd v = k.matrix();
  L_.triangularView<Eigen::Lower>().solveInPlace(v);
  p.raw_variance = hp_.sigma2 - v.squaredNorm();
  p.variance = std::max(p.raw_variance, 0.0);
  return p;
}

GprModel gpr_fit(const Dataset& train, const GprHyperparams& hp, double L0) {
  train.validate();
  GprModel model(scaled_inputs(train.inputs, L0),
                 Eigen::Map<const Eigen::VectorXd>(train.outputs.data(),
                                                   static_cast<Eigen::Index>(train.size())),
                 hp, L0);
  model.set_reference_offset(model.raw_energy({0.0, 0.0, 0.0}));
  return model;
}

}  // namespace mgn
