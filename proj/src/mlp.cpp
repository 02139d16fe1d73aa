#include "mgn/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mgn/error.hpp"

namespace mgn {

MlpModel::MlpModel(std::vector<MlpLayer> layers, double L0) : layers_(std::move(layers)), L0_(L0) {
  if (layers_.empty()) fail(ErrorCode::kInvalidArgument, "mlp: no layers");
  if (!(L0_ > 0.0)) fail(ErrorCode::kInvalidArgument, "mlp: L0 must be positive");
  Eigen::Index width = 3;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.W.cols() != width || l.b.size() != l.W.rows() || l.W.rows() == 0) {
      fail(ErrorCode::kInvalidArgument,
           "mlp: layer " + std::to_string(i) + " shape mismatch (expected input width " +
               std::to_string(width) + ")");
    }
    width = l.W.rows();
  }
  if (width != 1) fail(ErrorCode::kInvalidArgument, "mlp: output width must be 1");
}

std::vector<int> MlpModel::layer_sizes() const {
  std::vector<int> sizes{3};
  for (const auto& l : layers_) sizes.push_back(static_cast<int>(l.W.rows()));
  return sizes;
}

double MlpModel::forward(const Vec3& scaled_input) const {
  Eigen::VectorXd a = scaled_input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::VectorXd z = layers_[i].W * a + layers_[i].b;
    if (i + 1 < layers_.size()) z = z.cwiseMax(0.0);
    a = std::move(z);
  }
  return a[0];
}

Vec3 MlpModel::input_gradient(const Vec3& scaled_input) const {
  std::vector<Eigen::VectorXd> pre;
  pre.reserve(layers_.size());
  Eigen::VectorXd a = scaled_input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::VectorXd z = layers_[i].W * a + layers_[i].b;
    pre.push_back(z);
    a = i + 1 < layers_.size() ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
  }
  Eigen::VectorXd g = Eigen::VectorXd::Ones(1);
  for (std::size_t i = layers_.size(); i-- > 0;) {
    if (i + 1 < layers_.size()) {
      g = (pre[i].array() > 0.0).select(g.array(), 0.0).matrix();
    }
    g = layers_[i].W.transpose() * g;
  }
  return g;
}

double MlpModel::raw_energy(const EdgeFeatures& z) const {
  return forward({z.theta_a, z.theta_b, z.d / L0_});
}

Vec3 MlpModel::gradient(const EdgeFeatures& z) const {
  Vec3 g = input_gradient({z.theta_a, z.theta_b, z.d / L0_});
  g[2] /= L0_;
  return g;
}

EnergyAndGradient MlpModel::evaluate(const EdgeFeatures& z) const {
  return {energy(z), gradient(z)};
}

MlpSettings mlp_preset(int index) {
  MlpSettings s;
  switch (index) {
    case 1:
      s.hidden_layers = 2;
      s.width = 32;
      s.learning_rate = 4e-4;
      break;
    case 2:
      s.hidden_layers = 4;
      s.width = 64;
      s.learning_rate = 2e-4;
      break;
    case 3:
      s.hidden_layers = 8;
      s.width = 128;
      s.learning_rate = 1e-1;
      break;
    default:
      fail(ErrorCode::kInvalidArgument, "mlp preset must be 1, 2 or 3");
  }
  s.batch_size = 32;
  return s;
}

namespace {

struct AdamState {
  std::vector<Eigen::MatrixXd> mW, vW;
  std::vector<Eigen::VectorXd> mb, vb;
  long step = 0;
};

std::vector<MlpLayer> init_layers(const MlpSettings& s, std::mt19937_64& rng) {
  std::vector<MlpLayer> layers;
  int in = 3;
  for (int i = 0; i <= s.hidden_layers; ++i) {
    const int out = i < s.hidden_layers ? s.width : 1;
    // He initialization for rectifier layers.
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / in));
    MlpLayer l{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
    for (Eigen::Index c = 0; c < l.W.cols(); ++c) {
      for (Eigen::Index r = 0; r < l.W.rows(); ++r) l.W(r, c) = dist(rng);
    }
    layers.push_back(std::move(l));
    in = out;
  }
  return layers;
}

Eigen::RowVectorXd batch_forward(const std::vector<MlpLayer>& layers, const Eigen::MatrixXd& X,
                                 std::vector<Eigen::MatrixXd>* pre,
                                 std::vector<Eigen::MatrixXd>* act) {
  Eigen::MatrixXd a = X;
  if (act) act->assign(1, a);
  if (pre) pre->clear();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Eigen::MatrixXd z = (layers[i].W * a).colwise() + layers[i].b;
    if (pre) pre->push_back(z);
    if (i + 1 < layers.size()) z = z.cwiseMax(0.0);
    a = std::move(z);
    if (act && i + 1 < layers.size()) act->push_back(a);
  }
  return a.row(0);
}

Eigen::MatrixXd design_matrix(const Dataset& d, double L0) {
  Eigen::MatrixXd X(3, static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    X(0, c) = d.inputs[i][0];
    X(1, c) = d.inputs[i][1];
    X(2, c) = d.inputs[i][2] / L0;
  }
  return X;
}

double scaled_error(const Eigen::RowVectorXd& pred, const std::vector<double>& truth,
                    const ScalingBounds& b) {
  std::vector<double> p(pred.data(), pred.data() + pred.size());
  return smse(p, truth, b);
}

}  // namespace

MlpTrainResult mlp_train(const Dataset& train, const Dataset* validation,
                         const MlpSettings& s, std::uint64_t seed, double L0) {
  train.validate();
  if (train.size() == 0) fail(ErrorCode::kInvalidArgument, "mlp train: empty training set");
  if (s.hidden_layers < 1 || s.width < 1 || s.batch_size < 1 || s.epochs < 1 ||
      !(s.learning_rate > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "mlp train: invalid settings");
  }
  if (validation) validation->validate();

  std::mt19937_64 rng(seed);
  std::vector<MlpLayer> layers = init_layers(s, rng);

  ScalingBounds bounds = ScalingBounds::from_outputs(train.outputs);
  // Constant targets: fall back to unit range so the metric reduces to MSE.
  if (!(bounds.y_max > bounds.y_min)) bounds.y_max = bounds.y_min + 1.0;

  const Eigen::MatrixXd X = design_matrix(train, L0);
  const Eigen::RowVectorXd Y = Eigen::Map<const Eigen::RowVectorXd>(
      train.outputs.data(), static_cast<Eigen::Index>(train.size()));
  Eigen::MatrixXd Xv;
  if (validation && validation->size() > 0) Xv = design_matrix(*validation, L0);

  AdamState adam;
  for (const auto& l : layers) {
    adam.mW.push_back(Eigen::MatrixXd::Zero(l.W.rows(), l.W.cols()));
    adam.vW.push_back(Eigen::MatrixXd::Zero(l.W.rows(), l.W.cols()));
    adam.mb.push_back(Eigen::VectorXd::Zero(l.b.size()));
    adam.vb.push_back(Eigen::VectorXd::Zero(l.b.size()));
  }

  MlpTrainResult result{MlpModel(layers, L0), {}, {}, -1, false};
  std::vector<MlpLayer> best = layers;
  double best_score = std::numeric_limits<double>::infinity();
  int since_best = 0;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(X.cols()));
  std::iota(order.begin(), order.end(), 0);
  std::vector<Eigen::MatrixXd> pre, act;

  for (int epoch = 0; epoch < s.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += s.batch_size) {
      const std::size_t stop = std::min(order.size(), start + s.batch_size);
      const auto B = static_cast<Eigen::Index>(stop - start);
      Eigen::MatrixXd xb(3, B);
      Eigen::RowVectorXd yb(B);
      for (Eigen::Index j = 0; j < B; ++j) {
        xb.col(j) = X.col(order[start + j]);
        yb[j] = Y[order[start + j]];
      }
      const Eigen::RowVectorXd out = batch_forward(layers, xb, &pre, &act);
      Eigen::MatrixXd delta = (2.0 / static_cast<double>(B)) * (out - yb);

      ++adam.step;
      const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(adam.step));
      const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(adam.step));
      for (std::size_t i = layers.size(); i-- > 0;) {
        if (i + 1 < layers.size()) delta = (pre[i].array() > 0.0).select(delta.array(), 0.0);
        const Eigen::MatrixXd gW = delta * act[i].transpose();
        const Eigen::VectorXd gb = delta.rowwise().sum();
        if (i > 0) delta = layers[i].W.transpose() * delta;

        adam.mW[i] = s.beta1 * adam.mW[i] + (1.0 - s.beta1) * gW;
        adam.vW[i] = s.beta2 * adam.vW[i] + (1.0 - s.beta2) * gW.cwiseAbs2();
        adam.mb[i] = s.beta1 * adam.mb[i] + (1.0 - s.beta1) * gb;
        adam.vb[i] = s.beta2 * adam.vb[i] + (1.0 - s.beta2) * gb.cwiseAbs2();
        layers[i].W.array() -= s.learning_rate * (adam.mW[i].array() / c1) /
                               ((adam.vW[i].array() / c2).sqrt() + s.epsilon);
        layers[i].b.array() -= s.learning_rate * (adam.mb[i].array() / c1) /
                               ((adam.vb[i].array() / c2).sqrt() + s.epsilon);
      }
    }

    const double train_err = scaled_error(batch_forward(layers, X, nullptr, nullptr),
                                          train.outputs, bounds);
    if (!std::isfinite(train_err)) {
      fail(ErrorCode::kDivergence,
           "mlp train: loss became non-finite at epoch " + std::to_string(epoch) +
               " (learning rate " + std::to_string(s.learning_rate) + ")");
    }
    result.train_smse.push_back(train_err);
    double score = train_err;
    if (Xv.cols() > 0) {
      score = scaled_error(batch_forward(layers, Xv, nullptr, nullptr), validation->outputs,
                           bounds);
      result.validation_smse.push_back(score);
    }
    if (score < best_score) {
      best_score = score;
      best = layers;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= s.patience && Xv.cols() > 0) {
      result.stopped_early = true;
      break;
    }
  }

  result.model = MlpModel(std::move(best), L0);
  result.model.set_reference_offset(result.model.raw_energy({0.0, 0.0, 0.0}));
  return result;
}

}  // namespace mgn
