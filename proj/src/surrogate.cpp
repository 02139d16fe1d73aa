#include "mgn/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mgn/error.hpp"

namespace mgn {

AnalyticOracleSpec AnalyticOracleSpec::axial(double k_d) {
  AnalyticOracleSpec s;
  s.k_d = k_d;
  s.k_s = s.k_t = s.c_couple = s.q4 = s.d_star = 0.0;
  return s;
}

double oracle_energy(const AnalyticOracleSpec& s, const EdgeFeatures& z) {
  const double sum = z.theta_a + z.theta_b;
  const double diff = z.theta_a - z.theta_b;
  const double well = diff * diff - s.d_star * std::max(-z.d, 0.0);
  return 0.5 * s.k_d * z.d * z.d + 0.5 * s.k_s * sum * sum + 0.5 * s.k_t * diff * diff +
         s.c_couple * z.d * sum + s.q4 * well * well;
}

Vec3 oracle_gradient(const AnalyticOracleSpec& s, const EdgeFeatures& z) {
  const double sum = z.theta_a + z.theta_b;
  const double diff = z.theta_a - z.theta_b;
  const double well = diff * diff - s.d_star * std::max(-z.d, 0.0);
  const double d_sum = s.k_s * sum + s.c_couple * z.d;
  const double d_diff = s.k_t * diff + 4.0 * s.q4 * well * diff;
  const double d_well_dd = z.d < 0.0 ? s.d_star : 0.0;
  return {d_sum + d_diff, d_sum - d_diff,
          s.k_d * z.d + s.c_couple * sum + 2.0 * s.q4 * well * d_well_dd};
}

void Dataset::validate() const {
  if (inputs.size() != outputs.size()) {
    fail(ErrorCode::kInvalidArgument, "dataset: inputs and outputs differ in length");
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!inputs[i].allFinite() || !std::isfinite(outputs[i])) {
      fail(ErrorCode::kInvalidArgument, "dataset: non-finite value in row " + std::to_string(i));
    }
  }
}

std::vector<Vec3> sample_features(std::size_t n, double L0, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-kAngleHalfWidth, kAngleHalfWidth);
  std::uniform_real_distribution<double> stretch(-kStretchHalfWidth * L0, kStretchHalfWidth * L0);
  // uniform_real_distribution is half-open; redraw the closed end.
  auto draw = [&](auto& dist) {
    double v;
    do {
      v = dist(rng);
    } while (v == dist.a());
    return v;
  };
  std::vector<Vec3> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ta = draw(angle);
    const double tb = draw(angle);
    const double d = draw(stretch);
    out.emplace_back(ta, tb, d);
  }
  return out;
}

bool inside_sampling_cube(const Vec3& z, double L0) {
  return std::abs(z[0]) < kAngleHalfWidth && std::abs(z[1]) < kAngleHalfWidth &&
         std::abs(z[2]) < kStretchHalfWidth * L0;
}

Dataset label_dataset(const EdgeEnergyModel& model, const std::vector<Vec3>& inputs,
                      std::string provenance) {
  Dataset out;
  out.inputs = inputs;
  out.outputs = predict_all(model, inputs);
  out.provenance = std::move(provenance);
  return out;
}

DataSplit split_dataset(const Dataset& data, SplitRatios ratios, std::uint64_t seed) {
  const double total = ratios.train + ratios.validation + ratios.test;
  if (std::abs(total - 1.0) > 1e-9 || ratios.train < 0 || ratios.validation < 0 ||
      ratios.test < 0) {
    fail(ErrorCode::kInvalidArgument, "split: ratios must be nonnegative and sum to 1");
  }
  const std::size_t n = data.size();
  if (n < 10) {
    fail(ErrorCode::kInvalidArgument,
         "split: dataset has " + std::to_string(n) + " entries, need at least 10");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto n_train = static_cast<std::size_t>(std::llround(ratios.train * n));
  const auto n_val =
      std::min(n - n_train, static_cast<std::size_t>(std::llround(ratios.validation * n)));
  DataSplit split;
  split.train.assign(order.begin(), order.begin() + n_train);
  split.validation.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  split.test.assign(order.begin() + n_train + n_val, order.end());
  return split;
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.provenance = data.provenance;
  out.inputs.reserve(indices.size());
  out.outputs.reserve(indices.size());
  for (auto i : indices) {
    out.inputs.push_back(data.inputs.at(i));
    out.outputs.push_back(data.outputs.at(i));
  }
  return out;
}

ScalingBounds ScalingBounds::from_outputs(const std::vector<double>& outputs) {
  if (outputs.empty()) fail(ErrorCode::kInvalidArgument, "scaling bounds: no outputs");
  const auto [lo, hi] = std::minmax_element(outputs.begin(), outputs.end());
  return {*lo, *hi};
}

double smse(const std::vector<double>& predictions, const std::vector<double>& truths,
            const ScalingBounds& bounds) {
  if (predictions.size() != truths.size()) {
    fail(ErrorCode::kInvalidArgument, "smse: length mismatch");
  }
  if (!(bounds.y_max > bounds.y_min)) {
    fail(ErrorCode::kInvalidArgument, "smse: degenerate scaling bounds (y_max <= y_min)");
  }
  if (predictions.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double e = bounds.scale(truths[i]) - bounds.scale(predictions[i]);
    acc += e * e;
  }
  return acc / static_cast<double>(predictions.size());
}

std::vector<double> predict_all(const EdgeEnergyModel& model, const std::vector<Vec3>& inputs) {
  std::vector<double> out;
  out.reserve(inputs.size());
  for (const auto& z : inputs) out.push_back(model.energy(EdgeFeatures::from_vector(z)));
  return out;
}

}  // namespace mgn
