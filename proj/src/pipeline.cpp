#include "mgn/pipeline.hpp"

#include <cmath>
#include <chrono>
#include <limits>

#include "mgn/error.hpp"

namespace mgn {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TrainOutcome train_surrogates(const Dataset& data, const std::string& which, const GprConfig& gpr,
                              const MlpConfig& mlp, const SplitRatios& ratios,
                              std::uint64_t split_seed, std::uint64_t seed, double L0, int threads) {
  if (which != "gpr" && which != "mlp" && which != "all") {
    fail(ErrorCode::kInvalidArgument, "unknown surrogate '" + which + "' (expected gpr, mlp or all)");
  }
  TrainOutcome out;
  out.split = split_dataset(data, ratios, split_seed);
  const Dataset train = subset(data, out.split.train);
  const Dataset val = subset(data, out.split.validation);
  out.bounds = ScalingBounds::from_outputs(train.outputs);

  std::vector<ModelPtr> models;
  auto record = [&](CandidateReport r, ModelPtr m) {
    if (m) {
      r.train_smse = smse(predict_all(*m, train.inputs), train.outputs, out.bounds);
      r.validation_smse = smse(predict_all(*m, val.inputs), val.outputs, out.bounds);
    }
    out.candidates.push_back(std::move(r));
    models.push_back(std::move(m));
  };

  if (which == "gpr" || which == "all") {
    CandidateReport r;
    r.name = "gpr";
    const auto t0 = std::chrono::steady_clock::now();
    ModelPtr m;
    try {
      GprHyperparams hp = gpr.init;
      if (gpr.optimize) {
        GprOptimizeOptions opt;
        opt.restarts = gpr.restarts;
        opt.max_iterations = gpr.max_iterations;
        opt.seed = seed;
        opt.threads = threads;
        const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(
            train.outputs.data(), static_cast<Eigen::Index>(train.size()));
        const auto res = gpr_optimize_hyperparams(scaled_inputs(train.inputs, L0), y, gpr.init, opt);
        hp = res.hyperparams;
        r.details["lml"] = res.lml;
        r.details["initial_lml"] = res.initial_lml;
        r.details["successful_runs"] = res.successful_runs;
      }
      r.details["sigma2"] = hp.sigma2;
      r.details["length_scale"] = hp.length_scale;
      r.details["noise2"] = hp.noise2;
      m = std::make_shared<GprModel>(gpr_fit(train, hp, L0));
    } catch (const Error& e) {
      r.ok = false;
      r.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    r.seconds = seconds_since(t0);
    record(std::move(r), std::move(m));
  }

  std::vector<std::pair<std::string, MlpSettings>> nets;
  if (which == "mlp") nets.emplace_back("mlp" + std::to_string(mlp.preset), mlp.settings);
  if (which == "all") {
    for (int k = 1; k <= 3; ++k) {
      MlpSettings s = mlp_preset(k);
      s.epochs = mlp.settings.epochs;
      s.patience = mlp.settings.patience;
      nets.emplace_back("mlp" + std::to_string(k), s);
    }
  }
  for (const auto& [name, settings] : nets) {
    CandidateReport r;
    r.name = name;
    r.details["hidden_layers"] = settings.hidden_layers;
    r.details["width"] = settings.width;
    r.details["learning_rate"] = settings.learning_rate;
    r.details["batch_size"] = settings.batch_size;
    const auto t0 = std::chrono::steady_clock::now();
    ModelPtr m;
    try {
      auto res = mlp_train(train, &val, settings, seed, L0);
      r.details["best_epoch"] = res.best_epoch;
      r.details["epochs_run"] = res.train_smse.size();
      r.details["stopped_early"] = res.stopped_early;
      m = std::make_shared<MlpModel>(std::move(res.model));
    } catch (const Error& e) {
      r.ok = false;
      r.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    r.seconds = seconds_since(t0);
    record(std::move(r), std::move(m));
  }

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < models.size(); ++k) {
    if (models[k] && out.candidates[k].validation_smse < best) {
      best = out.candidates[k].validation_smse;
      out.best = models[k];
      out.best_name = out.candidates[k].name;
    }
  }
  if (!out.best) {
    std::string msg = "no surrogate could be trained:";
    for (const auto& c : out.candidates) msg += " [" + c.name + "] " + c.error;
    fail(ErrorCode::kNonConvergence, msg);
  }
  out.models = std::move(models);
  return out;
}

ContourGrid energy_contour(const EdgeEnergyModel& model, double d, int resolution) {
  if (resolution < 3) fail(ErrorCode::kInvalidArgument, "contour resolution must be >= 3");
  ContourGrid g;
  g.d = d;
  const int n = resolution;
  g.axis.resize(n);
  for (int i = 0; i < n; ++i) g.axis[i] = -kAngleHalfWidth + 2.0 * kAngleHalfWidth * i / (n - 1);
  g.energy.resize(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g.energy[j * n + i] = model.energy({g.axis[i], g.axis[j], d});
  }
  g.minima = count_local_minima(g.energy, n);
  return g;
}

int count_local_minima(const std::vector<double>& e, int n) {
  if (static_cast<std::size_t>(n) * n != e.size()) {
    fail(ErrorCode::kInvalidArgument, "grid size does not match resolution");
  }
  // Equal-valued 8-connected cells form one candidate. Symmetric models put
  // an off-grid minimum between two mirror cells with identical values, so a
  // strict per-cell test would miss it.
  std::vector<char> seen(e.size(), 0);
  std::vector<int> stack;
  int count = 0;
  for (int start = 0; start < n * n; ++start) {
    if (seen[start]) continue;
    const double v = e[start];
    bool lower = false, higher = false;
    seen[start] = 1;
    stack.assign(1, start);
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      const int i = c % n, j = c / n;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int a = i + di, b = j + dj;
          if ((!di && !dj) || a < 0 || b < 0 || a >= n || b >= n) continue;
          const int k = b * n + a;
          if (e[k] == v) {
            if (!seen[k]) {
              seen[k] = 1;
              stack.push_back(k);
            }
          } else if (e[k] < v || std::isnan(e[k])) {
            lower = true;
          } else {
            higher = true;
          }
        }
      }
    }
    count += !lower && higher && !std::isnan(v);
  }
  return count;
}

std::string contour_csv(const ContourGrid& g) {
  std::string out = "theta_a,theta_b,d,energy\n";
  const int n = static_cast<int>(g.axis.size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out += format_double(g.axis[i]) + "," + format_double(g.axis[j]) + "," + format_double(g.d) +
             "," + format_double(g.energy[j * n + i]) + "\n";
    }
  }
  return out;
}

}  // namespace mgn
