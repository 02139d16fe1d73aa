// Acceptance run: one PASS/FAIL line per criterion, each with its time budget.
// Pass criterion ids as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "mgn/bench.hpp"
#include "mgn/cli.hpp"
#include "mgn/dynamics.hpp"
#include "mgn/error.hpp"
#include "mgn/io.hpp"
#include "mgn/pipeline.hpp"

using namespace mgn;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[FAILED: " << what << "] ";
    }
  }
};

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

Lattice make(int rows, int cols, double L0 = 1.0) {
  LatticeSpec s;
  s.rows = rows;
  s.cols = cols;
  s.shape.L0 = L0;
  return build_lattice(s);
}

Vec2 rot(double g, const Vec2& v) {
  return {std::cos(g) * v[0] - std::sin(g) * v[1], std::sin(g) * v[0] + std::cos(g) * v[1]};
}

Configuration random_state(const Lattice& l, std::mt19937_64& rng, double a) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Configuration q = Configuration::reference(l);
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    q.x[i] += a * l.L0() * Vec2(u(rng), u(rng));
    q.theta[i] += a * u(rng);
  }
  return q;
}

Dataset oracle_data(std::size_t n, std::uint64_t seed, double L0 = 1.0) {
  AnalyticOracle m;
  return label_dataset(m, sample_features(n, L0, seed), "oracle");
}

// Hyperparameters close to what the optimizer finds on oracle data.
const GprHyperparams kTypicalHp{44.0, 0.47, 3e-5};

// The 800-point GPR is shared by learning fidelity and performance.
struct Shared {
  std::optional<TrainOutcome> fidelity;
  Dataset data;
  std::vector<TrainOutcome> mlps;
  double train_seconds = 0.0;
};
Shared shared;

const TrainOutcome& trained_gpr() {
  if (!shared.fidelity) {
    const auto t0 = std::chrono::steady_clock::now();
    shared.data = oracle_data(1000, 7);
    shared.fidelity = train_surrogates(shared.data, "gpr", GprConfig{}, MlpConfig{}, {}, 7, 7, 1.0, 1);
    shared.train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return *shared.fidelity;
}

// ---------------------------------------------------------------------------

Outcome invariance() {
  Outcome o;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_feat = 0.0;
  for (double L0 : {1.0, 0.05}) {
    for (int k = 0; k < 1000; ++k) {
      NodeState a, b;
      a.x_ref = L0 * Vec2(u(rng), u(rng));
      b.x_ref = a.x_ref + (k % 2 ? Vec2(0.0, L0) : Vec2(L0, 0.0));
      a.theta_ref = 0.3 * u(rng);
      b.theta_ref = 0.3 * u(rng);
      a.x = a.x_ref + 0.15 * L0 * Vec2(u(rng), u(rng));
      b.x = b.x_ref + 0.15 * L0 * Vec2(u(rng), u(rng));
      a.theta = a.theta_ref + 0.5 * u(rng);
      b.theta = b.theta_ref + 0.5 * u(rng);
      const double g = std::numbers::pi * u(rng);
      const Vec2 t = 20.0 * L0 * Vec2(u(rng), u(rng));
      NodeState a2 = a, b2 = b;
      a2.x = rot(g, a.x) + t;
      b2.x = rot(g, b.x) + t;
      a2.theta += g;
      b2.theta += g;
      const auto z1 = edge_features(a, b), z2 = edge_features(a2, b2);
      worst_feat = std::max({worst_feat, std::abs(wrap_angle(z1.theta_a - z2.theta_a)),
                             std::abs(wrap_angle(z1.theta_b - z2.theta_b)), std::abs(z1.d - z2.d) / L0});
    }
  }
  o.require(worst_feat <= 1e-12, "feature invariance");

  // Total energy of an 8x8 lattice with the oracle and with a fitted GPR.
  const Lattice l = make(8, 8);
  const GprModel gpr = gpr_fit(oracle_data(200, 2), kTypicalHp, 1.0);
  double worst_energy = 0.0, worst_gpr = 0.0;
  const Configuration q = random_state(l, rng, 0.1);
  const double e_oracle = assemble_energy(l, q, AnalyticOracle{}).global_energy;
  const double e_gpr = assemble_energy(l, q, gpr).global_energy;
  for (int k = 0; k < 1000; ++k) {
    const double g = std::numbers::pi * u(rng);
    const Vec2 t = 20.0 * Vec2(u(rng), u(rng));
    Configuration r = q;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      r.x[i] = rot(g, q.x[i]) + t;
      r.theta[i] += g;
    }
    worst_energy = std::max(worst_energy, std::abs(assemble_energy(l, r, AnalyticOracle{}).global_energy - e_oracle));
    if (k < 200) worst_gpr = std::max(worst_gpr, std::abs(assemble_energy(l, r, gpr).global_energy - e_gpr));
  }
  o.require(worst_energy <= 1e-12, "energy invariance");
  // The GPR sum of ~800 large, cancelling terms has a rounding floor of its own;
  // it is reported relative to that floor, sum |k_i alpha_i| over the edges.
  double floor = 0.0;
  for (const Edge& e : l.edges()) {
    const auto nodes = node_states(l, q);
    const Vec3 z = edge_features(nodes[e.a], nodes[e.b]).as_vector();
    for (Eigen::Index i = 0; i < gpr.inputs().rows(); ++i) {
      floor += std::abs(se_kernel(z, gpr.inputs().row(i), gpr.hyperparams()) * gpr.alpha()[i]);
    }
  }
  const double gpr_rel = worst_gpr / floor;
  o.require(gpr_rel <= 1e-12, "gpr energy invariance relative to its rounding floor");
  o.detail << "features max err " << fmt(worst_feat) << ", oracle energy max err " << fmt(worst_energy)
           << " (E=" << fmt(e_oracle) << "), gpr energy max err " << fmt(worst_gpr) << " (E=" << fmt(e_gpr)
           << ", " << fmt(gpr_rel) << " of sum|k alpha|=" << fmt(floor) << ")";
  return o;
}

// Relative error ||a - b|| / ||b||.
double rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

// Fourth-order central differences: the GPR energy carries a rounding floor
// near 1e-12, so a wider stencil keeps the quotient clean.
Vec3 fd_model(const EdgeEnergyModel& m, const Vec3& z, double h, double L0) {
  Vec3 g;
  auto e = [&](int k, double s) {
    Vec3 p = z;
    p[k] += s;
    return m.energy(EdgeFeatures::from_vector(p));
  };
  for (int k = 0; k < 3; ++k) {
    const double hk = k == 2 ? h * L0 : h;
    g[k] = (8 * (e(k, hk) - e(k, -hk)) - (e(k, 2 * hk) - e(k, -2 * hk))) / (12 * hk);
  }
  return g;
}

// Smallest |pre-activation| over the hidden units: distance to a kink.
double kink_margin(const MlpModel& m, const Vec3& s) {
  Eigen::VectorXd a = s;
  double margin = std::numeric_limits<double>::infinity();
  const auto& layers = m.layers();
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    Eigen::VectorXd z = layers[i].W * a + layers[i].b;
    margin = std::min(margin, z.cwiseAbs().minCoeff());
    a = z.cwiseMax(0.0);
  }
  return margin;
}

Outcome gradients() {
  Outcome o;
  const double L0 = 0.05;
  const Dataset d = oracle_data(300, 3, L0);
  const GprModel gpr = gpr_fit(d, kTypicalHp, L0);
  MlpSettings st = mlp_preset(1);
  st.epochs = 40;
  st.learning_rate = 3e-3;
  const MlpModel mlp = mlp_train(d, nullptr, st, 3, L0).model;
  const AnalyticOracle oracle;

  double e_gpr = 0.0, e_mlp = 0.0, e_oracle = 0.0;
  int n_mlp = 0, n_oracle = 0;
  for (const Vec3& z : sample_features(400, L0, 4)) {
    const auto f = EdgeFeatures::from_vector(z);
    e_gpr = std::max(e_gpr, rel(fd_model(gpr, z, 1e-3, L0), gpr.gradient(f)));
    const Vec3 s(z[0], z[1], z[2] / L0);
    if (kink_margin(mlp, s) > 1e-4) {
      Vec3 fd;
      for (int k = 0; k < 3; ++k) {
        Vec3 a = s, b = s;
        a[k] += 1e-6;
        b[k] -= 1e-6;
        fd[k] = (mlp.forward(a) - mlp.forward(b)) / 2e-6;
      }
      e_mlp = std::max(e_mlp, rel(fd, mlp.input_gradient(s)));
      ++n_mlp;
    }
    if (std::abs(z[2]) > 1e-3 * L0) {
      e_oracle = std::max(e_oracle, rel(fd_model(oracle, z, 1e-4, L0), oracle.gradient(f)));
      ++n_oracle;
    }
  }
  o.require(e_gpr <= 1e-5, "gpr gradient");
  o.require(e_mlp <= 1e-5 && n_mlp >= 100, "mlp gradient");
  o.require(e_oracle <= 1e-5 && n_oracle >= 100, "oracle gradient");

  // Assembled generalized forces against the energy.
  const Lattice l = make(3, 3, L0);
  std::mt19937_64 rng(5);
  double e_force = 0.0;
  for (int k = 0; k < 100; ++k) {
    const EdgeEnergyModel& m = k % 2 ? static_cast<const EdgeEnergyModel&>(gpr) : oracle;
    const Configuration q = random_state(l, rng, 0.1);
    const auto f = assemble_generalized_forces(l, q, m);
    const std::size_t n = l.node_count();
    Eigen::VectorXd got(3 * n), fd(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) {
        const double h = c == 2 ? 1e-6 : 1e-6 * L0;
        Configuration a = q, b = q;
        if (c == 2) {
          a.theta[i] += h;
          b.theta[i] -= h;
        } else {
          a.x[i][c] += h;
          b.x[i][c] -= h;
        }
        // Torques carry units of force times L0; compare in those units.
        const double unit = c == 2 ? 1.0 / L0 : 1.0;
        fd[3 * i + c] = -unit * (assemble_energy(l, a, m).global_energy - assemble_energy(l, b, m).global_energy) / (2 * h);
        got[3 * i + c] = unit * (c == 2 ? f.torque[i] : f.force[i][c]);
      }
    }
    e_force = std::max(e_force, rel(fd, got));
  }
  o.require(e_force <= 1e-4, "force assembly");
  o.detail << "rel err gpr " << fmt(e_gpr) << ", mlp " << fmt(e_mlp) << " (" << n_mlp << " pts), oracle "
           << fmt(e_oracle) << ", forces " << fmt(e_force) << " (100 states)";
  return o;
}

Outcome balance() {
  Outcome o;
  const Lattice l = make(8, 8);
  const GprModel gpr = gpr_fit(oracle_data(200, 6), kTypicalHp, 1.0);
  const AnalyticOracle oracle;
  std::mt19937_64 rng(7);
  double worst_f = 0.0, worst_m = 0.0;
  for (int k = 0; k < 40; ++k) {
    const EdgeEnergyModel& m = k % 2 ? static_cast<const EdgeEnergyModel&>(gpr) : oracle;
    const Configuration q = random_state(l, rng, 0.15);
    const auto f = assemble_generalized_forces(l, q, m);
    Vec2 net = Vec2::Zero();
    double moment = 0.0, f_scale = 0.0, m_scale = 0.0;
    for (std::size_t i = 0; i < l.node_count(); ++i) {
      net += f.force[i];
      const double c = q.x[i][0] * f.force[i][1] - q.x[i][1] * f.force[i][0];
      moment += c + f.torque[i];
      f_scale += f.force[i].norm();
      m_scale += std::abs(c) + std::abs(f.torque[i]);
    }
    worst_f = std::max(worst_f, net.norm() / f_scale);
    worst_m = std::max(worst_m, std::abs(moment) / m_scale);
  }
  o.require(worst_f <= 1e-10, "net force");
  o.require(worst_m <= 1e-9, "net moment");
  o.detail << "net force rel " << fmt(worst_f) << ", net moment rel " << fmt(worst_m) << " over 40 states";
  return o;
}

double test_smse(const TrainOutcome& t, const EdgeEnergyModel& m, const Dataset& data) {
  const Dataset test = subset(data, t.split.test);
  return smse(predict_all(m, test.inputs), test.outputs, t.bounds);
}

Outcome learning() {
  Outcome o;
  const TrainOutcome& g = trained_gpr();
  const double gpr_test = test_smse(g, *g.best, shared.data);
  const double gpr_val = g.candidates[0].validation_smse;
  o.require(g.split.train.size() == 800, "800 training samples");
  o.require(gpr_test < 5e-4, "gpr test SMSE < 5e-4");
  o.detail << "gpr test SMSE " << fmt(gpr_test) << ", val " << fmt(gpr_val) << " (train "
           << fmt(shared.train_seconds) << " s)";
  // Reported only: the three networks on the same split.
  for (int p = 1; p <= 3; ++p) {
    MlpConfig mc;
    mc.preset = p;
    mc.settings = mlp_preset(p);
    try {
      const TrainOutcome t = train_surrogates(shared.data, "mlp", GprConfig{}, mc, {}, 7, 7, 1.0, 1);
      const double v = t.candidates[0].validation_smse;
      o.detail << "; mlp" << p << " val " << fmt(v) << (v > gpr_val ? " (gpr better)" : " (mlp better)");
    } catch (const Error& e) {
      o.detail << "; mlp" << p << " failed: " << to_string(e.code());
    }
  }
  return o;
}

Outcome gpr_internals() {
  Outcome o;
  // Optimization from several starts never lowers the evidence.
  double worst_gain = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    const Dataset d = oracle_data(120, 10 + k);
    const Eigen::MatrixXd Z = scaled_inputs(d.inputs, 1.0);
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(d.outputs.data(), d.size());
    const GprHyperparams init[] = {{1.0, 1.0, 1e-4}, {0.1, 0.2, 1e-2}, {10.0, 2.0, 1e-6}, {1.0, 0.5, 1e-3}};
    GprOptimizeOptions opt;
    opt.restarts = 2;
    opt.max_iterations = 100;
    opt.seed = k;
    const auto r = gpr_optimize_hyperparams(Z, y, init[k], opt);
    worst_gain = std::min(worst_gain, r.lml - r.initial_lml);
  }
  o.require(worst_gain >= 0.0, "lml never decreases");

  // Noise-free interpolation.
  const Dataset d = oracle_data(60, 20);
  const GprModel exact = gpr_fit(d, {1.0, 0.3, 0.0}, 1.0);
  double interp = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    interp = std::max(interp, std::abs(exact.raw_energy(EdgeFeatures::from_vector(d.inputs[i])) - d.outputs[i]));
  }
  o.require(interp <= 1e-8, "noise-free interpolation");

  // Posterior variance at the training inputs.
  const Dataset d2 = oracle_data(300, 21);
  const GprHyperparams hp{2.0, 0.5, 1e-4};
  const GprModel noisy = gpr_fit(d2, hp, 1.0);
  double excess = -1.0;
  for (const Vec3& z : d2.inputs) {
    excess = std::max(excess, noisy.predict(EdgeFeatures::from_vector(z)).raw_variance - hp.noise2);
  }
  o.require(excess <= 1e-8, "variance at training points");
  o.detail << "min lml gain " << fmt(worst_gain) << ", interpolation err " << fmt(interp)
           << ", max var - noise2 " << fmt(excess);
  return o;
}

LoadProtocol clamp_node0() {
  LoadProtocol p;
  const Profile zero = [](double) { return 0.0; };
  for (Dof d : {Dof::kX1, Dof::kX2, Dof::kTheta}) p.prescribe({0}, d, zero);
  return p;
}

Outcome dynamics() {
  Outcome o;
  {
    // Harmonic edge: node 0 clamped, node 1 on an axial spring.
    const Lattice l = make(1, 2);
    const double k = 3.0;
    const AnalyticOracle m(AnalyticOracleSpec::axial(k));
    const LoadProtocol p = clamp_node0();
    const double T = 2 * std::numbers::pi * std::sqrt(l.masses()[1] / k);
    const Stepper st(l, m, p, 0.01 * std::sqrt(l.masses()[1] / k));
    InitialConditions ic;
    ic.x = Configuration::reference(l).x;
    (*ic.x)[1][0] += 0.05;
    auto [s, info] = st.initialize(st.initial_state(ic));
    std::vector<double> crossings;
    double prev = s.x[1][0] - 1.0, t_prev = s.t;
    while (crossings.size() < 6) {
      st.step(s);
      const double cur = s.x[1][0] - 1.0;
      if (prev < 0.0 && cur >= 0.0) crossings.push_back(t_prev + (s.t - t_prev) * (-prev) / (cur - prev));
      prev = cur;
      t_prev = s.t;
    }
    const double measured = (crossings.back() - crossings.front()) / (crossings.size() - 1);
    const double err = std::abs(measured - T) / T;
    o.require(err <= 0.01, "harmonic period");
    o.detail << "period err " << fmt(err);
  }

  const Lattice l = make(4, 4);
  const AnalyticOracle m;
  const LoadProtocol free_bc;
  const double dt = 0.02 / estimate_omega_max(m, l);
  const Stepper st(l, m, free_bc, dt);
  InitialConditions ic;
  // small amplitude; at 0.05 the quartic compression branch dominates the error
  ic.perturb_position = 0.01;
  ic.perturb_theta = 0.01;
  ic.seed = 8;
  {
    auto [s, info] = st.initialize(st.initial_state(ic));
    const double e0 = info.kinetic + info.potential;
    double drift = 0.0;
    for (int k = 1; k < 10000; ++k) {
      const auto i = st.step(s);
      drift = std::max(drift, std::abs(i.kinetic + i.potential - e0) / e0);
    }
    o.require(drift < 1e-3, "energy drift");
    o.detail << ", energy drift " << fmt(drift);
  }
  {
    const SystemState s0 = st.initial_state(ic);
    auto [s, info] = st.initialize(s0);
    while (s.step < 2000) st.step(s);
    st.reverse(s);
    for (int k = 0; k < 2000; ++k) st.step(s);
    double err = 0.0;
    for (std::size_t i = 0; i < l.node_count(); ++i) err = std::max(err, (s.x[i] - s0.x[i]).norm() / l.L0());
    o.require(err <= 1e-8, "time reversal");
    o.detail << ", reversal err " << fmt(err) << " L0";
  }
  {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    InitialConditions mv = ic;
    std::vector<Vec2> v(l.node_count());
    for (auto& vi : v) vi = 0.1 * Vec2(u(rng), u(rng)) * estimate_omega_max(m, l);
    mv.v = v;
    auto [s, info] = st.initialize(st.initial_state(mv));
    auto momentum = [&](const SystemState& x, double* scale) {
      Vec2 p = Vec2::Zero();
      *scale = 0.0;
      for (std::size_t i = 0; i < l.node_count(); ++i) {
        p += l.masses()[i] * x.v[i];
        *scale += l.masses()[i] * x.v[i].norm();
      }
      return p;
    };
    double scale = 0.0;
    const Vec2 p0 = momentum(s, &scale);
    double worst = 0.0;
    for (int k = 0; k < 5000; ++k) {
      st.step(s);
      double sc = 0.0;
      worst = std::max(worst, (momentum(s, &sc) - p0).norm() / scale);
    }
    o.require(worst <= 1e-10, "momentum");
    o.detail << ", momentum drift " << fmt(worst);
  }
  return o;
}

Outcome statics() {
  Outcome o;
  {
    const Lattice l = make(1, 2);
    const double kd = 5.0, f = 0.02;
    const AnalyticOracle m(AnalyticOracleSpec::axial(kd));
    LoadProtocol p = clamp_node0();
    p.load({1}, Dof::kX1, [f](double) { return f; });
    RelaxOptions opt;
    opt.tol_force = 1e-10 * f;
    const RelaxResult r = quasi_static_relax(l, m, p, opt);
    const double err = std::abs(r.state.x[1][0] - 1.0 - f / kd) / (f / kd);
    o.require(err <= 1e-6, "single-edge equilibrium");
    o.detail << "d=f/k err " << fmt(err) << " (" << r.steps << " steps)";
  }
  {
    // Column two crosses wide under 10% compression.
    const Lattice l = make(8, 2);
    const AnalyticOracle m;
    ProtocolParams pp;
    pp.strain = -0.1;
    const LoadProtocol p = make_protocol("uniaxial", pp, l);
    RelaxOptions opt;
    opt.initial.perturb_position = 1e-3;
    opt.initial.perturb_theta = 1e-3;
    opt.initial.seed = 3;
    const RelaxResult r = quasi_static_relax(l, m, p, opt);
    const auto nodes = node_states(l, r.state.configuration());
    double weakest = std::numeric_limits<double>::infinity();
    for (const Edge& e : l.edges()) {
      const auto z = edge_features(nodes[e.a], nodes[e.b]);
      weakest = std::min(weakest, std::max(std::abs(z.theta_a), std::abs(z.theta_b)));
    }
    o.require(weakest > 0.05, "buckling");
    o.detail << ", buckled column min |theta| " << fmt(weakest) << " rad (" << r.steps << " steps)";
  }
  {
    const AnalyticOracle m;
    const int comp = energy_contour(m, -0.2, 101).minima;
    const int tens = energy_contour(m, 0.2, 101).minima;
    o.require(comp == 2 && tens == 1, "contour minima");
    o.detail << ", contour minima " << comp << " / " << tens;
  }
  return o;
}

// Longitudinal wave along a vertical chain, timed between two interior rows.
double chain_speed(double k, double* expected) {
  const int rows = 121;
  const Lattice l = make(rows, 1);
  const double m = l.masses()[0];
  const double c = std::sqrt(k / m);  // L0 = 1
  *expected = c;
  SimConfig sc;
  sc.lattice = &l;
  sc.model = std::make_shared<AnalyticOracle>(AnalyticOracleSpec::axial(k));
  ProtocolParams pp;
  pp.impulse_duration = 5.0 / c;
  pp.impulse_rate = 0.01 / pp.impulse_duration;
  sc.protocol = make_protocol("impulse", pp, l);
  sc.duration = 110.0 / c;
  sc.snapshot_stride = 1;
  const Trajectory t = simulate(sc);
  return measure_wave_speed(t, l, rows - 21, rows - 81, 0.01).speed;
}

Outcome waves() {
  Outcome o;
  double c1 = 0.0, c4 = 0.0;
  const double s1 = chain_speed(1.0, &c1);
  const double s4 = chain_speed(4.0, &c4);
  const double e1 = std::abs(s1 - c1) / c1;
  const double ratio = s4 / s1;
  o.require(e1 <= 0.10, "chain speed");
  o.require(std::abs(ratio - 2.0) <= 0.2, "sqrt(k) scaling");
  o.detail << "speed " << fmt(s1) << " vs " << fmt(c1) << " (err " << fmt(e1) << "), 4k ratio " << fmt(ratio);
  return o;
}

Outcome performance() {
  Outcome o;
  const TrainOutcome& g = trained_gpr();
  LatticeSpec base;
  BenchOptions opt;
  opt.steps = 3;
  opt.repetitions = 5;
  const BenchReport r = bench_scaling({{64, 64}, {128, 128}, {256, 256}}, *g.best, base, opt);
  for (const auto& e : r.entries) o.require(e.error.empty(), e.error);
  if (!o.pass) return o;
  const double t64 = r.entries[0].mean_step_seconds, t128 = r.entries[1].mean_step_seconds,
               t256 = r.entries[2].mean_step_seconds;
  const double ratio = t128 / t64;
  o.require(ratio >= 3.0 && ratio <= 5.5, "scaling ratio");
  o.require(t256 <= 1.0, "256x256 step budget");
  o.detail << "per step: 64^2 " << fmt(t64) << " s, 128^2 " << fmt(t128) << " s, 256^2 " << fmt(t256)
           << " s; ratio " << fmt(ratio) << " (800-point gpr, 1 thread)";
  return o;
}

int cli(std::vector<std::string> args, std::string* err = nullptr) {
  std::ostringstream out, e;
  const int s = run_cli(args, out, e);
  if (err) *err = e.str();
  return s;
}

Outcome reproducibility() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / ("mgn_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::string cfg = (root / "config.json").string();
  write_file_atomic(cfg, R"({
    "lattice": {"rows": 10, "cols": 10},
    "surrogate": {"gpr": {"restarts": 3, "max_iterations": 60}, "mlp": {"epochs": 30}},
    "simulation": {"protocol": "impulse", "impulse_rate": 0.2, "impulse_duration": 0.1, "duration": 2.0, "snapshot_stride": 20, "perturb_position": 0.01, "perturb_theta": 0.01}
  })");
  std::vector<std::string> compared;
  auto run_set = [&](const std::string& tag, int threads) {
    const std::string dir = (root / tag).string();
    const std::string th = std::to_string(threads);
    std::string err;
    bool ok = cli({"gen-data", "--config", cfg, "--n", "200", "--seed", "11", "--threads", th, "--out", dir}, &err) == 0;
    ok = ok && cli({"train", "--config", cfg, "--model", "gpr", "--seed", "11", "--threads", th, "--out", dir,
                    "--data", dir + "/data.csv"}, &err) == 0;
    fs::rename(fs::path(dir) / "model.json", fs::path(dir) / "gpr.json");
    ok = ok && cli({"train", "--config", cfg, "--model", "mlp", "--seed", "11", "--threads", th, "--out", dir,
                    "--data", dir + "/data.csv"}, &err) == 0;
    fs::rename(fs::path(dir) / "model.json", fs::path(dir) / "mlp.json");
    ok = ok && cli({"simulate", "--config", cfg, "--seed", "11", "--threads", th, "--out", dir,
                    "--model-file", dir + "/gpr.json"}, &err) == 0;
    if (!ok) o.require(false, tag + ": " + err);
    return fs::path(dir);
  };
  const fs::path a = run_set("a", 1), b = run_set("b", 1), c = run_set("c", 4);
  if (!o.pass) return o;
  std::vector<fs::path> files{"data.csv", "gpr.json", "mlp.json", "final.svg"};
  for (const auto& e : fs::directory_iterator(a / "trajectory")) files.push_back(fs::path("trajectory") / e.path().filename());
  int identical = 0;
  for (const auto& f : files) {
    const std::string ra = read_file(a / f);
    const bool same = ra == read_file(b / f) && ra == read_file(c / f);
    o.require(same, "differs: " + f.string());
    identical += same;
  }
  o.detail << identical << "/" << files.size() << " files bitwise identical across 2 runs x {1, 4} threads";
  fs::remove_all(root);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "invariance", 5, invariance},
      {2, "gradients", 30, gradients},
      {3, "balance laws", 5, balance},
      {4, "learning fidelity", 600, learning},
      {5, "gpr internals", 60, gpr_internals},
      {6, "dynamics", 120, dynamics},
      {7, "statics", 300, statics},
      {8, "wave measurement", 120, waves},
      {9, "performance", 600, performance},
      {10, "reproducibility", 600, reproducibility},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail << "exception: " << e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s <= c.budget;
    const bool ok = r.pass && in_time;
    failed += !ok;
    std::printf("%s [%d] %s: %s (%.2f s of %.0f s%s)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                r.detail.str().c_str(), s, c.budget, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
