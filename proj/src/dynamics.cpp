#include "mgn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mgn/error.hpp"

namespace mgn {

SystemState SystemState::at_rest(const Lattice& lattice) {
  SystemState s;
  s.x = lattice.ref_positions();
  s.theta = lattice.ref_orientations();
  s.v.assign(lattice.node_count(), Vec2::Zero());
  s.omega.assign(lattice.node_count(), 0.0);
  return s;
}

Stepper::Stepper(const Lattice& lattice, const EdgeEnergyModel& model, const LoadProtocol& protocol,
                 double dt, Damping damping, int threads)
    : lattice_(lattice),
      model_(model),
      protocol_(protocol),
      dt_(dt),
      damping_(damping),
      threads_(threads) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    fail(ErrorCode::kInvalidArgument, "timestep must be positive and finite");
  }
  if (damping.c_v < 0.0 || damping.c_omega < 0.0) {
    fail(ErrorCode::kInvalidArgument, "damping coefficients must be non-negative");
  }
  protocol.validate(lattice);
  constrained_.assign(lattice.node_count(), {false, false, false});
  for (const auto& p : protocol.prescribed) constrained_[p.node][static_cast<int>(p.dof)] = true;
}

SystemState Stepper::initial_state(const InitialConditions& ic) const {
  const auto n = lattice_.node_count();
  SystemState s = SystemState::at_rest(lattice_);
  auto take = [n](auto& dst, const auto& src, const char* what) {
    if (!src) return;
    if (src->size() != n) {
      fail(ErrorCode::kInvalidArgument,
           std::string("initial ") + what + " has " + std::to_string(src->size()) +
               " entries, lattice has " + std::to_string(n) + " nodes");
    }
    dst = *src;
  };
  take(s.x, ic.x, "positions");
  take(s.theta, ic.theta, "orientations");
  take(s.v, ic.v, "velocities");
  take(s.omega, ic.omega, "angular velocities");

  if (ic.perturb_position > 0.0 || ic.perturb_theta > 0.0) {
    std::mt19937_64 rng(ic.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double u1 = unit(rng), u2 = unit(rng), u3 = unit(rng);
      s.x[i] += ic.perturb_position * Vec2(u1, u2);
      s.theta[i] += ic.perturb_theta * u3;
    }
  }

  const auto& xr = lattice_.ref_positions();
  const auto& tr = lattice_.ref_orientations();
  for (const auto& p : protocol_.prescribed) {
    const double u0 = p.displacement(0.0);
    const double rate = (p.displacement(dt_) - u0) / dt_;
    switch (p.dof) {
      case Dof::kX1: s.x[p.node][0] = xr[p.node][0] + u0; s.v[p.node][0] = rate; break;
      case Dof::kX2: s.x[p.node][1] = xr[p.node][1] + u0; s.v[p.node][1] = rate; break;
      case Dof::kTheta: s.theta[p.node] = tr[p.node] + u0; s.omega[p.node] = rate; break;
    }
  }
  s.t = 0.0;
  s.step = 0;
  check_finite(s);
  return s;
}

GeneralizedForces Stepper::total_forces(const SystemState& s) const {
  auto f = assemble_generalized_forces(lattice_, s.configuration(), model_, threads_);
  for (const auto& l : protocol_.loads) {
    const double value = l.value(s.t);
    switch (l.dof) {
      case Dof::kX1: f.force[l.node][0] += value; break;
      case Dof::kX2: f.force[l.node][1] += value; break;
      case Dof::kTheta: f.torque[l.node] += value; break;
    }
  }
  return f;
}

double Stepper::free_residual(const GeneralizedForces& f) const {
  double r = 0.0;
  for (std::size_t i = 0; i < lattice_.node_count(); ++i) {
    const auto& c = constrained_[i];
    if (!c[0]) r = std::max(r, std::abs(f.force[i][0]));
    if (!c[1]) r = std::max(r, std::abs(f.force[i][1]));
    if (!c[2]) r = std::max(r, std::abs(f.torque[i]));
  }
  return r;
}

double Stepper::residual(const SystemState& state) const {
  return free_residual(total_forces(state));
}

void Stepper::kick(SystemState& s, const GeneralizedForces& f, double h, Damping c) const {
  const auto& m = lattice_.masses();
  const auto& I = lattice_.inertias();
  for (std::size_t i = 0; i < lattice_.node_count(); ++i) {
    const auto& fixed = constrained_[i];
    for (int k = 0; k < 2; ++k) {
      if (fixed[k]) continue;
      s.v[i][k] += h * (f.force[i][k] - c.c_v * s.v[i][k]) / m[i];
    }
    if (!fixed[2]) s.omega[i] += h * (f.torque[i] - c.c_omega * s.omega[i]) / I[i];
  }
}

void Stepper::drift_and_prescribe(SystemState& s) const {
  for (std::size_t i = 0; i < lattice_.node_count(); ++i) {
    const auto& fixed = constrained_[i];
    for (int k = 0; k < 2; ++k) {
      if (!fixed[k]) s.x[i][k] += dt_ * s.v[i][k];
    }
    if (!fixed[2]) s.theta[i] += dt_ * s.omega[i];
  }
  const double t0 = s.t;
  const double t1 = static_cast<double>(s.step + 1) * dt_;
  const auto& xr = lattice_.ref_positions();
  const auto& tr = lattice_.ref_orientations();
  for (const auto& p : protocol_.prescribed) {
    const double u1 = p.displacement(t1);
    const double rate = (u1 - p.displacement(t0)) / dt_;
    switch (p.dof) {
      case Dof::kX1: s.x[p.node][0] = xr[p.node][0] + u1; s.v[p.node][0] = rate; break;
      case Dof::kX2: s.x[p.node][1] = xr[p.node][1] + u1; s.v[p.node][1] = rate; break;
      case Dof::kTheta: s.theta[p.node] = tr[p.node] + u1; s.omega[p.node] = rate; break;
    }
  }
  s.t = t1;
  s.step += 1;
}

void Stepper::speeds(const SystemState& s, StepInfo& info) const {
  info.max_speed = 0.0;
  info.max_angular_speed = 0.0;
  for (std::size_t i = 0; i < lattice_.node_count(); ++i) {
    info.max_speed = std::max(info.max_speed, s.v[i].norm());
    info.max_angular_speed = std::max(info.max_angular_speed, std::abs(s.omega[i]));
  }
}

void Stepper::check_finite(const SystemState& s) const {
  // Displacements this far beyond the lattice overflow the edge lengths long
  // before the state itself turns non-finite.
  const double reach = 1e100 * lattice_.L0() * std::max(lattice_.rows(), lattice_.cols());
  bool ok = true;
  double vmax = 0.0;
  const auto& ref = lattice_.ref_positions();
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    ok = ok && s.x[i].allFinite() && s.v[i].allFinite() && std::isfinite(s.theta[i]) &&
         std::isfinite(s.omega[i]) && (s.x[i] - ref[i]).cwiseAbs().maxCoeff() < reach;
    vmax = std::max(vmax, s.v[i].norm());
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "non-finite or runaway state at step " << s.step << " (t = " << s.t << ", max |v| = " << vmax
        << "); reduce the timestep";
    fail(ErrorCode::kDivergence, msg.str());
  }
}

namespace {

void node_kinetic_sync(const Lattice& lattice, const std::vector<Vec2>& v0,
                       const std::vector<double>& w0, const std::vector<Vec2>& v1,
                       const std::vector<double>& w1, std::vector<double>& out) {
  const auto& m = lattice.masses();
  const auto& I = lattice.inertias();
  out.resize(lattice.node_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec2 v = 0.5 * (v0[i] + v1[i]);
    const double w = 0.5 * (w0[i] + w1[i]);
    out[i] = 0.5 * m[i] * v.squaredNorm() + 0.5 * I[i] * w * w;
  }
}

double sum(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

}  // namespace

std::pair<SystemState, StepInfo> Stepper::initialize(const SystemState& full_step,
                                                     std::vector<double>* node_kinetic) const {
  if (full_step.x.size() != lattice_.node_count()) {
    fail(ErrorCode::kInvalidArgument, "state size does not match lattice");
  }
  const auto f = total_forces(full_step);
  SystemState s = full_step;
  kick(s, f, 0.5 * dt_, damping_);
  drift_and_prescribe(s);
  check_finite(s);

  StepInfo info;
  info.potential = f.energy;
  info.residual = free_residual(f);
  std::vector<double> local;
  auto& ke = node_kinetic ? *node_kinetic : local;
  node_kinetic_sync(lattice_, full_step.v, full_step.omega, full_step.v, full_step.omega, ke);
  info.kinetic = sum(ke);
  speeds(s, info);
  return {std::move(s), info};
}

StepInfo Stepper::step(SystemState& s, std::vector<double>* node_kinetic) const {
  const auto f = total_forces(s);
  const std::vector<Vec2> v_old = s.v;
  const std::vector<double> w_old = s.omega;
  kick(s, f, dt_, damping_);
  drift_and_prescribe(s);
  check_finite(s);

  StepInfo info;
  info.potential = f.energy;
  info.residual = free_residual(f);
  std::vector<double> local;
  auto& ke = node_kinetic ? *node_kinetic : local;
  node_kinetic_sync(lattice_, v_old, w_old, s.v, s.omega, ke);
  info.kinetic = sum(ke);
  speeds(s, info);
  return info;
}

void Stepper::reverse(SystemState& s) const {
  const auto f = total_forces(s);
  kick(s, f, dt_, Damping{});
  for (auto& v : s.v) v = -v;
  for (auto& w : s.omega) w = -w;
}

SystemState leapfrog_init(const Lattice& lattice, const EdgeEnergyModel& model,
                          const LoadProtocol& protocol, const InitialConditions& ic, double dt,
                          Damping damping, int threads) {
  const Stepper st(lattice, model, protocol, dt, damping, threads);
  return st.initialize(st.initial_state(ic)).first;
}

SystemState leapfrog_step(const SystemState& state, const Lattice& lattice,
                          const EdgeEnergyModel& model, const LoadProtocol& protocol, double dt,
                          Damping damping, int threads) {
  const Stepper st(lattice, model, protocol, dt, damping, threads);
  SystemState next = state;
  st.step(next);
  return next;
}

namespace {

double kinetic_of(const Lattice& lattice, const std::vector<Vec2>& v,
                  const std::vector<double>& omega, const std::vector<int>* nodes) {
  const auto& m = lattice.masses();
  const auto& I = lattice.inertias();
  if (v.size() != lattice.node_count() || omega.size() != lattice.node_count()) {
    fail(ErrorCode::kInvalidArgument, "state size does not match lattice");
  }
  auto one = [&](int i) { return 0.5 * m[i] * v[i].squaredNorm() + 0.5 * I[i] * omega[i] * omega[i]; };
  double e = 0.0;
  if (!nodes) {
    for (std::size_t i = 0; i < v.size(); ++i) e += one(static_cast<int>(i));
    return e;
  }
  for (int i : *nodes) {
    if (i < 0 || static_cast<std::size_t>(i) >= v.size()) {
      fail(ErrorCode::kInvalidArgument, "node " + std::to_string(i) + " out of range");
    }
    e += one(i);
  }
  return e;
}

}  // namespace

double kinetic_energy(const SystemState& state, const Lattice& lattice,
                      const std::vector<int>& nodes) {
  return kinetic_of(lattice, state.v, state.omega, &nodes);
}

double kinetic_energy(const SystemState& state, const Lattice& lattice) {
  return kinetic_of(lattice, state.v, state.omega, nullptr);
}

namespace {

Eigen::Matrix3d feature_hessian_at(const EdgeEnergyModel& model, double L0, const Vec3& z0) {
  const Vec3 h(1e-4, 1e-4, 1e-4 * L0);
  Eigen::Matrix3d H;
  for (int j = 0; j < 3; ++j) {
    Vec3 zp = z0, zm = z0;
    zp[j] += h[j];
    zm[j] -= h[j];
    H.col(j) = (model.gradient(EdgeFeatures::from_vector(zp)) -
                model.gradient(EdgeFeatures::from_vector(zm))) /
               (2.0 * h[j]);
  }
  return 0.5 * (H + H.transpose());
}

Eigen::Matrix3d feature_hessian_at_origin(const EdgeEnergyModel& model, double L0) {
  return feature_hessian_at(model, L0, Vec3::Zero());
}

}  // namespace

double estimate_omega_max(const EdgeEnergyModel& model, const Lattice& lattice) {
  if (lattice.node_count() == 0) fail(ErrorCode::kInvalidArgument, "lattice has no nodes");
  const double L0 = lattice.L0();
  const NodeState a{Vec2(0.0, 0.0), 0.0, Vec2(0.0, 0.0), 0.0};
  const NodeState b{Vec2(L0, 0.0), 0.0, Vec2(L0, 0.0), 0.0};
  const FeatureJacobian J = edge_feature_jacobian(a, b);

  const double m = *std::min_element(lattice.masses().begin(), lattice.masses().end());
  const double I = *std::min_element(lattice.inertias().begin(), lattice.inertias().end());
  Eigen::Matrix<double, 6, 1> s;
  s << 1 / std::sqrt(m), 1 / std::sqrt(m), 1 / std::sqrt(I), 1 / std::sqrt(m), 1 / std::sqrt(m),
      1 / std::sqrt(I);
  // Models with a kink at d = 0 (the bistable oracle) are much stiffer in
  // compression; a centred stencil averages the two sides, so also probe
  // just either side and keep the stiffest.
  double lambda = -1.0;
  for (const double side : {0.0, 1.0, -1.0}) {
    const Vec3 z0(0.0, 0.0, side * 1e-3 * L0);
    const Eigen::Matrix<double, 6, 6> H6 =
        J.transpose() * feature_hessian_at(model, L0, z0) * J;
    const Eigen::Matrix<double, 6, 6> A = s.asDiagonal() * H6 * s.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> eig(A, Eigen::EigenvaluesOnly);
    const double e = eig.eigenvalues().maxCoeff();
    if (!std::isfinite(e)) { lambda = e; break; }
    lambda = std::max(lambda, e);
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    fail(ErrorCode::kInvalidArgument,
         "model has no positive curvature at the origin; set the timestep explicitly");
  }
  return std::sqrt(lambda);
}

double default_timestep(const EdgeEnergyModel& model, const Lattice& lattice) {
  return 0.05 / estimate_omega_max(model, lattice);
}

Damping default_quasi_static_damping(const EdgeEnergyModel& model, const Lattice& lattice) {
  const double w = estimate_omega_max(model, lattice);
  const double m = *std::min_element(lattice.masses().begin(), lattice.masses().end());
  const double I = *std::min_element(lattice.inertias().begin(), lattice.inertias().end());
  return {2.0 * m * w, 2.0 * I * w};
}

Trajectory simulate(const SimConfig& config) {
  if (!config.lattice) fail(ErrorCode::kInvalidArgument, "simulation needs a lattice");
  if (!config.model) fail(ErrorCode::kInvalidArgument, "simulation needs a model");
  if (!(config.duration >= 0.0) || !std::isfinite(config.duration)) {
    fail(ErrorCode::kInvalidArgument, "duration must be finite and >= 0");
  }
  if (config.snapshot_stride < 1) fail(ErrorCode::kInvalidArgument, "snapshot stride must be >= 1");
  const Lattice& lattice = *config.lattice;
  for (int i : config.tracked_nodes) {
    if (i < 0 || static_cast<std::size_t>(i) >= lattice.node_count()) {
      fail(ErrorCode::kInvalidArgument, "tracked node " + std::to_string(i) + " out of range");
    }
  }
  const double dt = config.dt > 0.0 ? config.dt : default_timestep(*config.model, lattice);
  const Stepper st(lattice, *config.model, config.protocol, dt, config.damping, config.threads);

  Trajectory traj;
  traj.dt = dt;
  auto snap = [&](const SystemState& s) {
    traj.snapshots.push_back({s.step, s.t, s.x, s.theta, s.v, s.omega});
  };
  auto tracked = [&](const std::vector<double>& ke) {
    double e = 0.0;
    for (int i : config.tracked_nodes) e += ke[i];
    return e;
  };

  const SystemState s0 = st.initial_state(config.initial);
  snap(s0);
  const long n_steps = static_cast<long>(std::ceil(config.duration / dt * (1.0 - 1e-12)));
  std::vector<double> ke;
  if (n_steps == 0) {
    const auto g = assemble_energy(lattice, s0.configuration(), *config.model, config.threads);
    traj.log.push_back({0, 0.0, kinetic_energy(s0, lattice),
                        g.global_energy, kinetic_energy(s0, lattice, config.tracked_nodes)});
    return traj;
  }

  auto [s, info] = st.initialize(s0, &ke);
  traj.log.reserve(static_cast<std::size_t>(n_steps));
  traj.log.push_back({0, 0.0, info.kinetic, info.potential, tracked(ke)});
  if (s.step % config.snapshot_stride == 0 || s.step == n_steps) snap(s);
  while (s.step < n_steps) {
    const long n = s.step;
    const double t = s.t;
    info = st.step(s, &ke);
    traj.log.push_back({n, t, info.kinetic, info.potential, tracked(ke)});
    if (s.step % config.snapshot_stride == 0 || s.step == n_steps) snap(s);
  }
  return traj;
}

RelaxResult quasi_static_relax(const Lattice& lattice, const EdgeEnergyModel& model,
                               const LoadProtocol& protocol, const RelaxOptions& options) {
  const double dt = options.dt > 0.0 ? options.dt : default_timestep(model, lattice);
  Damping damping = options.damping;
  if (damping.c_v == 0.0 && damping.c_omega == 0.0) {
    damping = default_quasi_static_damping(model, lattice);
  }
  if (!(damping.c_v > 0.0) && !(damping.c_omega > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "quasi-static relaxation needs positive damping");
  }
  const double w = estimate_omega_max(model, lattice);
  const double L0 = lattice.L0();
  const double ramp = options.ramp_time < 0.0 ? 100.0 * dt : options.ramp_time;
  const double tol_v = options.tol_v * L0 * w;
  const double tol_w = options.tol_omega * w;
  double tol_f = options.tol_force;
  if (tol_f < 0.0) {
    const double kd = feature_hessian_at_origin(model, L0)(2, 2);
    tol_f = 1e-8 * std::abs(kd) * L0;
  }

  LoadProtocol ramped;
  ramped.kind = protocol.kind;
  ramped.end_time = ramp;
  auto ramp_to = [ramp](double end) -> Profile {
    return [end, ramp](double t) { return ramp > 0.0 ? end * std::min(t / ramp, 1.0) : end; };
  };
  for (const auto& p : protocol.prescribed) {
    ramped.prescribed.push_back({p.node, p.dof, ramp_to(p.displacement(protocol.end_time))});
  }
  for (const auto& l : protocol.loads) {
    ramped.loads.push_back({l.node, l.dof, ramp_to(l.value(protocol.end_time))});
  }

  const Stepper st(lattice, model, ramped, dt, damping, options.threads);
  const SystemState s0 = st.initial_state(options.initial);
  {
    const double r0 = st.residual(s0);
    double vmax = 0.0, wmax = 0.0;
    for (std::size_t i = 0; i < s0.v.size(); ++i) {
      vmax = std::max(vmax, s0.v[i].norm());
      wmax = std::max(wmax, std::abs(s0.omega[i]));
    }
    const bool settled_protocol = ramped.empty() || ramp == 0.0;
    if (settled_protocol && r0 <= tol_f && vmax < tol_v && wmax < tol_w) return {s0, r0, 0};
  }

  auto [s, info] = st.initialize(s0);
  long steps = 1;
  while (steps < options.max_steps) {
    info = st.step(s);
    ++steps;
    if (s.t < ramp) continue;
    if (info.max_speed < tol_v && info.max_angular_speed < tol_w && info.residual <= tol_f) {
      const double r = st.residual(s);
      if (r <= tol_f) return {std::move(s), r, steps};
    }
  }
  std::ostringstream msg;
  msg << "quasi-static relaxation did not converge in " << steps << " steps: residual "
      << info.residual << " (tol " << tol_f << "), max speed " << info.max_speed << " (tol "
      << tol_v << "), max angular speed " << info.max_angular_speed << " (tol " << tol_w << ")";
  fail(ErrorCode::kNonConvergence, msg.str());
}

std::vector<double> row_kinetic_series(const Trajectory& trajectory, const Lattice& lattice,
                                       int row) {
  if (row < 0 || row >= lattice.rows()) {
    fail(ErrorCode::kInvalidArgument, "row " + std::to_string(row) + " out of range");
  }
  const auto nodes = lattice.row_nodes(row);
  std::vector<double> out;
  out.reserve(trajectory.snapshots.size());
  for (const auto& s : trajectory.snapshots) out.push_back(kinetic_of(lattice, s.v, s.omega, &nodes));
  return out;
}

WaveSpeed measure_wave_speed(const Trajectory& trajectory, const Lattice& lattice, int source_row,
                             int target_row, double threshold_fraction) {
  if (source_row == target_row) {
    fail(ErrorCode::kInvalidArgument, "source and target rows must differ");
  }
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "threshold fraction must lie in (0, 1)");
  }
  if (trajectory.snapshots.empty()) fail(ErrorCode::kNoArrival, "trajectory has no snapshots");
  const auto src = row_kinetic_series(trajectory, lattice, source_row);
  const auto tgt = row_kinetic_series(trajectory, lattice, target_row);

  auto onset = [&](const std::vector<double>& e, const char* which) -> double {
    const double peak = *std::max_element(e.begin(), e.end());
    if (!(peak > 0.0)) {
      fail(ErrorCode::kNoArrival,
           std::string(which) + " row never moves within " +
               std::to_string(trajectory.snapshots.back().t) + " time units");
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] > threshold_fraction * peak) return trajectory.snapshots[i].t;
    }
    return trajectory.snapshots.back().t;
  };

  WaveSpeed w;
  w.start_time = onset(src, "source");
  w.arrival_time = onset(tgt, "target");
  if (!(w.arrival_time > w.start_time)) {
    fail(ErrorCode::kNoArrival, "target row moved no later than the source row (start " +
                                    std::to_string(w.start_time) + ", arrival " +
                                    std::to_string(w.arrival_time) + ")");
  }
  auto centroid = [&](int row) {
    Vec2 c = Vec2::Zero();
    const auto nodes = lattice.row_nodes(row);
    for (int i : nodes) c += lattice.ref_positions()[i];
    return Vec2(c / static_cast<double>(nodes.size()));
  };
  w.distance = (centroid(target_row) - centroid(source_row)).norm();
  w.speed = w.distance / (w.arrival_time - w.start_time);
  return w;
}

}  // namespace mgn
