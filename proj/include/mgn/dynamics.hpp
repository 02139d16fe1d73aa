#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <optional>
#include <vector>

#include "mgn/graph.hpp"
#include "mgn/protocol.hpp"

namespace mgn {

/// Leap-frog state: positions at t (step n), velocities at t - dt/2.
struct SystemState {
  std::vector<Vec2> x;
  std::vector<double> theta;
  std::vector<Vec2> v;
  std::vector<double> omega;
  double t = 0.0;
  long step = 0;

  Configuration configuration() const { return {x, theta}; }
  static SystemState at_rest(const Lattice& lattice);
};

/// Velocity-proportional damping, -c_v v and -c_omega omega.
struct Damping {
  double c_v = 0.0;
  double c_omega = 0.0;
};

/// Full-step initial data at t = 0; unset fields default to the reference
/// state at rest. The optional random perturbation breaks symmetry.
struct InitialConditions {
  std::optional<std::vector<Vec2>> x;
  std::optional<std::vector<double>> theta;
  std::optional<std::vector<Vec2>> v;
  std::optional<std::vector<double>> omega;
  double perturb_position = 0.0;  // uniform in [-a, a] per component
  double perturb_theta = 0.0;
  std::uint64_t seed = 0;
};

struct StepInfo {
  double potential = 0.0;      // Psi at x^n
  double kinetic = 0.0;        // at t^n, from the average of the two half steps
  double residual = 0.0;       // max |generalized force| over free DOFs at x^n
  double max_speed = 0.0;      // over v^{n+1/2}
  double max_angular_speed = 0.0;
};

/// Leap-frog integrator bound to one lattice, model and protocol. Prescribed
/// DOFs are overwritten from the protocol after every drift and receive no
/// force update.
class Stepper {
 public:
  Stepper(const Lattice& lattice, const EdgeEnergyModel& model, const LoadProtocol& protocol,
          double dt, Damping damping = {}, int threads = 1);

  /// Full-step state at t = 0 built from the initial data (velocities are v^0).
  SystemState initial_state(const InitialConditions& ic) const;

  /// First half kick v^{1/2} = v^0 + dt/2 a(x^0) followed by the drift to x^1.
  /// Returns the state at step 1 and the diagnostics of t = 0.
  std::pair<SystemState, StepInfo> initialize(const SystemState& full_step,
                                              std::vector<double>* node_kinetic = nullptr) const;

  /// Advances (x^n, v^{n-1/2}) to (x^{n+1}, v^{n+1/2}). When node_kinetic is
  /// given it receives each cross's kinetic energy at t^n.
  StepInfo step(SystemState& state, std::vector<double>* node_kinetic = nullptr) const;

  /// Turns (x^n, v^{n-1/2}) into (x^n, -v^{n+1/2}); stepping n times from
  /// there retraces the undamped trajectory back to x^0.
  void reverse(SystemState& state) const;

  /// Largest generalized force component over free DOFs, loads included.
  double residual(const SystemState& state) const;

  double dt() const { return dt_; }
  const Lattice& lattice() const { return lattice_; }

 private:
  GeneralizedForces total_forces(const SystemState& s) const;
  double free_residual(const GeneralizedForces& f) const;
  void kick(SystemState& s, const GeneralizedForces& f, double h, Damping c) const;
  void drift_and_prescribe(SystemState& s) const;
  void speeds(const SystemState& s, StepInfo& info) const;
  void check_finite(const SystemState& s) const;

  const Lattice& lattice_;
  const EdgeEnergyModel& model_;
  const LoadProtocol& protocol_;
  double dt_;
  Damping damping_;
  int threads_;
  std::vector<std::array<bool, 3>> constrained_;
};

/// State at step 1: x^1 and v^{1/2} = v^0 + dt/2 a(x^0).
SystemState leapfrog_init(const Lattice& lattice, const EdgeEnergyModel& model,
                          const LoadProtocol& protocol, const InitialConditions& ic, double dt,
                          Damping damping = {}, int threads = 1);

SystemState leapfrog_step(const SystemState& state, const Lattice& lattice,
                          const EdgeEnergyModel& model, const LoadProtocol& protocol, double dt,
                          Damping damping = {}, int threads = 1);

/// sum over the node set of m |v|^2 / 2 + I omega^2 / 2, using the stored
/// half-step velocities.
double kinetic_energy(const SystemState& state, const Lattice& lattice,
                      const std::vector<int>& nodes);
double kinetic_energy(const SystemState& state, const Lattice& lattice);

/// Highest angular frequency of a single linearized edge between the lightest
/// crosses, from a finite-difference Hessian of the model at the origin.
double estimate_omega_max(const EdgeEnergyModel& model, const Lattice& lattice);
double default_timestep(const EdgeEnergyModel& model, const Lattice& lattice);
/// Near-critical damping of the stiffest edge mode.
Damping default_quasi_static_damping(const EdgeEnergyModel& model, const Lattice& lattice);

struct SimConfig {
  const Lattice* lattice = nullptr;
  ModelPtr model;
  LoadProtocol protocol;
  double dt = 0.0;  // <= 0 selects default_timestep
  double duration = 0.0;
  Damping damping;
  int snapshot_stride = 1;
  std::vector<int> tracked_nodes;
  InitialConditions initial;
  int threads = 1;
};

struct Snapshot {
  long step = 0;
  double t = 0.0;
  std::vector<Vec2> x;
  std::vector<double> theta;
  std::vector<Vec2> v;
  std::vector<double> omega;
};

struct LogEntry {
  long step = 0;
  double time = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double tracked_kinetic = 0.0;
};

struct Trajectory {
  double dt = 0.0;
  std::vector<Snapshot> snapshots;
  std::vector<LogEntry> log;
};

/// Runs ceil(duration / dt) steps. Snapshots at every stride-th step and at
/// the final step; one log entry per step.
Trajectory simulate(const SimConfig& config);

struct RelaxOptions {
  Damping damping;         // both zero selects default_quasi_static_damping
  double dt = 0.0;         // <= 0 selects default_timestep
  double ramp_time = -1.0; // < 0 selects 100 dt
  double tol_v = 1e-8;     // in units of L0 * omega_max
  double tol_omega = 1e-8; // in units of omega_max
  double tol_force = -1.0; // < 0 selects 1e-8 k_d L0 estimated from the model
  long max_steps = 2'000'000;
  int threads = 1;
  InitialConditions initial;
};

struct RelaxResult {
  SystemState state;
  double residual_force = 0.0;
  long steps = 0;
};

/// Heavily damped dynamics driven towards the protocol's end state (ramped in
/// over ramp_time) until speeds and residual forces fall under tolerance.
/// Throws kNonConvergence with diagnostics after max_steps.
RelaxResult quasi_static_relax(const Lattice& lattice, const EdgeEnergyModel& model,
                               const LoadProtocol& protocol, const RelaxOptions& options = {});

struct WaveSpeed {
  double speed = 0.0;
  double start_time = 0.0;
  double arrival_time = 0.0;
  double distance = 0.0;
};

/// Onset times are the first snapshot at which a row's kinetic energy exceeds
/// threshold_fraction of that row's peak. Throws kNoArrival when the target
/// row never moves.
WaveSpeed measure_wave_speed(const Trajectory& trajectory, const Lattice& lattice,
                             int source_row, int target_row, double threshold_fraction = 0.01);

std::vector<double> row_kinetic_series(const Trajectory& trajectory, const Lattice& lattice,
                                       int row);

}  // namespace mgn
