#pragma once

#include <vector>

#include "mgn/features.hpp"
#include "mgn/lattice.hpp"
#include "mgn/surrogate.hpp"

namespace mgn {

/// Spatial generalized coordinates of every cross, indexed like the lattice.
struct Configuration {
  std::vector<Vec2> x;
  std::vector<double> theta;

  static Configuration reference(const Lattice& lattice);
};

std::vector<NodeState> node_states(const Lattice& lattice, const Configuration& q);

/// Graph 3-tuple: global energy, node features, edge energies.
struct MetamaterialGraph {
  double global_energy = 0.0;
  std::vector<NodeState> nodes;
  std::vector<double> edge_energies;  // same order as lattice.edges()
};

/// Internal generalized forces -dPsi/dx_i and torques -dPsi/dtheta_i.
struct GeneralizedForces {
  std::vector<Vec2> force;
  std::vector<double> torque;
  double energy = 0.0;  // Psi at the same configuration
};

/// Per-edge energies summed in ascending edge order.
MetamaterialGraph assemble_energy(const Lattice& lattice, const Configuration& q,
                                  const EdgeEnergyModel& model, int threads = 1);

/// Edges are evaluated independently (optionally in parallel) into per-edge
/// slots, then reduced into the nodes in ascending edge order, so results are
/// bitwise identical for any thread count.
GeneralizedForces assemble_generalized_forces(const Lattice& lattice, const Configuration& q,
                                              const EdgeEnergyModel& model, int threads = 1);

/// Returns a copy of the model whose energy at the lattice's reference state
/// is exactly zero.
ModelPtr calibrate_reference(const EdgeEnergyModel& model, const Lattice& lattice);

struct ReferenceResidual {
  double offset = 0.0;
  double max_force = 0.0;   // largest |f_i| at the reference state
  double max_torque = 0.0;
};

/// Residual generalized forces of a calibrated model at the reference state.
ReferenceResidual reference_residual(const EdgeEnergyModel& model, const Lattice& lattice);

}  // namespace mgn
