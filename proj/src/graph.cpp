#include "mgn/graph.hpp"

#include <cmath>

#include "mgn/error.hpp"
#include "mgn/parallel.hpp"

namespace mgn {

Configuration Configuration::reference(const Lattice& lattice) {
  return {lattice.ref_positions(), lattice.ref_orientations()};
}

std::vector<NodeState> node_states(const Lattice& lattice, const Configuration& q) {
  const auto n = lattice.node_count();
  if (q.x.size() != n || q.theta.size() != n) {
    fail(ErrorCode::kInvalidArgument, "configuration size does not match lattice node count");
  }
  std::vector<NodeState> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = {q.x[i], q.theta[i], lattice.ref_positions()[i], lattice.ref_orientations()[i]};
  }
  return out;
}

namespace {

NodeState state_of(const Lattice& lattice, const Configuration& q, int i) {
  return {q.x[i], q.theta[i], lattice.ref_positions()[i], lattice.ref_orientations()[i]};
}

void check_sizes(const Lattice& lattice, const Configuration& q) {
  if (q.x.size() != lattice.node_count() || q.theta.size() != lattice.node_count()) {
    fail(ErrorCode::kInvalidArgument, "configuration size does not match lattice node count");
  }
}

template <class Fn>
void for_each_edge(const Lattice& lattice, int threads, Fn&& fn) {
  parallel_for(lattice.edge_count(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      try {
        fn(k);
      } catch (const Error& e) {
        fail(e.code(), "edge " + std::to_string(k) + " (" +
                           std::to_string(lattice.edges()[k].a) + ", " +
                           std::to_string(lattice.edges()[k].b) + "): " + e.what());
      }
    }
  });
}

}  // namespace

MetamaterialGraph assemble_energy(const Lattice& lattice, const Configuration& q,
                                  const EdgeEnergyModel& model, int threads) {
  check_sizes(lattice, q);
  MetamaterialGraph g;
  g.nodes = node_states(lattice, q);
  g.edge_energies.assign(lattice.edge_count(), 0.0);
  for_each_edge(lattice, threads, [&](std::size_t k) {
    const Edge e = lattice.edges()[k];
    g.edge_energies[k] = model.energy(edge_features(g.nodes[e.a], g.nodes[e.b]));
  });
  for (double e : g.edge_energies) g.global_energy += e;
  return g;
}

GeneralizedForces assemble_generalized_forces(const Lattice& lattice, const Configuration& q,
                                              const EdgeEnergyModel& model, int threads) {
  check_sizes(lattice, q);
  using Vec6 = Eigen::Matrix<double, 6, 1>;
  // Scratch reused across calls on the calling thread; workers write through
  // these references into disjoint slots.
  thread_local std::vector<Vec6> staged_buffer;
  thread_local std::vector<double> energy_buffer;
  std::vector<Vec6>& staged = staged_buffer;
  std::vector<double>& energies = energy_buffer;
  staged.resize(lattice.edge_count());
  energies.resize(lattice.edge_count());

  for_each_edge(lattice, threads, [&](std::size_t k) {
    const Edge e = lattice.edges()[k];
    const NodeState a = state_of(lattice, q, e.a);
    const NodeState b = state_of(lattice, q, e.b);
    const auto eg = model.evaluate(edge_features(a, b));
    staged[k] = edge_feature_jacobian(a, b).transpose() * eg.gradient;
    energies[k] = eg.energy;
  });

  GeneralizedForces out;
  out.force.assign(lattice.node_count(), Vec2::Zero());
  out.torque.assign(lattice.node_count(), 0.0);
  for (std::size_t k = 0; k < lattice.edge_count(); ++k) {
    const Edge e = lattice.edges()[k];
    const Vec6& g = staged[k];
    out.force[e.a] -= g.head<2>();
    out.torque[e.a] -= g[2];
    out.force[e.b] -= g.segment<2>(3);
    out.torque[e.b] -= g[5];
    out.energy += energies[k];
  }
  return out;
}

ModelPtr calibrate_reference(const EdgeEnergyModel& model, const Lattice& lattice) {
  auto copy = model.clone();
  copy->set_reference_offset(0.0);
  const auto ref = node_states(lattice, Configuration::reference(lattice));
  // Every edge sees identical (zero) features at the reference state; the
  // first edge's raw energy is the offset. Without edges, use the origin.
  EdgeFeatures z{0.0, 0.0, 0.0};
  if (lattice.edge_count() > 0) {
    const Edge e = lattice.edges().front();
    z = edge_features(ref[e.a], ref[e.b]);
  }
  copy->set_reference_offset(copy->raw_energy(z));
  return ModelPtr(std::move(copy));
}

ReferenceResidual reference_residual(const EdgeEnergyModel& model, const Lattice& lattice) {
  ReferenceResidual r;
  r.offset = model.reference_offset();
  const auto f = assemble_generalized_forces(lattice, Configuration::reference(lattice), model);
  for (std::size_t i = 0; i < lattice.node_count(); ++i) {
    r.max_force = std::max(r.max_force, f.force[i].norm());
    r.max_torque = std::max(r.max_torque, std::abs(f.torque[i]));
  }
  return r;
}

}  // namespace mgn
