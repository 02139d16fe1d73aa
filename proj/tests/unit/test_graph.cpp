#include <doctest.h>

#include <cmath>
#include <random>

#include "mgn/error.hpp"
#include "mgn/graph.hpp"

using namespace mgn;

namespace {

Lattice make(int rows, int cols, double L0 = 1.0) {
  LatticeSpec s;
  s.rows = rows;
  s.cols = cols;
  s.shape.L0 = L0;
  return build_lattice(s);
}

Configuration perturbed(const Lattice& l, std::uint64_t seed, double a) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Configuration q = Configuration::reference(l);
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    q.x[i] += a * l.L0() * Vec2(u(rng), u(rng));
    q.theta[i] += a * u(rng);
  }
  return q;
}

}  // namespace

TEST_CASE("reference configuration has zero energy and force for the oracle") {
  const Lattice l = make(4, 5);
  AnalyticOracle m;
  const auto g = assemble_energy(l, Configuration::reference(l), m);
  CHECK(g.global_energy == 0.0);
  CHECK(g.edge_energies.size() == l.edge_count());
  CHECK(g.nodes.size() == l.node_count());
  const auto f = assemble_generalized_forces(l, Configuration::reference(l), m);
  for (std::size_t i = 0; i < l.node_count(); ++i) {
    CHECK(f.force[i].norm() == 0.0);
    CHECK(f.torque[i] == 0.0);
  }
}

TEST_CASE("two crosses joined by an axial spring") {
  const Lattice l = make(1, 2, 0.5);
  const auto m = AnalyticOracle(AnalyticOracleSpec::axial(4.0));
  Configuration q = Configuration::reference(l);
  q.x[1][0] += 0.1;  // stretch by 0.1
  const auto g = assemble_energy(l, q, m);
  CHECK(g.global_energy == doctest::Approx(0.5 * 4.0 * 0.01));
  const auto f = assemble_generalized_forces(l, q, m);
  CHECK(f.force[1][0] == doctest::Approx(-0.4));
  CHECK(f.force[0][0] == doctest::Approx(0.4));
  CHECK(std::abs(f.force[1][1]) < 1e-15);
  CHECK(f.energy == g.global_energy);
}

TEST_CASE("generalized forces are the negative energy gradient") {
  const Lattice l = make(3, 4, 0.05);
  AnalyticOracle m;
  const Configuration q = perturbed(l, 1, 0.1);
  const auto f = assemble_generalized_forces(l, q, m);
  for (std::size_t i = 0; i < l.node_count(); ++i) {
    for (int k = 0; k < 3; ++k) {
      const double h = k == 2 ? 1e-6 : 1e-6 * l.L0();
      Configuration a = q, b = q;
      if (k == 2) {
        a.theta[i] += h;
        b.theta[i] -= h;
      } else {
        a.x[i][k] += h;
        b.x[i][k] -= h;
      }
      const double fd = -(assemble_energy(l, a, m).global_energy - assemble_energy(l, b, m).global_energy) / (2 * h);
      const double got = k == 2 ? f.torque[i] : f.force[i][k];
      CHECK(got == doctest::Approx(fd).epsilon(1e-5).scale(k == 2 ? 1.0 : 1.0 / l.L0()));
    }
  }
}

TEST_CASE("internal forces balance") {
  const Lattice l = make(5, 5, 0.05);
  AnalyticOracle m;
  const Configuration q = perturbed(l, 2, 0.1);
  const auto f = assemble_generalized_forces(l, q, m);
  Vec2 total = Vec2::Zero();
  double moment = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < l.node_count(); ++i) {
    total += f.force[i];
    moment += q.x[i][0] * f.force[i][1] - q.x[i][1] * f.force[i][0] + f.torque[i];
    scale = std::max(scale, f.force[i].norm());
  }
  CHECK(total.norm() <= 1e-12 * scale * l.node_count());
  CHECK(std::abs(moment) <= 1e-12 * scale * l.node_count());
}

TEST_CASE("thread count does not change a single bit") {
  const Lattice l = make(12, 9, 0.05);
  AnalyticOracle m;
  const Configuration q = perturbed(l, 3, 0.1);
  const auto f1 = assemble_generalized_forces(l, q, m, 1);
  for (int t : {2, 3, 8}) {
    const auto ft = assemble_generalized_forces(l, q, m, t);
    CHECK(ft.force == f1.force);
    CHECK(ft.torque == f1.torque);
    CHECK(ft.energy == f1.energy);
    CHECK(assemble_energy(l, q, m, t).global_energy == assemble_energy(l, q, m, 1).global_energy);
  }
}

TEST_CASE("calibration zeroes the reference energy") {
  const Lattice l = make(3, 3);
  AnalyticOracle shifted;
  shifted.set_reference_offset(-2.5);
  CHECK(assemble_energy(l, Configuration::reference(l), shifted).global_energy == doctest::Approx(2.5 * 12));
  const ModelPtr c = calibrate_reference(shifted, l);
  CHECK(assemble_energy(l, Configuration::reference(l), *c).global_energy == 0.0);
  const auto r = reference_residual(*c, l);
  CHECK(r.max_force == 0.0);
  CHECK(r.max_torque == 0.0);
}

TEST_CASE("size mismatch and coincident crosses are reported") {
  const Lattice l = make(2, 2);
  AnalyticOracle m;
  Configuration q = Configuration::reference(l);
  q.x.pop_back();
  CHECK_THROWS_AS(assemble_energy(l, q, m), Error);
  q = Configuration::reference(l);
  q.x[1] = q.x[0];
  CHECK_THROWS_AS(assemble_generalized_forces(l, q, m, 2), Error);
}
