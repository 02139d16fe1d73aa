#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mgn/error.hpp"
#include "mgn/protocol.hpp"

using namespace mgn;

namespace {

Lattice make(int rows, int cols, double L0 = 1.0) {
  LatticeSpec s;
  s.rows = rows;
  s.cols = cols;
  s.shape.L0 = L0;
  return build_lattice(s);
}

const Prescription* find(const LoadProtocol& p, int node, Dof dof) {
  for (const auto& q : p.prescribed)
    if (q.node == node && q.dof == dof) return &q;
  return nullptr;
}

}  // namespace

TEST_CASE("profiles") {
  using K = ProfileSpec::Kind;
  CHECK(make_profile({K::kConstant, 2.0})(7.0) == 2.0);
  const auto ramp = make_profile({K::kRamp, 3.0, 2.0});
  CHECK(ramp(-1.0) == 0.0);
  CHECK(ramp(1.0) == 1.5);
  CHECK(ramp(5.0) == 3.0);
  CHECK(make_profile({K::kRamp, 3.0, 0.0})(0.0) == 3.0);
  const auto sine = make_profile({K::kSine, 2.0, 0.0, 4.0});
  CHECK(sine(1.0) == doctest::Approx(2.0));
  CHECK(sine(3.0) == doctest::Approx(-2.0));
  const auto step = make_profile({K::kStep, 1.0, 0.5});
  CHECK(step(0.5) == 0.0);
  CHECK(step(0.51) == 1.0);
}

TEST_CASE("uniaxial compression clamps the bottom and drives the top") {
  const Lattice l = make(4, 3, 0.5);
  ProtocolParams pp;
  pp.strain = -0.1;
  pp.ramp_time = 2.0;
  const LoadProtocol p = make_protocol("uniaxial", pp, l);
  CHECK_NOTHROW(p.validate(l));
  CHECK(p.end_time == 2.0);
  for (int c = 0; c < 3; ++c) {
    REQUIRE(find(p, l.node_index(0, c), Dof::kX2));
    CHECK(find(p, l.node_index(0, c), Dof::kX2)->displacement(1.0) == 0.0);
    const auto* top = find(p, l.node_index(3, c), Dof::kX2);
    REQUIRE(top);
    // Total shortening: strain times height (3 L0).
    CHECK(top->displacement(2.0) == doctest::Approx(-0.15));
    CHECK(top->displacement(1.0) == doctest::Approx(-0.075));
  }
  CHECK(find(p, 0, Dof::kX1));
  CHECK(p.prescribed.size() == 7);

  pp.axis = Axis::kX;
  const LoadProtocol px = make_protocol("uniaxial", pp, l);
  CHECK(find(px, l.node_index(2, 2), Dof::kX1)->displacement(2.0) == doctest::Approx(-0.1));
  CHECK_THROWS_AS(make_protocol("uniaxial", pp, make(3, 1)), Error);
}

TEST_CASE("impulse moves the top row down at a fixed rate, then holds") {
  const Lattice l = make(5, 2, 0.05);
  const LoadProtocol p = make_protocol("impulse", {}, l);
  CHECK(p.prescribed.size() == 2);
  const auto* top = find(p, l.node_index(4, 1), Dof::kX2);
  REQUIRE(top);
  CHECK(top->displacement(0.005) == doctest::Approx(-80.0 * 0.05 * 0.005));
  CHECK(top->displacement(0.01) == doctest::Approx(-0.04));
  CHECK(top->displacement(1.0) == doctest::Approx(-0.04));
}

TEST_CASE("cyclic shear") {
  const Lattice l = make(4, 4, 1.0);
  const LoadProtocol p = make_protocol("shear", {}, l);
  const auto* top = find(p, l.node_index(3, 0), Dof::kX1);
  REQUIRE(top);
  CHECK(top->displacement(0.1) == doctest::Approx(-0.2));  // quarter period, A = 0.05 * 4
  CHECK(top->displacement(0.3) == doctest::Approx(0.2));
  CHECK(find(p, l.node_index(0, 2), Dof::kX2));
  ProtocolParams bad;
  bad.shear_period = 0.0;
  CHECK_THROWS_AS(make_protocol("shear", bad, l), Error);
}

TEST_CASE("validation") {
  const Lattice l = make(2, 2);
  CHECK(make_protocol("custom", {}, l).empty());
  CHECK_THROWS_AS(make_protocol("twist", {}, l), Error);
  const Profile zero = [](double) { return 0.0; };
  LoadProtocol p;
  p.prescribe({0}, Dof::kX1, zero);
  p.prescribe({0}, Dof::kX1, zero);
  CHECK_THROWS_AS(p.validate(l), Error);
  p = {};
  p.prescribe({7}, Dof::kX1, zero);
  CHECK_THROWS_AS(p.validate(l), Error);
  p = {};
  p.prescribe({1}, Dof::kTheta, zero);
  p.load({1}, Dof::kTheta, zero);
  CHECK_THROWS_AS(p.validate(l), Error);
  p = {};
  p.load({1}, Dof::kTheta, zero);
  p.load({1}, Dof::kTheta, zero);
  CHECK_NOTHROW(p.validate(l));
}
