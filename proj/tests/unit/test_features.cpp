#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "mgn/error.hpp"
#include "mgn/features.hpp"

using namespace mgn;
using testutil::rotate;

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  const double pi = std::numbers::pi;
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(1.5 * pi) == doctest::Approx(-0.5 * pi));
  CHECK(wrap_angle(-pi) == pi);
  CHECK(wrap_angle(pi) == pi);
  CHECK(wrap_angle(7.0 * pi) == doctest::Approx(pi));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = u(rng);
    const double w = wrap_angle(a);
    CHECK(w > -pi);
    CHECK(w <= pi);
    const double turns = (a - w) / (2 * pi);
    CHECK(std::abs(turns - std::round(turns)) < 1e-9);
  }
}

TEST_CASE("reference state has zero features") {
  NodeState a{{0.3, -1.0}, 0.2, {0.3, -1.0}, 0.2};
  NodeState b{{0.3, 0.0}, -0.1, {0.3, 0.0}, -0.1};
  const auto z = edge_features(a, b);
  CHECK(z.theta_a == 0.0);
  CHECK(z.theta_b == 0.0);
  CHECK(z.d == 0.0);
}

TEST_CASE("rotated crosses on a vertical spring") {
  const double pi = std::numbers::pi;
  NodeState a{{0.0, 0.0}, 2 * pi / 3, {0.0, 0.0}, pi / 2};
  NodeState b{{0.0, 1.0}, pi / 3, {0.0, 1.0}, pi / 2};
  const auto z = edge_features(a, b);
  CHECK(z.theta_a == doctest::Approx(pi / 6).epsilon(1e-14));
  CHECK(z.theta_b == doctest::Approx(-pi / 6).epsilon(1e-14));
  CHECK(z.d == doctest::Approx(0.0));
}

TEST_CASE("pure stretch and pure spring rotation") {
  NodeState a{{0.0, 0.0}, 0.0, {0.0, 0.0}, 0.0};
  NodeState b{{1.1, 0.0}, 0.0, {1.0, 0.0}, 0.0};
  auto z = edge_features(a, b);
  CHECK(z.d == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(z.theta_a == 0.0);
  // Spring turned by +0.2 with crosses fixed: both crosses lag by -0.2.
  b.x = {std::cos(0.2), std::sin(0.2)};
  z = edge_features(a, b);
  CHECK(z.theta_a == doctest::Approx(-0.2).epsilon(1e-13));
  CHECK(z.theta_b == doctest::Approx(-0.2).epsilon(1e-13));
  CHECK(std::abs(z.d) < 1e-15);
}

TEST_CASE("features are invariant under rigid motions") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double L0 = 0.05;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    auto [a, b] = testutil::random_pair(rng, L0, k % 2 == 1);
    const double g = std::numbers::pi * u(rng);
    const Vec2 t = 10.0 * L0 * Vec2(u(rng), u(rng));
    NodeState a2 = a, b2 = b;
    a2.x = rotate(g, a.x) + t;
    b2.x = rotate(g, b.x) + t;
    a2.theta += g;
    b2.theta += g;
    const auto z1 = edge_features(a, b), z2 = edge_features(a2, b2);
    worst = std::max({worst, std::abs(wrap_angle(z1.theta_a - z2.theta_a)),
                      std::abs(wrap_angle(z1.theta_b - z2.theta_b)), std::abs(z1.d - z2.d) / L0});
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("swapping endpoints swaps the angle features") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 500; ++k) {
    auto [a, b] = testutil::random_pair(rng, 1.0, k % 2 == 0);
    const auto z = edge_features(a, b), s = edge_features(b, a);
    CHECK(s.theta_a == z.theta_b);
    CHECK(s.theta_b == z.theta_a);
    CHECK(s.d == z.d);
  }
}

TEST_CASE("no jump when the spring direction crosses the branch cut") {
  // Reference spring points along -x (beta_ref = pi); rotate the spring through it.
  NodeState a{{0.0, 0.0}, 0.0, {0.0, 0.0}, 0.0};
  NodeState b{{-1.0, 0.0}, 0.0, {-1.0, 0.0}, 0.0};
  double prev_a = 0.0;
  bool first = true;
  for (int k = -200; k <= 200; ++k) {
    const double phi = std::numbers::pi + 1e-3 * k;
    b.x = {std::cos(phi), std::sin(phi)};
    const auto z = edge_features(a, b);
    if (!first) CHECK(std::abs(z.theta_a - prev_a) <= 1e-3 + 1e-12);
    prev_a = z.theta_a;
    first = false;
  }
}

TEST_CASE("coincident crosses are degenerate") {
  NodeState a{{0.5, 0.5}, 0.0, {0.0, 0.0}, 0.0};
  NodeState b{{0.5, 0.5}, 0.0, {1.0, 0.0}, 0.0};
  CHECK_THROWS_AS(edge_features(a, b), Error);
  CHECK_THROWS_AS(edge_feature_jacobian(a, b), Error);
  try {
    edge_features(a, b);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateGeometry);
  }
}

TEST_CASE("feature jacobian at a horizontal reference edge") {
  const double L0 = 2.0;
  NodeState a{{0.0, 0.0}, 0.0, {0.0, 0.0}, 0.0};
  NodeState b{{L0, 0.0}, 0.0, {L0, 0.0}, 0.0};
  const auto J = edge_feature_jacobian(a, b);
  // d row: unit vector along the spring.
  CHECK(J(2, 3) == doctest::Approx(1.0));
  CHECK(J(2, 4) == doctest::Approx(0.0));
  CHECK(J(2, 0) == doctest::Approx(-1.0));
  // theta rows hold -d(beta)/dx_b = -(0, 1/L0).
  CHECK(J(0, 4) == doctest::Approx(-1.0 / L0));
  CHECK(J(1, 1) == doctest::Approx(1.0 / L0));
  CHECK(J(0, 2) == 1.0);
  CHECK(J(0, 5) == 0.0);
  CHECK(J(1, 2) == 0.0);
  CHECK(J(1, 5) == 1.0);
}

TEST_CASE("feature jacobian matches central differences") {
  std::mt19937_64 rng(11);
  const double L0 = 0.7;
  for (int k = 0; k < 100; ++k) {
    auto [a, b] = testutil::random_pair(rng, L0, k % 3 == 0);
    const auto J = edge_feature_jacobian(a, b);
    for (int c = 0; c < 6; ++c) {
      const bool angle = (c == 2 || c == 5);
      const double h = angle ? 1e-6 : 1e-6 * L0;
      auto shifted = [&](double s) {
        NodeState p = a, q = b;
        NodeState& n = c < 3 ? p : q;
        const int k2 = c % 3;
        if (k2 == 2) n.theta += s; else n.x[k2] += s;
        return edge_features(p, q).as_vector();
      };
      const Vec3 fd = (shifted(h) - shifted(-h)) / (2 * h);
      for (int r = 0; r < 3; ++r) {
        // Angle rows are order one, the d row is in units of L0.
        const double scale = std::max(1.0, std::abs(J(r, c)));
        CHECK_MESSAGE(std::abs(fd[r] - J(r, c)) <= 1e-5 * scale, "row ", r, " col ", c);
      }
      CHECK(J(0, 2) == 1.0);
      CHECK(J(1, 5) == 1.0);
    }
  }
}
