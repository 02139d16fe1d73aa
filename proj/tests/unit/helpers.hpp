#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "mgn/features.hpp"
#include "mgn/lattice.hpp"

namespace testutil {

inline double rel_err(double a, double b, double floor = 1e-12) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline mgn::Vec2 rotate(double g, const mgn::Vec2& v) {
  return {std::cos(g) * v[0] - std::sin(g) * v[1], std::sin(g) * v[0] + std::cos(g) * v[1]};
}

// Random non-degenerate pair of node states around a reference edge of length L0.
inline std::pair<mgn::NodeState, mgn::NodeState> random_pair(std::mt19937_64& rng, double L0,
                                                             bool vertical = false) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  mgn::NodeState a, b;
  a.x_ref = {u(rng) * L0, u(rng) * L0};
  b.x_ref = a.x_ref + (vertical ? mgn::Vec2(0.0, L0) : mgn::Vec2(L0, 0.0));
  a.theta_ref = 0.3 * u(rng);
  b.theta_ref = 0.3 * u(rng);
  a.x = a.x_ref + 0.15 * L0 * mgn::Vec2(u(rng), u(rng));
  b.x = b.x_ref + 0.15 * L0 * mgn::Vec2(u(rng), u(rng));
  a.theta = a.theta_ref + 0.5 * u(rng);
  b.theta = b.theta_ref + 0.5 * u(rng);
  return {a, b};
}

}  // namespace testutil

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

namespace testutil {

// Scratch directory removed on scope exit.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("mgn_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

}  // namespace testutil
