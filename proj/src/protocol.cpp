#include "mgn/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "mgn/error.hpp"

namespace mgn {

Profile make_profile(const ProfileSpec& s) {
  switch (s.kind) {
    case ProfileSpec::Kind::kConstant:
      return [v = s.value](double) { return v; };
    case ProfileSpec::Kind::kRamp:
      return [v = s.value, T = s.duration](double t) {
        if (T <= 0.0) return v;
        return v * std::clamp(t / T, 0.0, 1.0);
      };
    case ProfileSpec::Kind::kSine:
      return [a = s.value, T = s.period](double t) {
        return a * std::sin(2.0 * std::numbers::pi * t / T);
      };
    case ProfileSpec::Kind::kLinearHold:
      return [v = s.value, T = s.duration](double t) {
        if (T <= 0.0) return v;
        return t <= T ? v * t / T : v;
      };
    case ProfileSpec::Kind::kStep:
      return [v = s.value, t0 = s.duration](double t) { return t > t0 ? v : 0.0; };
  }
  fail(ErrorCode::kInvalidArgument, "unknown profile kind");
}

void LoadProtocol::validate(const Lattice& lattice) const {
  std::set<std::pair<int, int>> seen;
  const auto n = static_cast<int>(lattice.node_count());
  auto check = [&](int node, Dof dof, const char* what, bool exclusive) {
    if (node < 0 || node >= n) {
      fail(ErrorCode::kInvalidArgument,
           std::string("protocol: ") + what + " references node " + std::to_string(node) +
               " outside [0, " + std::to_string(n) + ")");
    }
    const auto key = std::make_pair(node, static_cast<int>(dof));
    if (exclusive && !seen.insert(key).second) {
      fail(ErrorCode::kInvalidArgument,
           "protocol: DOF " + std::to_string(static_cast<int>(dof)) + " of node " +
               std::to_string(node) + " is constrained more than once");
    }
  };
  for (const auto& p : prescribed) {
    check(p.node, p.dof, "prescription", true);
    if (!p.displacement) fail(ErrorCode::kInvalidArgument, "protocol: empty prescription");
  }
  for (const auto& l : loads) {
    check(l.node, l.dof, "load", false);
    if (!l.value) fail(ErrorCode::kInvalidArgument, "protocol: empty load profile");
    if (seen.count({l.node, static_cast<int>(l.dof)})) {
      fail(ErrorCode::kInvalidArgument,
           "protocol: node " + std::to_string(l.node) + " DOF " +
               std::to_string(static_cast<int>(l.dof)) + " is both prescribed and loaded");
    }
  }
}

void LoadProtocol::prescribe(const std::vector<int>& nodes, Dof dof, const Profile& p) {
  for (int n : nodes) prescribed.push_back({n, dof, p});
}

void LoadProtocol::load(const std::vector<int>& nodes, Dof dof, const Profile& p) {
  for (int n : nodes) loads.push_back({n, dof, p});
}

LoadProtocol make_protocol(const std::string& kind, const ProtocolParams& params,
                           const Lattice& lattice) {
  LoadProtocol p;
  p.kind = kind;
  const double L0 = lattice.L0();
  const Profile fixed = [](double) { return 0.0; };
  const int top = lattice.rows() - 1;

  if (kind == "custom") {
    return p;
  }
  if (kind == "uniaxial") {
    const bool vertical = params.axis == Axis::kY;
    const int span = vertical ? lattice.rows() - 1 : lattice.cols() - 1;
    if (span < 1) {
      fail(ErrorCode::kInvalidArgument, "uniaxial protocol needs at least two rows/cols along the axis");
    }
    const double target = params.strain * span * L0;
    const Profile ramp = make_profile({ProfileSpec::Kind::kRamp, target, params.ramp_time, 1.0});
    // A single line of crosses pinned at one end and on a roller at the other
    // could tip over rigidly; hold the driven end laterally as well.
    if (vertical) {
      p.prescribe(lattice.row_nodes(0), Dof::kX2, fixed);
      p.prescribe({lattice.node_index(0, 0)}, Dof::kX1, fixed);
      p.prescribe(lattice.row_nodes(top), Dof::kX2, ramp);
      if (lattice.cols() == 1) p.prescribe({lattice.node_index(top, 0)}, Dof::kX1, fixed);
    } else {
      p.prescribe(lattice.col_nodes(0), Dof::kX1, fixed);
      p.prescribe({lattice.node_index(0, 0)}, Dof::kX2, fixed);
      p.prescribe(lattice.col_nodes(lattice.cols() - 1), Dof::kX1, ramp);
      if (lattice.rows() == 1) p.prescribe({lattice.node_index(0, lattice.cols() - 1)}, Dof::kX2, fixed);
    }
    p.end_time = params.ramp_time;
    return p;
  }
  if (kind == "impulse") {
    const double rate = params.impulse_rate * L0;
    const double hold = params.impulse_duration;
    p.prescribe(lattice.row_nodes(top), Dof::kX2, [rate, hold](double t) {
      return t <= hold ? -rate * t : -rate * hold;
    });
    p.end_time = hold;
    return p;
  }
  if (kind == "shear") {
    if (lattice.rows() < 2) fail(ErrorCode::kInvalidArgument, "shear protocol needs >= 2 rows");
    const double amp =
        params.shear_amplitude >= 0.0 ? params.shear_amplitude : 0.05 * lattice.rows() * L0;
    const double period = params.shear_period;
    if (!(period > 0.0)) fail(ErrorCode::kInvalidArgument, "shear period must be positive");
    p.prescribe(lattice.row_nodes(top), Dof::kX1, [amp, period](double t) {
      return amp * std::sin(-2.0 * std::numbers::pi * t / period);
    });
    p.prescribe(lattice.row_nodes(0), Dof::kX2, fixed);  // roller
    p.end_time = period / 4.0;
    return p;
  }
  fail(ErrorCode::kInvalidArgument,
       "unknown protocol kind '" + kind + "' (expected uniaxial, impulse, shear or custom)");
}

}  // namespace mgn
