#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mgn/lattice.hpp"

namespace mgn {

enum class Dof { kX1 = 0, kX2 = 1, kTheta = 2 };

/// Scalar function of time: a displacement from the reference value for
/// prescriptions, a force or torque for loads.
using Profile = std::function<double(double)>;

struct ProfileSpec {
  enum class Kind { kConstant, kRamp, kSine, kLinearHold, kStep };
  Kind kind = Kind::kConstant;
  double value = 0.0;     // constant / final value / sine amplitude / step height
  double duration = 0.0;  // ramp and linear-hold time, step onset
  double period = 1.0;    // sine
};

Profile make_profile(const ProfileSpec& spec);

struct Prescription {
  int node = 0;
  Dof dof = Dof::kX1;
  Profile displacement;
};

struct ExternalLoad {
  int node = 0;
  Dof dof = Dof::kX1;
  Profile value;
};

/// Boundary and loading conditions. A DOF is either prescribed or loaded,
/// never both; everything else is free and traction free.
struct LoadProtocol {
  std::string kind = "custom";
  std::vector<Prescription> prescribed;
  std::vector<ExternalLoad> loads;
  double end_time = 0.0;  // time at which the end state of a static run is read

  bool empty() const { return prescribed.empty() && loads.empty(); }
  /// Throws kInvalidArgument for out-of-range nodes or doubly constrained DOFs.
  void validate(const Lattice& lattice) const;

  void prescribe(const std::vector<int>& nodes, Dof dof, const Profile& p);
  void load(const std::vector<int>& nodes, Dof dof, const Profile& p);
};

enum class Axis { kX, kY };

struct ProtocolParams {
  // uniaxial: strain > 0 stretches, < 0 compresses, applied over ramp_time
  double strain = 0.0;
  Axis axis = Axis::kY;
  double ramp_time = 0.0;
  // impulse: U2(top) = -rate L0 t up to duration, held afterwards
  double impulse_rate = 80.0;
  double impulse_duration = 0.01;
  // shear: U1(top) = A sin(-2 pi t / period); A defaults to 5% of the height
  double shear_amplitude = -1.0;
  double shear_period = 0.4;
};

/// kind is one of uniaxial, impulse, shear, custom (custom yields an empty
/// protocol to be filled by the caller).
LoadProtocol make_protocol(const std::string& kind, const ProtocolParams& params,
                           const Lattice& lattice);

}  // namespace mgn
