#pragma once

#include <string>
#include <vector>

#include "mgn/lattice.hpp"

namespace mgn {

struct SvgOptions {
  double arm = 0.4;           // cross arm length, in units of L0
  double cross_width = 0.08;  // stroke widths, in units of L0
  double edge_width = 0.03;
  double pixels_per_L0 = 40.0;
  std::string cross_color = "#1f3b73";
  std::string edge_color = "#c0392b";
  std::string background = "#ffffff";
};

/// Crosses as two perpendicular segments centred at x_i and rotated by
/// theta_i; one line per surviving edge. Coordinates are written in model
/// units inside a y-up group, so a segment at angle a in the model appears at
/// angle a in the document's line coordinates.
std::string render_svg(const std::vector<Vec2>& x, const std::vector<double>& theta,
                       const Lattice& lattice, const SvgOptions& options = {});

}  // namespace mgn
