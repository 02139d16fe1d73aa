#include "mgn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mgn/error.hpp"

namespace mgn {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string line(const Vec2& p, const Vec2& q, const char* cls) {
  return std::string("  <line class=\"") + cls + "\" x1=\"" + num(p[0]) + "\" y1=\"" + num(p[1]) +
         "\" x2=\"" + num(q[0]) + "\" y2=\"" + num(q[1]) + "\"/>\n";
}

}  // namespace

std::string render_svg(const std::vector<Vec2>& x, const std::vector<double>& theta,
                       const Lattice& lattice, const SvgOptions& o) {
  if (x.size() != lattice.node_count() || theta.size() != lattice.node_count()) {
    fail(ErrorCode::kInvalidArgument, "snapshot size does not match lattice");
  }
  const double L0 = lattice.L0();
  const double arm = o.arm * L0;

  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
  double hi_x = -lo_x, hi_y = -lo_x;
  for (const auto& p : x) {
    lo_x = std::min(lo_x, p[0] - arm);
    lo_y = std::min(lo_y, p[1] - arm);
    hi_x = std::max(hi_x, p[0] + arm);
    hi_y = std::max(hi_y, p[1] + arm);
  }
  if (x.empty()) lo_x = lo_y = 0.0, hi_x = hi_y = L0;
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12 * L0});
  const double margin = 0.05 * span;
  lo_x -= margin, lo_y -= margin, hi_x += margin, hi_y += margin;
  const double w = hi_x - lo_x, h = hi_y - lo_y;

  std::string out;
  out.reserve(256 + 200 * (x.size() * 2 + lattice.edge_count()));
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w / L0 * o.pixels_per_L0) +
         "\" height=\"" + num(h / L0 * o.pixels_per_L0) + "\" viewBox=\"" + num(lo_x) + " " +
         num(-hi_y) + " " + num(w) + " " + num(h) + "\">\n";
  out += "<rect x=\"" + num(lo_x) + "\" y=\"" + num(-hi_y) + "\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\" fill=\"" + o.background + "\"/>\n";
  out += "<g transform=\"scale(1,-1)\" stroke-linecap=\"round\">\n";
  out += " <g id=\"edges\" stroke=\"" + o.edge_color + "\" stroke-width=\"" + num(o.edge_width * L0) + "\">\n";
  for (const Edge& e : lattice.edges()) out += line(x[e.a], x[e.b], "edge");
  out += " </g>\n";
  out += " <g id=\"crosses\" stroke=\"" + o.cross_color + "\" stroke-width=\"" + num(o.cross_width * L0) + "\">\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Vec2 u = arm * Vec2(std::cos(theta[i]), std::sin(theta[i]));
    const Vec2 v(-u[1], u[0]);
    out += line(x[i] - u, x[i] + u, "cross");
    out += line(x[i] - v, x[i] + v, "cross");
  }
  out += " </g>\n</g>\n</svg>\n";
  return out;
}

}  // namespace mgn
