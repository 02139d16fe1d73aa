#include "mgn/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mgn/error.hpp"

namespace mgn {

double base_radius(const PoreShape& shape) {
  return shape.L0 * std::sqrt(2.0 * shape.phi0) /
         std::sqrt(std::numbers::pi * (2.0 + shape.xi * shape.xi));
}

double pore_radius(const PoreShape& shape, double alpha) {
  return base_radius(shape) * (1.0 + shape.xi * std::cos(4.0 * alpha));
}

const ShapeCheck* ShapeValidity::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ShapeValidity validate_pore_shape(const PoreShape& shape, int samples) {
  ShapeValidity report;
  samples = std::max(samples, 360);

  ShapeCheck params{"parameters", true, 0.0, 0.0, ""};
  std::ostringstream why;
  if (!(shape.phi0 > 0.0 && shape.phi0 < 1.0)) why << "phi0 must lie in (0, 1); ";
  if (!(shape.L0 > 0.0)) why << "L0 must be positive; ";
  if (!std::isfinite(shape.xi)) why << "xi must be finite; ";
  params.detail = why.str();
  params.ok = params.detail.empty();
  report.checks.push_back(params);

  ShapeCheck positivity{"positivity", true, 0.0, 0.0, ""};
  ShapeCheck containment{"containment", true, 0.0, 0.0, ""};
  if (params.ok) {
    double worst_pos = std::numeric_limits<double>::infinity();
    double worst_con = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
      const double alpha = 2.0 * std::numbers::pi * k / samples;
      const double r = pore_radius(shape, alpha);
      const double wall =
          shape.L0 / (2.0 * std::max(std::abs(std::cos(alpha)), std::abs(std::sin(alpha))));
      if (r < worst_pos) {
        worst_pos = r;
        positivity.worst_alpha = alpha;
      }
      if (wall - r < worst_con) {
        worst_con = wall - r;
        containment.worst_alpha = alpha;
      }
    }
    positivity.margin = worst_pos;
    containment.margin = worst_con;
    positivity.ok = std::abs(shape.xi) < 1.0 && worst_pos > 0.0;
    containment.ok = worst_con > 0.0;
    if (!positivity.ok) positivity.detail = "pore radius not positive for all alpha (|xi| must be < 1)";
    if (!containment.ok) containment.detail = "pore reaches the cell boundary";
  } else {
    positivity.ok = containment.ok = false;
    positivity.detail = containment.detail = "skipped: invalid parameters";
  }
  report.checks.push_back(positivity);
  report.checks.push_back(containment);

  report.valid = std::all_of(report.checks.begin(), report.checks.end(),
                             [](const ShapeCheck& c) { return c.ok; });
  return report;
}

Lattice::Lattice(int rows, int cols, PoreShape shape, std::vector<Vec2> ref_positions,
                 std::vector<double> ref_orientations, std::vector<double> masses,
                 std::vector<double> inertias, std::vector<Edge> edges)
    : rows_(rows),
      cols_(cols),
      shape_(shape),
      ref_positions_(std::move(ref_positions)),
      ref_orientations_(std::move(ref_orientations)),
      masses_(std::move(masses)),
      inertias_(std::move(inertias)),
      edges_(std::move(edges)) {
  const auto n = ref_positions_.size();
  if (ref_orientations_.size() != n || masses_.size() != n || inertias_.size() != n) {
    fail(ErrorCode::kInvalidArgument, "lattice: per-node arrays differ in length");
  }
  for (const auto& e : edges_) {
    if (e.a < 0 || e.b < 0 || static_cast<std::size_t>(e.a) >= n ||
        static_cast<std::size_t>(e.b) >= n || e.a >= e.b) {
      fail(ErrorCode::kInvalidArgument,
           "lattice: edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
               ") is not canonical or out of range");
    }
  }
  if (!std::is_sorted(edges_.begin(), edges_.end()) ||
      std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    fail(ErrorCode::kInvalidArgument, "lattice: edges must be sorted and unique");
  }
  ref_lengths_.reserve(edges_.size());
  ref_angles_.reserve(edges_.size());
  incidence_.assign(n, {});
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Vec2 v = ref_positions_[edges_[k].b] - ref_positions_[edges_[k].a];
    ref_lengths_.push_back(v.norm());
    ref_angles_.push_back(std::atan2(v.y(), v.x()));
    incidence_[edges_[k].a].push_back(static_cast<int>(k));
    incidence_[edges_[k].b].push_back(static_cast<int>(k));
  }
}

std::vector<int> Lattice::row_nodes(int row) const {
  std::vector<int> out;
  if (row < 0 || row >= rows_) return out;
  for (int c = 0; c < cols_; ++c) out.push_back(node_index(row, c));
  return out;
}

std::vector<int> Lattice::col_nodes(int col) const {
  std::vector<int> out;
  if (col < 0 || col >= cols_) return out;
  for (int r = 0; r < rows_; ++r) out.push_back(node_index(r, col));
  return out;
}

bool Lattice::is_grid_edge(Edge e) const {
  const int n = rows_ * cols_;
  if (e.a < 0 || e.b < 0 || e.a >= n || e.b >= n || e.a >= e.b) return false;
  if (e.b - e.a == cols_) return true;
  return e.b - e.a == 1 && e.a / cols_ == e.b / cols_;
}

bool Lattice::has_edge(Edge e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

std::size_t full_grid_edge_count(int rows, int cols) {
  if (rows < 1 || cols < 1) return 0;
  return static_cast<std::size_t>(rows) * (cols - 1) + static_cast<std::size_t>(rows - 1) * cols;
}

Lattice build_lattice(const LatticeSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) {
    fail(ErrorCode::kInvalidArgument, "lattice spec: rows and cols must be >= 1");
  }
  if (!(spec.density > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "lattice spec: density must be positive");
  }
  const auto validity = validate_pore_shape(spec.shape, 360);
  if (!validity.valid) {
    std::string msg = "lattice spec: invalid pore shape:";
    for (const auto& c : validity.checks) {
      if (!c.ok) msg += " [" + c.name + "] " + c.detail;
    }
    fail(ErrorCode::kInvalidArgument, msg);
  }
  if (spec.inertia_policy == InertiaPolicy::kConfigValue && !(spec.inertia_value > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "lattice spec: configured inertia must be positive");
  }

  const double L0 = spec.shape.L0;
  const double mass = spec.density * L0 * L0 * (1.0 - spec.shape.phi0);
  const double inertia = spec.inertia_policy == InertiaPolicy::kSolidSquare
                             ? mass * L0 * L0 / 6.0
                             : spec.inertia_value;
  const std::size_t n = static_cast<std::size_t>(spec.rows) * spec.cols;

  std::vector<Vec2> pos;
  pos.reserve(n);
  for (int i = 0; i < spec.rows; ++i) {
    for (int j = 0; j < spec.cols; ++j) pos.emplace_back(j * L0, i * L0);
  }

  std::vector<Edge> edges;
  edges.reserve(full_grid_edge_count(spec.rows, spec.cols));
  for (int i = 0; i < spec.rows; ++i) {
    for (int j = 0; j < spec.cols; ++j) {
      const int v = i * spec.cols + j;
      if (j + 1 < spec.cols) edges.push_back({v, v + 1});
      if (i + 1 < spec.rows) edges.push_back({v, v + spec.cols});
    }
  }

  return Lattice(spec.rows, spec.cols, spec.shape, std::move(pos), std::vector<double>(n, 0.0),
                 std::vector<double>(n, mass), std::vector<double>(n, inertia), std::move(edges));
}

DefectPattern DefectPattern::explicit_edges(std::vector<Edge> edges) {
  DefectPattern p;
  p.kind = Kind::kExplicit;
  p.edges = std::move(edges);
  return p;
}

DefectPattern DefectPattern::periodic_block(int block_rows, int block_cols,
                                            std::vector<BlockEdge> removed) {
  DefectPattern p;
  p.kind = Kind::kPeriodicBlock;
  p.block_rows = block_rows;
  p.block_cols = block_cols;
  p.removed = std::move(removed);
  return p;
}

namespace {

std::vector<Edge> expand_pattern(const Lattice& lattice, const DefectPattern& pattern) {
  std::vector<Edge> out;
  switch (pattern.kind) {
    case DefectPattern::Kind::kNone:
      break;
    case DefectPattern::Kind::kExplicit:
      for (Edge e : pattern.edges) {
        if (e.a > e.b) std::swap(e.a, e.b);
        if (!lattice.is_grid_edge(e)) {
          fail(ErrorCode::kInvalidArgument,
               "defects: (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                   ") is not an edge of the " + std::to_string(lattice.rows()) + "x" +
                   std::to_string(lattice.cols()) + " lattice");
        }
        out.push_back(e);
      }
      break;
    case DefectPattern::Kind::kPeriodicBlock: {
      const int br = pattern.block_rows;
      const int bc = pattern.block_cols;
      if (br < 1 || bc < 1) {
        fail(ErrorCode::kInvalidArgument, "defects: block size must be >= 1");
      }
      for (const auto& be : pattern.removed) {
        const bool horizontal = be.dir == EdgeDirection::kHorizontal;
        const bool inside = be.row >= 0 && be.col >= 0 && be.row < br && be.col < bc &&
                            (horizontal ? be.col + 1 < bc : be.row + 1 < br);
        if (!inside) {
          fail(ErrorCode::kInvalidArgument,
               "defects: block edge at (" + std::to_string(be.row) + ", " +
                   std::to_string(be.col) + ") does not lie inside a " + std::to_string(br) +
                   "x" + std::to_string(bc) + " block");
        }
      }
      for (int r0 = 0; r0 + br <= lattice.rows(); r0 += br) {
        for (int c0 = 0; c0 + bc <= lattice.cols(); c0 += bc) {
          for (const auto& be : pattern.removed) {
            const int a = lattice.node_index(r0 + be.row, c0 + be.col);
            const int b = be.dir == EdgeDirection::kHorizontal ? a + 1 : a + lattice.cols();
            out.push_back({a, b});
          }
        }
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Lattice apply_defects(const Lattice& lattice, const DefectPattern& pattern) {
  const auto removed = expand_pattern(lattice, pattern);
  if (removed.empty()) return lattice;
  std::vector<Edge> kept;
  kept.reserve(lattice.edge_count());
  std::set_difference(lattice.edges().begin(), lattice.edges().end(), removed.begin(),
                      removed.end(), std::back_inserter(kept));
  return Lattice(lattice.rows(), lattice.cols(), lattice.shape(), lattice.ref_positions(),
                 lattice.ref_orientations(), lattice.masses(), lattice.inertias(),
                 std::move(kept));
}

}  // namespace mgn
