#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace mgn {

using Vec2 = Eigen::Vector2d;

// Pore contour r(alpha) = r0 (1 + xi cos 4 alpha) inside a square cell of side L0.
struct PoreShape {
  double xi = 0.0;
  double phi0 = 0.5;
  double L0 = 1.0;
};

double base_radius(const PoreShape& shape);
double pore_radius(const PoreShape& shape, double alpha);

struct ShapeCheck {
  std::string name;
  bool ok = true;
  double worst_alpha = 0.0;  // angle where the margin is smallest
  double margin = 0.0;       // smallest slack found; negative when violated
  std::string detail;
};

struct ShapeValidity {
  bool valid = true;
  std::vector<ShapeCheck> checks;

  const ShapeCheck* find(const std::string& name) const;
};

/// Checks parameter ranges, radius positivity and containment of the pore in
/// the cell by a dense sweep over alpha. Never throws; failures are reported.
ShapeValidity validate_pore_shape(const PoreShape& shape, int samples = 3600);

enum class InertiaPolicy { kSolidSquare, kConfigValue };

struct LatticeSpec {
  int rows = 1;
  int cols = 1;
  PoreShape shape;
  double density = 1.0;
  InertiaPolicy inertia_policy = InertiaPolicy::kSolidSquare;
  double inertia_value = 0.0;  // used with kConfigValue
};

struct Edge {
  int a = 0;
  int b = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable reference geometry and topology of a cross-spring lattice.
/// Nodes are numbered row-major, node = row * cols + col, and sit at
/// (col * L0, row * L0). Edges are kept sorted with a < b.
class Lattice {
 public:
  Lattice() = default;
  Lattice(int rows, int cols, PoreShape shape, std::vector<Vec2> ref_positions,
          std::vector<double> ref_orientations, std::vector<double> masses,
          std::vector<double> inertias, std::vector<Edge> edges);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const PoreShape& shape() const { return shape_; }
  double L0() const { return shape_.L0; }

  std::size_t node_count() const { return ref_positions_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<Vec2>& ref_positions() const { return ref_positions_; }
  const std::vector<double>& ref_orientations() const { return ref_orientations_; }
  const std::vector<double>& masses() const { return masses_; }
  const std::vector<double>& inertias() const { return inertias_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<double>& ref_lengths() const { return ref_lengths_; }
  const std::vector<double>& ref_angles() const { return ref_angles_; }

  int node_index(int row, int col) const { return row * cols_ + col; }
  std::vector<int> row_nodes(int row) const;
  std::vector<int> col_nodes(int col) const;

  /// True when (a, b) are 4-neighbours of the underlying rows x cols grid.
  bool is_grid_edge(Edge e) const;
  bool has_edge(Edge e) const;

  /// Incident edge indices per node, ascending.
  const std::vector<std::vector<int>>& incidence() const { return incidence_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  PoreShape shape_;
  std::vector<Vec2> ref_positions_;
  std::vector<double> ref_orientations_;
  std::vector<double> masses_;
  std::vector<double> inertias_;
  std::vector<Edge> edges_;
  std::vector<double> ref_lengths_;
  std::vector<double> ref_angles_;
  std::vector<std::vector<int>> incidence_;
};

Lattice build_lattice(const LatticeSpec& spec);

std::size_t full_grid_edge_count(int rows, int cols);

enum class EdgeDirection { kHorizontal, kVertical };

// Edge anchored at local node (row, col) of a block, pointing right or up.
struct BlockEdge {
  int row = 0;
  int col = 0;
  EdgeDirection dir = EdgeDirection::kHorizontal;
};

struct DefectPattern {
  enum class Kind { kNone, kExplicit, kPeriodicBlock };

  Kind kind = Kind::kNone;
  std::vector<Edge> edges;          // kExplicit
  int block_rows = 0;               // kPeriodicBlock
  int block_cols = 0;
  std::vector<BlockEdge> removed;   // kPeriodicBlock

  static DefectPattern none() { return {}; }
  static DefectPattern explicit_edges(std::vector<Edge> edges);
  static DefectPattern periodic_block(int block_rows, int block_cols,
                                      std::vector<BlockEdge> removed);
};

/// Removes edges. Referencing a pair that is not a grid edge throws; removing
/// an edge that is already gone is a no-op, so the operation is idempotent.
Lattice apply_defects(const Lattice& lattice, const DefectPattern& pattern);

}  // namespace mgn
