#pragma once

// Axis-aligned quadrilateral mesh built on a tensor root grid, with isotropic
// 1->4 refinement, 1-irregular closure and hanging-node aware edges.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lhp {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Box {
  double x0, y0, x1, y1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  double diameter() const;
  double cx() const { return 0.5 * (x0 + x1); }
  double cy() const { return 0.5 * (y0 + y1); }
};

/// Root tensor grid over [x0, x0 + nx*hx] x [y0, y0 + ny*hy]. `active` has nx*ny
/// entries indexed i + nx*j; inactive cells are holes or lie outside the domain.
struct RootGrid {
  double x0 = 0.0, y0 = 0.0;
  double hx = 1.0, hy = 1.0;
  int nx = 1, ny = 1;
  std::vector<bool> active;

  static RootGrid rectangle(double x0, double y0, double x1, double y1, int nx, int ny);
  bool is_active(long i, long j) const;
};

/// Build a root grid on a rectangle, deactivating cells whose centers fall in
/// any of the `holes` (each must be a union of whole grid cells).
RootGrid masked_grid(double x0, double y0, double x1, double y1, int nx, int ny,
                     std::span<const Box> holes);

struct Cell {
  int level = 0;
  std::int64_t i = 0, j = 0;
  int parent = -1;
  std::array<int, 4> children{-1, -1, -1, -1};
  int subdomain = 0;
  int order = 1;
  bool is_leaf() const { return children[0] < 0; }
};

/// Element sides, also used as edge orientation: 0 = x-, 1 = x+, 2 = y-, 3 = y+.
enum class Side : int { Left = 0, Right = 1, Bottom = 2, Top = 3 };

struct Edge {
  enum class Kind { Interior, Boundary };
  Kind kind = Kind::Interior;
  int k1 = -1;  // leaf index; on hanging sub-edges this is the fine element
  int k2 = -1;  // leaf index or -1 on the boundary
  Side side1 = Side::Left;  // side of k1 carrying the edge
  double h = 0.0;           // edge length
  std::array<double, 2> n1{};  // outward unit normal of k1
  std::array<double, 2> a{}, b{};  // end points
};

class Mesh {
 public:
  static constexpr int kMaxLevel = 40;

  Mesh() = default;
  /// Leaves = active root cells, all with the given order and subdomain 0.
  explicit Mesh(RootGrid grid, int order = 2);

  const RootGrid& grid() const { return grid_; }
  const std::vector<Cell>& cells() const { return cells_; }

  std::size_t num_leaves() const { return leaves_.size(); }
  /// Cell id of leaf `k`; leaves are ordered by ascending cell id.
  int leaf_cell(int k) const { return leaves_[k]; }
  /// Leaf index of a cell id or -1.
  int leaf_of_cell(int cell) const { return leaf_index_[cell]; }
  const Cell& leaf(int k) const { return cells_[leaves_[k]]; }

  Box box_of_cell(int cell) const;
  Box box(int k) const { return box_of_cell(leaves_[k]); }
  int order(int k) const { return leaf(k).order; }
  int subdomain(int k) const { return leaf(k).subdomain; }
  int level(int k) const { return leaf(k).level; }

  void set_order(int k, int p) { cells_[leaves_[k]].order = p; }
  void set_subdomain(int k, int s) { cells_[leaves_[k]].subdomain = s; }

  /// Cell id at (level, i, j) or -1.
  int find(int level, std::int64_t i, std::int64_t j) const;

  /// Split the leaf cells into four children each, first refining coarser
  /// neighbors so that no side carries more than one hanging node.
  void refine_cells(std::span<const int> cells);

  double area() const;
  int max_level_jump() const;

  std::vector<Edge> edges() const;

 private:
  void rebuild_leaves();
  void refine_cell(int cell);
  void split(int cell);
  bool region_in_domain(int level, std::int64_t i, std::int64_t j) const;
  /// Leaf covering the level-`level` cell position (i, j), or -1 if the
  /// position is outside the domain or covered by finer cells only.
  int covering_leaf(int level, std::int64_t i, std::int64_t j) const;
  struct CellKey {
    int level;
    std::int64_t i, j;
    bool operator==(const CellKey&) const = default;
  };
  struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const {
      std::uint64_t h = static_cast<std::uint64_t>(k.level) * 0x9E3779B97F4A7C15ULL;
      h ^= static_cast<std::uint64_t>(k.i) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
      h ^= static_cast<std::uint64_t>(k.j) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  RootGrid grid_;
  std::vector<Cell> cells_;
  std::unordered_map<CellKey, int, CellKeyHash> lookup_;
  std::vector<int> leaves_;
  std::vector<int> leaf_index_;
};

/// Tensor mesh on a root grid; cells outside the mask are dropped.
Mesh build_tensor_mesh(const RootGrid& grid, int order = 2);

/// New mesh with every marked leaf split and 1-irregular closure applied;
/// children inherit subdomain and order.
Mesh refine_elements(const Mesh& mesh, std::span<const int> marked_leaves);

std::vector<Edge> enumerate_edges(const Mesh& mesh);

/// Ancestor relation between two meshes grown from the same root grid: for
/// each leaf of `fine`, the leaf of `coarse` containing it. Throws MeshError if
/// the meshes are not nested.
std::vector<int> ancestor_leaves(const Mesh& coarse, const Mesh& fine);

void write_mesh_dump(std::ostream& os, const Mesh& mesh);

}  // namespace lhp
