#include "lhp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace lhp {

namespace {

constexpr std::array<std::array<int, 2>, 4> kSideOffset{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
constexpr std::array<std::array<double, 2>, 4> kSideNormal{{{-1.0, 0.0}, {1.0, 0.0}, {0.0, -1.0}, {0.0, 1.0}}};

bool on_grid_line(double v, double origin, double h) {
  const double t = (v - origin) / h;
  return std::abs(t - std::round(t)) < 1e-9;
}

}  // namespace

double Box::diameter() const { return std::hypot(width(), height()); }

RootGrid RootGrid::rectangle(double x0, double y0, double x1, double y1, int nx, int ny) {
  if (nx < 1 || ny < 1) throw MeshError("root grid needs nx, ny >= 1");
  if (!(x1 > x0) || !(y1 > y0)) throw MeshError("root grid needs a non-degenerate rectangle");
  RootGrid g;
  g.x0 = x0;
  g.y0 = y0;
  g.hx = (x1 - x0) / nx;
  g.hy = (y1 - y0) / ny;
  g.nx = nx;
  g.ny = ny;
  g.active.assign(static_cast<std::size_t>(nx) * ny, true);
  return g;
}

bool RootGrid::is_active(long i, long j) const {
  if (i < 0 || j < 0 || i >= nx || j >= ny) return false;
  return active[static_cast<std::size_t>(i + static_cast<long>(nx) * j)];
}

RootGrid masked_grid(double x0, double y0, double x1, double y1, int nx, int ny,
                     std::span<const Box> holes) {
  RootGrid g = RootGrid::rectangle(x0, y0, x1, y1, nx, ny);
  for (const Box& hole : holes) {
    if (!on_grid_line(hole.x0, g.x0, g.hx) || !on_grid_line(hole.x1, g.x0, g.hx) ||
        !on_grid_line(hole.y0, g.y0, g.hy) || !on_grid_line(hole.y1, g.y0, g.hy))
      throw MeshError("mask rectangle [" + std::to_string(hole.x0) + "," + std::to_string(hole.x1) + "]x[" +
                      std::to_string(hole.y0) + "," + std::to_string(hole.y1) + "] is not aligned with the " +
                      std::to_string(nx) + "x" + std::to_string(ny) + " grid");
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double cx = g.x0 + (i + 0.5) * g.hx;
        const double cy = g.y0 + (j + 0.5) * g.hy;
        if (cx > hole.x0 && cx < hole.x1 && cy > hole.y0 && cy < hole.y1)
          g.active[static_cast<std::size_t>(i + nx * j)] = false;
      }
  }
  return g;
}

Mesh::Mesh(RootGrid grid, int order) : grid_(std::move(grid)) {
  if (grid_.active.size() != static_cast<std::size_t>(grid_.nx) * grid_.ny)
    throw MeshError("root grid mask has the wrong size");
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) {
      if (!grid_.is_active(i, j)) continue;
      Cell c;
      c.level = 0;
      c.i = i;
      c.j = j;
      c.order = order;
      lookup_.emplace(CellKey{0, i, j}, static_cast<int>(cells_.size()));
      cells_.push_back(c);
    }
  if (cells_.empty()) throw MeshError("mesh has no active cells");
  rebuild_leaves();
}


int Mesh::find(int level, std::int64_t i, std::int64_t j) const {
  if (i < 0 || j < 0) return -1;
  const auto it = lookup_.find(CellKey{level, i, j});
  return it == lookup_.end() ? -1 : it->second;
}

Box Mesh::box_of_cell(int cell) const {
  const Cell& c = cells_[cell];
  const double sx = grid_.hx / static_cast<double>(std::int64_t{1} << c.level);
  const double sy = grid_.hy / static_cast<double>(std::int64_t{1} << c.level);
  return {grid_.x0 + c.i * sx, grid_.y0 + c.j * sy, grid_.x0 + (c.i + 1) * sx, grid_.y0 + (c.j + 1) * sy};
}

bool Mesh::region_in_domain(int level, std::int64_t i, std::int64_t j) const {
  if (i < 0 || j < 0) return false;
  return grid_.is_active(static_cast<long>(i >> level), static_cast<long>(j >> level));
}

int Mesh::covering_leaf(int level, std::int64_t i, std::int64_t j) const {
  if (!region_in_domain(level, i, j)) return -1;
  for (int l = level; l >= 0; --l) {
    const int c = find(l, i >> (level - l), j >> (level - l));
    if (c < 0) continue;
    return cells_[c].is_leaf() ? c : -1;
  }
  return -1;
}

void Mesh::split(int cell) {
  const Cell parent = cells_[cell];
  if (parent.level >= kMaxLevel) throw MeshError("maximum refinement level exceeded");
  for (int q = 0; q < 4; ++q) {
    Cell child;
    child.level = parent.level + 1;
    child.i = 2 * parent.i + (q & 1);
    child.j = 2 * parent.j + (q >> 1);
    child.parent = cell;
    child.subdomain = parent.subdomain;
    child.order = parent.order;
    const int id = static_cast<int>(cells_.size());
    lookup_.emplace(CellKey{child.level, child.i, child.j}, id);
    cells_.push_back(child);
    cells_[cell].children[q] = id;
  }
}

void Mesh::refine_cell(int cell) {
  if (!cells_[cell].is_leaf()) return;
  for (int s = 0; s < 4; ++s) {
    for (;;) {
      const Cell& c = cells_[cell];
      const std::int64_t ni = c.i + kSideOffset[s][0];
      const std::int64_t nj = c.j + kSideOffset[s][1];
      if (!region_in_domain(c.level, ni, nj) || find(c.level, ni, nj) >= 0) break;
      int coarse = -1;
      for (int l = c.level - 1; l >= 0 && coarse < 0; --l)
        coarse = find(l, ni >> (c.level - l), nj >> (c.level - l));
      if (coarse < 0) break;
      refine_cell(coarse);
    }
  }
  split(cell);
}

void Mesh::refine_cells(std::span<const int> cells) {
  for (int c : cells) refine_cell(c);
  rebuild_leaves();
}

void Mesh::rebuild_leaves() {
  leaves_.clear();
  leaf_index_.assign(cells_.size(), -1);
  for (int c = 0; c < static_cast<int>(cells_.size()); ++c)
    if (cells_[c].is_leaf()) {
      leaf_index_[c] = static_cast<int>(leaves_.size());
      leaves_.push_back(c);
    }
}

double Mesh::area() const {
  double a = 0.0;
  for (std::size_t k = 0; k < leaves_.size(); ++k) a += box(static_cast<int>(k)).area();
  return a;
}

std::vector<Edge> Mesh::edges() const {
  std::vector<Edge> out;
  out.reserve(2 * leaves_.size() + 8);
  for (int k = 0; k < static_cast<int>(leaves_.size()); ++k) {
    const int cell = leaves_[k];
    const Cell& c = cells_[cell];
    const Box bx = box_of_cell(cell);
    for (int s = 0; s < 4; ++s) {
      const std::int64_t ni = c.i + kSideOffset[s][0];
      const std::int64_t nj = c.j + kSideOffset[s][1];
      Edge e;
      e.k1 = k;
      e.side1 = static_cast<Side>(s);
      e.n1 = kSideNormal[s];
      switch (s) {
        case 0: e.a = {bx.x0, bx.y0}; e.b = {bx.x0, bx.y1}; break;
        case 1: e.a = {bx.x1, bx.y0}; e.b = {bx.x1, bx.y1}; break;
        case 2: e.a = {bx.x0, bx.y0}; e.b = {bx.x1, bx.y0}; break;
        default: e.a = {bx.x0, bx.y1}; e.b = {bx.x1, bx.y1}; break;
      }
      e.h = s < 2 ? bx.height() : bx.width();
      if (!region_in_domain(c.level, ni, nj)) {
        e.kind = Edge::Kind::Boundary;
        out.push_back(e);
        continue;
      }
      const int same = find(c.level, ni, nj);
      if (same >= 0) {
        if (!cells_[same].is_leaf() || same < cell) continue;  // finer side or already emitted
        e.kind = Edge::Kind::Interior;
        e.k2 = leaf_index_[same];
        out.push_back(e);
        continue;
      }
      const int coarse = covering_leaf(c.level, ni, nj);
      if (coarse < 0) throw MeshError("inconsistent refinement forest");
      e.kind = Edge::Kind::Interior;
      e.k2 = leaf_index_[coarse];
      out.push_back(e);
    }
  }
  return out;
}

int Mesh::max_level_jump() const {
  int jump = 0;
  for (const Edge& e : edges())
    if (e.kind == Edge::Kind::Interior) jump = std::max(jump, std::abs(level(e.k1) - level(e.k2)));
  return jump;
}

Mesh build_tensor_mesh(const RootGrid& grid, int order) { return Mesh(grid, order); }

Mesh refine_elements(const Mesh& mesh, std::span<const int> marked_leaves) {
  Mesh out = mesh;
  std::vector<int> cells;
  cells.reserve(marked_leaves.size());
  for (int k : marked_leaves) {
    if (k < 0 || k >= static_cast<int>(mesh.num_leaves())) throw MeshError("marked element is not a leaf");
    cells.push_back(mesh.leaf_cell(k));
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  out.refine_cells(cells);
  return out;
}

std::vector<Edge> enumerate_edges(const Mesh& mesh) { return mesh.edges(); }

std::vector<int> ancestor_leaves(const Mesh& coarse, const Mesh& fine) {
  const RootGrid& gc = coarse.grid();
  const RootGrid& gf = fine.grid();
  if (gc.nx != gf.nx || gc.ny != gf.ny || gc.active != gf.active || gc.x0 != gf.x0 || gc.y0 != gf.y0 ||
      gc.hx != gf.hx || gc.hy != gf.hy)
    throw MeshError("meshes do not share a root grid");
  std::vector<int> anc(fine.num_leaves(), -1);
  for (int k = 0; k < static_cast<int>(fine.num_leaves()); ++k) {
    const Cell& c = fine.leaf(k);
    for (int l = c.level; l >= 0; --l) {
      const int id = coarse.find(l, c.i >> (c.level - l), c.j >> (c.level - l));
      if (id < 0) continue;
      const int leaf = coarse.leaf_of_cell(id);
      if (leaf < 0) throw MeshError("spaces are not nested: coarse mesh is finer somewhere");
      if (coarse.order(leaf) > fine.order(k)) throw MeshError("spaces are not nested: order decreases");
      anc[k] = leaf;
      break;
    }
    if (anc[k] < 0) throw MeshError("spaces are not nested");
  }
  return anc;
}

void write_mesh_dump(std::ostream& os, const Mesh& mesh) {
  os << "mesh v1 " << mesh.num_leaves() << '\n';
  os << std::setprecision(17);
  for (int k = 0; k < static_cast<int>(mesh.num_leaves()); ++k) {
    const Box b = mesh.box(k);
    os << k << ' ' << mesh.level(k) << ' ' << b.x0 << ' ' << b.y0 << ' ' << b.x1 << ' ' << b.y1 << ' '
       << mesh.subdomain(k) << ' ' << mesh.order(k) << '\n';
  }
}

}  // namespace lhp
