#include "mwlab/dyadic.hpp"

#include <algorithm>
#include <sstream>

namespace mwlab {

namespace {

int wrap(int value, int modulus) {
  const int r = value % modulus;
  return r < 0 ? r + modulus : r;
}

}  // namespace

std::array<int, 2> GridSpec::cell_coords(int cell) const {
  const int n = cells_per_axis();
  if (dimension == 1) return {cell, 0};
  return {cell % n, cell / n};
}

int GridSpec::cell_index(int x, int y) const {
  const int n = cells_per_axis();
  if (dimension == 1) return wrap(x, n);
  return wrap(x, n) + n * wrap(y, n);
}

std::array<double, 2> GridSpec::cell_center(int cell) const {
  const auto c = cell_coords(cell);
  const double h = 1.0 / cells_per_axis();
  return {(c[0] + 0.5) * h, dimension == 1 ? 0.0 : (c[1] + 0.5) * h};
}

void GridSpec::validate() const {
  if (dimension != 1 && dimension != 2) throw ConfigError("grid dimension must be 1 or 2");
  if (depth < 0 || depth > (dimension == 1 ? 12 : 7))
    throw ConfigError("grid depth out of range for dimension " + std::to_string(dimension));
}

int DyadicCube::offset_cells(int axis, int depth) const {
  const int magnitude = shift[axis] ? (1 << (depth - level)) : 0;
  return (level % 2 == 0) ? magnitude : -magnitude;
}

std::string DyadicCube::describe() const {
  std::ostringstream os;
  os << "k=" << level << " t=(" << shift[0] << "," << shift[1] << ") corner=(" << corner[0]
     << "," << corner[1] << ") side=" << side;
  return os.str();
}

DyadicLattice::DyadicLattice(const GridSpec& grid, Shift shift) : grid_(grid), shift_(shift) {
  grid_.validate();
  for (int axis = 0; axis < 2; ++axis) {
    if (shift[axis] != 0 && shift[axis] != 1) throw ConfigError("shift components must be 0 or 1/3");
    if (axis >= grid.dimension && shift[axis] != 0)
      throw ConfigError("shift given on an axis beyond the grid dimension");
  }
  const int L = grid.depth;
  const int n = grid.cells_per_axis();
  const int d = grid.dimension;
  levels_.resize(L + 1);
  owner_.assign(L + 1, std::vector<int>(grid.cell_count(), -1));

  for (int k = 0; k <= L; ++k) {
    const int side = 3 << (L - k);
    const int per_axis = 1 << k;
    const int count_y = d == 2 ? per_axis : 1;
    for (int my = 0; my < count_y; ++my) {
      for (int mx = 0; mx < per_axis; ++mx) {
        DyadicCube q;
        q.level = k;
        q.shift = shift;
        q.side = side;
        q.corner = {wrap(mx * side + q.offset_cells(0, L), n),
                    d == 2 ? wrap(my * side + q.offset_cells(1, L), n) : 0};
        const int rows = d == 2 ? side : 1;
        q.cells.reserve(static_cast<std::size_t>(side) * rows);
        for (int j = 0; j < rows; ++j)
          for (int i = 0; i < side; ++i)
            q.cells.push_back(grid.cell_index(q.corner[0] + i, q.corner[1] + j));
        const int index = static_cast<int>(cubes_.size());
        for (int c : q.cells) owner_[k][c] = index;
        levels_[k].push_back(index);
        cubes_.push_back(std::move(q));
      }
    }
  }
  for (int k = 1; k <= L; ++k) {
    for (int index : levels_[k]) {
      DyadicCube& q = cubes_[index];
      q.parent = owner_[k - 1][q.cells.front()];
      cubes_[q.parent].children.push_back(index);
    }
  }
}

std::span<const int> DyadicLattice::level(int k) const { return levels_.at(k); }

std::vector<int> DyadicLattice::descendants(int cube) const {
  std::vector<int> out;
  std::vector<int> stack{cube};
  while (!stack.empty()) {
    const int q = stack.back();
    stack.pop_back();
    out.push_back(q);
    const auto& kids = cubes_[q].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

int DyadicLattice::relative_coord(const DyadicCube& q, int cell, int axis) const {
  const auto c = grid_.cell_coords(cell);
  return wrap(c[axis] - q.corner[axis], grid_.cells_per_axis());
}

DyadicLattice build_lattice(const GridSpec& grid, Shift shift) { return DyadicLattice(grid, shift); }

std::vector<Shift> all_shifts(int dimension) {
  if (dimension == 1) return {{0, 0}, {1, 0}};
  return {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
}

CubeFamily CubeFamily::all_shifts(const GridSpec& grid, int max_level) {
  CubeFamily family;
  family.grid_ = grid;
  if (max_level < 0 || max_level > grid.depth) max_level = grid.depth;
  bool have_root = false;
  for (const Shift& t : mwlab::all_shifts(grid.dimension)) {
    auto lattice = std::make_shared<const DyadicLattice>(grid, t);
    const int li = static_cast<int>(family.lattices_.size());
    family.lattices_.push_back(lattice);
    for (int k = 0; k <= max_level; ++k) {
      for (int c : lattice->level(k)) {
        if (k == 0) {
          if (have_root) continue;
          have_root = true;
        }
        family.refs_.push_back({li, c});
      }
    }
  }
  return family;
}

CubeFamily CubeFamily::single(const GridSpec& grid, Shift shift, int max_level) {
  CubeFamily family;
  family.grid_ = grid;
  if (max_level < 0 || max_level > grid.depth) max_level = grid.depth;
  auto lattice = std::make_shared<const DyadicLattice>(grid, shift);
  family.lattices_.push_back(lattice);
  for (int k = 0; k <= max_level; ++k)
    for (int c : lattice->level(k)) family.refs_.push_back({0, c});
  return family;
}

CubeFamily CubeFamily::one(std::shared_ptr<const DyadicLattice> lattice, int cube) {
  CubeFamily family;
  family.grid_ = lattice->grid();
  family.lattices_.push_back(std::move(lattice));
  family.refs_.push_back({0, cube});
  return family;
}

std::string CubeFamily::describe(std::size_t i) const { return (*this)[i].describe(); }

CellSet make_cell_set(std::vector<int> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

}  // namespace mwlab
