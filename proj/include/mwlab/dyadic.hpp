#pragma once

// Shifted dyadic lattices on the discretised torus [0,1)^d.
//
// The torus is cut into N = 3 * 2^L cells per axis. A cube of level k has
// side 3 * 2^(L-k) cells and the 1/3-shifted lattice displaces level-k
// corners by (-1)^k * 2^(L-k) cells, so every cube of every shifted lattice
// is an exact union of cells. Cubes wrap around the torus.

#include "mwlab/common.hpp"

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mwlab {

struct GridSpec {
  int dimension = 1;  // 1 or 2
  int depth = 0;      // L

  int cells_per_axis() const { return 3 << depth; }
  int cell_count() const {
    const int n = cells_per_axis();
    return dimension == 1 ? n : n * n;
  }
  double cell_volume() const { return 1.0 / cell_count(); }
  /// Cell centre in [0,1)^d (second coordinate is 0 when d = 1).
  std::array<double, 2> cell_center(int cell) const;
  std::array<int, 2> cell_coords(int cell) const;
  int cell_index(int x, int y = 0) const;
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Per-axis shift bits: bit 1 on axis i means t_i = 1/3.
using Shift = std::array<int, 2>;

struct DyadicCube {
  int level = 0;
  std::array<int, 2> corner{0, 0};  // lower corner in cells, reduced mod N
  Shift shift{0, 0};
  int side = 0;                     // side length in cells
  std::vector<int> cells;           // member cells, axis-0 fastest
  int parent = -1;                  // index within the owning lattice
  std::vector<int> children;

  std::size_t cell_count() const { return cells.size(); }
  /// Parity-signed shift offset of this level in cells, per axis.
  int offset_cells(int axis, int depth) const;
  std::string describe() const;
};

class DyadicLattice {
 public:
  DyadicLattice(const GridSpec& grid, Shift shift);

  const GridSpec& grid() const { return grid_; }
  const Shift& shift() const { return shift_; }
  const std::vector<DyadicCube>& cubes() const { return cubes_; }
  const DyadicCube& cube(int i) const { return cubes_[i]; }
  int size() const { return static_cast<int>(cubes_.size()); }
  /// Indices of the cubes of one level, in lattice order.
  std::span<const int> level(int k) const;
  /// Index of the level-k cube containing a cell.
  int owner(int level, int cell) const { return owner_[level][cell]; }
  /// D(J): J and all of its descendants, pre-order.
  std::vector<int> descendants(int cube) const;
  /// Position of a cell inside a cube along one axis, in [0, side).
  int relative_coord(const DyadicCube& q, int cell, int axis) const;

 private:
  GridSpec grid_;
  Shift shift_;
  std::vector<DyadicCube> cubes_;
  std::vector<std::vector<int>> levels_;
  std::vector<std::vector<int>> owner_;
};

DyadicLattice build_lattice(const GridSpec& grid, Shift shift);

/// The 2^d shift tags {0, 1/3}^d in canonical order.
std::vector<Shift> all_shifts(int dimension);

/// A finite family of cubes drawn from one or more shifted lattices; the
/// index set of every supremum. Cubes covering the whole torus appear once.
class CubeFamily {
 public:
  struct Ref {
    int lattice;
    int cube;
  };

  /// Levels 0..max_level (default: grid depth) of all 2^d shifted lattices.
  static CubeFamily all_shifts(const GridSpec& grid, int max_level = -1);
  /// Levels 0..max_level of a single lattice.
  static CubeFamily single(const GridSpec& grid, Shift shift = {0, 0}, int max_level = -1);
  /// Exactly one cube.
  static CubeFamily one(std::shared_ptr<const DyadicLattice> lattice, int cube);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return refs_.size(); }
  const DyadicCube& operator[](std::size_t i) const {
    return lattices_[refs_[i].lattice]->cube(refs_[i].cube);
  }
  const Ref& ref(std::size_t i) const { return refs_[i]; }
  const std::vector<std::shared_ptr<const DyadicLattice>>& lattices() const { return lattices_; }
  std::string describe(std::size_t i) const;

 private:
  GridSpec grid_;
  std::vector<std::shared_ptr<const DyadicLattice>> lattices_;
  std::vector<Ref> refs_;
};

/// Sorted, duplicate-free list of cell indices.
using CellSet = std::vector<int>;

CellSet make_cell_set(std::vector<int> cells);

}  // namespace mwlab
