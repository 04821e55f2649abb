#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sparsedom/mesh.hpp"

namespace sparsedom {

/// Half-open box of cells [lo, hi) per axis. Cubes produced by grids have
/// equal sides unless they were clipped at the domain boundary.
struct Cube {
  int dim = 1;
  std::array<Index, 2> lo{0, 0};
  std::array<Index, 2> hi{1, 1};

  static Cube interval(Index lo, Index hi) { return Cube{1, {lo, 0}, {hi, 1}}; }
  static Cube square(Index lo0, Index lo1, Index side) { return Cube{2, {lo0, lo1}, {lo0 + side, lo1 + side}}; }
  /// Whole domain as a box.
  static Cube of_domain(const Domain& d);

  Index side(int axis = 0) const noexcept { return hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)]; }
  Index max_side() const noexcept { return dim == 1 ? side(0) : std::max(side(0), side(1)); }
  Index cell_count() const noexcept { return dim == 1 ? side(0) : side(0) * side(1); }
  bool is_cube() const noexcept { return dim == 1 || side(0) == side(1); }
  bool empty() const noexcept { return side(0) <= 0 || (dim == 2 && side(1) <= 0); }

  bool contains(Index i0, Index i1 = 0) const noexcept {
    return i0 >= lo[0] && i0 < hi[0] && (dim == 1 || (i1 >= lo[1] && i1 < hi[1]));
  }
  bool contains(const Cube& other) const noexcept;
  bool intersects(const Cube& other) const noexcept;
  Cube intersection(const Cube& other) const noexcept;
  bool inside(const Domain& d) const noexcept;

  /// Measure in domain units.
  double measure(const Domain& d) const noexcept { return static_cast<double>(cell_count()) * d.cell_volume(); }

  /// Flat indices of the cells, in storage order.
  std::vector<Index> cells(const Domain& d) const;

  friend bool operator==(const Cube&, const Cube&) = default;
  friend auto operator<=>(const Cube& a, const Cube& b) noexcept {
    return std::tie(a.dim, a.lo, a.hi) <=> std::tie(b.dim, b.lo, b.hi);
  }
};

std::string to_string(const Cube& q);

/// The 2^n halves of Q; every side must be even.
std::vector<Cube> children(const Cube& q);

/// lambda*Q with the same center, without clipping. lambda must be odd.
Cube dilate_unclipped(const Cube& q, Index lambda);
/// lambda*Q intersected with the domain.
Cube dilate(const Cube& q, Index lambda, const Domain& d);

/// Summed-area table for O(1) box sums of a grid function.
class CellSums {
 public:
  explicit CellSums(const GridFunction& f);

  long double sum(const Cube& q) const noexcept;
  double average(const Cube& q) const noexcept { return static_cast<double>(sum(q) / static_cast<long double>(q.cell_count())); }
  const Domain& domain() const noexcept { return domain_; }

 private:
  Domain domain_;
  Index stride_;
  std::vector<long double> table_;
};

/// Dyadic grid {2^-k([0,1)^n + j + (-1)^k t)} restricted to the domain.
/// The shift is stored as 3t in {0,1,2}^n; cubes crossing the boundary are clipped.
class DyadicGrid {
 public:
  DyadicGrid(const Domain& domain, std::array<int, 2> shift3 = {0, 0});

  const Domain& domain() const noexcept { return domain_; }
  std::array<int, 2> shift3() const noexcept { return shift3_; }

  int coarsest_level() const noexcept { return -(domain_.half_width_log2() + 1); }
  int finest_level() const noexcept { return domain_.refinement(); }
  /// Unclipped side length in cells at level k.
  Index side_cells(int level) const noexcept { return Index{3} << (domain_.refinement() - level); }

  /// Clipped grid cube at the given level containing cell (i0, i1).
  Cube cube_containing(int level, Index i0, Index i1 = 0) const;
  /// All clipped cubes of one level; they partition the domain.
  std::vector<Cube> cubes_at(int level) const;
  /// Every cube of every level, coarse to fine.
  std::vector<Cube> all_cubes() const;

 private:
  Index boundary_offset(int level, int axis) const noexcept;
  std::pair<Index, Index> interval_containing(int level, int axis, Index i) const noexcept;

  Domain domain_;
  std::array<int, 2> shift3_;
};

/// The 3^n grids with t in {0, 1/3, 2/3}^n.
std::vector<DyadicGrid> shifted_grids(const Domain& domain);

/// Smallest cube of any shifted grid that contains r (the domain cube is the fallback).
Cube smallest_covering_cube(const Domain& domain, const Cube& r);

/// Cell range [first, last) in flat storage order.
using CellRange = std::pair<Index, Index>;

/// Cubes with disjoint witness sets E_Q, |E_Q| >= eta |Q|. eta is kept as an
/// exact fraction so the check runs in integer arithmetic.
struct SparseFamily {
  Domain domain;
  long eta_num = 1;
  long eta_den = 1;
  std::vector<Cube> cubes;
  std::vector<std::vector<CellRange>> witnesses;

  explicit SparseFamily(const Domain& d, long num = 1, long den = 1) : domain(d), eta_num(num), eta_den(den) {}

  double eta() const noexcept { return static_cast<double>(eta_num) / static_cast<double>(eta_den); }
  std::size_t size() const noexcept { return cubes.size(); }
  void add(const Cube& q, std::vector<CellRange> witness);
  /// Sort cubes (and their witnesses) lexicographically.
  void sort();
};

/// Converts a sorted list of flat indices into maximal runs.
std::vector<CellRange> ranges_from_cells(std::vector<Index> cells);
Index range_cell_count(const std::vector<CellRange>& ranges) noexcept;

struct SparseCheck {
  bool ok = true;
  std::string message;
  std::optional<std::size_t> cube;
  std::optional<Index> cell;
};

/// Exact check of witness containment, density and pairwise disjointness.
SparseCheck verify_sparse(const SparseFamily& s);

std::string family_to_json(const SparseFamily& s);
SparseFamily family_from_json(const std::string& text);

}  // namespace sparsedom
