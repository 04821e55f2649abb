#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sparsedom/dyadic.hpp"

namespace sparsedom {

/// Range of cubes over which a supremum is taken.
///
/// `AllMesh` is every mesh-aligned interval (1D) or square (2D); it is never
/// materialized, only visited. `Dyadic` is one grid, `Shifted` the union of
/// the 3^n shifted grids, `Explicit` a caller-supplied list.
class CubeCollection {
 public:
  enum class Kind { AllMesh, Dyadic, Shifted, Explicit };

  static CubeCollection all_mesh(const Domain& d);
  static CubeCollection dyadic(const DyadicGrid& grid);
  static CubeCollection shifted(const Domain& d);
  static CubeCollection explicit_list(const Domain& d, std::vector<Cube> cubes);

  Kind kind() const noexcept { return kind_; }
  const Domain& domain() const noexcept { return domain_; }
  std::string id() const;

  /// Visits every cube.
  void for_each(const std::function<void(const Cube&)>& visit) const;
  /// Visits the cubes R for which sup over R of avg(g chi_Q) can be attained.
  /// For `AllMesh` these are the subcubes of Q (clipping R to Q only raises the
  /// average); otherwise every cube meeting Q, passed unclipped.
  void for_each_meeting(const Cube& q, const std::function<void(const Cube&)>& visit) const;
  /// Number of cubes (for AllMesh the count of intervals or squares).
  Index size() const;

  /// Materialized list for the grid kinds; empty for AllMesh.
  const std::vector<Cube>& cubes() const noexcept { return cubes_; }

 private:
  CubeCollection(Kind k, const Domain& d) : kind_(k), domain_(d) {}

  Kind kind_;
  Domain domain_;
  std::vector<Cube> cubes_;
  std::vector<DyadicGrid> grids_;
  std::string id_;
};

}  // namespace sparsedom
