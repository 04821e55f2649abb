#include "sparsedom/collection.hpp"

#include "sparsedom/error.hpp"

namespace sparsedom {

namespace {

void visit_subcubes(const Cube& box, const std::function<void(const Cube&)>& visit) {
  if (box.dim == 1) {
    for (Index a = box.lo[0]; a < box.hi[0]; ++a)
      for (Index b = a + 1; b <= box.hi[0]; ++b) visit(Cube::interval(a, b));
    return;
  }
  const Index top = std::min(box.side(0), box.side(1));
  for (Index s = 1; s <= top; ++s)
    for (Index i = box.lo[0]; i + s <= box.hi[0]; ++i)
      for (Index j = box.lo[1]; j + s <= box.hi[1]; ++j) visit(Cube::square(i, j, s));
}

void visit_grid_meeting(const DyadicGrid& g, const Cube& q, const std::function<void(const Cube&)>& visit) {
  const Domain& d = g.domain();
  for (int k = g.coarsest_level(); k <= g.finest_level(); ++k) {
    if (d.dim() == 1) {
      for (Index i = q.lo[0]; i < q.hi[0];) {
        const Cube c = g.cube_containing(k, i);
        visit(c);
        i = c.hi[0];
      }
      continue;
    }
    for (Index i = q.lo[0]; i < q.hi[0];) {
      Index next_i = q.hi[0];
      for (Index j = q.lo[1]; j < q.hi[1];) {
        const Cube c = g.cube_containing(k, i, j);
        visit(c);
        next_i = c.hi[0];
        j = c.hi[1];
      }
      i = next_i;
    }
  }
}

}  // namespace

CubeCollection CubeCollection::all_mesh(const Domain& d) {
  CubeCollection c(Kind::AllMesh, d);
  c.id_ = "all-mesh";
  return c;
}

CubeCollection CubeCollection::dyadic(const DyadicGrid& grid) {
  CubeCollection c(Kind::Dyadic, grid.domain());
  c.grids_.push_back(grid);
  c.cubes_ = grid.all_cubes();
  const auto t = grid.shift3();
  c.id_ = "dyadic(" + std::to_string(t[0]) + "/3" + (grid.domain().dim() == 2 ? "," + std::to_string(t[1]) + "/3" : "") + ")";
  return c;
}

CubeCollection CubeCollection::shifted(const Domain& d) {
  CubeCollection c(Kind::Shifted, d);
  c.grids_ = shifted_grids(d);
  for (const auto& g : c.grids_) {
    auto list = g.all_cubes();
    c.cubes_.insert(c.cubes_.end(), list.begin(), list.end());
  }
  c.id_ = "shifted";
  return c;
}

CubeCollection CubeCollection::explicit_list(const Domain& d, std::vector<Cube> cubes) {
  if (cubes.empty()) throw ParameterError("cube collection must be nonempty");
  for (const auto& q : cubes) {
    if (!q.inside(d)) throw DomainMismatch("cube " + to_string(q) + " is not inside the domain");
  }
  CubeCollection c(Kind::Explicit, d);
  c.cubes_ = std::move(cubes);
  c.id_ = "explicit(" + std::to_string(c.cubes_.size()) + ")";
  return c;
}

std::string CubeCollection::id() const { return id_; }

void CubeCollection::for_each(const std::function<void(const Cube&)>& visit) const {
  if (kind_ == Kind::AllMesh) {
    visit_subcubes(Cube::of_domain(domain_), visit);
    return;
  }
  for (const auto& q : cubes_) visit(q);
}

void CubeCollection::for_each_meeting(const Cube& q, const std::function<void(const Cube&)>& visit) const {
  switch (kind_) {
    case Kind::AllMesh:
      visit_subcubes(q, visit);
      return;
    case Kind::Dyadic:
    case Kind::Shifted:
      for (const auto& g : grids_) visit_grid_meeting(g, q, visit);
      return;
    case Kind::Explicit:
      for (const auto& c : cubes_) {
        if (c.intersects(q)) visit(c);
      }
      return;
  }
}

Index CubeCollection::size() const {
  if (kind_ != Kind::AllMesh) return static_cast<Index>(cubes_.size());
  const Index n = domain_.cells_per_axis();
  if (domain_.dim() == 1) return n * (n + 1) / 2;
  Index total = 0;
  for (Index s = 1; s <= n; ++s) total += (n - s + 1) * (n - s + 1);
  return total;
}

}  // namespace sparsedom
