#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sparsedom/collection.hpp"
#include "sparsedom/dyadic.hpp"
#include "sparsedom/error.hpp"
#include "test_util.hpp"

using namespace sparsedom;
using sparsedom::testing::span;
using sparsedom::testing::unit_domain;

TEST(Cube, ChildrenOfUnitInterval) {
  const Domain d = unit_domain(3);
  const auto kids = children(span(d, 0.0, 1.0));
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_EQ(kids[0], span(d, 0.0, 0.5));
  EXPECT_EQ(kids[1], span(d, 0.5, 1.0));

  int grandchildren = 0;
  for (const Cube& k : kids) {
    for (const Cube& g : children(k)) {
      EXPECT_DOUBLE_EQ(g.measure(d), 0.25);
      ++grandchildren;
    }
  }
  EXPECT_EQ(grandchildren, 4);
}

TEST(Cube, ChildrenOfUnitSquare) {
  const Domain d(2, 0, 2);
  const Index n = d.cells_per_axis();
  const auto kids = children(Cube::square(n / 2, n / 2, n / 2));
  ASSERT_EQ(kids.size(), 4u);
  long total = 0;
  for (const Cube& k : kids) {
    EXPECT_EQ(k.side(0), n / 4);
    EXPECT_EQ(k.side(1), n / 4);
    total += k.cell_count();
  }
  EXPECT_EQ(total, (n / 2) * (n / 2));
}

TEST(Cube, OddSideCannotBeHalved) {
  EXPECT_THROW(children(Cube::interval(0, 3)), SubdivisionError);
  EXPECT_THROW(children(Cube::interval(0, 1)), SubdivisionError);
}

TEST(Cube, Dilation) {
  const Domain d = unit_domain(3);
  const Cube q = span(d, 1.0 / 3.0, 2.0 / 3.0);
  EXPECT_EQ(dilate(q, 1, d), q);
  EXPECT_EQ(dilate(q, 3, d), span(d, 0.0, 1.0));
  EXPECT_THROW(dilate(q, 2, d), ParameterError);

  const Cube edge = span(d, -1.0, -0.75);
  const Cube big = dilate(edge, 3, d);
  EXPECT_TRUE(big.inside(d));
  EXPECT_LE(big.cell_count(), 3 * edge.cell_count());
  EXPECT_EQ(big, span(d, -1.0, -0.5));
  EXPECT_EQ(dilate_unclipped(edge, 3).lo[0], -edge.side());
}

TEST(CellSums, MatchBruteForceAverages) {
  std::mt19937_64 rng(7);
  for (const Domain& d : {unit_domain(3), Domain(2, -1, 2)}) {
    const GridFunction f = sparsedom::testing::uniform(d, rng, -1, 1);
    const CellSums sums(f);
    const Index n = d.cells_per_axis();
    std::uniform_int_distribution<Index> pick(0, n - 1);
    for (int trial = 0; trial < 200; ++trial) {
      Index a = pick(rng), b = pick(rng);
      if (a > b) std::swap(a, b);
      const Cube q = d.dim() == 1 ? Cube::interval(a, b + 1) : Cube{2, {a, a}, {b + 1, b + 1}};
      long double brute = 0.0L;
      for (Index c : q.cells(d)) brute += f[c];
      EXPECT_NEAR(static_cast<double>(sums.sum(q)), static_cast<double>(brute), 1e-12);
    }
  }
}

TEST(DyadicGrid, ThreeShiftsInOneDimension) {
  const Domain d = unit_domain(3);
  const auto grids = shifted_grids(d);
  ASSERT_EQ(grids.size(), 3u);
  const auto cubes = grids[0].cubes_at(1);
  EXPECT_NE(std::find(cubes.begin(), cubes.end(), span(d, 0.0, 0.5)), cubes.end());
  EXPECT_EQ(shifted_grids(Domain(2, 0, 1)).size(), 9u);
}

TEST(DyadicGrid, CubesAreShiftedDyadicIntervals) {
  const Domain d = unit_domain(4);
  for (const DyadicGrid& g : shifted_grids(d)) {
    const double t = g.shift3()[0] / 3.0;
    for (int k = g.coarsest_level(); k <= g.finest_level(); ++k) {
      const double side = std::ldexp(1.0, -k);
      const double offset = (k % 2 == 0 ? 1.0 : -1.0) * t;
      for (const Cube& q : g.cubes_at(k)) {
        if (q.side() != g.side_cells(k)) continue;
        const double j = d.cell_lower(q.lo[0]) / side - offset;
        EXPECT_NEAR(j, std::round(j), 1e-9) << to_string(q) << " level " << k;
      }
    }
  }
}

TEST(DyadicGrid, LevelsPartitionAndNest) {
  const Domain d = unit_domain(4);
  for (const DyadicGrid& g : shifted_grids(d)) {
    for (int k = g.coarsest_level(); k <= g.finest_level(); ++k) {
      std::vector<int> hits(static_cast<std::size_t>(d.cell_count()), 0);
      for (const Cube& q : g.cubes_at(k)) {
        for (Index c : q.cells(d)) ++hits[static_cast<std::size_t>(c)];
        for (Index c : q.cells(d)) EXPECT_EQ(g.cube_containing(k, c), q);
      }
      for (int h : hits) EXPECT_EQ(h, 1);
    }
    const auto all = g.all_cubes();
    for (const Cube& a : all) {
      for (const Cube& b : all) {
        if (a.intersects(b)) {
          EXPECT_TRUE(a.contains(b) || b.contains(a));
        }
      }
    }
  }
}

TEST(DyadicGrid, CoveringCubeForAnInterval) {
  const Domain d = unit_domain(5);
  const Cube r = Cube::interval(d.cell_of(0.4), d.cell_of(0.6));
  const Cube q = smallest_covering_cube(d, r);
  EXPECT_TRUE(q.contains(r));
  EXPECT_LE(q.side(), 6 * r.side());

  // exhaustive search over the three grids
  Index best = d.cells_per_axis();
  for (const DyadicGrid& g : shifted_grids(d)) {
    for (const Cube& c : g.all_cubes()) {
      if (c.contains(r)) best = std::min(best, c.side());
    }
  }
  EXPECT_EQ(q.side(), best);
}

TEST(DyadicGrid, EveryIntervalHasAComparableCover) {
  const Domain d = unit_domain(4);
  const Index n = d.cells_per_axis();
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b <= n; ++b) {
      const Cube r = Cube::interval(a, b);
      const Cube q = smallest_covering_cube(d, r);
      ASSERT_TRUE(q.contains(r));
      // one third trick: side at most 6|R|, except where clipping at the edge leaves the domain cube
      if (q.side() < n) {
        EXPECT_LE(q.side(), 6 * r.side()) << to_string(r);
      }
    }
  }
}

namespace {

SparseFamily nested_pair(const Domain& d, long num, long den) {
  SparseFamily s(d, num, den);
  const Cube top = span(d, 0.0, 1.0), half = span(d, 0.0, 0.5);
  s.add(top, ranges_from_cells(span(d, 0.5, 1.0).cells(d)));
  s.add(half, ranges_from_cells(half.cells(d)));
  s.sort();
  return s;
}

}  // namespace

TEST(SparseFamily, DisjointCubesWithFullWitnesses) {
  const Domain d = unit_domain(3);
  SparseFamily s(d, 1, 1);
  for (const Cube& q : DyadicGrid(d).cubes_at(2)) s.add(q, ranges_from_cells(q.cells(d)));
  EXPECT_TRUE(verify_sparse(s).ok);
}

TEST(SparseFamily, NestedPairDensity) {
  const Domain d = unit_domain(3);
  EXPECT_TRUE(verify_sparse(nested_pair(d, 1, 2)).ok);
  const SparseFamily strict = nested_pair(d, 3, 4);
  const SparseCheck check = verify_sparse(strict);
  EXPECT_FALSE(check.ok);
  ASSERT_TRUE(check.cube.has_value());
  EXPECT_EQ(strict.cubes[*check.cube], span(d, 0.0, 1.0));
}

TEST(SparseFamily, OverlappingOrStrayWitnessesFail) {
  const Domain d = unit_domain(3);
  SparseFamily overlap(d, 1, 2);
  overlap.add(span(d, 0.0, 1.0), ranges_from_cells(span(d, 0.0, 0.5).cells(d)));
  overlap.add(span(d, 0.0, 0.5), ranges_from_cells(span(d, 0.0, 0.5).cells(d)));
  const SparseCheck c1 = verify_sparse(overlap);
  EXPECT_FALSE(c1.ok);
  EXPECT_TRUE(c1.cell.has_value());

  SparseFamily stray(d, 1, 2);
  stray.add(span(d, 0.0, 0.5), ranges_from_cells(span(d, 0.5, 1.0).cells(d)));
  EXPECT_FALSE(verify_sparse(stray).ok);
}

TEST(SparseFamily, JsonRoundTrip) {
  const Domain d = unit_domain(3);
  const SparseFamily s = nested_pair(d, 1, 2);
  const SparseFamily back = family_from_json(family_to_json(s));
  EXPECT_TRUE(back.domain == d);
  EXPECT_EQ(back.eta_num, 1);
  EXPECT_EQ(back.eta_den, 2);
  EXPECT_EQ(back.cubes, s.cubes);
  EXPECT_EQ(back.witnesses, s.witnesses);
}

TEST(SparseFamily, RangesFromCellsMergesRuns) {
  const auto r = ranges_from_cells({5, 1, 2, 3, 7, 6});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0], CellRange(1, 4));
  EXPECT_EQ(r[1], CellRange(5, 8));
  EXPECT_EQ(range_cell_count(r), 6);
}

TEST(CubeCollection, SizesAndVisits) {
  const Domain d = unit_domain(2);
  const Index n = d.cells_per_axis();
  const auto all = CubeCollection::all_mesh(d);
  EXPECT_EQ(all.size(), n * (n + 1) / 2);
  Index visited = 0;
  all.for_each([&](const Cube&) { ++visited; });
  EXPECT_EQ(visited, all.size());

  const auto shifted = CubeCollection::shifted(d);
  Index expected = 0;
  for (const DyadicGrid& g : shifted_grids(d)) expected += static_cast<Index>(g.all_cubes().size());
  EXPECT_LE(shifted.size(), expected);
  EXPECT_GT(shifted.size(), static_cast<Index>(DyadicGrid(d).all_cubes().size()));
  EXPECT_THROW(CubeCollection::explicit_list(d, {}), ParameterError);
  EXPECT_THROW(CubeCollection::explicit_list(d, {Cube::interval(0, n + 1)}), DomainMismatch);
}
