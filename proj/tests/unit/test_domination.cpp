#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sparsedom/domination.hpp"
#include "sparsedom/error.hpp"
#include "sparsedom/harness/corpus.hpp"
#include "test_util.hpp"

using namespace sparsedom;
using sparsedom::testing::span;
using sparsedom::testing::unit_domain;

namespace {

std::vector<char> mask_of(const Domain& d, const std::vector<Index>& cells) {
  std::vector<char> m(static_cast<std::size_t>(d.cell_count()), 0);
  for (Index c : cells) m[static_cast<std::size_t>(c)] = 1;
  return m;
}

Index hits(const std::vector<char>& e, const Cube& q, const Domain& d) {
  Index n = 0;
  for (Index c : q.cells(d)) n += e[static_cast<std::size_t>(c)];
  return n;
}

void expect_dominated(const DominationResult& r) {
  EXPECT_TRUE(verify_sparse(r.family).ok) << verify_sparse(r.family).message;
  EXPECT_EQ(r.family.eta_num, 1);
  EXPECT_EQ(r.family.eta_den, 6);
  EXPECT_TRUE(std::isfinite(r.c_emp));
  EXPECT_LE(r.stats.max_selected_fraction, 0.5);
  for (Index c = 0; c < r.lhs.size(); ++c) EXPECT_LE(r.lhs[c], r.c_emp * r.rhs[c] * (1 + 1e-12) + 1e-300);
}

}  // namespace

TEST(CzDecomposition, EmptySetSelectsNothing) {
  const Domain d = unit_domain(4);
  EXPECT_TRUE(cz_decompose_indicator(mask_of(d, {}), d, span(d, 0.0, 1.0), 0.25).empty());
}

TEST(CzDecomposition, FinestIntervalSelectsItsParent) {
  const Domain d = unit_domain(4);
  const DyadicGrid grid(d);
  const Cube finest = grid.cube_containing(d.refinement(), d.cell_of(0.3));
  const auto picked = cz_decompose_indicator(mask_of(d, finest.cells(d)), d, span(d, 0.0, 1.0), 0.25);
  ASSERT_EQ(picked.size(), 1u);
  // density 1/2 in the parent, exactly 1/4 in the grandparent, which the strict test rejects
  EXPECT_EQ(picked[0], grid.cube_containing(d.refinement() - 1, d.cell_of(0.3)));
}

TEST(CzDecomposition, SingleMeshCellSelectsItsFinestInterval) {
  const Domain d = unit_domain(4);
  const Index cell = d.cell_of(0.6);
  const auto picked = cz_decompose_indicator(mask_of(d, {cell}), d, span(d, 0.0, 1.0), 0.25);
  ASSERT_EQ(picked.size(), 1u);
  EXPECT_EQ(picked[0], DyadicGrid(d).cube_containing(d.refinement(), cell));
}

TEST(CzDecomposition, LevelEqualityIsNotSelected) {
  const Domain d = unit_domain(3);
  // one finest interval in each half of [0, 1/2): density exactly 1/2 in [0, 1/4) and [1/4, 1/2)
  const Cube q0 = span(d, 0.0, 0.5);
  const auto quarters = children(q0);
  std::vector<Index> cells;
  for (const Cube& q : quarters) {
    const auto c = children(q)[0].cells(d);
    cells.insert(cells.end(), c.begin(), c.end());
  }
  const auto picked = cz_decompose_indicator(mask_of(d, cells), d, q0, 0.5);
  for (const Cube& p : picked) EXPECT_EQ(p.side(), 3);
  EXPECT_EQ(picked.size(), 2u);
}

TEST(CzDecomposition, RejectsBadArguments) {
  const Domain d = unit_domain(3);
  const auto full = mask_of(d, span(d, 0.0, 1.0).cells(d));
  EXPECT_THROW(cz_decompose_indicator(full, d, span(d, 0.0, 1.0), 0.25), PreconditionError);
  EXPECT_THROW(cz_decompose_indicator(full, d, span(d, 0.0, 1.0), 1.0), ParameterError);
  EXPECT_THROW(cz_decompose_indicator({1, 0}, d, span(d, 0.0, 1.0), 0.5), DomainMismatch);
}

TEST(CzDecomposition, MeasureBoundsOnRandomSets) {
  const Domain d = unit_domain(6);
  const Cube q0 = span(d, 0.0, 1.0);
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> density(0.01, 0.25);
  for (int trial = 0; trial < 100; ++trial) {
    const double level = 0.25;
    std::bernoulli_distribution in(density(rng) * (trial % 2 == 0 ? 1.0 : 0.3));
    std::vector<Index> cells;
    for (Index c : q0.cells(d)) {
      if (in(rng)) cells.push_back(c);
    }
    const auto e = mask_of(d, cells);
    if (static_cast<double>(hits(e, q0, d)) > level * static_cast<double>(q0.cell_count())) continue;
    const auto picked = cz_decompose_indicator(e, d, q0, level);
    for (std::size_t i = 0; i < picked.size(); ++i) {
      const Cube& p = picked[i];
      const double k = static_cast<double>(hits(e, p, d)), size = static_cast<double>(p.cell_count());
      EXPECT_GT(k, level * size);
      EXPECT_LE(k, 2.0 * level * size);
      EXPECT_TRUE(q0.contains(p));
      for (std::size_t j = i + 1; j < picked.size(); ++j) EXPECT_FALSE(p.intersects(picked[j]));
    }
  }
}

TEST(SparseDominate, ZeroInputsGiveEmptyFamily) {
  const Domain d(1, -1, 6);
  const CalderonOperator t(d, 1);
  const VectorFunction zero{GridFunction(d)};
  const auto r = sparse_dominate(t, {VectorFunction(GridFunction(d, 1.0)), zero}, {2.0, 2.0});
  EXPECT_EQ(r.family.size(), 0u);
  EXPECT_EQ(r.c_emp, 0.0);
  EXPECT_TRUE(r.lhs.is_zero());
}

TEST(SparseDominate, RandomTuplesAreSparselyDominated) {
  const Domain d(1, -1, 7);
  const CalderonOperator t(d, 1);
  for (std::uint64_t i = 0; i < 4; ++i) {
    const auto c = harness::random_tuple_case(d, 1, 1 + static_cast<int>(i % 3), 81, i);
    const auto r = sparse_dominate(t, c.slots, {2.0, 2.0});
    expect_dominated(r);
    EXPECT_GT(r.c_emp, 0.0);
    EXPECT_GT(r.family.size(), 0u);
    EXPECT_NE(result_to_json(r).find("\"c_emp\""), std::string::npos);
  }
}

TEST(SparseDominate, SecondOrderOperator) {
  const Domain d(1, -1, 6);
  const CalderonOperator t(d, 2);
  const auto c = harness::random_tuple_case(d, 2, 2, 82, 0);
  expect_dominated(sparse_dominate(t, c.slots, {2.0, 3.0, 6.0}));
}

TEST(SparseDominate, IdenticalCopiesLeaveConstantUnchanged) {
  const Domain d(1, -1, 7);
  const CalderonOperator t(d, 1);
  const auto c = harness::random_tuple_case(d, 1, 1, 83, 0);
  const auto base = sparse_dominate(t, c.slots, {2.0, 2.0});
  for (std::size_t k : {2u, 4u}) {
    std::vector<VectorFunction> slots;
    for (const auto& s : c.slots) slots.emplace_back(std::vector<GridFunction>(k, s[0]));
    const auto r = sparse_dominate(t, slots, {2.0, 2.0});
    EXPECT_NEAR(r.c_emp, base.c_emp, 1e-9 * base.c_emp);
    EXPECT_EQ(r.family.cubes, base.family.cubes);
  }
}

TEST(SparseDominate, RejectsMismatchedSlots) {
  const Domain d(1, -1, 5);
  const CalderonOperator t(d, 1);
  const VectorFunction one(GridFunction(d, 1.0));
  EXPECT_THROW(sparse_dominate(t, {one}, {2.0}), ParameterError);
  EXPECT_THROW(sparse_dominate(t, {one, VectorFunction({GridFunction(d), GridFunction(d)})}, {2.0, 2.0}), ParameterError);
  EXPECT_THROW(sparse_dominate(t, {one, one}, {2.0}), ParameterError);
}

TEST(SparseDominateCommutator, ConstantSymbolAndZeroData) {
  const Domain d(1, -1, 6);
  const CalderonOperator t(d, 1);
  const auto c = harness::random_tuple_case(d, 1, 1, 84, 0);
  const auto constant = sparse_dominate_commutator(t, GridFunction(d, 3.0), c.slots, {2.0, 2.0}, 1);
  EXPECT_LE(constant.c_emp, 0.0 + 1e-9);
  EXPECT_LE(constant.lhs.max_abs(), 1e-12 * t.evaluate({c.slots[0][0], c.slots[1][0]}).max_abs());

  const GridFunction step = harness::indicator(d, 0.0, 0.125);
  const auto zero = sparse_dominate_commutator(t, step, {c.slots[0], VectorFunction(GridFunction(d))}, {2.0, 2.0}, 1);
  EXPECT_EQ(zero.c_emp, 0.0);
}

TEST(SparseDominateCommutator, LogSymbolIsSparselyDominated) {
  const Domain d(1, -1, 7);
  const CalderonOperator t(d, 1);
  const GridFunction b = GridFunction::sample(d, [](double x) { return std::log(std::max(std::abs(x), 1.0 / 64.0)); });
  for (std::uint64_t i = 0; i < 2; ++i) {
    const auto c = harness::random_tuple_case(d, 1, 1, 85, i);
    for (std::size_t slot : {0u, 1u}) {
      const auto r = sparse_dominate_commutator(t, b, c.slots, {2.0, 2.0}, slot);
      expect_dominated(r);
      EXPECT_GT(r.c_emp, 0.0);
    }
  }
}
