#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sparsedom/error.hpp"
#include "sparsedom/localnorms.hpp"
#include "test_util.hpp"

using namespace sparsedom;
using sparsedom::testing::chi;
using sparsedom::testing::dyadic_subcubes;
using sparsedom::testing::span;
using sparsedom::testing::unit_domain;

namespace {

// root of u log(1 + u) = 1 by plain bisection
double llog_root() {
  double lo = 0.0, hi = 4.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::log1p(mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Average, PlainAndWeighted) {
  const Domain d = unit_domain(3);
  const Cube unit = span(d, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(average(chi(d, 0.0, 0.5), unit), 0.5);
  const Weight u(GridFunction::sample(d, [](double x) { return x < 0.5 ? 2.0 : 1.0; }));
  EXPECT_NEAR(average(GridFunction(d, 3.5), unit, u), 3.5, 1e-15);

  // staircase f = 1, 2, 3, 4 on the quarters of [0, 1) against u = 2, 2, 1, 1
  const GridFunction f = GridFunction::sample(d, [](double x) { return std::floor(4.0 * x) + 1.0; });
  EXPECT_NEAR(average(f, unit, u), (2.0 * 1 + 2.0 * 2 + 3 + 4) / 6.0, 1e-14);
}

TEST(OrliczLlogl, ZeroExponentIsTheMean) {
  const Domain d = unit_domain(5);
  std::mt19937_64 rng(21);
  const auto cubes = DyadicGrid(d).all_cubes();
  std::uniform_int_distribution<std::size_t> pick(0, cubes.size() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    const GridFunction f = sparsedom::testing::uniform(d, rng, -3.0, 3.0);
    const Cube& q = cubes[pick(rng)];
    EXPECT_NEAR(orlicz_llogl(f, q, 0.0), average(f.abs(), q), 1e-12);
  }
}

TEST(OrliczLlogl, ConstantFunctionWithUnitExponent) {
  const double u = llog_root();
  EXPECT_NEAR(u * std::log1p(u), 1.0, 1e-14);
  const Domain d = unit_domain(3);
  EXPECT_NEAR(orlicz_llogl(GridFunction(d, 1.0), span(d, 0.0, 1.0), 1.0), 1.0 / u, 1e-10);
  EXPECT_NEAR(1.0 / u, 0.8065, 1e-4);
}

TEST(OrliczLlogl, PositiveHomogeneity) {
  const Domain d = unit_domain(4);
  std::mt19937_64 rng(22);
  const Cube q = span(d, -0.5, 0.5);
  for (double beta : {0.5, 1.0, 2.0}) {
    const GridFunction f = sparsedom::testing::uniform(d, rng, 0.0, 2.0);
    const double base = orlicz_llogl(f, q, beta);
    for (double c : {0.01, 3.0, 1e4}) EXPECT_NEAR(orlicz_llogl(c * f, q, beta), c * base, 1e-10 * c * base);
  }
}

TEST(OrliczLlogl, NormSolvesTheLuxemburgEquation) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (double beta : {0.3, 1.0, 2.5}) {
    std::vector<double> v(40);
    for (auto& x : v) x = u(rng);
    const double lambda = llogl_norm(v, beta);
    EXPECT_NEAR(llogl_phi_average(v, beta, lambda), 1.0, 1e-10);
  }
  EXPECT_EQ(llogl_norm(std::vector<double>(5, 0.0), 1.0), 0.0);
  EXPECT_THROW(llogl_norm(std::vector<double>{}, 1.0), ParameterError);
  EXPECT_THROW(OrliczParams::llog(-1.0), ParameterError);
}

TEST(ExpNorm, ConstantAndDispatch) {
  const Domain d = unit_domain(3);
  const Cube q = span(d, 0.0, 1.0);
  for (double s : {1.0, 2.0}) {
    EXPECT_NEAR(orlicz_exp(GridFunction(d, 2.0), q, s), 2.0 / std::pow(std::log(2.0), 1.0 / s), 1e-10);
    EXPECT_EQ(orlicz_norm(GridFunction(d, 2.0), q, OrliczParams::exp(s)), orlicz_exp(GridFunction(d, 2.0), q, s));
  }
  EXPECT_EQ(orlicz_norm(GridFunction(d, 2.0), q, OrliczParams::llog(0.0)), 2.0);
  EXPECT_THROW(OrliczParams::exp(0.5), ParameterError);
}

TEST(Oscillation, ConstantSymbolVanishes) {
  const Domain d = unit_domain(3);
  EXPECT_EQ(osc_exp_ls(GridFunction(d, 4.0), 1.0, CubeCollection::shifted(d)), 0.0);
}

TEST(Oscillation, SignFunctionOnDyadicSubintervals) {
  const Domain d = unit_domain(4);
  const GridFunction b = GridFunction::sample(d, [](double x) { return x < 0.5 ? 1.0 : -1.0; });
  const auto cubes = CubeCollection::explicit_list(d, dyadic_subcubes(d, span(d, 0.0, 1.0)));
  EXPECT_NEAR(osc_exp_ls(b, 1.0, cubes), 1.0 / std::log(2.0), 1e-10);
  EXPECT_NEAR(osc_exp_local(b, span(d, 0.0, 1.0), 1.0), 1.0 / std::log(2.0), 1e-10);
  EXPECT_EQ(osc_exp_local(b, span(d, 0.0, 0.5), 1.0), 0.0);
}

TEST(Oscillation, Homogeneity) {
  const Domain d = unit_domain(4);
  std::mt19937_64 rng(24);
  const GridFunction b = sparsedom::testing::uniform(d, rng, -1.0, 1.0);
  const auto cubes = CubeCollection::shifted(d);
  const double base = osc_exp_ls(b, 1.0, cubes);
  EXPECT_NEAR(osc_exp_ls(2.5 * b, 1.0, cubes), 2.5 * base, 1e-10 * base);
  EXPECT_NEAR(osc_exp_ls(b + GridFunction(d, 7.0), 1.0, cubes), base, 1e-9 * base);
}

TEST(HolderCheck, ConstantsAndUnitFunction) {
  const Domain d = unit_domain(3);
  const Cube q = span(d, 0.0, 1.0);
  const double r = holder_orlicz_check(GridFunction(d, 2.0), GridFunction(d, 3.0), q, 1.0);
  EXPECT_LE(r, 1.0);
  EXPECT_GT(r, 0.0);
  // equality for constant f against g = 1 at beta = 0
  EXPECT_NEAR(holder_orlicz_check(GridFunction(d, 2.0), GridFunction(d, 1.0), q, 0.0), 1.0, 1e-14);
  EXPECT_TRUE(std::isinf(holder_orlicz_check(GridFunction(d, 0.0), GridFunction(d, 0.0), q, 1.0)));
}

TEST(HolderCheck, RandomPositiveFunctionsStayBelowFour) {
  const Domain d = unit_domain(4);
  std::mt19937_64 rng(25);
  const auto cubes = DyadicGrid(d).all_cubes();
  std::uniform_int_distribution<std::size_t> pick(0, cubes.size() - 1);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const GridFunction f = sparsedom::testing::uniform(d, rng, 0.0, 3.0);
    const GridFunction g = sparsedom::testing::uniform(d, rng, 0.0, 3.0);
    worst = std::max(worst, holder_orlicz_check(f, g, cubes[pick(rng)], 1.0));
  }
  RecordProperty("max_ratio", std::to_string(worst));
  EXPECT_LE(worst, 4.0);
  EXPECT_GT(worst, 0.0);
}

TEST(OrliczLlogl, BoundedByPowerMean) {
  // t log^beta(1 + t) <= t^{1 + beta}
  const Domain d = unit_domain(4);
  std::mt19937_64 rng(26);
  const auto cubes = DyadicGrid(d).all_cubes();
  std::uniform_int_distribution<std::size_t> pick(0, cubes.size() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    const GridFunction f = sparsedom::testing::uniform(d, rng, -4.0, 4.0);
    const Cube& q = cubes[pick(rng)];
    for (double beta : {0.5, 1.0, 2.0}) {
      double s = 0.0;
      for (Index c : q.cells(d)) s += std::pow(std::abs(f[c]), 1.0 + beta);
      const double bound = std::pow(s / static_cast<double>(q.cell_count()), 1.0 / (1.0 + beta));
      EXPECT_LE(orlicz_llogl(f, q, beta), bound * (1 + 1e-10));
    }
  }
}
