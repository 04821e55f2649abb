#include "sparsedom/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "sparsedom/error.hpp"
#include "sparsedom/localnorms.hpp"

namespace sparsedom {

namespace {

void require_domain(const Domain& a, const Domain& b) {
  if (!(a == b)) throw DomainMismatch("function and cube collection live on different domains");
}

void scatter_max(GridFunction& out, const Cube& q, double v) {
  const Domain& d = out.domain();
  if (q.dim == 1) {
    for (Index i = q.lo[0]; i < q.hi[0]; ++i) out[i] = std::max(out[i], v);
    return;
  }
  for (Index i = q.lo[0]; i < q.hi[0]; ++i)
    for (Index j = q.lo[1]; j < q.hi[1]; ++j) {
      double& slot = out[d.flat(i, j)];
      slot = std::max(slot, v);
    }
}

double mean_abs_dev(std::span<const double> v, double c) {
  long double acc = 0.0L;
  for (double x : v) acc += std::abs(x - c);
  return static_cast<double>(acc / static_cast<long double>(v.size()));
}

}  // namespace

GridFunction sup_over_cubes(const CubeCollection& cubes, const std::function<double(const Cube&)>& value) {
  const Domain& d = cubes.domain();
  GridFunction out(d, 0.0);
  if (cubes.kind() == CubeCollection::Kind::AllMesh && d.dim() == 1) {
    // for each left end l: best[x] = max over right ends r > x of value([l, r))
    const Index n = d.cells_per_axis();
    std::vector<double> best(static_cast<std::size_t>(n + 1), 0.0);
    for (Index l = 0; l < n; ++l) {
      double run = 0.0;
      for (Index r = n; r > l; --r) {
        run = std::max(run, value(Cube::interval(l, r)));
        best[static_cast<std::size_t>(r)] = run;
      }
      for (Index x = l; x < n; ++x) out[x] = std::max(out[x], best[static_cast<std::size_t>(x + 1)]);
    }
    return out;
  }
  cubes.for_each([&](const Cube& q) { scatter_max(out, q, value(q)); });
  return out;
}

GridFunction hl_maximal(const GridFunction& f, const CubeCollection& cubes) {
  require_domain(f.domain(), cubes.domain());
  const CellSums s(f.abs());
  return sup_over_cubes(cubes, [&s](const Cube& q) { return s.average(q); });
}

GridFunction m_tau(const GridFunction& f, double tau, const CubeCollection& cubes) {
  if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("tau must lie in (0, 1)");
  GridFunction m = hl_maximal(f.pow(tau), cubes);
  const double inv = 1.0 / tau;
  return m.map([inv](double v) { return std::pow(v, inv); });
}

GridFunction dyadic_weighted_maximal(const GridFunction& f, const Weight& u, double rho, const DyadicGrid& grid) {
  if (!(rho >= 1.0)) throw ParameterError("rho must be at least 1");
  require_domain(f.domain(), grid.domain());
  require_domain(u.domain(), grid.domain());
  GridFunction fu = f.pow(rho);
  fu *= u.function();
  const CellSums num(fu);
  const CellSums den(u.function());
  const double inv = 1.0 / rho;
  GridFunction out(f.domain(), 0.0);
  for (const Cube& q : grid.all_cubes()) {
    scatter_max(out, q, std::pow(static_cast<double>(num.sum(q) / den.sum(q)), inv));
  }
  return out;
}

std::pair<double, double> mean_deviation_minimum(std::span<const double> v, double tol) {
  if (v.empty()) throw ParameterError("empty sample");
  auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  double a = *mn, b = *mx;
  if (a == b) return {0.0, a};
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), dd = a + g * (b - a);
  double fc = mean_abs_dev(v, c), fd = mean_abs_dev(v, dd);
  while (b - a > tol) {
    // ties keep the lower bracket, so the search drifts toward smaller c
    if (fc <= fd) {
      b = dd;
      dd = c;
      fd = fc;
      c = b - g * (b - a);
      fc = mean_abs_dev(v, c);
    } else {
      a = c;
      c = dd;
      fc = fd;
      dd = a + g * (b - a);
      fd = mean_abs_dev(v, dd);
    }
  }
  const double arg = 0.5 * (a + b);
  return {mean_abs_dev(v, arg), arg};
}

GridFunction sharp_maximal(const GridFunction& f, double delta, const DyadicGrid& grid) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  require_domain(f.domain(), grid.domain());
  const GridFunction fd = f.pow(delta);
  const double inv = 1.0 / delta;
  GridFunction out(f.domain(), 0.0);
  for (const Cube& q : grid.all_cubes()) {
    const auto v = abs_values_on(fd, q);
    scatter_max(out, q, std::pow(mean_deviation_minimum(v).first, inv));
  }
  return out;
}

GridFunction multilinear_orlicz_maximal(const std::vector<GridFunction>& fs, const std::vector<double>& betas,
                                        const CubeCollection& cubes) {
  if (fs.empty() || fs.size() != betas.size()) throw ParameterError("need one beta per function");
  for (const auto& f : fs) require_domain(f.domain(), cubes.domain());
  for (double b : betas) {
    if (!(b >= 0.0)) throw ParameterError("beta must be nonnegative");
  }
  std::vector<CellSums> sums;
  for (const auto& f : fs) sums.emplace_back(f.abs());
  return sup_over_cubes(cubes, [&](const Cube& q) {
    double v = 1.0;
    for (std::size_t j = 0; j < fs.size() && v != 0.0; ++j) {
      v *= betas[j] == 0.0 ? sums[j].average(q) : orlicz_llogl(fs[j], q, betas[j]);
    }
    return v;
  });
}

}  // namespace sparsedom
