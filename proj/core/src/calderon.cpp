#include "sparsedom/calderon.hpp"

#include <algorithm>
#include <cmath>

#include "sparsedom/dyadic.hpp"
#include "sparsedom/error.hpp"

namespace sparsedom {

namespace {

// Integrals over u in [u0, u1] (u0 < u1, same sign) of u^-1, u^-2, u^-3.
struct Moments {
  double i1, i2, i3;
};

Moments moments(double u0, double u1) {
  const double w = u1 - u0;
  const double p = u0 * u1;
  return {std::log1p(w / u0), w / p, 0.5 * w * (u0 + u1) / (p * p)};
}

void require_1d(const Domain& d) {
  if (d.dim() != 1) throw UnsupportedError("Calderon commutators are implemented in one dimension only");
}

}  // namespace

LipschitzData::LipschitzData(std::vector<GridFunction> slopes) : slopes_(std::move(slopes)) {
  if (slopes_.empty()) throw ParameterError("need at least one slope function");
  const Domain& d = slopes_.front().domain();
  require_1d(d);
  const double h = d.cell_width();
  for (const auto& a : slopes_) {
    if (!(a.domain() == d)) throw DomainMismatch("slopes live on different domains");
    std::vector<double> e(static_cast<std::size_t>(d.cells_per_axis() + 1), 0.0);
    long double acc = 0.0L;
    for (Index i = 0; i < d.cells_per_axis(); ++i) {
      acc += static_cast<long double>(a[i]) * h;
      e[static_cast<std::size_t>(i + 1)] = static_cast<double>(acc);
    }
    edges_.push_back(std::move(e));
  }
}

double LipschitzData::value(std::size_t j, double x) const noexcept {
  const Domain& d = domain();
  if (x <= d.lower()) return 0.0;
  const Index n = d.cells_per_axis();
  if (x >= d.upper()) return edges_[j][static_cast<std::size_t>(n)];
  const Index i = d.cell_of(x);
  return edges_[j][static_cast<std::size_t>(i)] + slopes_[j][i] * (x - d.cell_lower(i));
}

double kernel_c(double x, std::span<const double> ys) {
  if (ys.size() < 2) throw ParameterError("kernel needs m >= 1 slope variables and one function variable");
  const std::size_t m = ys.size() - 1;
  const double y = ys[m];
  if (y == x) throw SingularityError("kernel is singular at y_{m+1} = x");
  const double lo = std::min(x, y), hi = std::max(x, y);
  for (std::size_t j = 0; j < m; ++j) {
    if (!(ys[j] > lo && ys[j] < hi)) return 0.0;
  }
  const double sign = (y >= x && m % 2 == 1) ? -1.0 : 1.0;
  return sign / std::pow(x - y, static_cast<double>(m + 1));
}

GridFunction OperatorHandle::evaluate(const std::vector<GridFunction>& inputs) const {
  if (inputs.empty()) throw ParameterError("operator needs inputs");
  const Domain& d = inputs.front().domain();
  const Cube all = Cube::of_domain(d);
  return GridFunction(d, evaluate(inputs, all, all));
}

CalderonOperator::CalderonOperator(const Domain& domain, int order, std::optional<double> eps)
    : domain_(domain), order_(order), eps_(eps.value_or(domain.cell_width())) {
  require_1d(domain);
  if (order != 1 && order != 2) throw UnsupportedError("only C_2 and C_3 are implemented");
  if (!(eps_ >= domain.cell_width() * (1.0 - 1e-12))) throw ParameterError("truncation must be at least one cell width");
}

std::vector<double> CalderonOperator::evaluate(const std::vector<GridFunction>& inputs, const Cube& window,
                                               const Cube& eval) const {
  if (inputs.size() != arity()) throw ParameterError("wrong number of operator inputs");
  for (const auto& f : inputs) {
    if (!(f.domain() == domain_)) throw DomainMismatch("operator input lives on a different domain");
  }
  const Domain& d = domain_;
  const Index n = d.cells_per_axis();
  const double h = d.cell_width();
  const Index wlo = std::max<Index>(0, window.lo[0]), whi = std::min<Index>(n, window.hi[0]);
  const Index elo = eval.lo[0], ehi = eval.hi[0];
  std::vector<double> out(static_cast<std::size_t>(std::max<Index>(0, ehi - elo)), 0.0);
  const std::size_t m = static_cast<std::size_t>(order_);
  const GridFunction& f = inputs[m];

  std::vector<Index> support;
  for (Index c = wlo; c < whi; ++c) {
    if (f[c] != 0.0) support.push_back(c);
  }
  if (support.empty()) return out;

  // antiderivatives of a_j chi_W at window edges, zero at the left window edge
  std::vector<std::vector<double>> edge(m, std::vector<double>(static_cast<std::size_t>(whi - wlo + 1), 0.0));
  for (std::size_t j = 0; j < m; ++j) {
    long double acc = 0.0L;
    for (Index c = wlo; c < whi; ++c) {
      acc += static_cast<long double>(inputs[j][c]) * h;
      edge[j][static_cast<std::size_t>(c - wlo + 1)] = static_cast<double>(acc);
    }
  }
  auto a_at_center = [&](std::size_t j, Index i) {
    if (i < wlo) return 0.0;
    if (i >= whi) return edge[j].back();
    return edge[j][static_cast<std::size_t>(i - wlo)] + 0.5 * h * inputs[j][i];
  };

  const double eps = eps_;
  double ax[2] = {0.0, 0.0};
  for (Index i = elo; i < ehi; ++i) {
    for (std::size_t j = 0; j < m; ++j) ax[j] = a_at_center(j, i);
    long double acc = 0.0L;
    for (Index c : support) {
      const double delta = static_cast<double>(i - c);
      const double ua = (delta - 0.5) * h, ub = (delta + 0.5) * h;
      // pieces of [ua, ub] with |u| > eps
      double pieces[2][2];
      int np = 0;
      if (ub > eps) pieces[np][0] = std::max(ua, eps), pieces[np++][1] = ub;
      if (ua < -eps) pieces[np][0] = ua, pieces[np++][1] = std::min(ub, -eps);
      if (np == 0) continue;
      // A_j(x) - A_j(y) = D_j + a_j u on this cell, with u = x - y and x - c0 = ub
      double dj[2], aj[2];
      for (std::size_t j = 0; j < m; ++j) {
        aj[j] = inputs[j][c];
        dj[j] = ax[j] - edge[j][static_cast<std::size_t>(c - wlo)] - aj[j] * ub;
      }
      double v = 0.0;
      for (int p = 0; p < np; ++p) {
        const Moments mo = moments(pieces[p][0], pieces[p][1]);
        if (m == 1) {
          v += dj[0] * mo.i2 + aj[0] * mo.i1;
        } else {
          v += dj[0] * dj[1] * mo.i3 + (dj[0] * aj[1] + dj[1] * aj[0]) * mo.i2 + aj[0] * aj[1] * mo.i1;
        }
      }
      acc += static_cast<long double>(v) * f[c];
    }
    out[static_cast<std::size_t>(i - elo)] = static_cast<double>(acc);
  }
  return out;
}

GridFunction apply_c(const LipschitzData& l, const GridFunction& f, std::optional<double> eps) {
  if (!(f.domain() == l.domain())) throw DomainMismatch("function and slopes live on different domains");
  const CalderonOperator t(l.domain(), static_cast<int>(l.order()), eps);
  std::vector<GridFunction> inputs = l.slopes();
  inputs.push_back(f);
  return t.evaluate(inputs);
}

GridFunction commutator_slot(const OperatorHandle& t, const std::vector<GridFunction>& inputs, const GridFunction& b,
                             std::size_t slot) {
  if (slot >= inputs.size()) throw ParameterError("slot index out of range");
  GridFunction out = b * t.evaluate(inputs);
  std::vector<GridFunction> moved = inputs;
  moved[slot] *= b;
  out -= t.evaluate(moved);
  return out;
}

GridFunction commutator_t(const OperatorHandle& t, const std::vector<GridFunction>& inputs,
                          const std::vector<std::optional<GridFunction>>& bs) {
  if (bs.size() != inputs.size()) throw ParameterError("need one (possibly empty) symbol per slot");
  GridFunction base = t.evaluate(inputs);
  GridFunction out(base.domain(), 0.0);
  for (std::size_t j = 0; j < bs.size(); ++j) {
    if (!bs[j]) continue;
    out += *bs[j] * base;
    std::vector<GridFunction> moved = inputs;
    moved[j] *= *bs[j];
    out -= t.evaluate(moved);
  }
  return out;
}

GridFunction grand_maximal(const OperatorHandle& t, const std::vector<std::vector<GridFunction>>& tuples, double q,
                           const CubeCollection& cubes) {
  if (tuples.empty()) throw ParameterError("need at least one input tuple");
  if (!(q > 0.0)) throw ParameterError("q must be positive");
  const Domain& d = cubes.domain();
  std::vector<GridFunction> full;
  for (const auto& tup : tuples) full.push_back(t.evaluate(tup));
  GridFunction out(d, 0.0);
  std::vector<double> diff;
  cubes.for_each([&](const Cube& cube) {
    const Cube w = dilate(cube, 3, d);
    diff.assign(static_cast<std::size_t>(cube.cell_count()), 0.0);
    for (std::size_t k = 0; k < tuples.size(); ++k) {
      const auto local = t.evaluate(tuples[k], w, cube);
      for (Index i = cube.lo[0]; i < cube.hi[0]; ++i) {
        const auto s = static_cast<std::size_t>(i - cube.lo[0]);
        const double v = std::abs(full[k][i] - local[s]);
        if (std::isinf(q)) diff[s] = std::max(diff[s], v);
        else diff[s] += std::pow(v, q);
      }
    }
    double best = 0.0;
    for (double v : diff) best = std::max(best, std::isinf(q) ? v : std::pow(v, 1.0 / q));
    for (Index i = cube.lo[0]; i < cube.hi[0]; ++i) out[i] = std::max(out[i], best);
  });
  return out;
}

GridFunction grand_maximal(const OperatorHandle& t, const std::vector<GridFunction>& inputs,
                           const CubeCollection& cubes) {
  return grand_maximal(t, std::vector<std::vector<GridFunction>>{inputs}, kInfinity, cubes);
}

}  // namespace sparsedom
