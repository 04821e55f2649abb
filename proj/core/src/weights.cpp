#include "sparsedom/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsedom/error.hpp"

namespace sparsedom {

namespace {

void require_domain(const Domain& a, const Domain& b) {
  if (!(a == b)) throw DomainMismatch("weight and cube collection live on different domains");
}

double min_over(const GridFunction& w, const Cube& q) {
  const Domain& d = w.domain();
  double m = std::numeric_limits<double>::infinity();
  if (q.dim == 1) {
    for (Index i = q.lo[0]; i < q.hi[0]; ++i) m = std::min(m, w[i]);
  } else {
    for (Index i = q.lo[0]; i < q.hi[0]; ++i)
      for (Index j = q.lo[1]; j < q.hi[1]; ++j) m = std::min(m, w[d.flat(i, j)]);
  }
  return m;
}

// Visits all intervals [l, r) of a 1D domain with running minima of the
// requested functions, left endpoint outer.
template <class Visit>
void all_intervals_with_min(const Domain& d, const std::vector<const GridFunction*>& fs, Visit&& visit) {
  const Index n = d.cells_per_axis();
  std::vector<double> mins(fs.size());
  for (Index l = 0; l < n; ++l) {
    std::fill(mins.begin(), mins.end(), std::numeric_limits<double>::infinity());
    for (Index r = l + 1; r <= n; ++r) {
      for (std::size_t k = 0; k < fs.size(); ++k) mins[k] = std::min(mins[k], (*fs[k])[r - 1]);
      visit(Cube::interval(l, r), mins);
    }
  }
}

}  // namespace

Weight::Weight(GridFunction w, double floor) : w_(std::move(w)), floor_(floor) {
  if (!(floor > 0.0)) throw ParameterError("weight floor must be positive");
  for (double& v : w_.values()) {
    if (std::isnan(v) || v < 0.0) throw WeightError("weight values must be nonnegative numbers");
    if (v < floor) v = floor;
  }
}

Weight Weight::dual(double p) const {
  if (!(p > 1.0)) throw ParameterError("dual weight needs p > 1");
  const double e = -1.0 / (p - 1.0);
  return Weight(w_.map([e](double v) { return std::pow(v, e); }), floor_);
}

ExponentTuple::ExponentTuple(std::vector<double> ps) : ps_(std::move(ps)) {
  if (ps_.empty()) throw ParameterError("exponent tuple must be nonempty");
  double inv = 0.0;
  for (double pj : ps_) {
    if (!(pj >= 1.0) || std::isinf(pj)) throw ParameterError("each p_j must lie in [1, infinity)");
    inv += 1.0 / pj;
  }
  p_ = 1.0 / inv;
}

double ExponentTuple::dual(std::size_t j) const noexcept {
  const double pj = ps_[j];
  return pj == 1.0 ? std::numeric_limits<double>::infinity() : pj / (pj - 1.0);
}

double ExponentTuple::sharp_exponent() const noexcept {
  double e = 1.0;
  for (std::size_t j = 0; j < ps_.size(); ++j) e = std::max(e, dual(j) / p_);
  return e;
}

WeightSystem::WeightSystem(std::vector<Weight> ws, ExponentTuple ps)
    : ws_(std::move(ws)), ps_(std::move(ps)), nu_(ws_.empty() ? throw ParameterError("empty weight system") : ws_.front().domain(), 1.0) {
  if (ws_.size() != ps_.size()) throw ParameterError("weights and exponents differ in length");
  const double p = ps_.p();
  for (std::size_t k = 0; k < ws_.size(); ++k) {
    if (!(ws_[k].domain() == nu_.domain())) throw DomainMismatch("weights live on different domains");
    const double e = p / ps_[k];
    for (Index c = 0; c < nu_.size(); ++c) nu_[c] *= std::pow(ws_[k][c], e);
    if (ps_[k] > 1.0) sigmas_.push_back(ws_[k].dual(ps_[k]));
    else sigmas_.push_back(ws_[k]);  // placeholder, the p_k = 1 branch never reads it
  }
}

const Weight& WeightSystem::sigma(std::size_t j) const {
  if (ps_[j] == 1.0) throw ParameterError("sigma_j is undefined for p_j = 1");
  return sigmas_[j];
}

double ap_constant(const Weight& w, double p, const CubeCollection& cubes) {
  if (!(p > 1.0)) throw ParameterError("A_p constant needs p > 1");
  require_domain(w.domain(), cubes.domain());
  const CellSums sw(w.function());
  const CellSums ss(w.dual(p).function());
  double best = 0.0;
  const bool square = p == 2.0;
  cubes.for_each([&](const Cube& q) {
    const double a = sw.average(q);
    const double b = ss.average(q);
    best = std::max(best, square ? a * b : a * std::pow(b, p - 1.0));
  });
  if (best == 0.0) throw ParameterError("cube collection must be nonempty");
  return best;
}

double ainfty_constant(const Weight& u, const CubeCollection& cubes) {
  require_domain(u.domain(), cubes.domain());
  const Domain& d = u.domain();
  const CellSums su(u.function());
  double best = 0.0;
  std::vector<double> m;
  cubes.for_each([&](const Cube& q) {
    const long double uq = su.sum(q);
    long double integral = 0.0L;
    if (cubes.kind() == CubeCollection::Kind::AllMesh && d.dim() == 1) {
      // M(u chi_Q) on Q from subintervals: for each left end, suffix max over right ends
      const Index lo = q.lo[0], n = q.side(0);
      m.assign(static_cast<std::size_t>(n), 0.0);
      std::vector<double> suffix(static_cast<std::size_t>(n + 1), 0.0);
      for (Index l = 0; l < n; ++l) {
        double run = 0.0;
        for (Index r = n; r > l; --r) {
          run = std::max(run, su.average(Cube::interval(lo + l, lo + r)));
          suffix[static_cast<std::size_t>(r)] = run;
        }
        for (Index x = l; x < n; ++x) m[static_cast<std::size_t>(x)] = std::max(m[static_cast<std::size_t>(x)], suffix[static_cast<std::size_t>(x + 1)]);
      }
    } else {
      m.assign(static_cast<std::size_t>(q.cell_count()), 0.0);
      cubes.for_each_meeting(q, [&](const Cube& r) {
        const Cube rq = r.intersection(q);
        const double val = static_cast<double>(su.sum(rq) / static_cast<long double>(r.cell_count()));
        for (Index i = rq.lo[0]; i < rq.hi[0]; ++i) {
          if (q.dim == 1) {
            auto& slot = m[static_cast<std::size_t>(i - q.lo[0])];
            slot = std::max(slot, val);
            continue;
          }
          for (Index j = rq.lo[1]; j < rq.hi[1]; ++j) {
            auto& slot = m[static_cast<std::size_t>((i - q.lo[0]) * q.side(1) + (j - q.lo[1]))];
            slot = std::max(slot, val);
          }
        }
      });
    }
    for (double v : m) integral += v;
    best = std::max(best, static_cast<double>(integral / uq));
  });
  if (best == 0.0) throw ParameterError("cube collection must be nonempty");
  return best;
}

double multi_ap_constant(const WeightSystem& ws, const CubeCollection& cubes) {
  const Domain& d = ws.nu().domain();
  require_domain(d, cubes.domain());
  const auto& ps = ws.exponents();
  const double p = ps.p();
  const CellSums snu(ws.nu());
  std::vector<CellSums> ss;
  std::vector<const GridFunction*> inf_branch;
  std::vector<std::size_t> inf_index;
  for (std::size_t k = 0; k < ws.size(); ++k) {
    if (ps[k] > 1.0) {
      ss.emplace_back(ws.sigma(k).function());
    } else {
      ss.emplace_back(ws.nu());  // unused slot keeps indices aligned
      inf_branch.push_back(&ws.weight(k).function());
      inf_index.push_back(k);
    }
  }
  double best = 0.0;
  auto value = [&](const Cube& q, const std::vector<double>& mins) {
    double v = snu.average(q);
    std::size_t next_min = 0;
    for (std::size_t k = 0; k < ws.size(); ++k) {
      if (ps[k] > 1.0) v *= std::pow(ss[k].average(q), p / ps.dual(k));
      else v *= std::pow(mins[next_min++], -p);
    }
    best = std::max(best, v);
  };
  if (!inf_branch.empty() && cubes.kind() == CubeCollection::Kind::AllMesh && d.dim() == 1) {
    all_intervals_with_min(d, inf_branch, value);
  } else {
    std::vector<double> mins(inf_branch.size());
    cubes.for_each([&](const Cube& q) {
      for (std::size_t i = 0; i < inf_branch.size(); ++i) mins[i] = min_over(*inf_branch[i], q);
      value(q, mins);
    });
  }
  if (best == 0.0) throw ParameterError("cube collection must be nonempty");
  return best;
}

Weight power_weight(double a, const Domain& domain) {
  if (domain.dim() != 1) throw UnsupportedError("power weights are 1D");
  if (!(std::abs(a) < 1.0)) throw ParameterError("power weight exponent must satisfy |a| < 1");
  if (a == 0.0) return Weight(GridFunction(domain, 1.0));
  const double e = a + 1.0;
  return Weight(GridFunction::from_antiderivative(domain, [e](double x) {
    const double v = std::pow(std::abs(x), e) / e;
    return x < 0.0 ? -v : v;
  }));
}

}  // namespace sparsedom
