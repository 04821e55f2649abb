#include "sparsedom/localnorms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsedom/error.hpp"

namespace sparsedom {

namespace {

constexpr double kRelTol = 1e-12;

double mean(std::span<const double> v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

double max_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

double exp_average(std::span<const double> v, double s, double c) {
  long double acc = 0.0L;
  for (double x : v) acc += std::exp(static_cast<long double>(std::pow(x / c, s)));
  return static_cast<double>(acc / static_cast<long double>(v.size()));
}

// Smallest lambda in (lo, hi] with g(lambda) <= target, g nonincreasing.
template <class G>
double bisect_down(G&& g, double lo, double hi, double target) {
  while (hi - lo > kRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) <= target) hi = mid;
    else lo = mid;
  }
  return hi;
}

void require_same(const Domain& a, const Domain& b) {
  if (!(a == b)) throw DomainMismatch("function and weight live on different domains");
}

}  // namespace

OrliczParams OrliczParams::llog(double beta) {
  if (!(beta >= 0.0)) throw ParameterError("L log L exponent must be nonnegative");
  return {Kind::LLog, beta};
}

OrliczParams OrliczParams::exp(double s) {
  if (!(s >= 1.0)) throw ParameterError("exponential Orlicz exponent must be at least 1");
  return {Kind::Exp, s};
}

double average(const GridFunction& f, const Cube& q) {
  long double acc = 0.0L;
  for (Index c : q.cells(f.domain())) acc += f[c];
  return static_cast<double>(acc / static_cast<long double>(q.cell_count()));
}

double average(const GridFunction& f, const Cube& q, const Weight& u) {
  require_same(f.domain(), u.domain());
  const Domain& d = f.domain();
  long double num = 0.0L, den = 0.0L;
  for (Index c : q.cells(d)) {
    num += static_cast<long double>(f[c]) * u[c];
    den += u[c];
  }
  return static_cast<double>(num / den);
}

std::vector<double> abs_values_on(const GridFunction& f, const Cube& q) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(q.cell_count()));
  for (Index c : q.cells(f.domain())) out.push_back(std::abs(f[c]));
  return out;
}

double llogl_phi_average(std::span<const double> v, double beta, double lambda) {
  long double acc = 0.0L;
  for (double x : v) {
    if (x == 0.0) continue;
    const double t = x / lambda;
    acc += beta == 0.0 ? t : t * std::pow(std::log1p(t), beta);
  }
  return static_cast<double>(acc / static_cast<long double>(v.size()));
}

double llogl_norm(std::span<const double> v, double beta) {
  if (!(beta >= 0.0)) throw ParameterError("L log L exponent must be nonnegative");
  if (v.empty()) throw ParameterError("local norm over an empty set");
  const double m = mean(v);
  if (m == 0.0) return 0.0;
  if (beta == 0.0) return m;
  const double top = max_of(v);
  double hi = m;
  while (llogl_phi_average(v, beta, hi) > 1.0) hi *= 2.0;
  const double lo = std::ldexp(top, -60);
  return bisect_down([&](double lam) { return llogl_phi_average(v, beta, lam); }, lo, hi, 1.0);
}

double orlicz_llogl(const GridFunction& f, const Cube& q, double beta) {
  const auto v = abs_values_on(f, q);
  return llogl_norm(v, beta);
}

double exp_norm(std::span<const double> v, double s) {
  if (!(s > 0.0)) throw ParameterError("exponential Orlicz exponent must be positive");
  if (v.empty()) throw ParameterError("local norm over an empty set");
  const double top = max_of(v);
  if (top == 0.0) return 0.0;
  // at hi every term is <= 2; at lo the largest term alone pushes the mean past 2
  const double n = static_cast<double>(v.size());
  const double hi = top / std::pow(std::log(2.0), 1.0 / s);
  const double lo = top / std::pow(std::log(2.0 * n) + 1.0, 1.0 / s);
  return bisect_down([&](double c) { return exp_average(v, s, c); }, lo, hi, 2.0);
}

double orlicz_exp(const GridFunction& g, const Cube& q, double s) {
  const auto v = abs_values_on(g, q);
  return exp_norm(v, s);
}

double orlicz_norm(const GridFunction& f, const Cube& q, const OrliczParams& params) {
  return params.kind == OrliczParams::Kind::LLog ? orlicz_llogl(f, q, params.exponent)
                                                 : orlicz_exp(f, q, params.exponent);
}

double osc_exp_local(const GridFunction& b, const Cube& q, double s) {
  const auto cells = q.cells(b.domain());
  long double acc = 0.0L;
  for (Index c : cells) acc += b[c];
  const double avg = static_cast<double>(acc / static_cast<long double>(cells.size()));
  std::vector<double> dev;
  dev.reserve(cells.size());
  for (Index c : cells) dev.push_back(std::abs(b[c] - avg));
  return exp_norm(dev, s);
}

double osc_exp_ls(const GridFunction& b, double s, const CubeCollection& cubes) {
  if (!(b.domain() == cubes.domain())) throw DomainMismatch("function and collection live on different domains");
  double best = 0.0;
  bool any = false;
  cubes.for_each([&](const Cube& q) {
    any = true;
    best = std::max(best, osc_exp_local(b, q, s));
  });
  if (!any) throw ParameterError("cube collection must be nonempty");
  return best;
}

double holder_orlicz_check(const GridFunction& f, const GridFunction& g, const Cube& q, double beta) {
  if (!(f.domain() == g.domain())) throw DomainMismatch("functions live on different domains");
  const auto fv = abs_values_on(f, q);
  const auto gv = abs_values_on(g, q);
  long double prod = 0.0L;
  for (std::size_t i = 0; i < fv.size(); ++i) prod += static_cast<long double>(fv[i]) * gv[i];
  const double lhs = static_cast<double>(prod / static_cast<long double>(fv.size()));
  const double nf = beta == 0.0 ? max_of(fv) : exp_norm(fv, 1.0 / beta);
  const double ng = llogl_norm(gv, beta);
  if (nf == 0.0 || ng == 0.0) return std::numeric_limits<double>::infinity();
  return lhs / (nf * ng);
}

}  // namespace sparsedom
