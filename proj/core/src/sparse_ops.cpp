#include "sparsedom/sparse_ops.hpp"

#include <algorithm>
#include <cmath>

#include "sparsedom/error.hpp"
#include "sparsedom/localnorms.hpp"

namespace sparsedom {

namespace {

SparseFamily checked(SparseFamily s) {
  const SparseCheck c = verify_sparse(s);
  if (!c.ok) throw ParameterError("family is not sparse: " + c.message);
  s.sort();
  return s;
}

void require_inputs(const SparseOperatorSpec& spec, const std::vector<GridFunction>& fs) {
  if (fs.size() != spec.arity) throw ParameterError("wrong number of input functions");
  for (const auto& f : fs) {
    if (!(f.domain() == spec.family.domain)) throw DomainMismatch("input and family live on different domains");
  }
}

void scatter_add(GridFunction& out, const Cube& q, double v) {
  if (v == 0.0) return;
  const Domain& d = out.domain();
  if (q.dim == 1) {
    for (Index i = q.lo[0]; i < q.hi[0]; ++i) out[i] += v;
    return;
  }
  for (Index i = q.lo[0]; i < q.hi[0]; ++i)
    for (Index j = q.lo[1]; j < q.hi[1]; ++j) out[d.flat(i, j)] += v;
}

}  // namespace

SparseOperatorSpec SparseOperatorSpec::orlicz(SparseFamily s, std::vector<double> betas) {
  if (betas.empty()) throw ParameterError("arity must be positive");
  for (double b : betas) {
    if (!(b >= 0.0)) throw ParameterError("beta must be nonnegative");
  }
  SparseOperatorSpec spec{checked(std::move(s)), betas.size(), Mode::Orlicz, std::move(betas), {}};
  return spec;
}

SparseOperatorSpec SparseOperatorSpec::weighted(SparseFamily s, const std::vector<Weight>& sigmas) {
  if (sigmas.empty()) throw ParameterError("arity must be positive");
  std::vector<GridFunction> ps;
  for (const auto& w : sigmas) {
    if (!(w.domain() == s.domain)) throw DomainMismatch("weight and family live on different domains");
    ps.push_back(w.function());
  }
  return SparseOperatorSpec{checked(std::move(s)), sigmas.size(), Mode::Weighted, {}, std::move(ps)};
}

SparseOperatorSpec SparseOperatorSpec::commutator(SparseFamily s, std::vector<GridFunction> bs) {
  if (bs.empty()) throw ParameterError("arity must be positive");
  for (const auto& b : bs) {
    if (!(b.domain() == s.domain)) throw DomainMismatch("symbol and family live on different domains");
  }
  const std::size_t m = bs.size();
  return SparseOperatorSpec{checked(std::move(s)), m, Mode::Commutator, {}, std::move(bs)};
}

GridFunction eval_sparse(const SparseOperatorSpec& spec, const std::vector<GridFunction>& fs) {
  require_inputs(spec, fs);
  if (spec.mode == SparseOperatorSpec::Mode::Commutator) return eval_sparse_commutator(spec, fs);
  const Domain& d = spec.family.domain;
  std::vector<CellSums> sums;
  for (std::size_t j = 0; j < spec.arity; ++j) {
    GridFunction g = fs[j].abs();
    if (spec.mode == SparseOperatorSpec::Mode::Weighted) g *= spec.params[j];
    sums.emplace_back(g);
  }
  std::vector<double> coeff(spec.family.size(), 1.0);
  for (std::size_t qi = 0; qi < spec.family.size(); ++qi) {
    const Cube& q = spec.family.cubes[qi];
    for (std::size_t j = 0; j < spec.arity && coeff[qi] != 0.0; ++j) {
      const bool plain = spec.mode == SparseOperatorSpec::Mode::Weighted || spec.betas[j] == 0.0;
      coeff[qi] *= plain ? sums[j].average(q) : orlicz_llogl(fs[j], q, spec.betas[j]);
    }
  }
  GridFunction out(d, 0.0);
  for (std::size_t qi = 0; qi < spec.family.size(); ++qi) scatter_add(out, spec.family.cubes[qi], coeff[qi]);
  return out;
}

GridFunction eval_sparse_commutator(const SparseOperatorSpec& spec, const std::vector<GridFunction>& fs) {
  require_inputs(spec, fs);
  if (spec.mode != SparseOperatorSpec::Mode::Commutator) throw ParameterError("spec is not of commutator type");
  const Domain& d = spec.family.domain;
  std::vector<CellSums> sums;
  for (const auto& f : fs) sums.emplace_back(f.abs());
  std::vector<CellSums> bsums;
  for (const auto& b : spec.params) bsums.emplace_back(b);
  GridFunction out(d, 0.0);
  for (const Cube& q : spec.family.cubes) {
    double c = 1.0;
    for (const auto& s : sums) c *= s.average(q);
    if (c == 0.0) continue;
    std::vector<double> means;
    for (const auto& s : bsums) means.push_back(s.average(q));
    for (Index cell : q.cells(d)) {
      double osc = 0.0;
      for (std::size_t i = 0; i < spec.params.size(); ++i) osc += std::abs(spec.params[i][cell] - means[i]);
      out[cell] += osc * c;
    }
  }
  return out;
}

GridFunction eval_sparse_oscillation(const SparseFamily& s, const GridFunction& b, std::size_t slot,
                                     const std::vector<GridFunction>& fs) {
  if (slot >= fs.size()) throw ParameterError("slot index out of range");
  const Domain& d = s.domain;
  for (const auto& f : fs) {
    if (!(f.domain() == d)) throw DomainMismatch("input and family live on different domains");
  }
  std::vector<CellSums> sums;
  for (const auto& f : fs) sums.emplace_back(f.abs());
  const CellSums bs(b);
  std::vector<std::size_t> order(s.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&s](std::size_t a, std::size_t c) { return s.cubes[a] < s.cubes[c]; });
  GridFunction out(d, 0.0);
  for (std::size_t qi : order) {
    const Cube& q = s.cubes[qi];
    double c = 1.0;
    for (std::size_t j = 0; j < fs.size(); ++j) {
      if (j != slot) c *= sums[j].average(q);
    }
    if (c == 0.0) continue;
    const double mean_b = bs.average(q);
    long double acc = 0.0L;
    const auto cells = q.cells(d);
    for (Index cell : cells) acc += std::abs(b[cell] - mean_b) * std::abs(fs[slot][cell]);
    scatter_add(out, q, c * static_cast<double>(acc / static_cast<long double>(cells.size())));
  }
  return out;
}

}  // namespace sparsedom
