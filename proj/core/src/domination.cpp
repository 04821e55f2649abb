#include "sparsedom/domination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include <nlohmann/json.hpp>

#include "sparsedom/error.hpp"
#include "sparsedom/sparse_ops.hpp"

namespace sparsedom {

namespace {

bool halvable(const Cube& q) {
  for (int a = 0; a < q.dim; ++a) {
    const Index s = q.side(a);
    if (s < 2 || s % 2 != 0) return false;
  }
  return true;
}

// Dyadic subcubes of q (q included), parents before children.
void for_each_dyadic(const Cube& q, const std::function<void(const Cube&)>& visit) {
  visit(q);
  if (!halvable(q)) return;
  for (const Cube& c : children(q)) for_each_dyadic(c, visit);
}

double lq_combine(const std::vector<double>& v, double q) {
  if (v.size() == 1) return std::abs(v[0]);
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  if (peak == 0.0 || std::isinf(q)) return peak;
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / peak, q);
  return peak * std::pow(s, 1.0 / q);
}

class Engine {
 public:
  Engine(const OperatorHandle& t, const std::vector<VectorFunction>& slots, const std::vector<double>& qs,
         const GridFunction* b, std::size_t slot)
      : t_(t), d_(slots.empty() ? throw ParameterError("need at least one slot") : slots.front().domain()), b_(b),
        slot_(slot), family_(d_, 1, 2 * (d_.dim() == 1 ? 3 : 9)), mask_(static_cast<std::size_t>(d_.cell_count()), 0) {
    if (slots.size() != t.arity()) throw ParameterError("slot count differs from the operator arity");
    if (qs.size() != slots.size()) throw ParameterError("need one q_j per slot");
    nseq_ = slots.front().size();
    double inv = 0.0;
    for (std::size_t j = 0; j < slots.size(); ++j) {
      if (!(slots[j].domain() == d_)) throw DomainMismatch("slots live on different domains");
      if (slots[j].size() != nseq_) throw ParameterError("all slots need the same sequence length");
      if (!(qs[j] > 0.0)) throw ParameterError("q_j must be positive");
      inv += 1.0 / qs[j];
      norms_.push_back(lq_norm(slots[j], qs[j]));
      sums_.emplace_back(norms_.back());
    }
    q_ = 1.0 / inv;
    for (std::size_t k = 0; k < nseq_; ++k) {
      std::vector<GridFunction> tup;
      for (const auto& s : slots) tup.push_back(s[k]);
      if (b_) {
        std::vector<GridFunction> moved = tup;
        moved[slot_] *= *b_;
        btuples_.push_back(std::move(moved));
      }
      tuples_.push_back(std::move(tup));
    }
    pointwise_ = GridFunction(d_, 1.0);
    for (const auto& n : norms_) pointwise_ *= n;
    if (b_) {
      if (!(b_->domain() == d_)) throw DomainMismatch("symbol lives on a different domain");
      if (slot_ >= slots.size()) throw ParameterError("slot index out of range");
      bsums_.emplace(*b_);
    }
  }

  DominationResult run() {
    const Cube top = Cube::of_domain(d_);
    if (!halvable(top)) throw ParameterError("domain too coarse for the top-level partition");
    for (const Cube& q : children(top)) process(q, 1);
    family_.sort();

    DominationResult res{family_, 0.0, stats_, GridFunction(d_), GridFunction(d_)};
    res.stats.cube_count = family_.size();
    // the top cubes' 3-dilates cover the domain, so their cached values are T(f) itself
    std::vector<GridFunction> full(nseq_, GridFunction(d_)), fullb;
    if (b_) fullb.assign(nseq_, GridFunction(d_));
    for (const Cube& q : children(top)) {
      const Entry& e = entry(q);
      for (std::size_t k = 0; k < nseq_; ++k) {
        for (Index c : q.cells(d_)) {
          const auto s = static_cast<std::size_t>(local_index(q, c));
          full[k][c] = e.u[k][s];
          if (b_) fullb[k][c] = e.ub[k][s];
        }
      }
    }
    // b T(f) - T(b f) cancels in floating point; below this floor a value counts as exact cancellation
    double noise = 0.0;
    if (b_) {
      for (std::size_t k = 0; k < nseq_; ++k) {
        for (Index c = 0; c < full[k].size(); ++c) {
          noise = std::max(noise, std::abs((*b_)[c] * full[k][c]) + std::abs(fullb[k][c]));
        }
        full[k] = (*b_) * full[k] - fullb[k];
      }
      noise *= 1e-12 * static_cast<double>(nseq_);
    }
    res.lhs = lq_norm(VectorFunction(full), q_);
    std::vector<GridFunction> fs = norms_;
    if (b_) {
      std::vector<GridFunction> bs(fs.size(), GridFunction(d_, 0.0));
      bs[slot_] = *b_;
      res.rhs = eval_sparse_commutator(SparseOperatorSpec::commutator(family_, bs), fs) +
                eval_sparse_oscillation(family_, *b_, slot_, fs);
    } else {
      res.rhs = eval_sparse(SparseOperatorSpec::orlicz(family_, std::vector<double>(fs.size(), 0.0)), fs);
    }
    double c = 0.0;
    for (Index i = 0; i < res.lhs.size(); ++i) {
      if (res.lhs[i] == 0.0 || (res.rhs[i] == 0.0 && res.lhs[i] <= noise)) continue;
      c = std::max(c, res.rhs[i] > 0.0 ? res.lhs[i] / res.rhs[i] : std::numeric_limits<double>::infinity());
    }
    res.c_emp = c;
    return res;
  }

 private:
  struct Entry {
    std::vector<std::vector<double>> u;   // T(f^k chi_{3R}) on R
    std::vector<std::vector<double>> ub;  // same with slot i multiplied by b
  };

  Index local_index(const Cube& q, Index flat) const {
    const auto [i0, i1] = d_.unflat(flat);
    return q.dim == 1 ? i0 - q.lo[0] : (i0 - q.lo[0]) * q.side(1) + (i1 - q.lo[1]);
  }

  const Entry& entry(const Cube& r) {
    auto it = cache_.find(r);
    if (it != cache_.end()) return it->second;
    const Cube w = dilate(r, 3, d_);
    Entry e;
    for (std::size_t k = 0; k < nseq_; ++k) {
      e.u.push_back(t_.evaluate(tuples_[k], w, r));
      if (b_) e.ub.push_back(t_.evaluate(btuples_[k], w, r));
    }
    return cache_.emplace(r, std::move(e)).first->second;
  }

  double product_average(const Cube& w) const {
    double v = 1.0;
    for (const auto& s : sums_) v *= s.average(w);
    return v;
  }

  // Localized grand maximal function on q0 over the dyadic subcubes of q0.
  // `shift` selects T(g) with g_i = (b - shift) f_i when the symbol is present.
  std::vector<double> local_grand_maximal(const Cube& q0, bool with_symbol, double shift) {
    std::vector<double> m(static_cast<std::size_t>(q0.cell_count()), 0.0);
    const Entry& top = entry(q0);
    std::vector<double> diff(nseq_);
    for_each_dyadic(q0, [&](const Cube& r) {
      if (r == q0) return;
      const Entry& e = entry(r);
      double best = 0.0;
      const auto cells = r.cells(d_);
      for (std::size_t s = 0; s < cells.size(); ++s) {
        const auto s0 = static_cast<std::size_t>(local_index(q0, cells[s]));
        for (std::size_t k = 0; k < nseq_; ++k) {
          diff[k] = with_symbol ? (top.ub[k][s0] - shift * top.u[k][s0]) - (e.ub[k][s] - shift * e.u[k][s])
                                : top.u[k][s0] - e.u[k][s];
        }
        best = std::max(best, lq_combine(diff, q_));
      }
      for (Index c : cells) {
        auto& slot = m[static_cast<std::size_t>(local_index(q0, c))];
        slot = std::max(slot, best);
      }
    });
    return m;
  }

  void process(const Cube& q0, int depth) {
    const Cube w = dilate(q0, 3, d_);
    const double avg = product_average(w);
    if (avg == 0.0) return;
    stats_.depth = std::max(stats_.depth, depth);
    const auto cells = q0.cells(d_);
    if (!halvable(q0)) {
      family_.add(w, ranges_from_cells(cells));
      ++stats_.leaf_count;
      return;
    }

    const std::vector<double> mf = local_grand_maximal(q0, false, 0.0);
    std::vector<double> mg, pg;
    double avg_g = 0.0;
    if (b_) {
      const double c = bsums_->average(w);
      long double acc = 0.0L;
      for (Index x : w.cells(d_)) acc += std::abs((*b_)[x] - c) * norms_[slot_][x];
      avg_g = static_cast<double>(acc / static_cast<long double>(w.cell_count()));
      for (std::size_t j = 0; j < sums_.size(); ++j) {
        if (j != slot_) avg_g *= sums_[j].average(w);
      }
      if (avg_g > 0.0) {
        mg = local_grand_maximal(q0, true, c);
        for (Index x : cells) pg.push_back(std::abs((*b_)[x] - c) * pointwise_[x]);
      }
    }

    const Index budget = q0.cell_count();
    const int shift = d_.dim() + 2;
    double c2 = 1.0;
    std::vector<Index> e_cells;
    for (int iter = 0;; ++iter) {
      if (iter > 2000) throw ParameterError("exceptional set did not shrink; inputs are not finite");
      e_cells.clear();
      const double t1 = c2 * avg, t2 = c2 * avg_g;
      for (std::size_t s = 0; s < cells.size(); ++s) {
        bool hit = pointwise_[cells[s]] > t1 || mf[s] > t1;
        if (!hit && !mg.empty()) hit = pg[s] > t2 || mg[s] > t2;
        if (hit) e_cells.push_back(cells[s]);
      }
      if ((static_cast<Index>(e_cells.size()) << shift) <= budget) break;
      c2 *= 2.0;
    }
    stats_.max_c2 = std::max(stats_.max_c2, c2);

    for (Index x : e_cells) mask_[static_cast<std::size_t>(x)] = 1;
    const std::vector<Cube> ps = cz_decompose_indicator(mask_, d_, q0, 1.0 / static_cast<double>(1 << (d_.dim() + 1)));
    for (Index x : e_cells) mask_[static_cast<std::size_t>(x)] = 0;

    Index covered = 0;
    std::vector<char> in_p(cells.size(), 0);
    for (const Cube& p : ps) {
      covered += p.cell_count();
      for (Index x : p.cells(d_)) in_p[static_cast<std::size_t>(local_index(q0, x))] = 1;
    }
    stats_.max_selected_fraction =
        std::max(stats_.max_selected_fraction, static_cast<double>(covered) / static_cast<double>(budget));
    std::vector<Index> witness;
    for (std::size_t s = 0; s < cells.size(); ++s) {
      if (!in_p[s]) witness.push_back(cells[s]);
    }
    family_.add(w, ranges_from_cells(std::move(witness)));
    for (const Cube& p : ps) process(p, depth + 1);
  }

  const OperatorHandle& t_;
  Domain d_;
  const GridFunction* b_;
  std::size_t slot_;
  std::size_t nseq_ = 0;
  double q_ = 1.0;
  std::vector<GridFunction> norms_;
  std::vector<CellSums> sums_;
  std::optional<CellSums> bsums_;
  std::vector<std::vector<GridFunction>> tuples_;
  std::vector<std::vector<GridFunction>> btuples_;
  GridFunction pointwise_{d_};
  SparseFamily family_;
  DominationStats stats_;
  std::vector<char> mask_;
  std::map<Cube, Entry> cache_;
};

}  // namespace

std::vector<Cube> cz_decompose_indicator(const std::vector<char>& in_e, const Domain& domain, const Cube& q0,
                                         double level) {
  if (!(level > 0.0 && level < 1.0)) throw ParameterError("level must lie in (0, 1)");
  if (static_cast<Index>(in_e.size()) != domain.cell_count()) throw DomainMismatch("mask size differs from the cell count");
  if (!q0.inside(domain)) throw DomainMismatch("cube is not inside the domain");
  GridFunction chi(domain, 0.0);
  for (Index c = 0; c < domain.cell_count(); ++c) chi[c] = in_e[static_cast<std::size_t>(c)] ? 1.0 : 0.0;
  const CellSums s(chi);
  auto density = [&](const Cube& q) {
    return static_cast<double>(s.sum(q)) / static_cast<double>(q.cell_count());
  };
  if (density(q0) > level) throw PreconditionError("average of the indicator over the cube exceeds the level");
  std::vector<Cube> out;
  std::vector<Cube> stack{q0};
  while (!stack.empty()) {
    const Cube q = stack.back();
    stack.pop_back();
    if (s.sum(q) == 0.0L || !halvable(q)) continue;
    auto kids = children(q);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      if (density(*it) > level) out.push_back(*it);
      else stack.push_back(*it);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string result_to_json(const DominationResult& r) {
  nlohmann::json j;
  j["family"] = nlohmann::json::parse(family_to_json(r.family));
  j["c_emp"] = r.c_emp;
  j["c2"] = r.stats.max_c2;
  j["depth"] = r.stats.depth;
  j["cube_count"] = r.stats.cube_count;
  j["leaf_count"] = r.stats.leaf_count;
  j["max_selected_fraction"] = r.stats.max_selected_fraction;
  return j.dump();
}

DominationResult sparse_dominate(const OperatorHandle& t, const std::vector<VectorFunction>& slots,
                                 const std::vector<double>& qs) {
  return Engine(t, slots, qs, nullptr, 0).run();
}

DominationResult sparse_dominate_commutator(const OperatorHandle& t, const GridFunction& b,
                                            const std::vector<VectorFunction>& slots, const std::vector<double>& qs,
                                            std::size_t slot) {
  return Engine(t, slots, qs, &b, slot).run();
}

}  // namespace sparsedom
