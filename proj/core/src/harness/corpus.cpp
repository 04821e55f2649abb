#include "sparsedom/harness/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "sparsedom/error.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom::harness {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

GridFunction random_step(const Domain& d, std::mt19937_64& rng, double lo, double hi, int pieces, double vmin,
                         double vmax) {
  if (pieces < 1 || !(hi > lo)) throw ParameterError("invalid step layout");
  std::uniform_real_distribution<double> u(vmin, vmax);
  std::vector<double> vals(static_cast<std::size_t>(pieces));
  for (auto& v : vals) v = u(rng);
  const double width = (hi - lo) / pieces;
  return GridFunction::sample(d, [&](double x) {
    if (x < lo || x >= hi) return 0.0;
    const auto k = std::min<std::size_t>(static_cast<std::size_t>((x - lo) / width), vals.size() - 1);
    return vals[k];
  });
}

GridFunction smooth_bump(const Domain& d, double center, double radius, double amplitude) {
  return GridFunction::sample(d, [=](double x) {
    const double r = (x - center) / radius;
    if (std::abs(r) >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - r * r));
  });
}

GridFunction power_singularity(const Domain& d, double gamma, double lo, double hi) {
  if (!(gamma < 1.0)) throw ParameterError("power singularity must be integrable");
  const double e = 1.0 - gamma;
  auto prim = [=](double x) {
    const double c = std::clamp(x, lo, hi);
    return std::copysign(std::pow(std::abs(c), e) / e, c);
  };
  return GridFunction::from_antiderivative(d, prim);
}

GridFunction indicator(const Domain& d, double lo, double hi) {
  return GridFunction::from_antiderivative(d, [=](double x) { return std::clamp(x, lo, hi); });
}

TupleCase random_tuple_case(const Domain& d, int order, int nseq, std::uint64_t seed, std::uint64_t index) {
  auto rng = make_rng(seed, index);
  TupleCase c;
  c.id = "random-" + std::to_string(index);
  for (int j = 0; j <= order; ++j) {
    std::vector<GridFunction> seq;
    for (int k = 0; k < nseq; ++k) {
      if (j < order) {
        GridFunction a = random_step(d, rng, -0.25, 0.25, 48, -1.0, 1.0);
        a += GridFunction(d, 0.5);
        seq.push_back(std::move(a));
      } else {
        seq.push_back(random_step(d, rng));
      }
    }
    c.slots.emplace_back(std::move(seq));
  }
  return c;
}

TupleCase smooth_tuple_case(const Domain& d, int order, int nseq) {
  TupleCase c;
  c.id = "smooth";
  for (int j = 0; j <= order; ++j) {
    std::vector<GridFunction> seq;
    for (int k = 0; k < nseq; ++k) {
      const double shift = 0.03 * k;
      if (j < order) {
        GridFunction a = smooth_bump(d, -0.05 + 0.1 * j + shift, 0.2, 0.5);
        a += GridFunction(d, 1.0);
        seq.push_back(std::move(a));
      } else {
        seq.push_back(smooth_bump(d, 0.04 - shift, 0.15, 1.0) - smooth_bump(d, -0.1 + shift, 0.1, 0.6));
      }
    }
    c.slots.emplace_back(std::move(seq));
  }
  return c;
}

std::vector<TupleCase> tuple_corpus(const Domain& d, int order, int count, int nseq, const std::string& kind,
                                    std::uint64_t seed) {
  if (kind != "random" && kind != "smooth" && kind != "mixed") throw ParameterError("unknown corpus kind: " + kind);
  std::vector<TupleCase> out;
  for (int i = 0; i < count; ++i) {
    const int len = nseq > 0 ? nseq : 1 + i % 4;
    if (kind == "smooth" || (kind == "mixed" && i == 0)) {
      out.push_back(smooth_tuple_case(d, order, len));
      if (kind == "smooth" && count > 1) out.back().id += "-" + std::to_string(i);
    } else {
      out.push_back(random_tuple_case(d, order, len, seed, static_cast<std::uint64_t>(i)));
    }
  }
  return out;
}

SparseFamily random_nested_family(const Domain& d, std::mt19937_64& rng, int max_depth) {
  if (d.dim() != 1) throw UnsupportedError("random families are generated in one dimension");
  SparseFamily s(d, 1, 2);
  const DyadicGrid grid(d);
  const int start = grid.coarsest_level() + 2;
  std::bernoulli_distribution take(0.7), cont(0.75), left(0.5);
  for (const Cube& top : grid.cubes_at(start)) {
    if (!take(rng)) continue;
    Cube q = top;
    for (int depth = 0;; ++depth) {
      const bool more = depth + 1 < max_depth && q.side() % 2 == 0 && q.side() >= 6 && cont(rng);
      if (!more) {
        std::vector<Index> cells = q.cells(d);
        s.add(q, ranges_from_cells(std::move(cells)));
        break;
      }
      const auto kids = children(q);
      const Cube& next = left(rng) ? kids[0] : kids[1];
      const Cube& other = (next == kids[0]) ? kids[1] : kids[0];
      s.add(q, ranges_from_cells(other.cells(d)));
      q = next;
    }
  }
  s.sort();
  return s;
}

GridFunction weight_from_recipe(const Domain& d, const std::string& kind, double a) {
  if (kind == "power") return power_weight(a, d).function();
  if (kind == "a1") return power_weight(-a, d).function();
  if (kind == "one") return GridFunction(d, 1.0);
  if (kind == "two_cell") {
    return GridFunction::sample(d, [=](double x) { return x < 0.0 ? 1.0 : 1.0 + 10.0 * a; });
  }
  throw ParameterError("unknown weight recipe: " + kind);
}

}  // namespace sparsedom::harness
