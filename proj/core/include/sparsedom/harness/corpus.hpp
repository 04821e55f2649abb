#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sparsedom/dyadic.hpp"
#include "sparsedom/mesh.hpp"

namespace sparsedom::harness {

/// Generator seeded from (seed, stream) so every case is reproducible on its own.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

/// Step function with `pieces` equal pieces on [lo, hi), values uniform in
/// [vmin, vmax], zero elsewhere. Piece edges fall on the mesh for every K >= 5
/// when lo, hi are multiples of 1/96, so the same seed gives the same
/// function at every resolution.
GridFunction random_step(const Domain& d, std::mt19937_64& rng, double lo = -0.25, double hi = 0.25,
                         int pieces = 48, double vmin = -1.0, double vmax = 1.0);

/// amplitude * exp(1 - 1/(1 - r^2)) with r = (x - center)/radius, at cell centers.
GridFunction smooth_bump(const Domain& d, double center, double radius, double amplitude = 1.0);

/// |x|^{-gamma} chi_{[lo, hi)} as exact cell averages, gamma < 1.
GridFunction power_singularity(const Domain& d, double gamma, double lo, double hi);

/// chi_{[lo, hi)} as exact cell averages.
GridFunction indicator(const Domain& d, double lo, double hi);

/// One input tuple sequence for C_{m+1}: slots[j] holds {f_j^k}.
struct TupleCase {
  std::string id;
  std::vector<VectorFunction> slots;
};

/// Random slopes and functions: slopes uniform in [-1, 1] plus an offset,
/// functions uniform in [-1, 1], all step functions on [-1/4, 1/4).
TupleCase random_tuple_case(const Domain& d, int order, int nseq, std::uint64_t seed, std::uint64_t index);

/// Fixed smooth inputs (resolution independent up to sampling).
TupleCase smooth_tuple_case(const Domain& d, int order, int nseq);

/// Corpus of `count` cases: `random`, `smooth`, or `mixed` (one smooth case
/// first, then random ones). nseq = 0 cycles 1..4.
std::vector<TupleCase> tuple_corpus(const Domain& d, int order, int count, int nseq, const std::string& kind,
                                    std::uint64_t seed);

/// Random nested dyadic family on a 1D domain: each selected cube selects at
/// most one child, and keeps the other child as its witness. The family is
/// 1/2-sparse.
SparseFamily random_nested_family(const Domain& d, std::mt19937_64& rng, int max_depth);

/// Weight recipe: `power` gives |x|^a, `a1` gives |x|^{-a}, `one` gives 1,
/// `two_cell` gives 1 on the left half and 1 + 10a on the right half.
GridFunction weight_from_recipe(const Domain& d, const std::string& kind, double a);

}  // namespace sparsedom::harness
