#pragma once

#include <vector>

#include "sparsedom/dyadic.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom {

/// A sparse family with the per-cube rule that turns m functions into a coefficient.
struct SparseOperatorSpec {
  enum class Mode { Orlicz, Weighted, Commutator };

  SparseFamily family;
  std::size_t arity = 1;
  Mode mode = Mode::Orlicz;
  std::vector<double> betas;          // Orlicz
  std::vector<GridFunction> params;   // sigma_j (Weighted) or b_j (Commutator)

  /// sum_Q prod_j ||f_j||_{L(log L)^{beta_j},Q} chi_Q.
  static SparseOperatorSpec orlicz(SparseFamily s, std::vector<double> betas);
  /// sum_Q prod_j <f_j>_Q^{sigma_j} <sigma_j>_Q chi_Q.
  static SparseOperatorSpec weighted(SparseFamily s, const std::vector<Weight>& sigmas);
  /// sum_Q (sum_i |b_i(x) - <b_i>_Q|) prod_j <f_j>_Q chi_Q.
  static SparseOperatorSpec commutator(SparseFamily s, std::vector<GridFunction> bs);
};

/// Evaluates an Orlicz or weighted sparse operator on |f_1|, ..., |f_m|.
GridFunction eval_sparse(const SparseOperatorSpec& spec, const std::vector<GridFunction>& fs);

/// Evaluates the commutator-type sparse operator.
GridFunction eval_sparse_commutator(const SparseOperatorSpec& spec, const std::vector<GridFunction>& fs);

/// sum_Q <|b - <b>_Q| |f_i|>_Q prod_{j != i} <|f_j|>_Q chi_Q.
GridFunction eval_sparse_oscillation(const SparseFamily& s, const GridFunction& b, std::size_t slot,
                                     const std::vector<GridFunction>& fs);

}  // namespace sparsedom
