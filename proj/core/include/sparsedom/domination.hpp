#pragma once

#include <string>
#include <vector>

#include "sparsedom/calderon.hpp"
#include "sparsedom/dyadic.hpp"

namespace sparsedom {

/// Maximal dyadic subcubes P of q0 (obtained by halving) with
/// |P cap E| / |P| > level. `in_e` is a cell mask over the whole domain.
/// Requires <chi_E>_{q0} <= level.
std::vector<Cube> cz_decompose_indicator(const std::vector<char>& in_e, const Domain& domain, const Cube& q0,
                                         double level);

struct DominationStats {
  int depth = 0;
  std::size_t cube_count = 0;
  std::size_t leaf_count = 0;
  double max_c2 = 0.0;
  /// Largest sum_j |P_j| / |Q0| seen at any step (must stay <= 1/2).
  double max_selected_fraction = 0.0;
};

struct DominationResult {
  SparseFamily family;
  double c_emp = 0.0;
  DominationStats stats;
  GridFunction lhs;
  GridFunction rhs;
};

std::string result_to_json(const DominationResult& r);

/// Sparse domination of ||{T(f_1^k, ..., f_m^k)}||_{l^q}, 1/q = sum 1/q_j, by
/// sum over S of prod_j <||{f_j^k}||_{l^{q_j}}>_{Q} chi_Q. `slots[j]` holds the
/// sequence {f_j^k}; all slots must have the same length.
DominationResult sparse_dominate(const OperatorHandle& t, const std::vector<VectorFunction>& slots,
                                 const std::vector<double>& qs);

/// Same construction for [b, T]_i. The right side is the sum of
/// |b(x) - <b>_Q| prod_j <F_j>_Q and <|b - <b>_Q| F_i>_Q prod_{j != i} <F_j>_Q.
DominationResult sparse_dominate_commutator(const OperatorHandle& t, const GridFunction& b,
                                            const std::vector<VectorFunction>& slots, const std::vector<double>& qs,
                                            std::size_t slot);

}  // namespace sparsedom
