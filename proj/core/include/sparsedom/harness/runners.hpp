#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sparsedom/harness/corpus.hpp"
#include "sparsedom/harness/experiment.hpp"

namespace sparsedom::harness {

/// Weight constants per recipe sample: [w]_{A_p} (all mesh intervals, 1D),
/// the closed form for power weights, [w]_{A_inf}, and the multiple constant.
RunReport run_constants(const Experiment& e);

/// Sparse domination of C_{m+1} over the tuple corpus, one family per case.
RunReport run_dominate(const Experiment& e);

/// Vector-valued strong bound for C_{m+1} under power weights.
RunReport run_thm11(const Experiment& e);

/// Rows of the strong-type sweep for one explicit case at one resolution, one
/// row per weight parameter. `commutator` selects T_b.
std::vector<SweepRow> strong_case(const Experiment& e, const TupleCase& c, int resolution, bool commutator);

/// Same sweep for the commutator T_b with every slot carrying a BMO symbol.
RunReport run_thm12(const Experiment& e);

/// Weak endpoint for T_b with A_(1,...,1) weights over a log-spaced lambda grid.
RunReport run_thm13(const Experiment& e);

/// Empirical operator norm of M on L^p(|x|^a) and the fitted log-log slope
/// against [w]_{A_p}.
RunReport run_buckley(const Experiment& e);

/// Pointwise bound M_T <= C (M_tau(T) + M a M f) for C_2.
RunReport run_lemma32(const Experiment& e);

/// Local oscillation of sparse operators against local norms on dyadic cubes.
RunReport run_lemma44(const Experiment& e);

/// Weak type of the multilinear L(log L) maximal function with A_(1,...,1)
/// weights, and the good-lambda comparison through the sharp maximal function.
RunReport run_endpoint(const Experiment& e);

/// Subcommand names in CLI order.
const std::vector<std::string>& runner_names();

/// Runs the named sweep; throws ParameterError for unknown names.
RunReport run_named(const std::string& name, const Experiment& e);

/// Maps fn over [0, count) with up to `workers` threads. Results keep index order.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

/// Least-squares slope of y against x; throws ParameterError for fewer than 3 points.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sparsedom::harness
