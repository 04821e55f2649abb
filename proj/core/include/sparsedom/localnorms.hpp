#pragma once

#include <span>
#include <vector>

#include "sparsedom/collection.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom {

/// Young function family: t log^beta(1+t) (`LLog`) or exp(t^s) - 1 (`Exp`).
struct OrliczParams {
  enum class Kind { LLog, Exp };
  Kind kind = Kind::LLog;
  double exponent = 0.0;

  static OrliczParams llog(double beta);
  static OrliczParams exp(double s);
};

/// <f>_Q.
double average(const GridFunction& f, const Cube& q);
/// (1/u(Q)) int_Q f u.
double average(const GridFunction& f, const Cube& q, const Weight& u);

/// Absolute values of f on the cells of Q.
std::vector<double> abs_values_on(const GridFunction& f, const Cube& q);

/// Mean of (t/lambda) log^beta(1 + t/lambda) over the samples.
double llogl_phi_average(std::span<const double> abs_values, double beta, double lambda);

/// Luxemburg norm ||f||_{L(log L)^beta} of equally weighted samples |f| >= 0.
double llogl_norm(std::span<const double> abs_values, double beta);
/// ||f||_{L(log L)^beta, Q}.
double orlicz_llogl(const GridFunction& f, const Cube& q, double beta);

/// inf{C > 0 : mean of exp((|g|/C)^s) <= 2} over equally weighted samples.
double exp_norm(std::span<const double> abs_values, double s);
/// ||g||_{exp L^s, Q}.
double orlicz_exp(const GridFunction& g, const Cube& q, double s);
/// Local norm for either family.
double orlicz_norm(const GridFunction& f, const Cube& q, const OrliczParams& params);

/// ||b - <b>_Q||_{exp L^s, Q} for one cube.
double osc_exp_local(const GridFunction& b, const Cube& q, double s);
/// max over the collection of the local oscillation.
double osc_exp_ls(const GridFunction& b, double s, const CubeCollection& cubes);

/// <|f g|>_Q / (||f||_{X,Q} ||g||_{L(log L)^beta,Q}) where X is exp L^{1/beta}
/// (L^infinity for beta = 0). Infinite when a denominator vanishes.
double holder_orlicz_check(const GridFunction& f, const GridFunction& g, const Cube& q, double beta);

}  // namespace sparsedom
