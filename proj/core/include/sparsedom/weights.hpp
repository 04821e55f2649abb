#pragma once

#include <vector>

#include "sparsedom/collection.hpp"
#include "sparsedom/mesh.hpp"

namespace sparsedom {

inline constexpr double kWeightFloor = 1e-8;

/// Strictly positive grid function. Values below the floor are raised to it;
/// negative or NaN values are rejected.
class Weight {
 public:
  explicit Weight(GridFunction w, double floor = kWeightFloor);

  const GridFunction& function() const noexcept { return w_; }
  const Domain& domain() const noexcept { return w_.domain(); }
  double floor() const noexcept { return floor_; }
  double operator[](Index c) const noexcept { return w_[c]; }

  /// w^{-1/(p-1)}.
  Weight dual(double p) const;

 private:
  GridFunction w_;
  double floor_;
};

/// (p_1, ..., p_m) with 1/p = sum 1/p_j. p_j = 1 is accepted and handled by the
/// infimum branch of the multiple weight constant.
class ExponentTuple {
 public:
  explicit ExponentTuple(std::vector<double> ps);

  std::size_t size() const noexcept { return ps_.size(); }
  double operator[](std::size_t j) const noexcept { return ps_[j]; }
  const std::vector<double>& values() const noexcept { return ps_; }
  double p() const noexcept { return p_; }
  /// p_j' = p_j / (p_j - 1); infinity when p_j = 1.
  double dual(std::size_t j) const noexcept;
  /// max{1, p_1'/p, ..., p_m'/p}.
  double sharp_exponent() const noexcept;

 private:
  std::vector<double> ps_;
  double p_;
};

class WeightSystem {
 public:
  WeightSystem(std::vector<Weight> ws, ExponentTuple ps);

  std::size_t size() const noexcept { return ws_.size(); }
  const Weight& weight(std::size_t j) const noexcept { return ws_[j]; }
  const ExponentTuple& exponents() const noexcept { return ps_; }
  /// prod_k w_k^{p/p_k}.
  const GridFunction& nu() const noexcept { return nu_; }
  /// w_j^{-1/(p_j-1)}; requires p_j > 1.
  const Weight& sigma(std::size_t j) const;

 private:
  std::vector<Weight> ws_;
  ExponentTuple ps_;
  GridFunction nu_;
  std::vector<Weight> sigmas_;
};

/// max over the collection of <w>_Q <w^{-1/(p-1)}>_Q^{p-1}.
double ap_constant(const Weight& w, double p, const CubeCollection& cubes);

/// max over the collection of (1/u(Q)) int_Q M(u chi_Q), with M taken over
/// the same collection.
double ainfty_constant(const Weight& u, const CubeCollection& cubes);

/// Multiple weight constant: max of <nu>_Q prod_k <sigma_k>_Q^{p/p_k'}, with
/// (inf_Q w_k)^{-p} in place of the k-th factor when p_k = 1.
double multi_ap_constant(const WeightSystem& ws, const CubeCollection& cubes);

/// |x|^a as exact cell averages on a 1D domain, |a| < 1.
Weight power_weight(double a, const Domain& domain);

/// Closed-form A_2 constant of |x|^a over intervals centered at the origin.
inline double power_weight_a2(double a) { return 1.0 / (1.0 - a * a); }

}  // namespace sparsedom
