#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sparsedom/collection.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom {

/// Cellwise sup over cubes Q of the collection containing the cell of value(Q).
/// On the 1D all-mesh collection this runs in O(N^2) calls to `value`.
GridFunction sup_over_cubes(const CubeCollection& cubes, const std::function<double(const Cube&)>& value);

/// Hardy-Littlewood maximal function over the collection.
GridFunction hl_maximal(const GridFunction& f, const CubeCollection& cubes);

/// (M(|f|^tau))^{1/tau}, tau in (0, 1).
GridFunction m_tau(const GridFunction& f, double tau, const CubeCollection& cubes);

/// sup over grid cubes I containing x of ((1/u(I)) int_I |f|^rho u)^{1/rho}.
GridFunction dyadic_weighted_maximal(const GridFunction& f, const Weight& u, double rho, const DyadicGrid& grid);

/// min over c of the mean of |v - c|, by golden-section search on [min v, max v].
/// Returns {minimum, argmin}.
std::pair<double, double> mean_deviation_minimum(std::span<const double> v, double tol = 1e-8);

/// sup over grid cubes Q containing x of inf_c (<||f|^delta - c|>_Q)^{1/delta}.
GridFunction sharp_maximal(const GridFunction& f, double delta, const DyadicGrid& grid);

/// sup over Q containing x of prod_j ||f_j||_{L(log L)^{beta_j}, Q}.
GridFunction multilinear_orlicz_maximal(const std::vector<GridFunction>& fs, const std::vector<double>& betas,
                                        const CubeCollection& cubes);

}  // namespace sparsedom
