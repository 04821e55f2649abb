#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sparsedom/collection.hpp"
#include "sparsedom/mesh.hpp"

namespace sparsedom {

/// Slopes a_1..a_m on a 1D domain and their continuous piecewise-linear
/// antiderivatives A_j, anchored with A_j = 0 at the left domain edge.
class LipschitzData {
 public:
  explicit LipschitzData(std::vector<GridFunction> slopes);

  std::size_t order() const noexcept { return slopes_.size(); }
  const Domain& domain() const noexcept { return slopes_.front().domain(); }
  const GridFunction& slope(std::size_t j) const noexcept { return slopes_[j]; }
  const std::vector<GridFunction>& slopes() const noexcept { return slopes_; }
  /// A_j at cell edge e, e in [0, N].
  double edge_value(std::size_t j, Index e) const noexcept { return edges_[j][static_cast<std::size_t>(e)]; }
  /// A_j(x) for any real x (constant beyond the domain).
  double value(std::size_t j, double x) const noexcept;

 private:
  std::vector<GridFunction> slopes_;
  std::vector<std::vector<double>> edges_;
};

/// Kernel (-1)^{m e(y_{m+1} - x)} / (x - y_{m+1})^{m+1} prod_j chi_(min, max)(y_j)
/// with e the indicator of [0, infinity). ys holds y_1..y_{m+1}.
double kernel_c(double x, std::span<const double> ys);

/// Contract consumed by the domination engine: a pure multilinear operator
/// that can be evaluated on inputs restricted to a window.
class OperatorHandle {
 public:
  virtual ~OperatorHandle() = default;

  virtual std::size_t arity() const = 0;
  virtual double epsilon() const = 0;
  /// T(f_1 chi_W, ..., f_m chi_W) on the cells of `eval`, in storage order.
  virtual std::vector<double> evaluate(const std::vector<GridFunction>& inputs, const Cube& window,
                                       const Cube& eval) const = 0;

  /// T(f_1, ..., f_m) on the whole domain.
  GridFunction evaluate(const std::vector<GridFunction>& inputs) const;
};

/// Truncated Calderon commutator C_{m+1}(a_1, ..., a_m, f), m in {1, 2}:
/// int_{|x-y|>eps} prod_j (A_j(x) - A_j(y)) / (x - y)^{m+1} f(y) dy at cell centers.
/// Inputs are ordered (a_1, ..., a_m, f). Each cell integral is in closed form.
class CalderonOperator final : public OperatorHandle {
 public:
  /// eps defaults to one cell width.
  CalderonOperator(const Domain& domain, int order, std::optional<double> eps = std::nullopt);

  std::size_t arity() const override { return static_cast<std::size_t>(order_) + 1; }
  double epsilon() const override { return eps_; }
  int order() const noexcept { return order_; }
  const Domain& domain() const noexcept { return domain_; }

  std::vector<double> evaluate(const std::vector<GridFunction>& inputs, const Cube& window,
                               const Cube& eval) const override;
  using OperatorHandle::evaluate;

 private:
  Domain domain_;
  int order_;
  double eps_;
};

/// C_{m+1}(a_1, ..., a_m, f) with truncation eps (default one cell).
GridFunction apply_c(const LipschitzData& l, const GridFunction& f, std::optional<double> eps = std::nullopt);

/// [b, T]_j(f) = b T(f) - T(f_1, ..., b f_j, ..., f_m).
GridFunction commutator_slot(const OperatorHandle& t, const std::vector<GridFunction>& inputs, const GridFunction& b,
                             std::size_t slot);

/// T_b = sum_j [b_j, T]_j over the slots with a symbol; empty entries are skipped.
GridFunction commutator_t(const OperatorHandle& t, const std::vector<GridFunction>& inputs,
                          const std::vector<std::optional<GridFunction>>& bs);

/// sup over Q containing x of max over Q of ||{T(f^k) - T(f^k chi_{3Q})}||_{l^q}.
/// Each entry of `tuples` is one input tuple f^k; q = infinity gives the max over k.
GridFunction grand_maximal(const OperatorHandle& t, const std::vector<std::vector<GridFunction>>& tuples, double q,
                           const CubeCollection& cubes);
/// Scalar version.
GridFunction grand_maximal(const OperatorHandle& t, const std::vector<GridFunction>& inputs,
                           const CubeCollection& cubes);

}  // namespace sparsedom
