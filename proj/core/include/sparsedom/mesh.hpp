#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace sparsedom {

using Index = std::int64_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Bounded domain [-2^J, 2^J)^n cut into 3*2^K cells per unit length.
///
/// The factor 3 makes every dyadic side 2^-k (k <= K), every 3-dilate and
/// every one-third shift an exact union of cells. Cells are indexed per axis
/// from the lower domain corner; 2D storage is row-major (axis 0 is the row).
class Domain {
 public:
  Domain(int dim, int half_width_log2, int refinement);

  int dim() const noexcept { return dim_; }
  int half_width_log2() const noexcept { return j_; }
  int refinement() const noexcept { return k_; }

  Index cells_per_unit() const noexcept { return Index{3} << k_; }
  Index cells_per_axis() const noexcept { return cells_per_axis_; }
  Index cell_count() const noexcept { return cell_count_; }

  double cell_width() const noexcept { return h_; }
  double cell_volume() const noexcept { return dim_ == 1 ? h_ : h_ * h_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return -lower_; }

  /// Cell offset of the coordinate origin along each axis.
  Index origin_cell() const noexcept { return cells_per_axis_ / 2; }

  double cell_lower(Index i) const noexcept { return lower_ + static_cast<double>(i) * h_; }
  double cell_center(Index i) const noexcept { return lower_ + (static_cast<double>(i) + 0.5) * h_; }

  /// Cell containing coordinate x (clamped to the domain).
  Index cell_of(double x) const noexcept;

  Index flat(Index i0, Index i1 = 0) const noexcept { return dim_ == 1 ? i0 : i0 * cells_per_axis_ + i1; }
  std::array<Index, 2> unflat(Index c) const noexcept {
    if (dim_ == 1) return {c, 0};
    return {c / cells_per_axis_, c % cells_per_axis_};
  }

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  int dim_;
  int j_;
  int k_;
  Index cells_per_axis_;
  Index cell_count_;
  double h_;
  double lower_;
};

/// Piecewise-constant function, one value per cell, zero outside the domain.
class GridFunction {
 public:
  GridFunction(const Domain& domain, double value = 0.0);
  GridFunction(const Domain& domain, std::vector<double> values);

  /// Exact cell averages from an antiderivative (1D only).
  static GridFunction from_antiderivative(const Domain& domain, const std::function<double(double)>& primitive);
  /// Cell-center samples.
  static GridFunction sample(const Domain& domain, const std::function<double(double)>& fn);
  /// Cell-center samples in 2D.
  static GridFunction sample(const Domain& domain, const std::function<double(double, double)>& fn);

  const Domain& domain() const noexcept { return domain_; }
  Index size() const noexcept { return static_cast<Index>(values_.size()); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](Index c) const noexcept { return values_[static_cast<std::size_t>(c)]; }
  double& operator[](Index c) noexcept { return values_[static_cast<std::size_t>(c)]; }

  double integral() const noexcept;
  double max_abs() const noexcept;
  bool is_zero() const noexcept;

  GridFunction map(const std::function<double(double)>& fn) const;
  GridFunction abs() const;
  GridFunction pow(double exponent) const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(const GridFunction& other);
  GridFunction& operator*=(double c) noexcept;

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(GridFunction a, const GridFunction& b) { return a *= b; }
  friend GridFunction operator*(GridFunction a, double c) { return a *= c; }
  friend GridFunction operator*(double c, GridFunction a) { return a *= c; }

 private:
  Domain domain_;
  std::vector<double> values_;
};

/// Finite sequence {f^k} of grid functions on one domain.
class VectorFunction {
 public:
  explicit VectorFunction(std::vector<GridFunction> entries);
  explicit VectorFunction(GridFunction single);

  const Domain& domain() const noexcept { return entries_.front().domain(); }
  std::size_t size() const noexcept { return entries_.size(); }
  const GridFunction& operator[](std::size_t k) const noexcept { return entries_[k]; }
  const std::vector<GridFunction>& entries() const noexcept { return entries_; }

  VectorFunction scaled(double c) const;

 private:
  std::vector<GridFunction> entries_;
};

/// Cellwise (sum_k |f^k|^q)^{1/q}; q = infinity gives the cellwise max.
GridFunction lq_norm(const VectorFunction& v, double q);

/// (int ||{f^k(x)}||_{l^q}^p w(x) dx)^{1/p} as an exact cell sum.
double mixed_norm(const VectorFunction& v, double p, double q, const GridFunction& w);

/// sup_lambda lambda * w({||{f^k}||_{l^q} > lambda})^{1/p}, exact over attained levels.
double weak_norm(const VectorFunction& v, double p, double q, const GridFunction& w);

/// max over the grid of phi(lambda) * w({||{f^k}||_{l^q} > lambda}).
double weak_type_functional(const VectorFunction& v, double q, const GridFunction& w,
                            const std::function<double(double)>& phi, std::span<const double> lambdas);

/// Same quantity for a nonnegative scalar function g.
double weak_type_functional(const GridFunction& g, const GridFunction& w,
                            const std::function<double(double)>& phi, std::span<const double> lambdas);

/// Weighted measure of {g > lambda}.
double level_measure(const GridFunction& g, const GridFunction& w, double lambda);

/// Sorted distinct positive values of ||{f^k}||_{l^q}.
std::vector<double> attained_levels(const VectorFunction& v, double q);

/// Weight of ones on the domain.
GridFunction unit_weight(const Domain& domain);

// I/O: `<stem>.csv` holds row-major cell values, `<stem>.hdr` holds n, J, K.
void write_grid_function(const GridFunction& f, const std::filesystem::path& stem);
GridFunction read_grid_function(const std::filesystem::path& stem);

}  // namespace sparsedom
