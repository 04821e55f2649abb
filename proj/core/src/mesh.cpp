#include "sparsedom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "sparsedom/error.hpp"

namespace sparsedom {

namespace {

void require_same_domain(const Domain& a, const Domain& b) {
  if (!(a == b)) throw DomainMismatch("grid functions live on different domains");
}

void require_positive_weight(const GridFunction& w) {
  for (double x : w.values()) {
    if (!(x > 0.0)) throw WeightError("weight must be strictly positive on every cell");
  }
}

void require_positive_exponent(double p, const char* name) {
  if (!(p > 0.0)) throw ParameterError(std::string(name) + " must be positive");
}

}  // namespace

Domain::Domain(int dim, int half_width_log2, int refinement) : dim_(dim), j_(half_width_log2), k_(refinement) {
  if (dim != 1 && dim != 2) throw UnsupportedError("only dimensions 1 and 2 are supported");
  if (refinement < 0 || refinement > 24) throw ParameterError("refinement K must lie in [0, 24]");
  if (half_width_log2 < -1 || half_width_log2 > 8) throw ParameterError("half-width exponent J must lie in [-1, 8]");
  // 2^{J+1} * 3 * 2^K cells per axis
  cells_per_axis_ = Index{3} << (half_width_log2 + 1 + refinement);
  if (dim == 2 && cells_per_axis_ > (Index{1} << 28)) throw ParameterError("2D mesh too large");
  cell_count_ = dim == 1 ? cells_per_axis_ : cells_per_axis_ * cells_per_axis_;
  h_ = std::ldexp(1.0, -refinement) / 3.0;
  lower_ = -std::ldexp(1.0, half_width_log2);
}

Index Domain::cell_of(double x) const noexcept {
  const double pos = std::floor((x - lower_) / h_);
  if (pos < 0.0) return 0;
  if (pos >= static_cast<double>(cells_per_axis_)) return cells_per_axis_ - 1;
  return static_cast<Index>(pos);
}

GridFunction::GridFunction(const Domain& domain, double value)
    : domain_(domain), values_(static_cast<std::size_t>(domain.cell_count()), value) {}

GridFunction::GridFunction(const Domain& domain, std::vector<double> values)
    : domain_(domain), values_(std::move(values)) {
  if (static_cast<Index>(values_.size()) != domain_.cell_count()) {
    throw DomainMismatch("value array length differs from the cell count");
  }
}

GridFunction GridFunction::from_antiderivative(const Domain& domain, const std::function<double(double)>& primitive) {
  if (domain.dim() != 1) throw UnsupportedError("antiderivative construction is 1D only");
  GridFunction out(domain);
  const double h = domain.cell_width();
  double left = primitive(domain.cell_lower(0));
  for (Index i = 0; i < domain.cells_per_axis(); ++i) {
    const double right = primitive(domain.cell_lower(i + 1));
    out[i] = (right - left) / h;
    left = right;
  }
  return out;
}

GridFunction GridFunction::sample(const Domain& domain, const std::function<double(double)>& fn) {
  if (domain.dim() != 1) throw UnsupportedError("1D sampler used on a 2D domain");
  GridFunction out(domain);
  for (Index i = 0; i < domain.cells_per_axis(); ++i) out[i] = fn(domain.cell_center(i));
  return out;
}

GridFunction GridFunction::sample(const Domain& domain, const std::function<double(double, double)>& fn) {
  if (domain.dim() != 2) throw UnsupportedError("2D sampler used on a 1D domain");
  GridFunction out(domain);
  const Index n = domain.cells_per_axis();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out[domain.flat(i, j)] = fn(domain.cell_center(i), domain.cell_center(j));
  }
  return out;
}

double GridFunction::integral() const noexcept {
  long double s = 0.0L;
  for (double v : values_) s += v;
  return static_cast<double>(s * domain_.cell_volume());
}

double GridFunction::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool GridFunction::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

GridFunction GridFunction::map(const std::function<double(double)>& fn) const {
  GridFunction out(*this);
  for (double& v : out.values_) v = fn(v);
  return out;
}

GridFunction GridFunction::abs() const {
  GridFunction out(*this);
  for (double& v : out.values_) v = std::abs(v);
  return out;
}

GridFunction GridFunction::pow(double exponent) const {
  GridFunction out(*this);
  for (double& v : out.values_) v = std::pow(std::abs(v), exponent);
  return out;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  require_same_domain(domain_, other.domain_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  require_same_domain(domain_, other.domain_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(const GridFunction& other) {
  require_same_domain(domain_, other.domain_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double c) noexcept {
  for (double& v : values_) v *= c;
  return *this;
}

VectorFunction::VectorFunction(std::vector<GridFunction> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ParameterError("a vector function needs at least one entry");
  for (const auto& e : entries_) require_same_domain(entries_.front().domain(), e.domain());
}

VectorFunction::VectorFunction(GridFunction single) { entries_.push_back(std::move(single)); }

VectorFunction VectorFunction::scaled(double c) const {
  std::vector<GridFunction> out = entries_;
  for (auto& e : out) e *= c;
  return VectorFunction(std::move(out));
}

GridFunction lq_norm(const VectorFunction& v, double q) {
  require_positive_exponent(q, "q");
  if (v.size() == 1) return v[0].abs();
  GridFunction out(v.domain());
  const Index n = out.size();
  if (std::isinf(q)) {
    for (const auto& e : v.entries()) {
      for (Index c = 0; c < n; ++c) out[c] = std::max(out[c], std::abs(e[c]));
    }
    return out;
  }
  // scale by the cellwise max so large entries do not overflow |f|^q
  GridFunction peak = lq_norm(v, kInfinity);
  for (const auto& e : v.entries()) {
    for (Index c = 0; c < n; ++c) {
      if (peak[c] > 0.0) out[c] += std::pow(std::abs(e[c]) / peak[c], q);
    }
  }
  for (Index c = 0; c < n; ++c) out[c] = peak[c] > 0.0 ? peak[c] * std::pow(out[c], 1.0 / q) : 0.0;
  return out;
}

double mixed_norm(const VectorFunction& v, double p, double q, const GridFunction& w) {
  require_positive_exponent(p, "p");
  require_same_domain(v.domain(), w.domain());
  require_positive_weight(w);
  const GridFunction g = lq_norm(v, q);
  const double peak = g.max_abs();
  if (peak == 0.0) return 0.0;
  long double s = 0.0L;
  for (Index c = 0; c < g.size(); ++c) {
    if (g[c] != 0.0) s += static_cast<long double>(std::pow(g[c] / peak, p)) * w[c];
  }
  return peak * std::pow(static_cast<double>(s * v.domain().cell_volume()), 1.0 / p);
}

std::vector<double> attained_levels(const VectorFunction& v, double q) {
  const GridFunction g = lq_norm(v, q);
  std::vector<double> levels;
  for (double x : g.values()) {
    if (x > 0.0) levels.push_back(x);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

double weak_norm(const VectorFunction& v, double p, double q, const GridFunction& w) {
  require_positive_exponent(p, "p");
  require_same_domain(v.domain(), w.domain());
  require_positive_weight(w);
  const GridFunction g = lq_norm(v, q);
  // sup over lambda of lambda * w(g > lambda) is approached as lambda rises to an
  // attained value t, where the set becomes {g >= t}
  std::vector<std::pair<double, double>> cells;
  cells.reserve(static_cast<std::size_t>(g.size()));
  for (Index c = 0; c < g.size(); ++c) {
    if (g[c] > 0.0) cells.emplace_back(g[c], w[c]);
  }
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const double vol = v.domain().cell_volume();
  long double mass = 0.0L;
  double best = 0.0;
  for (std::size_t i = 0; i < cells.size();) {
    const double t = cells[i].first;
    while (i < cells.size() && cells[i].first == t) mass += cells[i++].second;
    best = std::max(best, t * std::pow(static_cast<double>(mass * vol), 1.0 / p));
  }
  return best;
}

double level_measure(const GridFunction& g, const GridFunction& w, double lambda) {
  require_same_domain(g.domain(), w.domain());
  long double s = 0.0L;
  for (Index c = 0; c < g.size(); ++c) {
    if (g[c] > lambda) s += w[c];
  }
  return static_cast<double>(s * g.domain().cell_volume());
}

double weak_type_functional(const GridFunction& g, const GridFunction& w, const std::function<double(double)>& phi,
                            std::span<const double> lambdas) {
  if (lambdas.empty()) throw ParameterError("empty lambda grid");
  require_same_domain(g.domain(), w.domain());
  require_positive_weight(w);
  double best = 0.0;
  for (double lambda : lambdas) {
    const double mu = level_measure(g, w, lambda);
    if (mu > 0.0) best = std::max(best, phi(lambda) * mu);
  }
  return best;
}

double weak_type_functional(const VectorFunction& v, double q, const GridFunction& w,
                            const std::function<double(double)>& phi, std::span<const double> lambdas) {
  return weak_type_functional(lq_norm(v, q), w, phi, lambdas);
}

GridFunction unit_weight(const Domain& domain) { return GridFunction(domain, 1.0); }

void write_grid_function(const GridFunction& f, const std::filesystem::path& stem) {
  const Domain& d = f.domain();
  {
    std::ofstream hdr(stem.string() + ".hdr");
    if (!hdr) throw ParameterError("cannot open header file for writing: " + stem.string());
    hdr << "n=" << d.dim() << "\nJ=" << d.half_width_log2() << "\nK=" << d.refinement() << "\n";
  }
  std::ofstream csv(stem.string() + ".csv");
  if (!csv) throw ParameterError("cannot open value file for writing: " + stem.string());
  csv.precision(17);
  const Index row = d.dim() == 1 ? d.cell_count() : d.cells_per_axis();
  for (Index c = 0; c < f.size(); ++c) {
    csv << f[c] << ((c + 1) % row == 0 ? '\n' : ',');
  }
}

GridFunction read_grid_function(const std::filesystem::path& stem) {
  std::ifstream hdr(stem.string() + ".hdr");
  if (!hdr) throw ParameterError("missing header file: " + stem.string() + ".hdr");
  int n = -1, j = -100, k = -1;
  std::string line;
  while (std::getline(hdr, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const int value = std::stoi(line.substr(eq + 1));
    if (key == "n") n = value;
    else if (key == "J") j = value;
    else if (key == "K") k = value;
  }
  const Domain d(n, j, k);
  std::ifstream csv(stem.string() + ".csv");
  if (!csv) throw ParameterError("missing value file: " + stem.string() + ".csv");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(d.cell_count()));
  std::string tok;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) values.push_back(std::stod(tok));
    }
  }
  return GridFunction(d, std::move(values));
}

}  // namespace sparsedom
