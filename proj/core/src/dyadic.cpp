#include "sparsedom/dyadic.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sparsedom/error.hpp"

namespace sparsedom {

namespace {

Index floor_div(Index a, Index b) noexcept {
  Index q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Cube Cube::of_domain(const Domain& d) {
  const Index n = d.cells_per_axis();
  return d.dim() == 1 ? interval(0, n) : Cube{2, {0, 0}, {n, n}};
}

bool Cube::contains(const Cube& o) const noexcept {
  for (int a = 0; a < dim; ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (o.lo[i] < lo[i] || o.hi[i] > hi[i]) return false;
  }
  return true;
}

bool Cube::intersects(const Cube& o) const noexcept {
  for (int a = 0; a < dim; ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (o.hi[i] <= lo[i] || o.lo[i] >= hi[i]) return false;
  }
  return true;
}

Cube Cube::intersection(const Cube& o) const noexcept {
  Cube r = *this;
  for (int a = 0; a < dim; ++a) {
    const auto i = static_cast<std::size_t>(a);
    r.lo[i] = std::max(lo[i], o.lo[i]);
    r.hi[i] = std::max(r.lo[i], std::min(hi[i], o.hi[i]));
  }
  return r;
}

bool Cube::inside(const Domain& d) const noexcept {
  return dim == d.dim() && !empty() && Cube::of_domain(d).contains(*this);
}

std::vector<Index> Cube::cells(const Domain& d) const {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(cell_count()));
  if (dim == 1) {
    for (Index i = lo[0]; i < hi[0]; ++i) out.push_back(i);
  } else {
    for (Index i = lo[0]; i < hi[0]; ++i)
      for (Index j = lo[1]; j < hi[1]; ++j) out.push_back(d.flat(i, j));
  }
  return out;
}

std::string to_string(const Cube& q) {
  std::ostringstream os;
  os << "[" << q.lo[0] << "," << q.hi[0] << ")";
  if (q.dim == 2) os << "x[" << q.lo[1] << "," << q.hi[1] << ")";
  return os.str();
}

std::vector<Cube> children(const Cube& q) {
  for (int a = 0; a < q.dim; ++a) {
    const Index s = q.side(a);
    if (s < 2 || s % 2 != 0) throw SubdivisionError("cannot halve cube " + to_string(q));
  }
  const Index m0 = q.lo[0] + q.side(0) / 2;
  if (q.dim == 1) return {Cube::interval(q.lo[0], m0), Cube::interval(m0, q.hi[0])};
  const Index m1 = q.lo[1] + q.side(1) / 2;
  return {Cube{2, {q.lo[0], q.lo[1]}, {m0, m1}}, Cube{2, {q.lo[0], m1}, {m0, q.hi[1]}},
          Cube{2, {m0, q.lo[1]}, {q.hi[0], m1}}, Cube{2, {m0, m1}, {q.hi[0], q.hi[1]}}};
}

Cube dilate_unclipped(const Cube& q, Index lambda) {
  if (lambda < 1 || lambda % 2 == 0) throw ParameterError("dilation factor must be a positive odd integer");
  Cube r = q;
  for (int a = 0; a < q.dim; ++a) {
    const auto i = static_cast<std::size_t>(a);
    const Index grow = (lambda - 1) / 2 * q.side(a);
    r.lo[i] -= grow;
    r.hi[i] += grow;
  }
  return r;
}

Cube dilate(const Cube& q, Index lambda, const Domain& d) {
  return dilate_unclipped(q, lambda).intersection(Cube::of_domain(d));
}

CellSums::CellSums(const GridFunction& f) : domain_(f.domain()), stride_(f.domain().cells_per_axis() + 1) {
  const Domain& d = domain_;
  const Index n = d.cells_per_axis();
  if (d.dim() == 1) {
    table_.assign(static_cast<std::size_t>(n + 1), 0.0L);
    for (Index i = 0; i < n; ++i) table_[static_cast<std::size_t>(i + 1)] = table_[static_cast<std::size_t>(i)] + f[i];
    return;
  }
  table_.assign(static_cast<std::size_t>(stride_ * stride_), 0.0L);
  for (Index i = 0; i < n; ++i) {
    long double row = 0.0L;
    for (Index j = 0; j < n; ++j) {
      row += f[d.flat(i, j)];
      table_[static_cast<std::size_t>((i + 1) * stride_ + j + 1)] = table_[static_cast<std::size_t>(i * stride_ + j + 1)] + row;
    }
  }
}

long double CellSums::sum(const Cube& q) const noexcept {
  if (q.dim == 1) return table_[static_cast<std::size_t>(q.hi[0])] - table_[static_cast<std::size_t>(q.lo[0])];
  auto at = [this](Index i, Index j) { return table_[static_cast<std::size_t>(i * stride_ + j)]; };
  return at(q.hi[0], q.hi[1]) - at(q.lo[0], q.hi[1]) - at(q.hi[0], q.lo[1]) + at(q.lo[0], q.lo[1]);
}

DyadicGrid::DyadicGrid(const Domain& domain, std::array<int, 2> shift3) : domain_(domain), shift3_(shift3) {
  for (int a = 0; a < domain.dim(); ++a) {
    const int s = shift3[static_cast<std::size_t>(a)];
    if (s < 0 || s > 2) throw ParameterError("grid shift must be 0, 1/3 or 2/3");
  }
  if (domain.dim() == 1) shift3_[1] = 0;
}

Index DyadicGrid::boundary_offset(int level, int axis) const noexcept {
  // cube boundaries sit at origin + m * side + (-1)^k * t * 2^{-k}, in cells
  const Index t3 = shift3_[static_cast<std::size_t>(axis)];
  const Index mag = t3 << (domain_.refinement() - level);
  const bool odd = (level % 2) != 0;
  return domain_.origin_cell() + (odd ? -mag : mag);
}

std::pair<Index, Index> DyadicGrid::interval_containing(int level, int axis, Index i) const noexcept {
  const Index side = side_cells(level);
  const Index off = boundary_offset(level, axis);
  const Index m = floor_div(i - off, side);
  const Index lo = std::max<Index>(0, off + m * side);
  const Index hi = std::min<Index>(domain_.cells_per_axis(), off + (m + 1) * side);
  return {lo, hi};
}

Cube DyadicGrid::cube_containing(int level, Index i0, Index i1) const {
  if (level < coarsest_level() || level > finest_level()) throw ParameterError("dyadic level out of range");
  const auto [a0, b0] = interval_containing(level, 0, i0);
  if (domain_.dim() == 1) return Cube::interval(a0, b0);
  const auto [a1, b1] = interval_containing(level, 1, i1);
  return Cube{2, {a0, a1}, {b0, b1}};
}

std::vector<Cube> DyadicGrid::cubes_at(int level) const {
  if (level < coarsest_level() || level > finest_level()) throw ParameterError("dyadic level out of range");
  const Index n = domain_.cells_per_axis();
  std::array<std::vector<std::pair<Index, Index>>, 2> axis;
  for (int a = 0; a < domain_.dim(); ++a) {
    for (Index i = 0; i < n;) {
      const auto iv = interval_containing(level, a, i);
      axis[static_cast<std::size_t>(a)].push_back(iv);
      i = iv.second;
    }
  }
  std::vector<Cube> out;
  if (domain_.dim() == 1) {
    for (const auto& [lo, hi] : axis[0]) out.push_back(Cube::interval(lo, hi));
    return out;
  }
  for (const auto& [lo0, hi0] : axis[0])
    for (const auto& [lo1, hi1] : axis[1]) out.push_back(Cube{2, {lo0, lo1}, {hi0, hi1}});
  return out;
}

std::vector<Cube> DyadicGrid::all_cubes() const {
  std::vector<Cube> out;
  for (int k = coarsest_level(); k <= finest_level(); ++k) {
    auto level = cubes_at(k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<DyadicGrid> shifted_grids(const Domain& domain) {
  std::vector<DyadicGrid> out;
  if (domain.dim() == 1) {
    for (int t = 0; t < 3; ++t) out.emplace_back(domain, std::array<int, 2>{t, 0});
    return out;
  }
  for (int t0 = 0; t0 < 3; ++t0)
    for (int t1 = 0; t1 < 3; ++t1) out.emplace_back(domain, std::array<int, 2>{t0, t1});
  return out;
}

Cube smallest_covering_cube(const Domain& domain, const Cube& r) {
  Cube best = Cube::of_domain(domain);
  for (const auto& grid : shifted_grids(domain)) {
    for (int k = grid.finest_level(); k >= grid.coarsest_level(); --k) {
      const Cube q = grid.cube_containing(k, r.lo[0], r.lo[1]);
      if (q.contains(r)) {
        if (q.max_side() < best.max_side()) best = q;
        break;
      }
    }
  }
  return best;
}

void SparseFamily::add(const Cube& q, std::vector<CellRange> witness) {
  cubes.push_back(q);
  witnesses.push_back(std::move(witness));
}

void SparseFamily::sort() {
  std::vector<std::size_t> order(cubes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) { return cubes[a] < cubes[b]; });
  std::vector<Cube> c;
  std::vector<std::vector<CellRange>> w;
  for (std::size_t i : order) {
    c.push_back(cubes[i]);
    w.push_back(std::move(witnesses[i]));
  }
  cubes = std::move(c);
  witnesses = std::move(w);
}

std::vector<CellRange> ranges_from_cells(std::vector<Index> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  std::vector<CellRange> out;
  for (Index c : cells) {
    if (!out.empty() && out.back().second == c) ++out.back().second;
    else out.emplace_back(c, c + 1);
  }
  return out;
}

Index range_cell_count(const std::vector<CellRange>& ranges) noexcept {
  Index n = 0;
  for (const auto& [a, b] : ranges) n += b - a;
  return n;
}

SparseCheck verify_sparse(const SparseFamily& s) {
  const Domain& d = s.domain;
  SparseCheck res;
  auto fail = [&res](std::string msg, std::optional<std::size_t> cube, std::optional<Index> cell) {
    res.ok = false;
    res.message = std::move(msg);
    res.cube = cube;
    res.cell = cell;
    return res;
  };
  if (s.eta_num <= 0 || s.eta_den <= 0 || s.eta_num > s.eta_den) return fail("eta must lie in (0, 1]", {}, {});
  if (s.witnesses.size() != s.cubes.size()) return fail("witness list length differs from cube count", {}, {});
  std::vector<std::int32_t> owner(static_cast<std::size_t>(d.cell_count()), -1);
  for (std::size_t qi = 0; qi < s.cubes.size(); ++qi) {
    const Cube& q = s.cubes[qi];
    if (!q.inside(d)) return fail("cube " + to_string(q) + " leaves the domain", qi, {});
    Index count = 0;
    for (const auto& [a, b] : s.witnesses[qi]) {
      if (a < 0 || b > d.cell_count() || a > b) return fail("witness range out of bounds", qi, a);
      for (Index c = a; c < b; ++c) {
        const auto [i0, i1] = d.unflat(c);
        if (!q.contains(i0, i1)) return fail("witness cell outside cube " + to_string(q), qi, c);
        auto& o = owner[static_cast<std::size_t>(c)];
        if (o >= 0) {
          return fail("witness cell shared by cubes " + to_string(s.cubes[static_cast<std::size_t>(o)]) + " and " +
                          to_string(q),
                      qi, c);
        }
        o = static_cast<std::int32_t>(qi);
        ++count;
      }
    }
    // |E_Q| >= (num/den)|Q| in whole cells
    if (static_cast<long double>(count) * s.eta_den < static_cast<long double>(q.cell_count()) * s.eta_num) {
      return fail("witness of cube " + to_string(q) + " too small: " + std::to_string(count) + " of " +
                      std::to_string(q.cell_count()) + " cells",
                  qi, {});
    }
  }
  return res;
}

std::string family_to_json(const SparseFamily& s) {
  nlohmann::json j;
  j["dim"] = s.domain.dim();
  j["J"] = s.domain.half_width_log2();
  j["K"] = s.domain.refinement();
  j["eta"] = {s.eta_num, s.eta_den};
  auto& cubes = j["cubes"] = nlohmann::json::array();
  for (std::size_t i = 0; i < s.cubes.size(); ++i) {
    const Cube& q = s.cubes[i];
    nlohmann::json c;
    c["corner"] = q.dim == 1 ? nlohmann::json{q.lo[0]} : nlohmann::json{q.lo[0], q.lo[1]};
    c["side"] = q.dim == 1 ? nlohmann::json{q.side(0)} : nlohmann::json{q.side(0), q.side(1)};
    auto& w = c["witness"] = nlohmann::json::array();
    for (const auto& [a, b] : s.witnesses[i]) w.push_back({a, b});
    cubes.push_back(std::move(c));
  }
  return j.dump();
}

SparseFamily family_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SparseFamily s(Domain(j.at("dim").get<int>(), j.at("J").get<int>(), j.at("K").get<int>()),
                 j.at("eta").at(0).get<long>(), j.at("eta").at(1).get<long>());
  for (const auto& c : j.at("cubes")) {
    Cube q;
    q.dim = s.domain.dim();
    for (int a = 0; a < q.dim; ++a) {
      const auto i = static_cast<std::size_t>(a);
      q.lo[i] = c.at("corner").at(i).get<Index>();
      q.hi[i] = q.lo[i] + c.at("side").at(i).get<Index>();
    }
    std::vector<CellRange> w;
    for (const auto& r : c.at("witness")) w.emplace_back(r.at(0).get<Index>(), r.at(1).get<Index>());
    s.add(q, std::move(w));
  }
  return s;
}

}  // namespace sparsedom
