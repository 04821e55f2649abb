// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sparsedom/calderon.hpp"
#include "sparsedom/domination.hpp"
#include "sparsedom/harness/config.hpp"
#include "sparsedom/harness/runners.hpp"
#include "sparsedom/localnorms.hpp"
#include "sparsedom/weights.hpp"

using namespace sparsedom;
using namespace sparsedom::harness;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

GridFunction uniform(const Domain& d, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  GridFunction f(d);
  for (Index c = 0; c < f.size(); ++c) f[c] = u(rng);
  return f;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double key(const RunReport& r, const std::string& k) {
  const auto it = r.summary.find(k);
  return it == r.summary.end() ? std::nan("") : it->second;
}

Outcome orlicz_oracle() {
  const auto t0 = Clock::now();
  const Domain d(1, 0, 6);
  const auto cubes = DyadicGrid(d).all_cubes();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> pick(0, cubes.size() - 1);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const GridFunction f = uniform(d, rng, -5.0, 5.0);
    const Cube& q = cubes[pick(rng)];
    worst = std::max(worst, std::abs(orlicz_llogl(f, q, 0.0) - average(f.abs(), q)));
  }
  // independent root of u log(1 + u) = 1
  double lo = 0.0, hi = 4.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::log1p(mid) < 1.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  const double err1 = std::abs(orlicz_llogl(GridFunction(d, 1.0), Cube::interval(0, d.cell_count() / 2), 1.0) - 1.0 / root);
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && err1 <= 1e-10 && secs < 1.0,
          "beta0_max_err=" + num(worst) + " beta1_err=" + num(err1) + " time_s=" + num(secs)};
}

Outcome duality() {
  const auto t0 = Clock::now();
  const Domain d(1, -1, 10);
  const auto cubes = CubeCollection::shifted(d);
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Weight w(uniform(d, rng, 0.05, 20.0));
    for (double p : {1.5, 2.0, 3.0}) {
      const double pd = p / (p - 1.0);
      const double lhs = ap_constant(w.dual(p), pd, cubes);
      const double rhs = std::pow(ap_constant(w, p, cubes), pd - 1.0);
      worst = std::max(worst, std::abs(lhs / rhs - 1.0));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 5.0, "max_rel_err=" + num(worst) + " time_s=" + num(secs)};
}

Outcome holder() {
  const Domain d(1, 0, 4);
  const auto cubes = CubeCollection::all_mesh(d);
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> pick(1.1, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Weight w1(uniform(d, rng, 0.05, 20.0)), w2(uniform(d, rng, 0.05, 20.0));
    const ExponentTuple ps({pick(rng), pick(rng)});
    const double bound = std::pow(ap_constant(w1, ps[0], cubes), ps.p() / ps[0]) *
                         std::pow(ap_constant(w2, ps[1], cubes), ps.p() / ps[1]);
    worst = std::max(worst, multi_ap_constant(WeightSystem({w1, w2}, ps), cubes) / bound);
  }
  return {worst <= 1.0 + 1e-10, "max_multi_over_bound=" + num(worst)};
}

Outcome hilbert() {
  // chi_[-1/8, 1/8) against the principal value log|(x + 1/8)/(x - 1/8)|
  const double a = -0.125, b = 0.125;
  std::vector<double> err, interior;
  std::vector<double> over_h;
  double secs12 = 0.0;
  for (int k = 8; k <= 12; ++k) {
    const auto t0 = Clock::now();
    const Domain d(1, -1, k);
    const GridFunction f = GridFunction::sample(d, [&](double x) { return x >= a && x < b ? 1.0 : 0.0; });
    const GridFunction out = apply_c(LipschitzData({GridFunction(d, 1.0)}), f);
    if (k == 12) secs12 = seconds_since(t0);
    const double h = d.cell_width();
    double l1 = 0.0, far = 0.0;
    for (Index c = 0; c < d.cell_count(); ++c) {
      const double x = d.cell_center(c);
      const double e = std::abs(out[c] - std::log(std::abs((x - a) / (x - b))));
      l1 += h * e;
      if (std::abs(x - a) >= 2.0 * h && std::abs(x - b) >= 2.0 * h) far = std::max(far, e);
    }
    err.push_back(l1);
    interior.push_back(far);
    over_h.push_back(l1 / h);
  }
  bool ok = secs12 < 10.0;
  std::string ratios;
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    const double r = err[i] / err[i + 1];
    ok = ok && r >= 1.5 && r <= 2.5;
    ratios += (i ? "," : "") + num(r);
  }
  const double c_lo = *std::min_element(over_h.begin(), over_h.end());
  const double c_hi = *std::max_element(over_h.begin(), over_h.end());
  // err <= C h with one C across the ladder
  ok = ok && c_hi <= 2.0 * c_lo;
  return {ok, "l1_ratios=" + ratios + " C=" + num(c_hi) + " interior_max_err=" +
                  num(*std::max_element(interior.begin(), interior.end())) + " time_K12_s=" + num(secs12)};
}

Outcome domination() {
  const auto t0 = Clock::now();
  Experiment e = default_experiment("dominate");
  const RunReport corpus = run_dominate(e);
  Experiment smooth = default_experiment("dominate");
  smooth.corpus = "smooth";
  smooth.cases = 1;
  smooth.nseq = 1;
  smooth.resolutions = {8, 9, 10, 11, 12};
  const RunReport ladder = run_dominate(smooth);
  const bool ok = key(corpus, "all_sparse") == 1.0 && key(corpus, "c_emp_finite") == 1.0 &&
                  key(ladder, "all_sparse") == 1.0 && key(ladder, "c_emp_finite") == 1.0 &&
                  key(ladder, "c_emp_stability") <= 2.0;
  return {ok, "cases=" + std::to_string(corpus.rows.size()) + " corpus_c_emp_max=" + num(key(corpus, "c_emp_K10")) +
                  " smooth_c_emp_K8=" + num(key(ladder, "c_emp_K8")) + " smooth_c_emp_K12=" + num(key(ladder, "c_emp_K12")) +
                  " stability=" + num(key(ladder, "c_emp_stability")) + " time_s=" + num(seconds_since(t0))};
}

Outcome cz_decomposition() {
  const auto t0 = Clock::now();
  const Domain d(1, 0, 6);
  const DyadicGrid grid(d);
  const Cube q0 = Cube::interval(d.cell_of(0.0), d.cell_count());
  // the smallest dyadic interval is the single-cell set at this resolution
  const Cube finest = grid.cube_containing(d.refinement(), d.cell_of(0.3));
  std::vector<char> e(static_cast<std::size_t>(d.cell_count()), 0);
  for (Index c : finest.cells(d)) e[static_cast<std::size_t>(c)] = 1;
  const auto picked = cz_decompose_indicator(e, d, q0, 0.25);
  const bool unit_ok = picked.size() == 1 && picked[0] == grid.cube_containing(d.refinement() - 1, d.cell_of(0.3));

  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> density(0.005, 0.25);
  int checked = 0;
  bool bounds_ok = true;
  while (checked < 100) {
    std::bernoulli_distribution in(density(rng));
    std::vector<char> set(e.size(), 0);
    Index count = 0;
    for (Index c : q0.cells(d)) {
      set[static_cast<std::size_t>(c)] = in(rng);
      count += set[static_cast<std::size_t>(c)];
    }
    if (static_cast<double>(count) > 0.25 * static_cast<double>(q0.cell_count())) continue;
    ++checked;
    for (const Cube& p : cz_decompose_indicator(set, d, q0, 0.25)) {
      Index hit = 0;
      for (Index c : p.cells(d)) hit += set[static_cast<std::size_t>(c)];
      const double size = static_cast<double>(p.cell_count());
      bounds_ok = bounds_ok && static_cast<double>(hit) >= 0.25 * size && static_cast<double>(hit) <= 0.5 * size;
    }
  }
  const double secs = seconds_since(t0);
  return {unit_ok && bounds_ok && secs < 1.0, std::string("single_set_parent=") + (unit_ok ? "yes" : "no") +
                                                  " random_sets=100 bounds=" + (bounds_ok ? "ok" : "violated") +
                                                  " time_s=" + num(secs)};
}

Outcome pointwise_grand_maximal() {
  const RunReport r = run_named("lemma32", default_experiment("lemma32"));
  const bool ok = key(r, "c_finite") == 1.0 && key(r, "c_stability") <= 2.0;
  return {ok, "C_K8=" + num(key(r, "c_K8")) + " C_K9=" + num(key(r, "c_K9")) + " stability=" + num(key(r, "c_stability"))};
}

Outcome strong_sweeps() {
  bool ok = true;
  std::string detail;
  for (const auto& [name, label] : {std::pair<std::string, std::string>{"thm11", "plain"}, {"thm12", "commutator"}}) {
    const RunReport r = run_named(name, default_experiment(name));
    ok = ok && key(r, "max_ratio_finite") == 1.0 && key(r, "max_ratio_stability") <= 2.0;
    detail += label + "_max=" + num(std::max({key(r, "max_ratio_K8"), key(r, "max_ratio_K9"), key(r, "max_ratio_K10")})) +
              " " + label + "_stability=" + num(key(r, "max_ratio_stability")) + " ";
  }
  detail.pop_back();
  return {ok, detail};
}

Outcome weak_endpoint() {
  const RunReport r = run_named("thm13", default_experiment("thm13"));
  const double change = key(r, "grid_doubling_change");
  const bool ok = key(r, "max_ratio_finite") == 1.0 && change <= 0.01;
  return {ok, "max_ratio_K10=" + num(key(r, "max_ratio_K10")) + " grid_doubling_change=" + num(change) +
                  " per_case_change=" + num(key(r, "grid_doubling_change_per_case"))};
}

Outcome buckley() {
  const auto t0 = Clock::now();
  const RunReport r = run_named("buckley", default_experiment("buckley"));
  const double slope = key(r, "slope_K12");
  return {slope >= 0.6 && slope <= 1.2, "slope_K12=" + num(slope) + " time_s=" + num(seconds_since(t0))};
}

Outcome local_oscillation() {
  const RunReport r = run_named("lemma44", default_experiment("lemma44"));
  const bool ok = key(r, "max_ratio_sparse_finite") == 1.0 && key(r, "max_ratio_commutator_finite") == 1.0 &&
                  key(r, "max_ratio_sparse_stability") <= 2.0 && key(r, "max_ratio_commutator_stability") <= 2.0 &&
                  key(r, "special_cases_max") == 0.0;
  return {ok, "sparse_stability=" + num(key(r, "max_ratio_sparse_stability")) +
                  " commutator_stability=" + num(key(r, "max_ratio_commutator_stability")) +
                  " special_cases_max=" + num(key(r, "special_cases_max"))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"orlicz_oracle_equivalence", orlicz_oracle},
      {"ap_duality_identity", duality},
      {"holder_embedding_multiple_weights", holder},
      {"hilbert_reduction_convergence", hilbert},
      {"sparse_domination_calderon_commutator", domination},
      {"cz_decomposition_unit_behavior", cz_decomposition},
      {"grand_maximal_pointwise_bound", pointwise_grand_maximal},
      {"weighted_strong_type_sweeps", strong_sweeps},
      {"commutator_weak_endpoint", weak_endpoint},
      {"buckley_trend", buckley},
      {"sparse_local_oscillation", local_oscillation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& err) {
      o = {false, std::string("exception: ") + err.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("AC%02zu %s %s %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
