#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <map>
#include <optional>

#include "sparsedom/error.hpp"
#include "sparsedom/harness/config.hpp"
#include "sparsedom/harness/report.hpp"
#include "sparsedom/harness/runners.hpp"

namespace h = sparsedom::harness;

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  int parallel = 1;
};

int run(const std::string& name, const Options& o) {
  h::Experiment e = o.config.empty() ? h::default_experiment(name) : h::load_experiment(o.config, name);
  if (o.seed) e.seed = *o.seed;
  if (o.resolution) e.resolutions = {*o.resolution};
  e.parallel = o.parallel;
  e.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const h::RunReport r = h::run_named(name, e);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& p : h::write_report(r, o.out)) std::cerr << "wrote " << p.string() << '\n';
  std::cout << h::summary_text(r) << "elapsed_s = " << secs << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse domination and weighted inequality sweeps for Calderon commutators"};
  app.require_subcommand(1);
  Options o;
  std::string chosen;
  const std::map<std::string, std::string> about{
      {"constants", "A_p, A_inf and multiple weight constants of the weight recipe"},
      {"dominate", "sparse domination of the Calderon commutator over the input corpus"},
      {"thm11", "weighted vector-valued strong bound for the commutator"},
      {"thm12", "weighted strong bound for T_b with BMO symbols"},
      {"thm13", "weak endpoint of T_b over a lambda grid"},
      {"buckley", "growth of the maximal operator norm against [w]_{A_2}"},
      {"lemma32", "pointwise bound for the grand maximal truncation"},
      {"lemma44", "local oscillation of sparse operators"},
      {"endpoint", "weak type of the multilinear L(log L) maximal function"}};
  for (const auto& name : h::runner_names()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", o.config, "INI experiment file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "corpus seed");
    sub->add_option("--resolution", o.resolution, "single refinement K (3*2^K cells per unit)")
        ->check(CLI::Range(0, 24));
    sub->add_option("--parallel", o.parallel, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->callback([&chosen, name] { chosen = name; });
  }
  CLI11_PARSE(app, argc, argv);
  try {
    return run(chosen, o);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
}
