#include "sparsedom/harness/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sparsedom/error.hpp"
#include "sparsedom/mesh.hpp"

namespace sparsedom::harness {

namespace pt = boost::property_tree;

void Experiment::validate() const {
  if (order != 1 && order != 2) throw ParameterError("order must be 1 or 2");
  if (resolutions.empty()) throw ParameterError("resolution list is empty");
  for (int k : resolutions) {
    if (k < 0 || k > 24) throw ParameterError("resolution K must lie in [0, 24]");
  }
  if (half_width_log2 < -1 || half_width_log2 > 8) throw ParameterError("half width exponent must lie in [-1, 8]");
  if (cases < 0 || nseq < 0) throw ParameterError("case and sequence counts must be nonnegative");
  if (parallel < 1) throw ParameterError("parallel must be at least 1");
  if (p.empty() || p.size() != q.size() || p.size() != beta.size() || p.size() != s.size()) {
    throw ParameterError("exponent tuples p, q, beta, s must have one equal nonzero length");
  }
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!(p[j] >= 1.0) || std::isinf(p[j])) throw ParameterError("p_j must lie in [1, inf)");
    if (!(q[j] > 0.0)) throw ParameterError("q_j must be positive");
    if (!(beta[j] >= 0.0)) throw ParameterError("beta_j must be nonnegative");
    if (!(s[j] > 0.0)) throw ParameterError("s_j must be positive");
  }
  if (powers.empty()) throw ParameterError("weight parameter list is empty");
  if (lambda_points < 2) throw ParameterError("lambda grid needs at least two points");
  if (!(lambda_span > 0.0 && lambda_span < 1.0)) throw ParameterError("lambda span must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (!(gamma > delta && gamma < 1.0)) throw ParameterError("gamma must lie in (delta, 1)");
  if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("tau must lie in (0, 1)");
}

SweepRow make_row(std::string experiment, std::string case_id, int resolution, std::string weight, double lhs,
                  double rhs) {
  SweepRow r;
  r.experiment = std::move(experiment);
  r.case_id = std::move(case_id);
  r.resolution = resolution;
  r.weight = std::move(weight);
  r.lhs = lhs;
  r.rhs = rhs;
  if (rhs != 0.0) r.ratio = lhs / rhs;
  else r.ratio = lhs == 0.0 ? 0.0 : kInfinity;
  return r;
}

Experiment default_experiment(const std::string& name) {
  Experiment e;
  e.name = name;
  if (name == "constants") {
    e.resolutions = {8};
    e.cases = 0;
  } else if (name == "dominate") {
    e.resolutions = {10};
    e.cases = 20;
    e.nseq = 0;
  } else if (name == "thm11" || name == "thm12") {
    e.cases = 6;
  } else if (name == "thm13") {
    e.weight_kind = "one";
    e.powers = {0.0};
    e.p = {1.0, 1.0};
    e.cases = 4;
  } else if (name == "buckley") {
    e.resolutions = {12};
    e.cases = 8;
    e.p = {2.0};
    e.q = {2.0};
    e.beta = {0.0};
    e.s = {1.0};
  } else if (name == "lemma32") {
    e.resolutions = {8, 9};
    e.cases = 20;
    e.nseq = 1;
  } else if (name == "lemma44") {
    e.resolutions = {8, 9};
    e.cases = 10;
  } else if (name == "endpoint") {
    e.weight_kind = "a1";
    e.powers = {0.0, 0.3, 0.5};
    e.p = {1.0, 1.0};
    e.cases = 4;
  } else {
    throw ParameterError("unknown experiment: " + name);
  }
  return e;
}

namespace {

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  std::vector<T> out;
  for (auto& part : parts) {
    boost::trim(part);
    if (part.empty()) continue;
    std::istringstream is(part);
    T v{};
    is >> v;
    if (is.fail() || !is.eof()) throw ParameterError("bad value in list " + key + ": " + part);
    out.push_back(v);
  }
  if (out.empty()) throw ParameterError("empty list for " + key);
  return out;
}

template <class T>
T parse_scalar(const std::string& text, const std::string& key) {
  auto v = parse_list<T>(text, key);
  if (v.size() != 1) throw ParameterError("expected one value for " + key);
  return v.front();
}

}  // namespace

Experiment parse_experiment(const std::string& text, const std::string& name) {
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& err) {
    throw ParameterError(std::string("config parse error: ") + err.what());
  }
  Experiment e = default_experiment(name);
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ParameterError("key outside a section: " + section);
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      const std::string& v = node.data();
      if (full == "experiment.name") e.name = v;
      else if (full == "experiment.order") e.order = parse_scalar<int>(v, full);
      else if (full == "experiment.half_width_log2") e.half_width_log2 = parse_scalar<int>(v, full);
      else if (full == "experiment.resolutions") e.resolutions = parse_list<int>(v, full);
      else if (full == "experiment.seed") e.seed = parse_scalar<std::uint64_t>(v, full);
      else if (full == "experiment.cases") e.cases = parse_scalar<int>(v, full);
      else if (full == "experiment.nseq") e.nseq = parse_scalar<int>(v, full);
      else if (full == "experiment.corpus") e.corpus = boost::trim_copy(v);
      else if (full == "experiment.parallel") e.parallel = parse_scalar<int>(v, full);
      else if (full == "weights.kind") e.weight_kind = boost::trim_copy(v);
      else if (full == "weights.powers") e.powers = parse_list<double>(v, full);
      else if (full == "exponents.p") e.p = parse_list<double>(v, full);
      else if (full == "exponents.q") e.q = parse_list<double>(v, full);
      else if (full == "exponents.beta") e.beta = parse_list<double>(v, full);
      else if (full == "exponents.s") e.s = parse_list<double>(v, full);
      else if (full == "endpoint.lambda_points") e.lambda_points = parse_scalar<int>(v, full);
      else if (full == "endpoint.lambda_span") e.lambda_span = parse_scalar<double>(v, full);
      else if (full == "endpoint.delta") e.delta = parse_scalar<double>(v, full);
      else if (full == "endpoint.gamma") e.gamma = parse_scalar<double>(v, full);
      else if (full == "endpoint.tau") e.tau = parse_scalar<double>(v, full);
      else throw ParameterError("unknown config key: " + full);
    }
  }
  e.validate();
  return e;
}

Experiment load_experiment(const std::filesystem::path& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment(ss.str(), name);
}

}  // namespace sparsedom::harness
