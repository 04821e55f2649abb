#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sparsedom::harness {

/// Declarative description of one sweep.
struct Experiment {
  std::string name = "experiment";
  /// m in C_{m+1}; the operator has m + 1 slots.
  int order = 1;
  int half_width_log2 = -1;
  std::vector<int> resolutions{8, 9, 10};
  std::uint64_t seed = 20240601;
  int cases = 6;
  /// Sequence length; 0 cycles through 1..4 over the cases.
  int nseq = 2;
  /// `random`, `smooth` or `mixed`.
  std::string corpus = "mixed";
  /// `power` (|x|^a), `a1` (|x|^-a) or `one`.
  std::string weight_kind = "power";
  std::vector<double> powers{0.0, 0.3, 0.5, 0.7, 0.8};
  std::vector<double> p{2.0, 2.0};
  std::vector<double> q{2.0, 2.0};
  std::vector<double> beta{0.0, 0.0};
  std::vector<double> s{1.0, 1.0};
  int lambda_points = 32;
  double lambda_span = 1e-2;
  double delta = 0.25;
  double gamma = 0.375;
  double tau = 1.0 / 3.0;
  int parallel = 1;

  /// Checks exponent identities and ranges; throws ParameterError.
  void validate() const;
};

/// One CSV line of a sweep.
struct SweepRow {
  std::string experiment;
  std::string case_id;
  int resolution = 0;
  std::string weight;
  double a_p = 0.0;
  double nu_ainf = 0.0;
  double sigma_ainf = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::string extra;
};

SweepRow make_row(std::string experiment, std::string case_id, int resolution, std::string weight, double lhs,
                  double rhs);

struct RunReport {
  std::string experiment;
  std::vector<SweepRow> rows;
  /// Ordered scalar results (max ratios, stability factors, slopes, ...).
  std::map<std::string, double> summary;
  /// Named JSON documents (families, baselines).
  std::map<std::string, std::string> documents;
  std::vector<std::string> notes;
};

}  // namespace sparsedom::harness
