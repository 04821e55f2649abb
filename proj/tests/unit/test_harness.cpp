#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sparsedom/error.hpp"
#include "sparsedom/harness/config.hpp"
#include "sparsedom/harness/corpus.hpp"
#include "sparsedom/harness/report.hpp"
#include "sparsedom/harness/runners.hpp"

using namespace sparsedom;
using namespace sparsedom::harness;

namespace {

Experiment quick(const std::string& name) {
  Experiment e = default_experiment(name);
  e.resolutions = {6};
  e.cases = std::min(e.cases, 2);
  if (name != "buckley" && e.powers.size() > 2) e.powers = {0.0, 0.5};
  e.lambda_points = 8;
  return e;
}

TupleCase scaled(const TupleCase& c, double factor, std::size_t slot) {
  TupleCase out = c;
  std::vector<GridFunction> parts;
  for (std::size_t k = 0; k < c.slots[slot].size(); ++k) parts.push_back(factor * c.slots[slot][k]);
  out.slots[slot] = VectorFunction(std::move(parts));
  return out;
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  for (const auto& name : runner_names()) EXPECT_NO_THROW(default_experiment(name).validate()) << name;
  const Experiment e = parse_experiment(
      "[experiment]\norder = 2\nresolutions = 7, 8\nseed = 5\n[exponents]\np = 2,3,6\nq = 2,2,2\nbeta = 0,0,0\n"
      "s = 1,1,1\n[weights]\nkind = one\npowers = 0\n",
      "thm11");
  EXPECT_EQ(e.order, 2);
  EXPECT_EQ(e.resolutions, (std::vector<int>{7, 8}));
  EXPECT_EQ(e.seed, 5u);
  EXPECT_EQ(e.p, (std::vector<double>{2.0, 3.0, 6.0}));
  EXPECT_EQ(e.weight_kind, "one");
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(default_experiment("nope"), ParameterError);
  EXPECT_THROW(parse_experiment("[experiment]\nbogus = 1\n", "thm11"), ParameterError);
  EXPECT_THROW(parse_experiment("[experiment]\norder = x\n", "thm11"), ParameterError);
  EXPECT_THROW(parse_experiment("[experiment]\norder = 3\n", "thm11"), ParameterError);
  EXPECT_THROW(parse_experiment("[exponents]\np = 2,2,2\n", "thm11"), ParameterError);
  EXPECT_THROW(parse_experiment("[endpoint]\ngamma = 0.1\n", "endpoint"), ParameterError);
  EXPECT_THROW(load_experiment("/nonexistent/config.ini", "thm11"), ParameterError);
}

TEST(Report, MakeRowRatioConventions) {
  EXPECT_DOUBLE_EQ(make_row("x", "c", 8, "w", 3.0, 2.0).ratio, 1.5);
  EXPECT_EQ(make_row("x", "c", 8, "w", 0.0, 0.0).ratio, 0.0);
  EXPECT_TRUE(std::isinf(make_row("x", "c", 8, "w", 1.0, 0.0).ratio));
}

TEST(Report, CsvRoundTrip) {
  std::vector<SweepRow> rows{make_row("thm11", "random-0", 9, "a=0.5", 1.25, 0.5),
                             make_row("thm11", "smooth", 10, "a=0", 0.0, 0.0)};
  rows[0].a_p = 2.5;
  rows[0].extra = "osc=1.5";
  const std::string csv = rows_to_csv(rows);
  EXPECT_EQ(csv.rfind(kCsvSchema, 0), 0u);
  const auto back = rows_from_csv(csv);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].case_id, rows[i].case_id);
    EXPECT_EQ(back[i].resolution, rows[i].resolution);
    EXPECT_EQ(back[i].weight, rows[i].weight);
    EXPECT_DOUBLE_EQ(back[i].lhs, rows[i].lhs);
    EXPECT_DOUBLE_EQ(back[i].ratio, rows[i].ratio);
    EXPECT_DOUBLE_EQ(back[i].a_p, rows[i].a_p);
    EXPECT_EQ(back[i].extra, rows[i].extra);
  }
}

TEST(Report, WriteReportCreatesFiles) {
  RunReport r;
  r.experiment = "demo";
  r.rows.push_back(make_row("demo", "c", 6, "a=0", 1.0, 2.0));
  r.summary["max_ratio"] = 0.5;
  r.documents["family"] = "{}";
  r.notes.push_back("note");
  const auto dir = std::filesystem::temp_directory_path() / "sparsedom_report_test";
  std::filesystem::remove_all(dir);
  const auto paths = write_report(r, dir);
  EXPECT_EQ(paths.size(), 4u);
  for (const auto& p : paths) EXPECT_TRUE(std::filesystem::exists(p)) << p;
  EXPECT_NE(summary_text(r).find("max_ratio = 0.5"), std::string::npos);
  EXPECT_NE(summary_json(r).find("\"max_ratio\""), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Runners, FitSlopeAndParallelFor) {
  EXPECT_NEAR(fit_slope({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0}), 2.0, 1e-14);
  EXPECT_THROW(fit_slope({0.0, 1.0}, {0.0, 1.0}), ParameterError);
  std::vector<int> hits(50, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(3, 2, [](std::size_t i) {
                 if (i == 1) throw ParameterError("boom");
               }),
               ParameterError);
  EXPECT_THROW(run_named("nope", quick("thm11")), ParameterError);
}

TEST(Runners, ZeroInputGivesZeroRatio) {
  const Experiment e = quick("thm11");
  const Domain d(1, e.half_width_log2, 6);
  TupleCase c = random_tuple_case(d, 1, 2, 3, 0);
  c.slots[1] = VectorFunction({GridFunction(d), GridFunction(d)});
  for (bool comm : {false, true}) {
    for (const auto& row : strong_case(e, c, 6, comm)) {
      EXPECT_EQ(row.lhs, 0.0);
      EXPECT_EQ(row.ratio, 0.0);
    }
  }
}

TEST(Runners, RatioIsScaleInvariant) {
  const Experiment e = quick("thm11");
  const Domain d(1, e.half_width_log2, 6);
  const TupleCase c = random_tuple_case(d, 1, 2, 4, 0);
  for (bool comm : {false, true}) {
    const auto base = strong_case(e, c, 6, comm);
    for (double factor : {1e-3, 7.0}) {
      for (std::size_t slot : {0u, 1u}) {
        const auto rows = strong_case(e, scaled(c, factor, slot), 6, comm);
        ASSERT_EQ(rows.size(), base.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
          EXPECT_NEAR(rows[i].ratio, base[i].ratio, 1e-9 * base[i].ratio);
          EXPECT_NEAR(rows[i].lhs, std::abs(factor) * base[i].lhs, 1e-9 * std::abs(factor) * base[i].lhs);
        }
      }
    }
  }
  EXPECT_THROW(strong_case(e, random_tuple_case(Domain(1, -1, 7), 1, 1, 4, 0), 6, false), DomainMismatch);
  EXPECT_THROW(strong_case(e, random_tuple_case(d, 2, 1, 4, 0), 6, false), ParameterError);
}

TEST(Runners, DeterministicAndThreadIndependent) {
  Experiment e = quick("thm11");
  const auto a = run_named("thm11", e);
  const auto b = run_named("thm11", e);
  e.parallel = 2;
  const auto c = run_named("thm11", e);
  EXPECT_EQ(rows_to_csv(a.rows), rows_to_csv(b.rows));
  EXPECT_EQ(rows_to_csv(a.rows), rows_to_csv(c.rows));
  EXPECT_EQ(a.summary, c.summary);
}

TEST(Runners, EverySweepRunsAtSmallSize) {
  for (const auto& name : runner_names()) {
    const Experiment e = quick(name);
    RunReport r;
    ASSERT_NO_THROW(r = run_named(name, e)) << name;
    EXPECT_FALSE(r.summary.empty()) << name;
    for (const auto& row : r.rows) {
      EXPECT_FALSE(std::isnan(row.ratio)) << name << " " << row.case_id;
      EXPECT_GE(row.lhs, 0.0) << name;
    }
  }
}

TEST(Corpus, SameSeedSameFunctionAcrossResolutions) {
  const Domain coarse(1, -1, 6), fine(1, -1, 7);
  const auto a = random_tuple_case(coarse, 1, 1, 9, 2);
  const auto b = random_tuple_case(fine, 1, 1, 9, 2);
  for (std::size_t slot = 0; slot < a.slots.size(); ++slot) {
    for (Index c = 0; c < coarse.cell_count(); ++c) {
      EXPECT_DOUBLE_EQ(a.slots[slot][0][c], 0.5 * (b.slots[slot][0][2 * c] + b.slots[slot][0][2 * c + 1]));
    }
  }
  EXPECT_THROW(tuple_corpus(coarse, 1, 2, 1, "weird", 1), ParameterError);
}
