#include <gtest/gtest.h>

#include <random>

#include <json.hpp>

#include "qmigrate/baseline_matcher.hpp"
#include "qmigrate/evaluation.hpp"
#include "qmigrate/findings_io.hpp"
#include "support.hpp"

using namespace qmigrate;
using namespace qmigrate::testing;

namespace {

MigrationFinding finding(std::size_t line, std::string refactoring = "") {
  MigrationFinding f;
  f.line_no = line;
  f.refactoring = std::move(refactoring);
  return f;
}

GradedFinding graded(std::size_t line, RubricGrade grade) { return {finding(line), grade, GradeSource::Auto}; }

GroundTruth truth_with_lines(std::vector<std::size_t> lines) {
  GroundTruth t{"s", !lines.empty(), {}};
  for (auto l : lines) t.changes.push_back({l, "QSK-046-001", "x"});
  return t;
}

// Half-up rounding to two decimals by long division on the exact fraction.
std::string display_oracle(std::uint64_t n, std::uint64_t d) {
  if (d == 0) return "n/a";
  std::uint64_t whole = n / d;
  std::uint64_t rem = n % d;
  std::uint64_t tenths = rem * 10 / d;
  rem = rem * 10 % d;
  std::uint64_t hundredths = rem * 10 / d;
  rem = rem * 10 % d;
  if (2 * rem >= d) {
    if (++hundredths == 10) {
      hundredths = 0;
      if (++tenths == 10) {
        tenths = 0;
        ++whole;
      }
    }
  }
  return std::to_string(whole) + "." + std::to_string(tenths) + std::to_string(hundredths);
}

std::vector<SnippetResult> random_results(std::mt19937& rng) {
  std::vector<SnippetResult> results;
  auto snippets = rng() % 8;
  for (std::size_t s = 0; s < snippets; ++s) {
    std::vector<std::size_t> lines;
    for (std::size_t l = 1; l <= 6; ++l) {
      if (rng() % 3 == 0) lines.push_back(l);
    }
    SnippetResult r{truth_with_lines(lines), {}};
    r.truth.snippet_id = "s" + std::to_string(s);
    auto findings = rng() % 5;
    for (std::size_t f = 0; f < findings; ++f) {
      r.graded.push_back(graded(1 + rng() % 8, static_cast<RubricGrade>(rng() % 4)));
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace

TEST(Grades, NamesAndOrder) {
  for (auto g : {RubricGrade::Incorrect, RubricGrade::WrongVersion, RubricGrade::OkMinor, RubricGrade::Ok}) {
    EXPECT_EQ(parse_grade(to_string(g)), g);
  }
  EXPECT_EQ(to_string(RubricGrade::OkMinor), "OK-");
  EXPECT_EQ(to_string(RubricGrade::WrongVersion), "X+");
  EXPECT_EQ(parse_grade("OK\xE2\x88\x92"), RubricGrade::OkMinor);
  EXPECT_FALSE(parse_grade("ok").has_value());
  EXPECT_LT(RubricGrade::Incorrect, RubricGrade::WrongVersion);
  EXPECT_LT(RubricGrade::WrongVersion, RubricGrade::OkMinor);
  EXPECT_LT(RubricGrade::OkMinor, RubricGrade::Ok);
  EXPECT_TRUE(counts_as_correct(RubricGrade::Ok));
  EXPECT_TRUE(counts_as_correct(RubricGrade::OkMinor));
  EXPECT_FALSE(counts_as_correct(RubricGrade::WrongVersion));
  EXPECT_FALSE(counts_as_correct(RubricGrade::Incorrect));
}

TEST(Metrics, WorkedExamples) {
  ConfusionCounts c{12, 9, 3, 1};
  EXPECT_EQ(precision_ratio(c).to_display(), "0.57");
  EXPECT_EQ(recall_ratio(c).to_display(), "0.80");
  EXPECT_DOUBLE_EQ(*recall(c), 0.8);
  ConfusionCounts lines{50, 40, 31, 0};
  EXPECT_EQ(recall_ratio(lines).to_display(), "0.62");
  EXPECT_DOUBLE_EQ(*precision(lines), 50.0 / 90.0);
  EXPECT_DOUBLE_EQ(*missed_ratio(31, 81), 31.0 / 81.0);
}

TEST(Metrics, UndefinedRatios) {
  ConfusionCounts none{};
  EXPECT_FALSE(precision(none).has_value());
  EXPECT_FALSE(recall(none).has_value());
  EXPECT_FALSE(missed_ratio(0, 0).has_value());
  EXPECT_EQ(precision_ratio(none).to_display(), "n/a");
  EXPECT_EQ((Ratio{0, 5}).to_display(), "0.00");
  EXPECT_EQ((Ratio{5, 5}).to_display(), "1.00");
}

TEST(Metrics, DisplayRoundsHalfUpOnTheExactFraction) {
  EXPECT_EQ((Ratio{1, 8}).to_display(), "0.13");
  EXPECT_EQ((Ratio{57, 200}).to_display(), "0.29");
  EXPECT_EQ((Ratio{1, 3}).to_display(), "0.33");
  EXPECT_EQ((Ratio{2, 3}).to_display(), "0.67");
  EXPECT_EQ((Ratio{199, 200}).to_display(), "1.00");
  for (std::uint64_t d = 1; d <= 120; ++d) {
    for (std::uint64_t n = 0; n <= d; ++n) {
      ASSERT_EQ((Ratio{n, d}).to_display(), display_oracle(n, d)) << n << "/" << d;
    }
  }
}

TEST(Metrics, PrecisionMonotoneInFalsePositives) {
  for (std::uint64_t tp = 1; tp < 20; ++tp) {
    for (std::uint64_t fp = 0; fp < 20; ++fp) {
      EXPECT_GE(*precision({tp, fp, 0, 0}), *precision({tp, fp + 1, 0, 0}));
      EXPECT_GE(*recall({tp, 0, fp, 0}), *recall({tp, 0, fp + 1, 0}));
      auto p = *precision({tp, fp, 0, 0});
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
}

TEST(SameCode, WhitespaceInsensitive) {
  EXPECT_TRUE(same_code("job = backend.run(qc)", "job=backend.run( qc )"));
  EXPECT_TRUE(same_code("a = 1\nb = 2", "a = 1\n\n   b = 2"));
  EXPECT_FALSE(same_code("job = backend.run(qc)", "job = backend.execute(qc)"));
  EXPECT_FALSE(same_code("s = 'a b'", "s = 'ab'"));
  EXPECT_TRUE(same_code("", "  \n"));
}

TEST(SameCode, RenamingRules) {
  EXPECT_TRUE(same_code_up_to_renaming("job = backend.run(qc)", "result = backend.run(qc)"));
  EXPECT_TRUE(same_code_up_to_renaming("job = sim.run(circ, shots=10)", "job = backend.run(qc, shots=10)"));
  EXPECT_FALSE(same_code_up_to_renaming("job = backend.run(qc)", "job = backend.execute(qc)"));
  EXPECT_FALSE(same_code_up_to_renaming("job = run(qc, shots=1)", "job = run(qc, count=1)"));
  EXPECT_FALSE(same_code_up_to_renaming("x = f(a, b)", "x = f(a, a)"));
  EXPECT_FALSE(same_code_up_to_renaming("from qiskit import A", "from qiskit import B"));
  EXPECT_FALSE(same_code_up_to_renaming("print(x)", "show(x)"));
  EXPECT_FALSE(same_code_up_to_renaming("for i in range(3)", "for i in xrange(3)"));
  EXPECT_TRUE(same_code_up_to_renaming("print(qasm3.dumps(c))", "print(qasm2.dumps(c))"));
}

TEST(AutoGrade, AgainstExpectedChange) {
  GroundTruth truth{"s", true, {{4, "QSK-046-001", "job = backend.run(transpile(qc, backend))"}, {6, "QSK-046-002", ""}}};
  EXPECT_EQ(auto_grade(finding(4, "job  =  backend.run(transpile(qc, backend))"), truth), RubricGrade::Ok);
  EXPECT_EQ(auto_grade(finding(4, "j = backend.run(transpile(circ, backend))"), truth), RubricGrade::OkMinor);
  EXPECT_EQ(auto_grade(finding(4, "job = execute(qc, backend)"), truth), RubricGrade::WrongVersion);
  EXPECT_EQ(auto_grade(finding(5, "job = backend.run(transpile(qc, backend))"), truth), RubricGrade::Incorrect);
  EXPECT_EQ(auto_grade(finding(6, ""), truth), RubricGrade::Ok);
}

TEST(Overrides, ParseAndApply) {
  auto set = OverrideSet::parse("# manual review\n\noverride: s | 4 | OK\noverride: other | 2 | X\n");
  EXPECT_EQ(set.entries().size(), 2u);
  EXPECT_EQ(set.find("s", 4), RubricGrade::Ok);
  EXPECT_FALSE(set.find("s", 5).has_value());

  GroundTruth truth{"s", true, {{4, "QSK-046-001", "a = 1"}}};
  auto result = grade_findings({finding(4, "totally different"), finding(9, "x")}, truth, &set);
  EXPECT_EQ(result[0].grade, RubricGrade::Ok);
  EXPECT_EQ(result[0].grade_source, GradeSource::ManualOverride);
  EXPECT_EQ(result[1].grade, RubricGrade::Incorrect);
  EXPECT_EQ(result[1].grade_source, GradeSource::Auto);
}

TEST(Overrides, UnknownKeyIsAnError) {
  auto set = OverrideSet::parse("override: s | 7 | OK-\n");
  GroundTruth truth{"s", true, {{4, "QSK-046-001", "a = 1"}}};
  try {
    grade_findings({finding(4, "a = 1")}, truth, &set);
    FAIL();
  } catch (const EvaluationError& e) {
    EXPECT_EQ(e.kind(), EvaluationError::Kind::OverrideKeyUnknown);
    EXPECT_EQ(e.snippet_id(), "s");
    EXPECT_EQ(e.line_no(), 7u);
  }
}

TEST(Overrides, Malformed) {
  for (const char* text : {"override: s | x | OK\n", "override: s | 3 | good\n", "note: s | 3 | OK\n", "override: s | 3\n"}) {
    try {
      OverrideSet::parse(text);
      FAIL() << text;
    } catch (const EvaluationError& e) {
      EXPECT_EQ(e.kind(), EvaluationError::Kind::MalformedOverride);
    }
  }
}

TEST(Overrides, RegradingIsIdempotent) {
  GroundTruth truth{"s", true, {{2, "QSK-046-001", "a = 1"}}};
  OverrideSet set;
  set.set("s", 2, RubricGrade::WrongVersion);
  std::vector<MigrationFinding> findings{finding(2, "a = 1")};
  auto once = grade_findings(findings, truth, &set);
  std::vector<MigrationFinding> again_input;
  for (const auto& g : once) again_input.push_back(g.finding);
  EXPECT_EQ(grade_findings(again_input, truth, &set), once);
}

TEST(ScenarioLevel, Classification) {
  auto needs = truth_with_lines({3, 5});
  EXPECT_EQ(classify_snippet({needs, {graded(3, RubricGrade::Ok)}}), ScenarioOutcome::TruePositive);
  EXPECT_EQ(classify_snippet({needs, {graded(5, RubricGrade::OkMinor), graded(9, RubricGrade::Incorrect)}}),
            ScenarioOutcome::TruePositive);
  EXPECT_EQ(classify_snippet({needs, {graded(3, RubricGrade::WrongVersion)}}), ScenarioOutcome::FalsePositive);
  EXPECT_EQ(classify_snippet({needs, {graded(7, RubricGrade::Ok)}}), ScenarioOutcome::FalseNegative);
  EXPECT_EQ(classify_snippet({needs, {}}), ScenarioOutcome::FalseNegative);
  auto clean = truth_with_lines({});
  EXPECT_EQ(classify_snippet({clean, {}}), ScenarioOutcome::TrueNegative);
  EXPECT_EQ(classify_snippet({clean, {graded(1, RubricGrade::Incorrect)}}), ScenarioOutcome::FalsePositive);
}

TEST(LineLevel, Counting) {
  auto truth = truth_with_lines({2, 4, 6});
  SnippetResult r{truth,
                  {graded(2, RubricGrade::Ok), graded(4, RubricGrade::WrongVersion), graded(4, RubricGrade::OkMinor),
                   graded(9, RubricGrade::Ok), graded(6, RubricGrade::Incorrect)}};
  // Lines 2 and 4 are hit; 6 is missed. Wrong grades and the stray line 9 are false positives.
  EXPECT_EQ(score_snippet_lines(r), (ConfusionCounts{2, 3, 1, 0}));
}

TEST(LineLevel, CleanSnippetFindingsAreFalsePositives) {
  SnippetResult r{truth_with_lines({}), {graded(1, RubricGrade::Ok), graded(2, RubricGrade::Ok)}};
  EXPECT_EQ(score_snippet_lines(r), (ConfusionCounts{0, 2, 0, 0}));
}

TEST(Aggregation, InvariantsOverRandomRuns) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    auto results = random_results(rng);
    auto scenario = score_scenarios(results);
    auto lines = score_lines(results);
    EXPECT_EQ(scenario.tp + scenario.fp + scenario.fn + scenario.tn, results.size());
    std::uint64_t expected = 0;
    std::uint64_t findings = 0;
    for (const auto& r : results) {
      expected += r.truth.changes.size();
      findings += r.graded.size();
    }
    EXPECT_EQ(lines.tp + lines.fn, expected);
    EXPECT_LE(lines.tp + lines.fp, findings);
    EXPECT_EQ(lines.tn, 0u);

    auto report = build_score_report(RunLabel::WithTaxonomy, results);
    EXPECT_EQ(report.expected_changes, expected);
    EXPECT_EQ(report.missed_change_ratio.numerator, lines.fn);
    EXPECT_EQ(report.per_snippet.size(), results.size());

    auto shuffled = results;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(score_scenarios(shuffled), scenario);
    EXPECT_EQ(render_report(build_score_report(RunLabel::WithTaxonomy, shuffled), ReportFormat::Json),
              render_report(report, ReportFormat::Json));
  }
}

TEST(Aggregation, UpgradingAGradeNeverLowersLineRecall) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    auto results = random_results(rng);
    auto before = score_lines(results);
    for (auto& r : results) {
      for (auto& g : r.graded) g.grade = RubricGrade::Ok;
    }
    auto after = score_lines(results);
    EXPECT_GE(after.tp, before.tp);
    EXPECT_LE(after.fn, before.fn);
  }
}

TEST(Reports, CountsOnlyReport) {
  auto report = report_from_counts(RunLabel::WithoutTaxonomy, {10, 11, 3, 1}, {29, 61, 52, 0});
  EXPECT_EQ(report.expected_changes, 81u);
  EXPECT_EQ(report.missed_change_ratio.to_display(), "0.64");
  auto text = render_report(report, ReportFormat::TableText);
  EXPECT_NE(text.find("| Metric | wo/Tax |"), std::string::npos);
  EXPECT_NE(text.find("Scenario Identification"), std::string::npos);
  EXPECT_NE(text.find("Refactoring Suggestions"), std::string::npos);
  EXPECT_EQ(text.find("Per-snippet outcomes"), std::string::npos);
}

TEST(Reports, CsvAndJsonAgree) {
  std::vector<ScoreReport> reports{report_from_counts(RunLabel::WithTaxonomy, {12, 9, 3, 1}, {50, 40, 31, 0}),
                                   report_from_counts(RunLabel::Baseline, {0, 0, 0, 0}, {0, 0, 0, 0})};
  auto json = nlohmann::json::parse(render_report(reports, ReportFormat::Json));
  std::istringstream csv(render_report(reports, ReportFormat::Csv));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "run,level,metric,value");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    ASSERT_EQ(f.size(), 4u) << line;
    auto run = std::find_if(json["runs"].begin(), json["runs"].end(), [&](const auto& r) { return r["run"] == f[0]; });
    ASSERT_NE(run, json["runs"].end());
    const auto& v = f[1] == "overall" ? (*run)[f[2]] : (*run)[f[1]][f[2]];
    if (f[3] == "n/a") {
      EXPECT_TRUE(v.is_null()) << line;
    } else {
      EXPECT_DOUBLE_EQ(v.get<double>(), std::stod(f[3])) << line;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 2u * 13u);
  EXPECT_FALSE(json["notes"].empty());
}

TEST(Reports, FormatNames) {
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::Csv);
  EXPECT_EQ(parse_report_format("json"), ReportFormat::Json);
  EXPECT_EQ(parse_report_format("table-text"), ReportFormat::TableText);
  EXPECT_FALSE(parse_report_format("xml").has_value());
  for (auto label : {RunLabel::WithTaxonomy, RunLabel::WithoutTaxonomy, RunLabel::Baseline}) {
    EXPECT_EQ(parse_run_label(to_string(label)), label);
  }
  EXPECT_EQ(run_label(PromptMode::WithoutTaxonomy), RunLabel::WithoutTaxonomy);
}

TEST(Reports, PerSnippetRowsAreSortedById) {
  std::vector<SnippetResult> results{{truth_with_lines({1}), {graded(1, RubricGrade::Ok)}},
                                     {truth_with_lines({}), {}}};
  results[0].truth.snippet_id = "b";
  results[1].truth.snippet_id = "a";
  auto report = build_score_report(RunLabel::WithTaxonomy, results);
  ASSERT_EQ(report.per_snippet.size(), 2u);
  EXPECT_EQ(report.per_snippet[0].snippet_id, "a");
  EXPECT_EQ(report.per_snippet[0].outcome, ScenarioOutcome::TrueNegative);
  EXPECT_EQ(report.per_snippet[1].grades.at(RubricGrade::Ok), 1u);
  auto text = render_report(report, ReportFormat::TableText);
  EXPECT_NE(text.find("| b | yes | TP 1/1 lines, 1 findings |"), std::string::npos) << text;
}

// Regression snapshot of the keyword baseline over the reference corpus.
TEST(Baseline, ReferenceCorpusSnapshot) {
  auto taxonomy = parse_taxonomy(slurp(reference_taxonomy()));
  auto corpus = load_corpus(reference_corpus(), &taxonomy);
  std::vector<SnippetResult> results;
  for (const auto& entry : corpus) {
    auto findings = hits_to_findings(scan_snippet(entry.snippet, taxonomy), taxonomy);
    results.push_back({entry.truth, grade_findings(findings, entry.truth)});
  }
  EXPECT_EQ(score_scenarios(results), (ConfusionCounts{5, 17, 0, 3}));
  EXPECT_EQ(score_lines(results), (ConfusionCounts{5, 92, 76, 0}));
}

TEST(Metrics, MissedRatioBounds) {
  EXPECT_DOUBLE_EQ(*missed_ratio(0, 81), 0.0);
  EXPECT_DOUBLE_EQ(*missed_ratio(81, 81), 1.0);
  EXPECT_NEAR(*missed_ratio(31, 81), 0.383, 0.0005);
}

TEST(Reports, EmptyCorpusReportIsAllZeroAndUndefined) {
  auto report = build_score_report(RunLabel::WithTaxonomy, {});
  EXPECT_EQ(report.scenario_counts, ConfusionCounts{});
  EXPECT_EQ(report.line_counts, ConfusionCounts{});
  auto json = nlohmann::json::parse(render_report(report, ReportFormat::Json));
  const auto& run = json["runs"][0];
  EXPECT_TRUE(run["scenario"]["precision"].is_null());
  EXPECT_TRUE(run["lines"]["recall"].is_null());
  EXPECT_TRUE(run["missed_change_ratio"].is_null());
  EXPECT_NE(render_report(report, ReportFormat::TableText).find("| Precision | n/a |"), std::string::npos);
}

TEST(LineLevel, NoFindingsMissesEveryExpectedLine) {
  auto taxonomy = parse_taxonomy(slurp(reference_taxonomy()));
  std::vector<SnippetResult> results;
  for (const auto& entry : load_corpus(reference_corpus(), &taxonomy)) results.push_back({entry.truth, {}});
  EXPECT_EQ(score_lines(results), (ConfusionCounts{0, 0, 81, 0}));
}

TEST(Aggregation, UpgradingOneFindingNeverLowersPrecisionOrRecall) {
  std::mt19937 rng(5);
  auto at_least = [](std::optional<double> after, std::optional<double> before) {
    return !before || (after && *after >= *before - 1e-12);
  };
  for (int trial = 0; trial < 500; ++trial) {
    auto results = random_results(rng);
    std::vector<std::pair<std::size_t, std::size_t>> incorrect;
    for (std::size_t s = 0; s < results.size(); ++s) {
      for (std::size_t f = 0; f < results[s].graded.size(); ++f) {
        if (results[s].graded[f].grade == RubricGrade::Incorrect) incorrect.emplace_back(s, f);
      }
    }
    if (incorrect.empty()) continue;
    auto [s, f] = incorrect[rng() % incorrect.size()];
    auto before_scenarios = score_scenarios(results);
    auto before_lines = score_lines(results);
    results[s].graded[f].grade = RubricGrade::Ok;
    auto after_scenarios = score_scenarios(results);
    auto after_lines = score_lines(results);
    EXPECT_TRUE(at_least(precision(after_scenarios), precision(before_scenarios)));
    EXPECT_TRUE(at_least(recall(after_scenarios), recall(before_scenarios)));
    EXPECT_TRUE(at_least(precision(after_lines), precision(before_lines)));
    EXPECT_TRUE(at_least(recall(after_lines), recall(before_lines)));
  }
}
