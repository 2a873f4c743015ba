#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmigrate/corpus.hpp"
#include "qmigrate/response_parser.hpp"

namespace qmigrate {

/// Larger values are better grades.
enum class RubricGrade { Incorrect = 0, WrongVersion = 1, OkMinor = 2, Ok = 3 };

/// "OK", "OK-", "X+", "X".
std::string_view to_string(RubricGrade grade);
std::optional<RubricGrade> parse_grade(std::string_view text);

inline bool counts_as_correct(RubricGrade grade) {
  return grade == RubricGrade::Ok || grade == RubricGrade::OkMinor;
}

enum class GradeSource { Auto, ManualOverride };

struct GradedFinding {
  MigrationFinding finding;
  RubricGrade grade = RubricGrade::Incorrect;
  GradeSource grade_source = GradeSource::Auto;

  bool operator==(const GradedFinding&) const = default;
};

class EvaluationError : public std::runtime_error {
 public:
  enum class Kind { OverrideKeyUnknown, MalformedOverride };

  EvaluationError(Kind kind, std::string snippet_id, std::size_t line_no, std::string detail = {});

  Kind kind() const { return kind_; }
  const std::string& snippet_id() const { return snippet_id_; }
  std::size_t line_no() const { return line_no_; }

 private:
  Kind kind_;
  std::string snippet_id_;
  std::size_t line_no_;
};

/// Manual grades keyed by (snippet id, line). Parsed from lines of the form
/// `override: <snippet_id> | <line_no> | OK|OK-|X+|X`.
class OverrideSet {
 public:
  using Key = std::pair<std::string, std::size_t>;

  static OverrideSet parse(std::string_view text);

  void set(std::string snippet_id, std::size_t line_no, RubricGrade grade);
  std::optional<RubricGrade> find(std::string_view snippet_id, std::size_t line_no) const;
  const std::map<Key, RubricGrade, std::less<>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::map<Key, RubricGrade, std::less<>> entries_;
};

// Code comparison used by the auto-grader. Texts are compared as token
// sequences, so whitespace and line breaks never matter.

bool same_code(std::string_view a, std::string_view b);

/// True when the texts become identical under a consistent one-to-one
/// renaming of local identifiers. Attribute names, called names, keyword
/// argument names, imported names and Python keywords must match literally.
bool same_code_up_to_renaming(std::string_view a, std::string_view b);

RubricGrade auto_grade(const MigrationFinding& finding, const GroundTruth& truth);

/// Overrides win over the auto-grader. Throws OverrideKeyUnknown for an
/// override of this snippet that names a line without findings.
std::vector<GradedFinding> grade_findings(const std::vector<MigrationFinding>& findings, const GroundTruth& truth,
                                          const OverrideSet* overrides = nullptr);

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

/// An exact fraction. Undefined when the denominator is zero.
struct Ratio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;

  bool defined() const { return denominator != 0; }
  std::optional<double> value() const;
  /// Two decimals, rounded half-up on the exact fraction; "n/a" if undefined.
  std::string to_display() const;
};

Ratio precision_ratio(const ConfusionCounts& c);
Ratio recall_ratio(const ConfusionCounts& c);

/// tp / (tp + fp); nullopt when tp + fp == 0.
std::optional<double> precision(const ConfusionCounts& c);
/// tp / (tp + fn); nullopt when tp + fn == 0.
std::optional<double> recall(const ConfusionCounts& c);
/// fn / total_expected; nullopt when total_expected == 0.
std::optional<double> missed_ratio(std::uint64_t fn, std::uint64_t total_expected);

struct SnippetResult {
  GroundTruth truth;
  std::vector<GradedFinding> graded;
};

enum class ScenarioOutcome { TruePositive, FalsePositive, FalseNegative, TrueNegative };

std::string_view to_string(ScenarioOutcome outcome);

ScenarioOutcome classify_snippet(const SnippetResult& result);
ConfusionCounts score_snippet_lines(const SnippetResult& result);

ConfusionCounts score_scenarios(std::span<const SnippetResult> results);
ConfusionCounts score_lines(std::span<const SnippetResult> results);

/// Which findings a report describes.
enum class RunLabel { WithTaxonomy, WithoutTaxonomy, Baseline };

/// "with-tax", "no-tax", "baseline".
std::string_view to_string(RunLabel label);
std::optional<RunLabel> parse_run_label(std::string_view text);
RunLabel run_label(PromptMode mode);
/// Column title in rendered tables: "w/Tax", "wo/Tax", "Baseline".
std::string_view column_title(RunLabel label);

struct SnippetDetail {
  std::string snippet_id;
  bool needs_refactoring = false;
  ScenarioOutcome outcome = ScenarioOutcome::TrueNegative;
  std::size_t findings = 0;
  ConfusionCounts lines;
  std::map<RubricGrade, std::size_t> grades;
};

struct ScoreReport {
  RunLabel run = RunLabel::WithTaxonomy;
  ConfusionCounts scenario_counts;
  ConfusionCounts line_counts;
  std::uint64_t expected_changes = 0;
  Ratio scenario_precision;
  Ratio scenario_recall;
  Ratio line_precision;
  Ratio line_recall;
  Ratio missed_change_ratio;
  std::vector<SnippetDetail> per_snippet;
};

/// Aggregates in snippet-id order and derives every metric from the counts.
ScoreReport build_score_report(RunLabel run, std::vector<SnippetResult> results);

/// A report carrying only counts, for rendering published figures.
ScoreReport report_from_counts(RunLabel run, const ConfusionCounts& scenario, const ConfusionCounts& lines);

enum class ReportFormat { TableText, Csv, Json };

std::optional<ReportFormat> parse_report_format(std::string_view text);

/// One column per report, in the given order.
std::string render_report(std::span<const ScoreReport> reports, ReportFormat format);

inline std::string render_report(const ScoreReport& report, ReportFormat format) {
  return render_report(std::span<const ScoreReport>(&report, 1), format);
}

/// Convention notes appended to table-text and JSON reports.
const std::vector<std::string>& report_notes();

}  // namespace qmigrate
