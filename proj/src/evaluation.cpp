#include "qmigrate/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "qmigrate/pipe_table.hpp"

namespace qmigrate {

namespace pt = pipe_table;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Grades and overrides

std::string_view to_string(RubricGrade grade) {
  switch (grade) {
    case RubricGrade::Ok: return "OK";
    case RubricGrade::OkMinor: return "OK-";
    case RubricGrade::WrongVersion: return "X+";
    case RubricGrade::Incorrect: return "X";
  }
  return "X";
}

std::optional<RubricGrade> parse_grade(std::string_view text) {
  text = pt::trim(text);
  if (text == "OK") return RubricGrade::Ok;
  if (text == "OK-" || text == "OK\xE2\x88\x92") return RubricGrade::OkMinor;  // U+2212 minus
  if (text == "X+") return RubricGrade::WrongVersion;
  if (text == "X") return RubricGrade::Incorrect;
  return std::nullopt;
}

EvaluationError::EvaluationError(Kind kind, std::string snippet_id, std::size_t line_no, std::string detail)
    : std::runtime_error((kind == Kind::OverrideKeyUnknown ? "override names no finding: " : "malformed override: ") +
                         snippet_id + (line_no ? " line " + std::to_string(line_no) : std::string{}) +
                         (detail.empty() ? "" : " (" + detail + ")")),
      kind_(kind),
      snippet_id_(std::move(snippet_id)),
      line_no_(line_no) {}

OverrideSet OverrideSet::parse(std::string_view text) {
  OverrideSet set;
  std::size_t n = 0;
  for (auto raw : pt::split_lines(text)) {
    ++n;
    auto line = pt::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto where = "line " + std::to_string(n);
    constexpr std::string_view kPrefix = "override:";
    if (!line.starts_with(kPrefix)) {
      throw EvaluationError(EvaluationError::Kind::MalformedOverride, "", 0, where);
    }
    auto cells = pt::split_row(line.substr(kPrefix.size()));
    if (cells.size() != 3) throw EvaluationError(EvaluationError::Kind::MalformedOverride, "", 0, where);
    auto id = pt::unescape_cell(cells[0]);
    std::size_t line_no = 0;
    auto [ptr, ec] = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), line_no);
    if (ec != std::errc{} || ptr != cells[1].data() + cells[1].size() || line_no == 0) {
      throw EvaluationError(EvaluationError::Kind::MalformedOverride, id, 0, where + ": bad line number");
    }
    auto grade = parse_grade(cells[2]);
    if (!grade) throw EvaluationError(EvaluationError::Kind::MalformedOverride, id, line_no, where + ": bad grade");
    set.set(std::move(id), line_no, *grade);
  }
  return set;
}

void OverrideSet::set(std::string snippet_id, std::size_t line_no, RubricGrade grade) {
  entries_[{std::move(snippet_id), line_no}] = grade;
}

std::optional<RubricGrade> OverrideSet::find(std::string_view snippet_id, std::size_t line_no) const {
  auto it = entries_.find(Key{std::string{snippet_id}, line_no});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Code comparison

namespace {

enum class TokenKind { Identifier, Number, String, Comment, Punct };

struct CodeToken {
  TokenKind kind;
  std::string text;
  std::size_t line;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}
bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

std::vector<CodeToken> tokenize(std::string_view text) {
  std::vector<CodeToken> tokens;
  std::size_t line = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (ident_start(c)) {
      auto start = i;
      while (i < text.size() && ident_char(text[i])) ++i;
      tokens.push_back({TokenKind::Identifier, std::string{text.substr(start, i - start)}, line});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      auto start = i;
      while (i < text.size() && (ident_char(text[i]) || text[i] == '.')) ++i;
      tokens.push_back({TokenKind::Number, std::string{text.substr(start, i - start)}, line});
    } else if (c == '"' || c == '\'') {
      auto start = i++;
      while (i < text.size() && text[i] != c && text[i] != '\n') {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        ++i;
      }
      if (i < text.size() && text[i] == c) ++i;
      tokens.push_back({TokenKind::String, std::string{text.substr(start, i - start)}, line});
    } else if (c == '#') {
      auto end = text.find('\n', i);
      if (end == std::string_view::npos) end = text.size();
      std::string comment;
      for (char ch : text.substr(i, end - i)) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
          if (!comment.empty() && comment.back() != ' ') comment += ' ';
        } else {
          comment += ch;
        }
      }
      while (!comment.empty() && comment.back() == ' ') comment.pop_back();
      tokens.push_back({TokenKind::Comment, std::move(comment), line});
      i = end;
    } else {
      tokens.push_back({TokenKind::Punct, std::string(1, c), line});
      ++i;
    }
  }
  return tokens;
}

bool is_python_keyword(std::string_view word) {
  static const std::set<std::string_view> keywords{
      "False", "None",   "True",  "and",    "as",       "assert", "async", "await",  "break",
      "class", "continue", "def", "del",    "elif",     "else",   "except", "finally", "for",
      "from",  "global", "if",    "import", "in",       "is",     "lambda", "nonlocal", "not",
      "or",    "pass",   "raise", "return", "try",      "while",  "with",  "yield",  "self",
      "print", "range",  "len",   "list",   "dict",     "int",    "float", "str"};
  return keywords.contains(word);
}

// Marks identifiers that stand for a local name the author is free to pick.
std::vector<bool> renamable_mask(const std::vector<CodeToken>& tokens) {
  std::vector<bool> mask(tokens.size(), false);
  std::set<std::size_t> import_lines;
  std::size_t last_line = static_cast<std::size_t>(-1);
  for (const auto& t : tokens) {
    if (t.line != last_line) {
      last_line = t.line;
      if (t.kind == TokenKind::Identifier && (t.text == "import" || t.text == "from")) import_lines.insert(t.line);
    }
  }
  int depth = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.kind == TokenKind::Punct) {
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if ((t.text == ")" || t.text == "]" || t.text == "}") && depth > 0) --depth;
      continue;
    }
    if (t.kind != TokenKind::Identifier || is_python_keyword(t.text) || import_lines.contains(t.line)) continue;
    bool after_dot = i > 0 && tokens[i - 1].kind == TokenKind::Punct && tokens[i - 1].text == ".";
    auto next = [&](std::size_t k) -> std::string_view {
      return i + k < tokens.size() && tokens[i + k].kind == TokenKind::Punct ? std::string_view{tokens[i + k].text}
                                                                            : std::string_view{};
    };
    bool called = next(1) == "(";
    bool keyword_argument = depth > 0 && next(1) == "=" && next(2) != "=";
    mask[i] = !after_dot && !called && !keyword_argument;
  }
  return mask;
}

bool same_tokens(const std::vector<CodeToken>& a, const std::vector<CodeToken>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].kind != b[i].kind || a[i].text != b[i].text) return false;
  }
  return true;
}

}  // namespace

bool same_code(std::string_view a, std::string_view b) { return same_tokens(tokenize(a), tokenize(b)); }

bool same_code_up_to_renaming(std::string_view a, std::string_view b) {
  auto ta = tokenize(a);
  auto tb = tokenize(b);
  if (ta.size() != tb.size()) return false;
  auto ma = renamable_mask(ta);
  auto mb = renamable_mask(tb);
  std::unordered_map<std::string, std::string> forward;
  std::unordered_map<std::string, std::string> backward;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i].kind != tb[i].kind || ma[i] != mb[i]) return false;
    if (!ma[i]) {
      if (ta[i].text != tb[i].text) return false;
      continue;
    }
    auto [f, f_new] = forward.emplace(ta[i].text, tb[i].text);
    auto [r, r_new] = backward.emplace(tb[i].text, ta[i].text);
    if (f->second != tb[i].text || r->second != ta[i].text) return false;
  }
  return true;
}

RubricGrade auto_grade(const MigrationFinding& finding, const GroundTruth& truth) {
  std::optional<RubricGrade> best;
  for (const auto& change : truth.changes) {
    if (change.line_no != finding.line_no) continue;
    RubricGrade grade = RubricGrade::WrongVersion;
    if (same_code(finding.refactoring, change.expected_refactoring)) {
      grade = RubricGrade::Ok;
    } else if (same_code_up_to_renaming(finding.refactoring, change.expected_refactoring)) {
      grade = RubricGrade::OkMinor;
    }
    if (!best || grade > *best) best = grade;
  }
  return best.value_or(RubricGrade::Incorrect);
}

std::vector<GradedFinding> grade_findings(const std::vector<MigrationFinding>& findings, const GroundTruth& truth,
                                          const OverrideSet* overrides) {
  if (overrides) {
    for (const auto& [key, grade] : overrides->entries()) {
      if (key.first != truth.snippet_id) continue;
      bool known = std::any_of(findings.begin(), findings.end(),
                               [&](const MigrationFinding& f) { return f.line_no == key.second; });
      if (!known) throw EvaluationError(EvaluationError::Kind::OverrideKeyUnknown, key.first, key.second);
    }
  }
  std::vector<GradedFinding> graded;
  graded.reserve(findings.size());
  for (const auto& f : findings) {
    if (auto manual = overrides ? overrides->find(truth.snippet_id, f.line_no) : std::nullopt) {
      graded.push_back({f, *manual, GradeSource::ManualOverride});
    } else {
      graded.push_back({f, auto_grade(f, truth), GradeSource::Auto});
    }
  }
  return graded;
}

// ---------------------------------------------------------------------------
// Metrics

std::optional<double> Ratio::value() const {
  if (!defined()) return std::nullopt;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

std::string Ratio::to_display() const {
  if (!defined()) return "n/a";
  // floor(100 * n / d + 1/2) computed exactly.
  auto hundredths = (200 * numerator + denominator) / (2 * denominator);
  std::string out = std::to_string(hundredths / 100) + ".";
  auto cents = hundredths % 100;
  if (cents < 10) out += '0';
  out += std::to_string(cents);
  return out;
}

Ratio precision_ratio(const ConfusionCounts& c) { return {c.tp, c.tp + c.fp}; }
Ratio recall_ratio(const ConfusionCounts& c) { return {c.tp, c.tp + c.fn}; }

std::optional<double> precision(const ConfusionCounts& c) { return precision_ratio(c).value(); }
std::optional<double> recall(const ConfusionCounts& c) { return recall_ratio(c).value(); }
std::optional<double> missed_ratio(std::uint64_t fn, std::uint64_t total_expected) {
  return Ratio{fn, total_expected}.value();
}

std::string_view to_string(ScenarioOutcome outcome) {
  switch (outcome) {
    case ScenarioOutcome::TruePositive: return "TP";
    case ScenarioOutcome::FalsePositive: return "FP";
    case ScenarioOutcome::FalseNegative: return "FN";
    case ScenarioOutcome::TrueNegative: return "TN";
  }
  return "TN";
}

namespace {

bool is_expected_line(const GroundTruth& truth, std::size_t line) {
  return std::any_of(truth.changes.begin(), truth.changes.end(),
                     [&](const ExpectedChange& c) { return c.line_no == line; });
}

}  // namespace

ScenarioOutcome classify_snippet(const SnippetResult& result) {
  const auto& truth = result.truth;
  if (!truth.needs_refactoring) {
    return result.graded.empty() ? ScenarioOutcome::TrueNegative : ScenarioOutcome::FalsePositive;
  }
  bool touches = false;
  for (const auto& g : result.graded) {
    if (!is_expected_line(truth, g.finding.line_no)) continue;
    touches = true;
    if (counts_as_correct(g.grade)) return ScenarioOutcome::TruePositive;
  }
  return touches ? ScenarioOutcome::FalsePositive : ScenarioOutcome::FalseNegative;
}

ConfusionCounts score_snippet_lines(const SnippetResult& result) {
  ConfusionCounts c;
  for (const auto& change : result.truth.changes) {
    bool hit = std::any_of(result.graded.begin(), result.graded.end(), [&](const GradedFinding& g) {
      return g.finding.line_no == change.line_no && counts_as_correct(g.grade);
    });
    ++(hit ? c.tp : c.fn);
  }
  for (const auto& g : result.graded) {
    if (!is_expected_line(result.truth, g.finding.line_no) || !counts_as_correct(g.grade)) ++c.fp;
  }
  return c;
}

ConfusionCounts score_scenarios(std::span<const SnippetResult> results) {
  ConfusionCounts total;
  for (const auto& r : results) {
    switch (classify_snippet(r)) {
      case ScenarioOutcome::TruePositive: ++total.tp; break;
      case ScenarioOutcome::FalsePositive: ++total.fp; break;
      case ScenarioOutcome::FalseNegative: ++total.fn; break;
      case ScenarioOutcome::TrueNegative: ++total.tn; break;
    }
  }
  return total;
}

ConfusionCounts score_lines(std::span<const SnippetResult> results) {
  ConfusionCounts total;
  for (const auto& r : results) total += score_snippet_lines(r);
  return total;
}

// ---------------------------------------------------------------------------
// Reports

std::string_view to_string(RunLabel label) {
  switch (label) {
    case RunLabel::WithTaxonomy: return "with-tax";
    case RunLabel::WithoutTaxonomy: return "no-tax";
    case RunLabel::Baseline: return "baseline";
  }
  return "with-tax";
}

std::optional<RunLabel> parse_run_label(std::string_view text) {
  for (auto l : {RunLabel::WithTaxonomy, RunLabel::WithoutTaxonomy, RunLabel::Baseline}) {
    if (text == to_string(l)) return l;
  }
  return std::nullopt;
}

RunLabel run_label(PromptMode mode) {
  return mode == PromptMode::WithTaxonomy ? RunLabel::WithTaxonomy : RunLabel::WithoutTaxonomy;
}

std::string_view column_title(RunLabel label) {
  switch (label) {
    case RunLabel::WithTaxonomy: return "w/Tax";
    case RunLabel::WithoutTaxonomy: return "wo/Tax";
    case RunLabel::Baseline: return "Baseline";
  }
  return "";
}

namespace {

void derive_metrics(ScoreReport& r) {
  r.scenario_precision = precision_ratio(r.scenario_counts);
  r.scenario_recall = recall_ratio(r.scenario_counts);
  r.line_precision = precision_ratio(r.line_counts);
  r.line_recall = recall_ratio(r.line_counts);
  r.missed_change_ratio = Ratio{r.line_counts.fn, r.expected_changes};
}

}  // namespace

ScoreReport build_score_report(RunLabel run, std::vector<SnippetResult> results) {
  std::stable_sort(results.begin(), results.end(), [](const SnippetResult& a, const SnippetResult& b) {
    return a.truth.snippet_id < b.truth.snippet_id;
  });
  ScoreReport report;
  report.run = run;
  report.scenario_counts = score_scenarios(results);
  report.line_counts = score_lines(results);
  for (const auto& r : results) {
    report.expected_changes += r.truth.changes.size();
    SnippetDetail d;
    d.snippet_id = r.truth.snippet_id;
    d.needs_refactoring = r.truth.needs_refactoring;
    d.outcome = classify_snippet(r);
    d.findings = r.graded.size();
    d.lines = score_snippet_lines(r);
    for (const auto& g : r.graded) ++d.grades[g.grade];
    report.per_snippet.push_back(std::move(d));
  }
  derive_metrics(report);
  return report;
}

ScoreReport report_from_counts(RunLabel run, const ConfusionCounts& scenario, const ConfusionCounts& lines) {
  ScoreReport report;
  report.run = run;
  report.scenario_counts = scenario;
  report.line_counts = lines;
  report.expected_changes = lines.tp + lines.fn;
  derive_metrics(report);
  return report;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "table-text" || text == "txt") return ReportFormat::TableText;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  return std::nullopt;
}

const std::vector<std::string>& report_notes() {
  static const std::vector<std::string> notes{
      "Precision = TP / (TP + FP) and Recall = TP / (TP + FN), computed at full precision and rounded half-up to "
      "two decimals for display; n/a when the denominator is zero.",
      "Scenario identification: a snippet that needs refactoring is TP when a finding graded OK or OK- sits on an "
      "expected line, FN when no finding touches an expected line and FP otherwise; a clean snippet is TN without "
      "findings and FP with any.",
      "Refactoring suggestions: an expected line is TP when a finding on it is graded OK or OK-, FN otherwise; "
      "findings on other lines and X+/X findings on expected lines are FP; TN is not enumerated.",
      "Missed-change ratio = refactoring FN / expected changes.",
      "Recall is always recomputed from the counts. Hand-transcribed summaries can disagree: a scenario recall of "
      "0.85 has been quoted for TP=12, FN=3, where TP / (TP + FN) = 0.80.",
  };
  return notes;
}

namespace {

struct MetricRow {
  std::string label;
  std::string level;  // csv/json grouping
  std::string key;
  std::function<std::string(const ScoreReport&)> text;
  std::function<json(const ScoreReport&)> value;
};

json ratio_json(const Ratio& r) {
  if (!r.defined()) return nullptr;
  return std::stod(r.to_display());
}

std::vector<MetricRow> scenario_rows() {
  auto count = [](auto member) {
    return std::pair{std::function<std::string(const ScoreReport&)>(
                         [member](const ScoreReport& r) { return std::to_string(member(r)); }),
                     std::function<json(const ScoreReport&)>([member](const ScoreReport& r) { return member(r); })};
  };
  auto ratio = [](auto member) {
    return std::pair{std::function<std::string(const ScoreReport&)>(
                         [member](const ScoreReport& r) { return member(r).to_display(); }),
                     std::function<json(const ScoreReport&)>([member](const ScoreReport& r) { return ratio_json(member(r)); })};
  };
  std::vector<MetricRow> rows;
  auto add = [&](std::string label, std::string level, std::string key, auto pair) {
    rows.push_back({std::move(label), std::move(level), std::move(key), pair.first, pair.second});
  };
  add("TP", "scenario", "tp", count([](const ScoreReport& r) { return r.scenario_counts.tp; }));
  add("TN", "scenario", "tn", count([](const ScoreReport& r) { return r.scenario_counts.tn; }));
  add("FP", "scenario", "fp", count([](const ScoreReport& r) { return r.scenario_counts.fp; }));
  add("FN", "scenario", "fn", count([](const ScoreReport& r) { return r.scenario_counts.fn; }));
  add("Precision", "scenario", "precision", ratio([](const ScoreReport& r) { return r.scenario_precision; }));
  add("Recall", "scenario", "recall", ratio([](const ScoreReport& r) { return r.scenario_recall; }));
  add("TP", "lines", "tp", count([](const ScoreReport& r) { return r.line_counts.tp; }));
  add("FP", "lines", "fp", count([](const ScoreReport& r) { return r.line_counts.fp; }));
  add("FN", "lines", "fn", count([](const ScoreReport& r) { return r.line_counts.fn; }));
  add("Precision", "lines", "precision", ratio([](const ScoreReport& r) { return r.line_precision; }));
  add("Recall", "lines", "recall", ratio([](const ScoreReport& r) { return r.line_recall; }));
  add("Missed-change ratio", "overall", "missed_change_ratio",
      ratio([](const ScoreReport& r) { return r.missed_change_ratio; }));
  add("Expected changes", "overall", "expected_changes",
      count([](const ScoreReport& r) { return r.expected_changes; }));
  return rows;
}

std::string row_line(const std::vector<std::string>& cells) { return pt::format_row(cells) + "\n"; }

std::string snippet_cell(const SnippetDetail& d) {
  return std::string{to_string(d.outcome)} + " " + std::to_string(d.lines.tp) + "/" +
         std::to_string(d.lines.tp + d.lines.fn) + " lines, " + std::to_string(d.findings) + " findings";
}

std::string render_text(std::span<const ScoreReport> reports) {
  const auto rows = scenario_rows();
  std::string out = "Summary of scenario identification and refactoring results\n\n";
  std::vector<std::string> header{"Metric"};
  for (const auto& r : reports) header.emplace_back(column_title(r.run));
  out += row_line(header);
  out += pt::format_separator(header.size()) + "\n";
  std::string level;
  for (const auto& row : rows) {
    if (row.level != level) {
      level = row.level;
      if (level == "scenario" || level == "lines") {
        std::vector<std::string> section{level == "scenario" ? "Scenario Identification" : "Refactoring Suggestions"};
        for (std::size_t i = 0; i < reports.size(); ++i) section.emplace_back();
        out += row_line(section);
      }
    }
    std::vector<std::string> cells{row.label};
    for (const auto& r : reports) cells.push_back(row.text(r));
    out += row_line(cells);
  }

  std::vector<std::string> ids;
  for (const auto& r : reports) {
    for (const auto& d : r.per_snippet) {
      if (std::find(ids.begin(), ids.end(), d.snippet_id) == ids.end()) ids.push_back(d.snippet_id);
    }
  }
  std::sort(ids.begin(), ids.end());
  if (!ids.empty()) {
    out += "\nPer-snippet outcomes\n\n";
    std::vector<std::string> h{"Snippet", "Needs refactoring"};
    for (const auto& r : reports) h.emplace_back(column_title(r.run));
    out += row_line(h);
    out += pt::format_separator(h.size()) + "\n";
    for (const auto& id : ids) {
      std::vector<std::string> cells{id, ""};
      for (const auto& r : reports) {
        auto it = std::find_if(r.per_snippet.begin(), r.per_snippet.end(),
                               [&](const SnippetDetail& d) { return d.snippet_id == id; });
        if (it == r.per_snippet.end()) {
          cells.emplace_back("-");
        } else {
          cells[1] = it->needs_refactoring ? "yes" : "no";
          cells.push_back(snippet_cell(*it));
        }
      }
      out += row_line(cells);
    }
  }

  out += "\nNotes\n\n";
  for (const auto& note : report_notes()) out += "- " + note + "\n";
  return out;
}

std::string render_csv(std::span<const ScoreReport> reports) {
  const auto rows = scenario_rows();
  std::string out = "run,level,metric,value\n";
  for (const auto& r : reports) {
    for (const auto& row : rows) {
      out += std::string{to_string(r.run)} + "," + row.level + "," + row.key + "," + row.text(r) + "\n";
    }
  }
  return out;
}

std::string render_json(std::span<const ScoreReport> reports) {
  const auto rows = scenario_rows();
  json runs = json::array();
  for (const auto& r : reports) {
    json run{{"run", to_string(r.run)}};
    for (const auto& row : rows) {
      if (row.level == "overall") {
        run[row.key] = row.value(r);
      } else {
        run[row.level][row.key] = row.value(r);
      }
    }
    json snippets = json::array();
    for (const auto& d : r.per_snippet) {
      json grades = json::object();
      for (const auto& [g, n] : d.grades) grades[std::string{to_string(g)}] = n;
      snippets.push_back({{"snippet_id", d.snippet_id},
                          {"needs_refactoring", d.needs_refactoring},
                          {"outcome", to_string(d.outcome)},
                          {"findings", d.findings},
                          {"lines", {{"tp", d.lines.tp}, {"fp", d.lines.fp}, {"fn", d.lines.fn}}},
                          {"grades", grades}});
    }
    run["per_snippet"] = std::move(snippets);
    runs.push_back(std::move(run));
  }
  json doc{{"runs", std::move(runs)}, {"notes", report_notes()}};
  return doc.dump(2) + "\n";
}

}  // namespace

std::string render_report(std::span<const ScoreReport> reports, ReportFormat format) {
  switch (format) {
    case ReportFormat::TableText: return render_text(reports);
    case ReportFormat::Csv: return render_csv(reports);
    case ReportFormat::Json: return render_json(reports);
  }
  return {};
}

}  // namespace qmigrate
