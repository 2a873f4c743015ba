#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qmigrate/diagnostics.hpp"
#include "qmigrate/prompting.hpp"
#include "qmigrate/taxonomy.hpp"

namespace qmigrate {

struct MatchedScenario {
  std::string id;
  bool operator==(const MatchedScenario&) const = default;
};
/// The model answered "*": no taxonomy scenario applies.
struct NoMatch {
  bool operator==(const NoMatch&) const = default;
};
/// Without-taxonomy output has no Scenario ID column.
struct Unreferenced {
  bool operator==(const Unreferenced&) const = default;
};

using ScenarioRef = std::variant<MatchedScenario, NoMatch, Unreferenced>;

struct MigrationFinding {
  std::size_t line_no = 1;
  std::string code_text;
  ScenarioRef scenario_ref = Unreferenced{};
  std::string scenario_description;
  bool optional_flag = false;
  std::string artifact;
  std::string refactoring;

  bool operator==(const MigrationFinding&) const = default;
};

class ResponseParseError : public std::runtime_error {
 public:
  enum class Kind { NoTableFound, HeaderMismatch, RowArity, BadLineNumber };

  ResponseParseError(Kind kind, std::string message, std::size_t row_index = 0,
                     std::string expected = {}, std::string found = {});

  Kind kind() const { return kind_; }
  /// 1-based data row for RowArity and BadLineNumber.
  std::size_t row_index() const { return row_index_; }
  const std::string& expected() const { return expected_; }
  /// The header, arity or cell text that was found.
  const std::string& found() const { return found_; }

 private:
  Kind kind_;
  std::size_t row_index_;
  std::string expected_;
  std::string found_;
};

/// Column names the mode's table must carry, in order.
const std::vector<std::string>& expected_columns(PromptMode mode);

/// Largest line range ("N-M") that is expanded; wider ranges are rejected as
/// BadLineNumber.
inline constexpr std::size_t kMaxLineRange = 1000;

/// Extracts findings from the first table whose header matches the mode's
/// columns. Surrounding prose and other tables are ignored.
std::vector<MigrationFinding> parse_findings(std::string_view raw, PromptMode mode);

/// UnknownScenarioId errors for ids missing from the taxonomy and
/// TaxonomyGapCandidate infos for "*" rows.
std::vector<Diagnostic> resolve_findings(const std::vector<MigrationFinding>& findings,
                                         const Taxonomy& taxonomy);

}  // namespace qmigrate
