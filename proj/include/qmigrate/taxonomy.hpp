#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qmigrate/diagnostics.hpp"

namespace qmigrate {

enum class ScenarioCategory { Deprecation, NewFeature, StructuralChange };

/// Canonical spelling used in taxonomy files: "Deprecation", "New Feature",
/// "Structural Change".
std::string_view to_string(ScenarioCategory category);

/// Case-insensitive match against the three canonical spellings.
std::optional<ScenarioCategory> parse_category(std::string_view text);

/// Dotted numeric version such as "0.46" or "0.46.1". Trailing zero
/// components do not affect ordering, so "0.46" == "0.46.0".
class Version {
 public:
  static std::optional<Version> parse(std::string_view text);

  const std::vector<unsigned>& components() const { return components_; }
  std::string to_string() const;

  std::strong_ordering operator<=>(const Version& other) const;
  bool operator==(const Version& other) const { return (*this <=> other) == 0; }

 private:
  std::vector<unsigned> components_;
};

struct MigrationFlow {
  std::string source_version;
  std::string target_version;

  bool operator==(const MigrationFlow&) const = default;
};

struct MigrationScenario {
  std::string id;
  ScenarioCategory category = ScenarioCategory::Deprecation;
  MigrationFlow flow;
  std::string summary;
  std::vector<std::string> artifacts;
  std::string example_source;
  std::string example_target;
  std::optional<std::string> difficulty;  // stored verbatim, unused
  std::optional<std::string> impact;      // stored verbatim, unused
  std::vector<std::string> references;

  bool operator==(const MigrationScenario&) const = default;
};

struct Taxonomy {
  std::string target_version;
  std::vector<MigrationScenario> scenarios;

  bool operator==(const Taxonomy&) const = default;
};

class TaxonomyError : public std::runtime_error {
 public:
  enum class Kind { MissingColumn, DuplicateId, UnknownCategory, EmptyRequiredCell, MalformedFlow };

  TaxonomyError(Kind kind, std::string detail, std::size_t row = 0);

  Kind kind() const { return kind_; }
  /// Column name, scenario id or offending cell text, depending on kind.
  const std::string& detail() const { return detail_; }
  /// 1-based data row, or 0 when not row-specific.
  std::size_t row() const { return row_; }

 private:
  Kind kind_;
  std::string detail_;
  std::size_t row_;
};

namespace taxonomy_columns {
inline constexpr std::string_view kId = "Id";
inline constexpr std::string_view kCategory = "Category";
inline constexpr std::string_view kFlow = "Migration Flow";
inline constexpr std::string_view kSummary = "Summary";
inline constexpr std::string_view kArtifacts = "Artifacts";
inline constexpr std::string_view kSourceExample = "Example code in source version";
inline constexpr std::string_view kTargetExample = "Example code in target version";
inline constexpr std::string_view kDifficulty = "Degree of Difficulty";
inline constexpr std::string_view kImpact = "Degree of impact in SE/QSE";
inline constexpr std::string_view kReferences = "References";
}  // namespace taxonomy_columns

/// Parses a taxonomy document: an optional `target-version: X` preamble line
/// followed by a pipe table. When the Id column is absent, ids are assigned
/// as QSK-<version>-<ordinal>. When the preamble is absent, the target
/// version is the highest flow target (empty for an empty table).
Taxonomy parse_taxonomy(std::string_view text);

std::string serialize_taxonomy(const Taxonomy& taxonomy);

/// Error diagnostics for every violated invariant, warnings for syntactically
/// suspicious reference URLs, and one informational "CategoryCounts" line.
std::vector<Diagnostic> validate_taxonomy(const Taxonomy& taxonomy);

/// Returns nullptr when absent. The no-match sentinel "*" is never an id.
const MigrationScenario* scenario_by_id(const Taxonomy& taxonomy, std::string_view id);

/// Counts indexed by ScenarioCategory.
std::array<std::size_t, 3> category_counts(const Taxonomy& taxonomy);

/// "QSK-046-017" for ("0.46", 17).
std::string make_scenario_id(std::string_view target_version, std::size_t ordinal);

}  // namespace qmigrate
