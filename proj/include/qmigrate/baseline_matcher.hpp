#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qmigrate/corpus.hpp"
#include "qmigrate/response_parser.hpp"
#include "qmigrate/taxonomy.hpp"

namespace qmigrate {

enum class HitKind { ImportLine, UsageLine };

std::string_view to_string(HitKind kind);

/// A taxonomy artifact keyword found in a snippet line.
struct KeywordHit {
  std::size_t line_no = 0;
  std::string scenario_id;
  std::string matched_keyword;
  HitKind hit_kind = HitKind::UsageLine;
  std::string line_text;

  bool operator==(const KeywordHit&) const = default;
};

/// True when keyword occurs in line with no identifier character directly
/// before or after it.
bool contains_identifier_token(std::string_view line, std::string_view keyword);

/// Lines whose first non-blank text is `import ` or `from `.
bool is_import_line(std::string_view line);

/// Lexical scan: every (line, scenario, artifact) triple where the artifact
/// appears as a whole identifier token. Sorted by (line_no, scenario_id);
/// hits for the same pair keep artifact order.
std::vector<KeywordHit> scan_snippet(const CodeSnippet& snippet, const Taxonomy& taxonomy);

/// One finding per hit, citing the scenario, with the scenario's
/// target-version example as the refactoring. New-feature hits are optional.
std::vector<MigrationFinding> hits_to_findings(const std::vector<KeywordHit>& hits, const Taxonomy& taxonomy);

}  // namespace qmigrate
