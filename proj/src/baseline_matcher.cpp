#include "qmigrate/baseline_matcher.hpp"

#include <algorithm>
#include <cctype>

#include "qmigrate/pipe_table.hpp"

namespace qmigrate {

namespace {

bool is_identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}

std::vector<std::string_view> source_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

}  // namespace

std::string_view to_string(HitKind kind) { return kind == HitKind::ImportLine ? "import" : "usage"; }

bool contains_identifier_token(std::string_view line, std::string_view keyword) {
  if (keyword.empty()) return false;
  for (auto pos = line.find(keyword); pos != std::string_view::npos; pos = line.find(keyword, pos + 1)) {
    bool left_ok = pos == 0 || !is_identifier_char(line[pos - 1]);
    auto end = pos + keyword.size();
    bool right_ok = end == line.size() || !is_identifier_char(line[end]);
    if (left_ok && right_ok) return true;
  }
  return false;
}

bool is_import_line(std::string_view line) {
  auto start = line.find_first_not_of(" \t");
  if (start == std::string_view::npos) return false;
  line.remove_prefix(start);
  return line.starts_with("import ") || line.starts_with("from ");
}

std::vector<KeywordHit> scan_snippet(const CodeSnippet& snippet, const Taxonomy& taxonomy) {
  std::vector<KeywordHit> hits;
  auto lines = source_lines(snippet.source);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = lines[i];
    const auto kind = is_import_line(line) ? HitKind::ImportLine : HitKind::UsageLine;
    for (const auto& scenario : taxonomy.scenarios) {
      for (const auto& keyword : scenario.artifacts) {
        if (contains_identifier_token(line, keyword)) {
          hits.push_back({i + 1, scenario.id, keyword, kind, std::string{line}});
        }
      }
    }
  }
  std::stable_sort(hits.begin(), hits.end(), [](const KeywordHit& a, const KeywordHit& b) {
    if (a.line_no != b.line_no) return a.line_no < b.line_no;
    return a.scenario_id < b.scenario_id;
  });
  return hits;
}

std::vector<MigrationFinding> hits_to_findings(const std::vector<KeywordHit>& hits, const Taxonomy& taxonomy) {
  std::vector<MigrationFinding> findings;
  findings.reserve(hits.size());
  for (const auto& hit : hits) {
    MigrationFinding f;
    f.line_no = hit.line_no;
    f.code_text = std::string{pipe_table::trim(hit.line_text)};
    f.scenario_ref = MatchedScenario{hit.scenario_id};
    f.artifact = hit.matched_keyword;
    if (const auto* s = scenario_by_id(taxonomy, hit.scenario_id)) {
      f.scenario_description = std::string{to_string(s->category)} + " \xE2\x86\x92 " + s->summary;
      f.refactoring = s->example_target;
      f.optional_flag = s->category == ScenarioCategory::NewFeature;
    }
    findings.push_back(std::move(f));
  }
  return findings;
}

}  // namespace qmigrate
