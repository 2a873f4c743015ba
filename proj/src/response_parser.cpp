#include "qmigrate/response_parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "qmigrate/pipe_table.hpp"

namespace qmigrate {

namespace pt = pipe_table;

namespace {

std::string lower(std::string_view text) {
  std::string out{text};
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string join_header(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += " | ";
    out += cells[i];
  }
  return out;
}

bool header_matches(const std::vector<std::string>& header, PromptMode mode) {
  const auto& expected = expected_columns(mode);
  if (header.size() != expected.size()) return false;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (lower(pt::trim(pt::unescape_cell(header[i]))) != lower(expected[i])) return false;
  }
  return true;
}

// Replaces HTML line breaks with newlines.
std::string replace_breaks(std::string text) {
  for (std::string_view tag : {"<br/>", "<br />", "<br>", "<BR>", "<BR/>", "<BR />"}) {
    for (auto pos = text.find(tag); pos != std::string::npos; pos = text.find(tag, pos + 1)) {
      text.replace(pos, tag.size(), "\n");
    }
  }
  return text;
}

std::string cell_text(std::string_view raw) {
  auto text = replace_breaks(pt::unescape_cell(raw));
  return std::string{pt::trim(pt::strip_code_fence(pt::trim(text)))};
}

std::optional<std::size_t> parse_positive(std::string_view text) {
  text = pt::trim(text);
  if (text.empty()) return std::nullopt;
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) return std::nullopt;
  return value;
}

// "7", "3-5", or a range written with U+2013 or U+2014.
std::optional<std::pair<std::size_t, std::size_t>> parse_line_cell(std::string_view text) {
  if (auto single = parse_positive(text)) return std::pair{*single, *single};
  for (std::string_view dash : {"\xE2\x80\x93", "\xE2\x80\x94", "-"}) {
    auto pos = text.find(dash);
    if (pos == std::string_view::npos) continue;
    auto first = parse_positive(text.substr(0, pos));
    auto last = parse_positive(text.substr(pos + dash.size()));
    if (!first || !last || *first > *last || *last - *first >= kMaxLineRange) return std::nullopt;
    return std::pair{*first, *last};
  }
  return std::nullopt;
}

ScenarioRef parse_scenario_id(std::string_view cell) {
  // Asterisks are either the no-match sentinel or emphasis around an id.
  std::string id;
  for (char c : pt::trim(cell)) {
    if (c != '*') id += c;
  }
  auto trimmed = pt::trim(id);
  if (trimmed.empty()) return NoMatch{};
  return MatchedScenario{std::string{trimmed}};
}

// Removes an "(optional)" label (any case) and reports whether one was found.
bool take_optional_label(std::string& text) {
  auto lowered = lower(text);
  constexpr std::string_view kLabel = "(optional)";
  bool found = false;
  for (auto pos = lowered.find(kLabel); pos != std::string::npos; pos = lowered.find(kLabel)) {
    text.erase(pos, kLabel.size());
    lowered.erase(pos, kLabel.size());
    found = true;
  }
  if (!found) return false;
  std::string collapsed;
  for (char c : text) {
    if (c == ' ' && !collapsed.empty() && collapsed.back() == ' ') continue;
    collapsed += c;
  }
  text = std::string{pt::trim(collapsed)};
  return true;
}

}  // namespace

ResponseParseError::ResponseParseError(Kind kind, std::string message, std::size_t row_index,
                                       std::string expected, std::string found)
    : std::runtime_error(std::move(message)),
      kind_(kind),
      row_index_(row_index),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

const std::vector<std::string>& expected_columns(PromptMode mode) {
  static const std::vector<std::string> with_tax{"Line", "Code", "Scenario ID", "Scenario", "Artifact", "Refactoring"};
  static const std::vector<std::string> no_tax{"Line", "Code", "Scenario", "Artifact", "Refactoring"};
  return mode == PromptMode::WithTaxonomy ? with_tax : no_tax;
}

std::vector<MigrationFinding> parse_findings(std::string_view raw, PromptMode mode) {
  auto tables = pt::find_tables(raw);
  if (tables.empty()) {
    throw ResponseParseError(ResponseParseError::Kind::NoTableFound, "no table found in model output");
  }
  auto table = std::find_if(tables.begin(), tables.end(),
                            [&](const pt::Table& t) { return header_matches(t.header, mode); });
  if (table == tables.end()) {
    auto expected = join_header(expected_columns(mode));
    auto found = join_header(tables.front().header);
    throw ResponseParseError(ResponseParseError::Kind::HeaderMismatch,
                             "expected header '" + expected + "', found '" + found + "'", 0, expected, found);
  }

  const bool with_taxonomy = mode == PromptMode::WithTaxonomy;
  const std::size_t arity = expected_columns(mode).size();
  const std::size_t offset = with_taxonomy ? 1 : 0;

  std::vector<MigrationFinding> findings;
  std::size_t row_index = 0;
  for (const auto& row : table->rows) {
    ++row_index;
    if (row.cells.size() != arity) {
      throw ResponseParseError(ResponseParseError::Kind::RowArity,
                               "row " + std::to_string(row_index) + " has " + std::to_string(row.cells.size()) +
                                   " cells, expected " + std::to_string(arity),
                               row_index, std::to_string(arity), std::to_string(row.cells.size()));
    }
    auto line_text = cell_text(row.cells[0]);
    auto lines = parse_line_cell(line_text);
    if (!lines) {
      throw ResponseParseError(ResponseParseError::Kind::BadLineNumber,
                               "row " + std::to_string(row_index) + " has line cell '" + line_text + "'",
                               row_index, "", line_text);
    }

    MigrationFinding finding;
    finding.code_text = cell_text(row.cells[1]);
    finding.scenario_ref = with_taxonomy ? parse_scenario_id(cell_text(row.cells[2])) : ScenarioRef{Unreferenced{}};
    finding.scenario_description = cell_text(row.cells[2 + offset]);
    finding.optional_flag = take_optional_label(finding.scenario_description);
    finding.artifact = cell_text(row.cells[3 + offset]);
    finding.refactoring = cell_text(row.cells[4 + offset]);
    for (auto line = lines->first; line <= lines->second; ++line) {
      finding.line_no = line;
      findings.push_back(finding);
    }
  }
  return findings;
}

std::vector<Diagnostic> resolve_findings(const std::vector<MigrationFinding>& findings, const Taxonomy& taxonomy) {
  std::vector<Diagnostic> out;
  for (const auto& f : findings) {
    auto where = "line " + std::to_string(f.line_no);
    if (const auto* matched = std::get_if<MatchedScenario>(&f.scenario_ref)) {
      if (!scenario_by_id(taxonomy, matched->id)) {
        out.push_back({Severity::Error, "UnknownScenarioId", matched->id,
                       where + " cites a scenario id that is not in the taxonomy"});
      }
    } else if (std::holds_alternative<NoMatch>(f.scenario_ref)) {
      out.push_back({Severity::Info, "TaxonomyGapCandidate", where,
                     "no taxonomy scenario matched: " + f.scenario_description});
    }
  }
  return out;
}

}  // namespace qmigrate
