#include "qmigrate/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <regex>
#include <set>

#include "qmigrate/pipe_table.hpp"

namespace qmigrate {

namespace pt = pipe_table;
namespace cols = taxonomy_columns;

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string error_message(TaxonomyError::Kind kind, const std::string& detail, std::size_t row) {
  std::string msg;
  switch (kind) {
    case TaxonomyError::Kind::MissingColumn: msg = "missing column '" + detail + "'"; break;
    case TaxonomyError::Kind::DuplicateId: msg = "duplicate scenario id '" + detail + "'"; break;
    case TaxonomyError::Kind::UnknownCategory: msg = "unknown category '" + detail + "'"; break;
    case TaxonomyError::Kind::EmptyRequiredCell: msg = "empty required cell '" + detail + "'"; break;
    case TaxonomyError::Kind::MalformedFlow: msg = "malformed migration flow '" + detail + "'"; break;
  }
  if (row > 0) msg += " in row " + std::to_string(row);
  return msg;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto item = pt::strip_code_fence(pt::trim(text.substr(start, end - start)));
    if (!item.empty()) items.push_back(std::move(item));
    start = end + 1;
  }
  return items;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += items[i];
  }
  return out;
}

std::optional<std::string> preamble_target_version(std::string_view text, std::size_t header_line) {
  static const std::regex pattern(R"(^\s*target[-_ ]version\s*:\s*(\S+)\s*$)", std::regex::icase);
  auto lines = pt::split_lines(text);
  for (std::size_t i = 0; i + 1 < header_line && i < lines.size(); ++i) {
    std::string line{lines[i]};
    std::smatch m;
    if (std::regex_match(line, m, pattern)) return m[1].str();
  }
  return std::nullopt;
}

MigrationFlow parse_flow(std::string_view cell, std::size_t row) {
  std::string_view arrow = "->";
  auto pos = cell.find(arrow);
  if (pos == std::string_view::npos) {
    arrow = "\xE2\x86\x92";  // U+2192
    pos = cell.find(arrow);
  }
  if (pos == std::string_view::npos) {
    throw TaxonomyError(TaxonomyError::Kind::MalformedFlow, std::string{cell}, row);
  }
  MigrationFlow flow{std::string{pt::trim(cell.substr(0, pos))},
                     std::string{pt::trim(cell.substr(pos + arrow.size()))}};
  if (flow.source_version.empty() || flow.target_version.empty()) {
    throw TaxonomyError(TaxonomyError::Kind::MalformedFlow, std::string{cell}, row);
  }
  return flow;
}

}  // namespace

std::string_view to_string(ScenarioCategory category) {
  switch (category) {
    case ScenarioCategory::Deprecation: return "Deprecation";
    case ScenarioCategory::NewFeature: return "New Feature";
    case ScenarioCategory::StructuralChange: return "Structural Change";
  }
  return "Deprecation";
}

std::optional<ScenarioCategory> parse_category(std::string_view text) {
  text = pt::trim(text);
  for (auto c : {ScenarioCategory::Deprecation, ScenarioCategory::NewFeature,
                 ScenarioCategory::StructuralChange}) {
    if (iequals(text, to_string(c))) return c;
  }
  return std::nullopt;
}

std::optional<Version> Version::parse(std::string_view text) {
  text = pt::trim(text);
  if (text.empty()) return std::nullopt;
  Version v;
  std::size_t start = 0;
  while (true) {
    auto end = text.find('.', start);
    if (end == std::string_view::npos) end = text.size();
    auto part = text.substr(start, end - start);
    if (part.empty() || !std::all_of(part.begin(), part.end(),
                                     [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc{} || ptr != part.data() + part.size()) return std::nullopt;
    v.components_.push_back(value);
    if (end == text.size()) break;
    start = end + 1;
  }
  return v;
}

std::string Version::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i > 0) out += '.';
    out += std::to_string(components_[i]);
  }
  return out;
}

std::strong_ordering Version::operator<=>(const Version& other) const {
  auto n = std::max(components_.size(), other.components_.size());
  for (std::size_t i = 0; i < n; ++i) {
    unsigned a = i < components_.size() ? components_[i] : 0;
    unsigned b = i < other.components_.size() ? other.components_[i] : 0;
    if (auto c = a <=> b; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

TaxonomyError::TaxonomyError(Kind kind, std::string detail, std::size_t row)
    : std::runtime_error(error_message(kind, detail, row)),
      kind_(kind),
      detail_(std::move(detail)),
      row_(row) {}

std::string make_scenario_id(std::string_view target_version, std::size_t ordinal) {
  std::string tag;
  if (auto v = Version::parse(target_version)) {
    const auto& c = v->components();
    tag = std::to_string(c[0]);
    unsigned minor = c.size() > 1 ? c[1] : 0;
    if (minor < 10) tag += '0';
    tag += std::to_string(minor);
  } else {
    for (char ch : target_version) {
      if (std::isalnum(static_cast<unsigned char>(ch))) tag += ch;
    }
  }
  std::string number = std::to_string(ordinal);
  if (number.size() < 3) number.insert(0, 3 - number.size(), '0');
  return "QSK-" + tag + "-" + number;
}

Taxonomy parse_taxonomy(std::string_view text) {
  auto tables = pt::find_tables(text);
  if (tables.empty()) {
    throw TaxonomyError(TaxonomyError::Kind::MissingColumn, std::string{cols::kCategory});
  }
  const auto& table = tables.front();

  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    for (auto name : {cols::kId, cols::kCategory, cols::kFlow, cols::kSummary, cols::kArtifacts,
                      cols::kSourceExample, cols::kTargetExample, cols::kDifficulty, cols::kImpact,
                      cols::kReferences}) {
      if (pt::unescape_cell(table.header[i]) == name && !index.contains(name)) index[name] = i;
    }
  }
  for (auto name : {cols::kCategory, cols::kFlow, cols::kSummary, cols::kArtifacts,
                    cols::kSourceExample, cols::kTargetExample, cols::kDifficulty, cols::kImpact,
                    cols::kReferences}) {
    if (!index.contains(name)) {
      throw TaxonomyError(TaxonomyError::Kind::MissingColumn, std::string{name});
    }
  }
  const bool has_id_column = index.contains(cols::kId);

  Taxonomy taxonomy;
  std::set<std::string, std::less<>> seen;
  std::size_t row_no = 0;
  for (const auto& row : table.rows) {
    ++row_no;
    auto cell = [&](std::string_view name) -> std::string {
      auto i = index.at(name);
      return i < row.cells.size() ? pt::unescape_cell(row.cells[i]) : std::string{};
    };
    auto text_cell = [&](std::string_view name) { return std::string{pt::trim(cell(name))}; };
    auto required = [&](std::string_view name, std::string value) {
      if (pt::trim(value).empty()) {
        throw TaxonomyError(TaxonomyError::Kind::EmptyRequiredCell, std::string{name}, row_no);
      }
      return value;
    };

    MigrationScenario s;
    if (has_id_column) s.id = required(cols::kId, text_cell(cols::kId));

    auto category_text = required(cols::kCategory, text_cell(cols::kCategory));
    auto category = parse_category(category_text);
    if (!category) {
      throw TaxonomyError(TaxonomyError::Kind::UnknownCategory, category_text, row_no);
    }
    s.category = *category;
    s.flow = parse_flow(required(cols::kFlow, text_cell(cols::kFlow)), row_no);
    s.summary = required(cols::kSummary, text_cell(cols::kSummary));
    s.artifacts = split_list(cell(cols::kArtifacts));
    if (s.artifacts.empty()) {
      throw TaxonomyError(TaxonomyError::Kind::EmptyRequiredCell, std::string{cols::kArtifacts},
                          row_no);
    }
    s.example_source = required(cols::kSourceExample, pt::strip_code_fence(text_cell(cols::kSourceExample)));
    s.example_target = required(cols::kTargetExample, pt::strip_code_fence(text_cell(cols::kTargetExample)));
    if (auto d = text_cell(cols::kDifficulty); !d.empty()) s.difficulty = std::move(d);
    if (auto d = text_cell(cols::kImpact); !d.empty()) s.impact = std::move(d);
    s.references = split_list(cell(cols::kReferences));
    taxonomy.scenarios.push_back(std::move(s));
  }

  if (auto v = preamble_target_version(text, table.header_line_no)) {
    taxonomy.target_version = *v;
  } else {
    std::optional<Version> best;
    for (const auto& s : taxonomy.scenarios) {
      auto v = Version::parse(s.flow.target_version);
      if (v && (!best || *v > *best)) {
        best = v;
        taxonomy.target_version = s.flow.target_version;
      }
    }
  }

  for (std::size_t i = 0; i < taxonomy.scenarios.size(); ++i) {
    auto& s = taxonomy.scenarios[i];
    if (!has_id_column) s.id = make_scenario_id(taxonomy.target_version, i + 1);
    if (!seen.insert(s.id).second) {
      throw TaxonomyError(TaxonomyError::Kind::DuplicateId, s.id, i + 1);
    }
  }
  return taxonomy;
}

std::string serialize_taxonomy(const Taxonomy& taxonomy) {
  std::string out;
  if (!taxonomy.target_version.empty()) {
    out += "target-version: " + taxonomy.target_version + "\n\n";
  }
  std::vector<std::string> header;
  for (auto name : {cols::kId, cols::kCategory, cols::kFlow, cols::kSummary, cols::kArtifacts,
                    cols::kSourceExample, cols::kTargetExample, cols::kDifficulty, cols::kImpact,
                    cols::kReferences}) {
    header.emplace_back(name);
  }
  out += pt::format_row(header) + "\n";
  out += pt::format_separator(header.size()) + "\n";
  for (const auto& s : taxonomy.scenarios) {
    std::vector<std::string> cells{
        pt::escape_cell(s.id),
        pt::escape_cell(to_string(s.category)),
        pt::escape_cell(s.flow.source_version + " -> " + s.flow.target_version),
        pt::escape_cell(s.summary),
        pt::escape_cell(join_list(s.artifacts)),
        pt::escape_cell(pt::fence_code(s.example_source)),
        pt::escape_cell(pt::fence_code(s.example_target)),
        pt::escape_cell(s.difficulty.value_or("")),
        pt::escape_cell(s.impact.value_or("")),
        pt::escape_cell(join_list(s.references)),
    };
    out += pt::format_row(cells) + "\n";
  }
  return out;
}

std::vector<Diagnostic> validate_taxonomy(const Taxonomy& taxonomy) {
  static const std::regex url_pattern(R"(^https?://[^\s/$.?#][^\s]*$)", std::regex::icase);
  std::vector<Diagnostic> out;
  auto error = [&](std::string code, std::string subject, std::string message) {
    out.push_back({Severity::Error, std::move(code), std::move(subject), std::move(message)});
  };

  auto taxonomy_target = Version::parse(taxonomy.target_version);
  if (!taxonomy_target) {
    error("MalformedVersion", "", "taxonomy target version '" + taxonomy.target_version +
                                      "' is not a dotted numeric version");
  }

  std::set<std::string, std::less<>> seen;
  for (const auto& s : taxonomy.scenarios) {
    if (s.id.empty()) error("EmptyId", "", "scenario without id");
    if (!s.id.empty() && !seen.insert(s.id).second) {
      error("DuplicateId", s.id, "scenario id appears more than once");
    }
    if (pt::trim(s.summary).empty()) error("EmptySummary", s.id, "summary is empty");
    if (s.artifacts.empty() ||
        std::any_of(s.artifacts.begin(), s.artifacts.end(),
                    [](const std::string& a) { return pt::trim(a).empty(); })) {
      error("EmptyArtifacts", s.id, "every scenario must name at least one artifact");
    }
    if (pt::trim(s.example_source).empty()) {
      error("EmptyExample", s.id, "source-version example is empty");
    }
    if (pt::trim(s.example_target).empty()) {
      error("EmptyExample", s.id, "target-version example is empty");
    }

    auto source = Version::parse(s.flow.source_version);
    auto target = Version::parse(s.flow.target_version);
    if (!source || !target) {
      error("MalformedVersion", s.id,
            "migration flow '" + s.flow.source_version + " -> " + s.flow.target_version +
                "' is not made of dotted numeric versions");
    } else {
      if (!(*source < *target)) {
        error("VersionOrder", s.id,
              "source version " + s.flow.source_version + " is not older than target version " +
                  s.flow.target_version);
      }
      if (taxonomy_target && *target > *taxonomy_target) {
        error("FlowBeyondTarget", s.id,
              "flow target " + s.flow.target_version + " is newer than taxonomy target " +
                  taxonomy.target_version);
      }
    }

    for (const auto& ref : s.references) {
      if (!std::regex_match(ref, url_pattern)) {
        out.push_back({Severity::Warning, "BadReferenceUrl", s.id,
                       "reference '" + ref + "' is not an http(s) URL"});
      }
    }
  }

  auto counts = category_counts(taxonomy);
  out.push_back({Severity::Info, "CategoryCounts", "",
                 "scenarios: " + std::to_string(taxonomy.scenarios.size()) + " (deprecation " +
                     std::to_string(counts[0]) + ", new-feature " + std::to_string(counts[1]) +
                     ", structural " + std::to_string(counts[2]) + ")"});
  return out;
}

const MigrationScenario* scenario_by_id(const Taxonomy& taxonomy, std::string_view id) {
  if (id.empty() || id == "*") return nullptr;
  for (const auto& s : taxonomy.scenarios) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

std::array<std::size_t, 3> category_counts(const Taxonomy& taxonomy) {
  std::array<std::size_t, 3> counts{};
  for (const auto& s : taxonomy.scenarios) ++counts[static_cast<std::size_t>(s.category)];
  return counts;
}

}  // namespace qmigrate
