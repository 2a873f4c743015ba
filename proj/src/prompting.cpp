#include "qmigrate/prompting.hpp"

#include <fstream>
#include <sstream>

namespace qmigrate {

namespace {

std::string prompt_message(PromptError::Kind kind, const std::string& detail) {
  switch (kind) {
    case PromptError::Kind::MissingTaxonomy: return "taxonomy required in with-tax mode";
    case PromptError::Kind::VersionMismatch: return "taxonomy targets " + detail;
    case PromptError::Kind::TemplateError: return "unresolved template placeholder '" + detail + "'";
    case PromptError::Kind::Unreadable: return "cannot read template " + detail;
  }
  return detail;
}

std::string read_template(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PromptError(PromptError::Kind::Unreadable, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool uses_placeholder(std::string_view tpl, std::string_view name) {
  return tpl.find("{{" + std::string{name} + "}}") != std::string_view::npos;
}

}  // namespace

std::string_view to_string(PromptMode mode) {
  return mode == PromptMode::WithTaxonomy ? "with-tax" : "no-tax";
}

std::optional<PromptMode> parse_prompt_mode(std::string_view text) {
  if (text == "with-tax") return PromptMode::WithTaxonomy;
  if (text == "no-tax") return PromptMode::WithoutTaxonomy;
  return std::nullopt;
}

PromptError::PromptError(Kind kind, std::string detail)
    : std::runtime_error(prompt_message(kind, detail)), kind_(kind), detail_(std::move(detail)) {}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  return PromptTemplates{
      read_template(dir / "system_with_tax.tpl"),
      read_template(dir / "user_with_tax.tpl"),
      read_template(dir / "system_no_tax.tpl"),
      read_template(dir / "user_no_tax.tpl"),
  };
}

std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tpl.size());
  std::size_t pos = 0;
  while (pos < tpl.size()) {
    auto open = tpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tpl.substr(pos));
      break;
    }
    auto close = tpl.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw PromptError(PromptError::Kind::TemplateError, std::string{tpl.substr(open)});
    }
    std::string name{tpl.substr(open + 2, close - open - 2)};
    auto it = values.find(name);
    if (it == values.end()) throw PromptError(PromptError::Kind::TemplateError, name);
    out.append(tpl.substr(pos, open - pos));
    out += it->second;
    pos = close + 2;
  }
  return out;
}

std::string column_instructions(PromptMode mode, std::string_view target_version) {
  const std::string version{target_version};
  std::string out;
  if (mode == PromptMode::WithTaxonomy) {
    out +=
        "Return your answer as a markdown table with exactly these six columns, in this order:\n"
        "| Line | Code | Scenario ID | Scenario | Artifact | Refactoring |\n"
        "\n"
        "- Line: the line number shown at the start of the code line.\n"
        "- Code: the exact line of source code being analyzed.\n"
        "- Scenario ID: the Id of the matching migration scenario in the taxonomy, or an asterisk (*) "
        "if no scenario in the taxonomy matches.\n"
        "- Scenario: a short description combining the scenario Category and Summary, for example "
        "\"Deprecation \xE2\x86\x92 execute() deprecated\".\n"
        "- Artifact: the affected module, class, function or parameter, taken from the taxonomy "
        "Artifacts column.\n";
  } else {
    out +=
        "Return your answer as a markdown table with exactly these five columns, in this order:\n"
        "| Line | Code | Scenario | Artifact | Refactoring |\n"
        "\n"
        "- Line: the line number shown at the start of the code line.\n"
        "- Code: the exact line of source code being analyzed.\n"
        "- Scenario: a short description of the change and the affected artifact, for example "
        "\"Deprecation \xE2\x86\x92 execute() function deprecated\".\n"
        "- Artifact: the module, method or parameter involved in the migration.\n";
  }
  out += "- Refactoring: the code that replaces the line for Qiskit >= " + version +
         "; leave it blank if you are unsure or no clear fix applies.\n"
         "\n"
         "If an update is not mandatory for compatibility with version " +
         version +
         ", add the label (optional) to the Scenario cell.\n"
         "Write one row per affected line. Escape any | character inside a cell as \\|.";
  return out;
}

PromptBundle build_prompt(const CodeSnippet& snippet, const Taxonomy* taxonomy,
                          std::string_view target_version, PromptMode mode,
                          const PromptTemplates& templates) {
  const bool with_taxonomy = mode == PromptMode::WithTaxonomy;
  if (with_taxonomy) {
    if (taxonomy == nullptr) throw PromptError(PromptError::Kind::MissingTaxonomy, "");
    auto a = Version::parse(taxonomy->target_version);
    auto b = Version::parse(target_version);
    if (!a || !b || *a != *b) {
      throw PromptError(PromptError::Kind::VersionMismatch,
                        taxonomy->target_version + ", prompt targets " + std::string{target_version});
    }
  }

  const auto& system_tpl = with_taxonomy ? templates.system_with_taxonomy : templates.system_without_taxonomy;
  const auto& user_tpl = with_taxonomy ? templates.user_with_taxonomy : templates.user_without_taxonomy;

  if (!uses_placeholder(system_tpl, "target_version") || !uses_placeholder(user_tpl, "target_version")) {
    throw PromptError(PromptError::Kind::TemplateError, "target_version");
  }
  if (!uses_placeholder(user_tpl, "code")) throw PromptError(PromptError::Kind::TemplateError, "code");
  if (!uses_placeholder(user_tpl, "columns")) throw PromptError(PromptError::Kind::TemplateError, "columns");
  if (with_taxonomy && !uses_placeholder(user_tpl, "taxonomy")) {
    throw PromptError(PromptError::Kind::TemplateError, "taxonomy");
  }

  std::map<std::string, std::string> values{
      {"target_version", std::string{target_version}},
      {"code", number_lines(snippet.source)},
      {"columns", column_instructions(mode, target_version)},
  };
  if (with_taxonomy) values.emplace("taxonomy", serialize_taxonomy(*taxonomy));

  PromptBundle bundle;
  bundle.mode = mode;
  bundle.target_version = std::string{target_version};
  bundle.snippet_id = snippet.id;
  bundle.system_text = render_template(system_tpl, values);
  bundle.user_text = render_template(user_tpl, values);
  return bundle;
}

}  // namespace qmigrate
