#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qmigrate/corpus.hpp"
#include "qmigrate/taxonomy.hpp"

namespace qmigrate {

enum class PromptMode { WithTaxonomy, WithoutTaxonomy };

/// "with-tax" / "no-tax", the spelling used on the command line and in
/// output file names.
std::string_view to_string(PromptMode mode);
std::optional<PromptMode> parse_prompt_mode(std::string_view text);

struct PromptBundle {
  PromptMode mode = PromptMode::WithTaxonomy;
  std::string target_version;
  std::string system_text;
  std::string user_text;
  std::string snippet_id;

  bool operator==(const PromptBundle&) const = default;
};

/// The four template texts for both modes. Placeholders are written
/// `{{name}}`; the recognised names are taxonomy, code, target_version and
/// columns.
struct PromptTemplates {
  std::string system_with_taxonomy;
  std::string user_with_taxonomy;
  std::string system_without_taxonomy;
  std::string user_without_taxonomy;

  /// Reads system_with_tax.tpl, user_with_tax.tpl, system_no_tax.tpl and
  /// user_no_tax.tpl from dir.
  static PromptTemplates load(const std::filesystem::path& dir);
};

class PromptError : public std::runtime_error {
 public:
  enum class Kind { MissingTaxonomy, VersionMismatch, TemplateError, Unreadable };

  PromptError(Kind kind, std::string detail);

  Kind kind() const { return kind_; }
  /// For TemplateError, the placeholder name.
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  std::string detail_;
};

/// Single-pass `{{name}}` substitution; substituted text is never rescanned.
/// Throws PromptError(TemplateError) naming the first unknown placeholder.
std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& values);

/// Output-format instructions for the mode: column list, per-column meaning,
/// the asterisk rule (with taxonomy) and the "(optional)" rule (both).
std::string column_instructions(PromptMode mode, std::string_view target_version);

PromptBundle build_prompt(const CodeSnippet& snippet, const Taxonomy* taxonomy,
                          std::string_view target_version, PromptMode mode,
                          const PromptTemplates& templates);

}  // namespace qmigrate
