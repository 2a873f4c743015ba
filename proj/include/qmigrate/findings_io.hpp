#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qmigrate/diagnostics.hpp"
#include "qmigrate/evaluation.hpp"
#include "qmigrate/response_parser.hpp"

namespace qmigrate {

class FindingsFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Findings of one snippet for one run, as written by `run` and `baseline`.
struct FindingsDocument {
  std::string snippet_id;
  RunLabel run = RunLabel::WithTaxonomy;
  std::vector<MigrationFinding> findings;

  bool operator==(const FindingsDocument&) const = default;
};

/// `<snippet_id>.<run>.findings.json`
std::string findings_file_name(std::string_view snippet_id, RunLabel run);

std::string serialize_findings(const FindingsDocument& doc);
FindingsDocument parse_findings_document(std::string_view text);

FindingsDocument read_findings_file(const std::filesystem::path& path);
void write_findings_file(const std::filesystem::path& path, const FindingsDocument& doc);

enum class SnippetStatus { Ok, Failed };

struct ManifestEntry {
  std::string snippet_id;
  SnippetStatus status = SnippetStatus::Ok;
  std::string error;
  std::size_t findings = 0;
  std::vector<Diagnostic> diagnostics;
};

/// Per-mode record of a run. Holds no timestamps.
struct RunManifest {
  std::string mode;
  std::string model_id;
  double temperature = 0.0;
  std::string target_version;
  std::string taxonomy_digest;
  std::string provider;
  std::size_t completions = 0;
  std::vector<ManifestEntry> snippets;
};

std::string serialize_manifest(const RunManifest& manifest);

}  // namespace qmigrate
