#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmigrate/taxonomy.hpp"

namespace qmigrate {

struct CodeSnippet {
  std::string id;
  std::string source;
  std::size_t line_count = 0;

  static CodeSnippet from_source(std::string id, std::string source);
  bool operator==(const CodeSnippet&) const = default;
};

struct ExpectedChange {
  std::size_t line_no = 0;
  std::string scenario_id;
  std::string expected_refactoring;  // empty when the line should be removed

  bool operator==(const ExpectedChange&) const = default;
};

struct GroundTruth {
  std::string snippet_id;
  bool needs_refactoring = false;
  std::vector<ExpectedChange> changes;

  bool operator==(const GroundTruth&) const = default;
};

struct CorpusEntry {
  CodeSnippet snippet;
  GroundTruth truth;
};

/// Number of newline-delimited lines; a trailing newline ends the last line
/// rather than starting a new one.
std::size_t count_lines(std::string_view text);

/// Prefixes line i with "<i>: ".
std::string number_lines(std::string_view source);

class MalformedNumberedLine : public std::runtime_error {
 public:
  explicit MalformedNumberedLine(std::size_t line_index);
  std::size_t line_index() const { return line_index_; }

 private:
  std::size_t line_index_;
};

std::string strip_line_numbers(std::string_view numbered);

class CorpusError : public std::runtime_error {
 public:
  enum class Kind {
    MissingSidecar,
    DanglingScenarioId,
    LineOutOfRange,
    MalformedSidecar,
    InconsistentSidecar,
    Unreadable,
  };

  CorpusError(Kind kind, std::string snippet_id, std::string detail);

  Kind kind() const { return kind_; }
  const std::string& snippet_id() const { return snippet_id_; }
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  std::string snippet_id_;
  std::string detail_;
};

/// Parses a `.truth` sidecar. Validation against the snippet and taxonomy is
/// done by load_corpus.
GroundTruth parse_ground_truth(std::string_view snippet_id, std::string_view text);
std::string serialize_ground_truth(const GroundTruth& truth);

/// Loads every `<id>.src` under root together with its `<id>.truth`
/// sidecar, sorted by snippet id. Scenario ids are checked against the
/// taxonomy when one is given.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& root, const Taxonomy* taxonomy);

std::size_t total_expected_changes(const std::vector<CorpusEntry>& corpus);

}  // namespace qmigrate
