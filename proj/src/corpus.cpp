#include "qmigrate/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "qmigrate/pipe_table.hpp"

namespace qmigrate {

namespace fs = std::filesystem;
namespace pt = pipe_table;

namespace {

std::string corpus_message(CorpusError::Kind kind, const std::string& id, const std::string& detail) {
  std::string what;
  switch (kind) {
    case CorpusError::Kind::MissingSidecar: what = "missing sidecar"; break;
    case CorpusError::Kind::DanglingScenarioId: what = "unknown scenario id"; break;
    case CorpusError::Kind::LineOutOfRange: what = "line out of range"; break;
    case CorpusError::Kind::MalformedSidecar: what = "malformed sidecar"; break;
    case CorpusError::Kind::InconsistentSidecar: what = "inconsistent sidecar"; break;
    case CorpusError::Kind::Unreadable: what = "unreadable file"; break;
  }
  return id + ": " + what + (detail.empty() ? "" : " (" + detail + ")");
}

std::string read_file(const fs::path& path, const std::string& snippet_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError(CorpusError::Kind::Unreadable, snippet_id, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string_view> raw_lines(std::string_view text) {
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

CodeSnippet CodeSnippet::from_source(std::string id, std::string source) {
  CodeSnippet s{std::move(id), std::move(source), 0};
  s.line_count = count_lines(s.source);
  return s;
}

std::size_t count_lines(std::string_view text) { return raw_lines(text).size(); }

std::string number_lines(std::string_view source) {
  std::string out;
  out.reserve(source.size() + source.size() / 8);
  auto lines = raw_lines(source);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out += '\n';
    out += std::to_string(i + 1);
    out += ": ";
    out += lines[i];
  }
  if (!source.empty() && source.back() == '\n') out += '\n';
  return out;
}

MalformedNumberedLine::MalformedNumberedLine(std::size_t line_index)
    : std::runtime_error("line " + std::to_string(line_index) + " lacks a '<n>: ' prefix"),
      line_index_(line_index) {}

std::string strip_line_numbers(std::string_view numbered) {
  std::string out;
  out.reserve(numbered.size());
  auto lines = raw_lines(numbered);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = lines[i];
    std::size_t digits = 0;
    while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits]))) ++digits;
    if (digits == 0 || line.substr(digits, 2) != ": ") throw MalformedNumberedLine(i + 1);
    if (i > 0) out += '\n';
    out += line.substr(digits + 2);
  }
  if (!numbered.empty() && numbered.back() == '\n') out += '\n';
  return out;
}

CorpusError::CorpusError(Kind kind, std::string snippet_id, std::string detail)
    : std::runtime_error(corpus_message(kind, snippet_id, detail)),
      kind_(kind),
      snippet_id_(std::move(snippet_id)),
      detail_(std::move(detail)) {}

GroundTruth parse_ground_truth(std::string_view snippet_id, std::string_view text) {
  GroundTruth truth;
  truth.snippet_id = std::string{snippet_id};
  bool saw_flag = false;
  std::size_t line_no = 0;
  for (auto raw : pt::split_lines(text)) {
    ++line_no;
    auto line = pt::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto where = "line " + std::to_string(line_no);
    if (!saw_flag) {
      if (line == "needs_refactoring: true") {
        truth.needs_refactoring = true;
      } else if (line == "needs_refactoring: false") {
        truth.needs_refactoring = false;
      } else {
        throw CorpusError(CorpusError::Kind::MalformedSidecar, truth.snippet_id,
                          where + ": expected 'needs_refactoring: true|false'");
      }
      saw_flag = true;
      continue;
    }
    constexpr std::string_view kPrefix = "change:";
    if (line.substr(0, kPrefix.size()) != kPrefix) {
      throw CorpusError(CorpusError::Kind::MalformedSidecar, truth.snippet_id,
                        where + ": expected 'change: <line> | <scenario> | <refactoring>'");
    }
    auto cells = pt::split_row(line.substr(kPrefix.size()));
    if (cells.size() == 2) cells.emplace_back();
    if (cells.size() != 3) {
      throw CorpusError(CorpusError::Kind::MalformedSidecar, truth.snippet_id,
                        where + ": expected three fields");
    }
    ExpectedChange change;
    auto number = pt::trim(cells[0]);
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), change.line_no);
    if (ec != std::errc{} || ptr != number.data() + number.size() || change.line_no == 0) {
      throw CorpusError(CorpusError::Kind::MalformedSidecar, truth.snippet_id,
                        where + ": bad line number '" + std::string{number} + "'");
    }
    change.scenario_id = pt::unescape_cell(cells[1]);
    change.expected_refactoring = pt::strip_code_fence(pt::unescape_cell(cells[2]));
    truth.changes.push_back(std::move(change));
  }
  if (!saw_flag) {
    throw CorpusError(CorpusError::Kind::MalformedSidecar, truth.snippet_id,
                      "missing needs_refactoring flag");
  }
  if (truth.needs_refactoring != !truth.changes.empty()) {
    throw CorpusError(CorpusError::Kind::InconsistentSidecar, truth.snippet_id,
                      "needs_refactoring must be true exactly when changes are listed");
  }
  return truth;
}

std::string serialize_ground_truth(const GroundTruth& truth) {
  std::string out = truth.needs_refactoring ? "needs_refactoring: true\n" : "needs_refactoring: false\n";
  for (const auto& c : truth.changes) {
    out += "change: " + std::to_string(c.line_no) + " | " + pt::escape_cell(c.scenario_id) + " | " +
           (c.expected_refactoring.empty() ? std::string{} : pt::escape_cell(pt::fence_code(c.expected_refactoring))) +
           "\n";
  }
  return out;
}

std::vector<CorpusEntry> load_corpus(const fs::path& root, const Taxonomy* taxonomy) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw CorpusError(CorpusError::Kind::Unreadable, root.string(), "not a directory");
  }
  std::vector<fs::path> sources;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".src") sources.push_back(entry.path());
  }
  std::sort(sources.begin(), sources.end(),
            [](const fs::path& a, const fs::path& b) { return a.stem().string() < b.stem().string(); });

  std::vector<CorpusEntry> corpus;
  corpus.reserve(sources.size());
  for (const auto& src : sources) {
    auto id = src.stem().string();
    auto sidecar = src.parent_path() / (id + ".truth");
    if (!fs::is_regular_file(sidecar, ec)) {
      throw CorpusError(CorpusError::Kind::MissingSidecar, id, sidecar.filename().string());
    }
    auto snippet = CodeSnippet::from_source(id, read_file(src, id));
    auto truth = parse_ground_truth(id, read_file(sidecar, id));
    for (const auto& change : truth.changes) {
      if (change.line_no < 1 || change.line_no > snippet.line_count) {
        throw CorpusError(CorpusError::Kind::LineOutOfRange, id,
                          "line " + std::to_string(change.line_no) + " of " +
                              std::to_string(snippet.line_count));
      }
      if (taxonomy && !scenario_by_id(*taxonomy, change.scenario_id)) {
        throw CorpusError(CorpusError::Kind::DanglingScenarioId, id, change.scenario_id);
      }
    }
    corpus.push_back({std::move(snippet), std::move(truth)});
  }
  return corpus;
}

std::size_t total_expected_changes(const std::vector<CorpusEntry>& corpus) {
  std::size_t total = 0;
  for (const auto& e : corpus) total += e.truth.changes.size();
  return total;
}

}  // namespace qmigrate
