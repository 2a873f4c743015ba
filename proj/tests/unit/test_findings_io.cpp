#include <gtest/gtest.h>

#include <json.hpp>

#include "qmigrate/findings_io.hpp"
#include "support.hpp"

using namespace qmigrate;
using namespace qmigrate::testing;

namespace {

FindingsDocument sample_document() {
  FindingsDocument doc{"s10-grover", RunLabel::WithTaxonomy, {}};
  MigrationFinding a;
  a.line_no = 6;
  a.code_text = "oracle = PhaseOracle('(a & b) | ~c')";
  a.scenario_ref = MatchedScenario{"QSK-046-020"};
  a.scenario_description = "Deprecation \xE2\x86\x92 algorithms moved";
  a.artifact = "PhaseOracle";
  a.refactoring = "from x import y\noracle = y()";
  MigrationFinding b = a;
  b.line_no = 7;
  b.scenario_ref = NoMatch{};
  b.optional_flag = true;
  MigrationFinding c = a;
  c.line_no = 8;
  c.scenario_ref = Unreferenced{};
  c.refactoring.clear();
  doc.findings = {a, b, c};
  return doc;
}

}  // namespace

TEST(FindingsIo, FileName) {
  EXPECT_EQ(findings_file_name("s01", RunLabel::WithTaxonomy), "s01.with-tax.findings.json");
  EXPECT_EQ(findings_file_name("s01", RunLabel::Baseline), "s01.baseline.findings.json");
}

TEST(FindingsIo, RoundTrip) {
  auto doc = sample_document();
  auto text = serialize_findings(doc);
  EXPECT_EQ(parse_findings_document(text), doc);
  EXPECT_EQ(serialize_findings(parse_findings_document(text)), text);
}

TEST(FindingsIo, FileRoundTrip) {
  TempDir dir;
  auto path = dir / findings_file_name("s10-grover", RunLabel::WithTaxonomy);
  write_findings_file(path, sample_document());
  EXPECT_EQ(read_findings_file(path), sample_document());
}

TEST(FindingsIo, Errors) {
  EXPECT_THROW(parse_findings_document("{"), FindingsFormatError);
  EXPECT_THROW(parse_findings_document(R"({"snippet_id": "a", "run": "later", "findings": []})"), FindingsFormatError);
  EXPECT_THROW(parse_findings_document(
                   R"({"snippet_id": "a", "run": "no-tax", "findings": [{"line_no": 0, "scenario_ref": {"kind": "unreferenced"}}]})"),
               FindingsFormatError);
  EXPECT_THROW(parse_findings_document(
                   R"({"snippet_id": "a", "run": "no-tax", "findings": [{"line_no": 1, "scenario_ref": {"kind": "maybe"}}]})"),
               FindingsFormatError);
  TempDir dir;
  EXPECT_THROW(read_findings_file(dir / "absent.json"), FindingsFormatError);
}

TEST(FindingsIo, ReferenceFixturesParse) {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(fixture_dir() / "curated")) {
    auto doc = read_findings_file(entry.path());
    EXPECT_EQ(entry.path().filename().string(), findings_file_name(doc.snippet_id, doc.run));
    ++n;
  }
  EXPECT_EQ(n, 25u);
}

TEST(Manifest, SerializesWithoutTimestamps) {
  RunManifest m{"with-tax", "gpt-4-0613", 0.1, "0.46", "abc", "replay", 2, {}};
  m.snippets.push_back({"s01", SnippetStatus::Ok, "", 3, {{Severity::Info, "TaxonomyGapCandidate", "line 4", "gap"}}});
  m.snippets.push_back({"s02", SnippetStatus::Failed, "cassette miss", 0, {}});
  auto text = serialize_manifest(m);
  EXPECT_EQ(text, serialize_manifest(m));
  auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["completions"], 2);
  EXPECT_EQ(j["snippets"][1]["status"], "failed");
  EXPECT_EQ(j["snippets"][0]["diagnostics"][0]["code"], "TaxonomyGapCandidate");
  EXPECT_EQ(text.find("time"), std::string::npos);
}
