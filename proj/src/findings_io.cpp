#include "qmigrate/findings_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmigrate/llm_client.hpp"

namespace qmigrate {

using json = nlohmann::ordered_json;

std::string findings_file_name(std::string_view snippet_id, RunLabel run) {
  return std::string{snippet_id} + "." + std::string{to_string(run)} + ".findings.json";
}

namespace {

json ref_json(const ScenarioRef& ref) {
  if (const auto* m = std::get_if<MatchedScenario>(&ref)) return {{"kind", "matched"}, {"id", m->id}};
  if (std::holds_alternative<NoMatch>(ref)) return {{"kind", "no-match"}};
  return {{"kind", "unreferenced"}};
}

ScenarioRef ref_from_json(const json& j) {
  auto kind = j.at("kind").get<std::string>();
  if (kind == "matched") return MatchedScenario{j.at("id").get<std::string>()};
  if (kind == "no-match") return NoMatch{};
  if (kind == "unreferenced") return Unreferenced{};
  throw FindingsFormatError("unknown scenario_ref kind: " + kind);
}

}  // namespace

std::string serialize_findings(const FindingsDocument& doc) {
  json findings = json::array();
  for (const auto& f : doc.findings) {
    findings.push_back({{"line_no", f.line_no},
                        {"code", f.code_text},
                        {"scenario_ref", ref_json(f.scenario_ref)},
                        {"scenario", f.scenario_description},
                        {"optional", f.optional_flag},
                        {"artifact", f.artifact},
                        {"refactoring", f.refactoring}});
  }
  json j{{"snippet_id", doc.snippet_id}, {"run", to_string(doc.run)}, {"findings", std::move(findings)}};
  return j.dump(2) + "\n";
}

FindingsDocument parse_findings_document(std::string_view text) {
  try {
    auto j = json::parse(text);
    FindingsDocument doc;
    doc.snippet_id = j.at("snippet_id").get<std::string>();
    auto run = parse_run_label(j.at("run").get<std::string>());
    if (!run) throw FindingsFormatError("unknown run label: " + j.at("run").get<std::string>());
    doc.run = *run;
    for (const auto& f : j.at("findings")) {
      MigrationFinding finding;
      finding.line_no = f.at("line_no").get<std::size_t>();
      if (finding.line_no == 0) throw FindingsFormatError("line_no must be positive");
      finding.code_text = f.value("code", "");
      finding.scenario_ref = ref_from_json(f.at("scenario_ref"));
      finding.scenario_description = f.value("scenario", "");
      finding.optional_flag = f.value("optional", false);
      finding.artifact = f.value("artifact", "");
      finding.refactoring = f.value("refactoring", "");
      doc.findings.push_back(std::move(finding));
    }
    return doc;
  } catch (const json::exception& e) {
    throw FindingsFormatError(e.what());
  }
}

FindingsDocument read_findings_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FindingsFormatError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_findings_document(buffer.str());
  } catch (const FindingsFormatError& e) {
    throw FindingsFormatError(path.filename().string() + ": " + e.what());
  }
}

void write_findings_file(const std::filesystem::path& path, const FindingsDocument& doc) {
  write_file_atomic(path, serialize_findings(doc));
}

std::string serialize_manifest(const RunManifest& manifest) {
  json snippets = json::array();
  for (const auto& s : manifest.snippets) {
    json diagnostics = json::array();
    for (const auto& d : s.diagnostics) {
      diagnostics.push_back(
          {{"severity", to_string(d.severity)}, {"code", d.code}, {"subject", d.subject}, {"message", d.message}});
    }
    snippets.push_back({{"id", s.snippet_id},
                        {"status", s.status == SnippetStatus::Ok ? "ok" : "failed"},
                        {"error", s.error},
                        {"findings", s.findings},
                        {"diagnostics", std::move(diagnostics)}});
  }
  json j{{"mode", manifest.mode},
         {"model_id", manifest.model_id},
         {"temperature", manifest.temperature},
         {"target_version", manifest.target_version},
         {"taxonomy_digest", manifest.taxonomy_digest},
         {"provider", manifest.provider},
         {"completions", manifest.completions},
         {"snippets", std::move(snippets)}};
  return j.dump(2) + "\n";
}

}  // namespace qmigrate
