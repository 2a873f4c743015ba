#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qmigrate/baseline_matcher.hpp"
#include "qmigrate/corpus.hpp"
#include "qmigrate/findings_io.hpp"
#include "qmigrate/response_parser.hpp"
#include "qmigrate/taxonomy.hpp"

#ifndef QMIGRATE_DEFAULT_TEMPLATE_DIR
#define QMIGRATE_DEFAULT_TEMPLATE_DIR "templates"
#endif

namespace qmigrate::cli {

namespace fs = std::filesystem;

namespace {

// Input the command cannot work without; maps to exit status 2.
struct EnvironmentFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<std::string> read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buffer.str();
}

std::string require_text(const fs::path& path, std::string_view what) {
  std::error_code ec;
  if (fs::is_directory(path, ec)) throw EnvironmentFailure(std::string{what} + " is a directory: " + path.string());
  auto text = read_text(path);
  if (!text) throw EnvironmentFailure("cannot read " + std::string{what} + ": " + path.string());
  return *text;
}

Taxonomy load_taxonomy_file(const fs::path& path) {
  auto text = require_text(path, "taxonomy");
  try {
    return parse_taxonomy(text);
  } catch (const TaxonomyError& e) {
    throw EnvironmentFailure(path.string() + ": " + e.what());
  }
}

std::vector<CorpusEntry> load_corpus_dir(const fs::path& root, const Taxonomy* taxonomy) {
  try {
    return load_corpus(root, taxonomy);
  } catch (const CorpusError& e) {
    throw EnvironmentFailure(std::string{"corpus: "} + e.what());
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw EnvironmentFailure("cannot create directory " + dir.string());
}

std::string response_file_name(std::string_view id, PromptMode mode) {
  return std::string{id} + "." + std::string{to_string(mode)} + ".resp.txt";
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (auto i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
}

}  // namespace

std::optional<ProviderChoice> parse_provider(std::string_view text) {
  if (text == "live") return ProviderChoice::Live;
  if (text == "replay") return ProviderChoice::Replay;
  if (text == "scripted") return ProviderChoice::Scripted;
  return std::nullopt;
}

std::string_view to_string(ProviderChoice provider) {
  switch (provider) {
    case ProviderChoice::Live: return "live";
    case ProviderChoice::Replay: return "replay";
    case ProviderChoice::Scripted: return "scripted";
  }
  return "replay";
}

// ---------------------------------------------------------------------------

int cmd_taxonomy_validate(const fs::path& path, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = require_text(path, "taxonomy");
  } catch (const EnvironmentFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }
  Taxonomy taxonomy;
  try {
    taxonomy = parse_taxonomy(text);
  } catch (const TaxonomyError& e) {
    out << "error: " << e.what() << "\n";
    return kExitTaskFailure;
  }
  auto diagnostics = validate_taxonomy(taxonomy);
  for (const auto& d : diagnostics) out << format_diagnostic(d) << "\n";
  return has_errors(diagnostics) ? kExitTaskFailure : kExitOk;
}

int cmd_annotate(const fs::path& source_path, std::ostream& out, std::ostream& err) {
  try {
    out << number_lines(require_text(source_path, "source"));
    return kExitOk;
  } catch (const EnvironmentFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }
}

// ---------------------------------------------------------------------------

namespace {

struct SnippetOutcome {
  ManifestEntry entry;
  std::size_t completions = 0;
};

class RunContext {
 public:
  RunContext(const RunConfig& config, std::ostream& err) : config_(config), err_(err) {}

  void prepare() {
    if (!config_.taxonomy_path.empty()) taxonomy_ = load_taxonomy_file(config_.taxonomy_path);
    bool needs_taxonomy = std::find(config_.modes.begin(), config_.modes.end(), PromptMode::WithTaxonomy) !=
                          config_.modes.end();
    if (needs_taxonomy && !taxonomy_) throw EnvironmentFailure("--taxonomy is required for with-tax mode");
    if (taxonomy_) {
      auto diagnostics = validate_taxonomy(*taxonomy_);
      if (has_errors(diagnostics)) {
        throw EnvironmentFailure("taxonomy does not validate; run `qmigrate taxonomy validate` for details");
      }
      digest_ = sha256_hex(require_text(config_.taxonomy_path, "taxonomy"));
      auto a = Version::parse(taxonomy_->target_version);
      auto b = Version::parse(config_.target_version);
      if (needs_taxonomy && (!a || !b || *a != *b)) {
        throw EnvironmentFailure("taxonomy targets " + taxonomy_->target_version + " but --target-version is " +
                                 config_.target_version);
      }
    }
    corpus_ = load_corpus_dir(config_.corpus_root, taxonomy_ ? &*taxonomy_ : nullptr);

    auto template_dir = config_.template_dir.empty() ? fs::path{QMIGRATE_DEFAULT_TEMPLATE_DIR} : config_.template_dir;
    try {
      templates_ = PromptTemplates::load(template_dir);
    } catch (const PromptError& e) {
      throw EnvironmentFailure(std::string{"templates: "} + e.what());
    }
    if (config_.out_dir.empty()) throw EnvironmentFailure("--out is required");
    ensure_dir(config_.out_dir);

    options_ = config_.client;
    options_.concurrency_cap = std::max<std::size_t>(1, config_.jobs);
    if (!options_.log) {
      options_.log = [this](std::string_view message) {
        std::lock_guard lock(log_mutex_);
        err_ << message << "\n";
      };
    }
    if (config_.record) {
      if (config_.cassette_dir.empty()) throw EnvironmentFailure("--record needs --cassettes");
      ensure_dir(config_.cassette_dir);
      options_.record_dir = config_.cassette_dir;
    }

    switch (config_.provider) {
      case ProviderChoice::Live: {
        LiveProvider live;
        live.endpoint = config_.endpoint;
        if (live.endpoint.empty()) {
          if (const char* env = std::getenv("QMIGRATE_ENDPOINT")) live.endpoint = env;
        }
        if (live.endpoint.empty()) throw EnvironmentFailure("live provider needs --endpoint or QMIGRATE_ENDPOINT");
        const char* key = std::getenv(live.credential_env.c_str());
        if (!key || !*key) throw EnvironmentFailure(live.credential_env + " is not set");
        shared_client_ = std::make_unique<ChatClient>(live, options_);
        break;
      }
      case ProviderChoice::Replay:
        if (config_.cassette_dir.empty()) throw EnvironmentFailure("replay provider needs --cassettes");
        if (!fs::is_directory(config_.cassette_dir)) {
          throw EnvironmentFailure("cassette directory not found: " + config_.cassette_dir.string());
        }
        if (config_.record) throw EnvironmentFailure("--record cannot be combined with the replay provider");
        shared_client_ = std::make_unique<ChatClient>(ReplayProvider{config_.cassette_dir}, options_);
        break;
      case ProviderChoice::Scripted:
        if (config_.responses_dir.empty() || !fs::is_directory(config_.responses_dir)) {
          throw EnvironmentFailure("scripted provider needs an existing --responses directory");
        }
        break;
    }
  }

  const std::vector<CorpusEntry>& corpus() const { return corpus_; }

  SnippetOutcome process(const CorpusEntry& entry, PromptMode mode) {
    SnippetOutcome outcome;
    outcome.entry.snippet_id = entry.snippet.id;
    const auto& id = entry.snippet.id;
    try {
      auto numbered = CodeSnippet::from_source(id, number_lines(entry.snippet.source));
      const Taxonomy* taxonomy = mode == PromptMode::WithTaxonomy && taxonomy_ ? &*taxonomy_ : nullptr;
      auto bundle = build_prompt(numbered, taxonomy, config_.target_version, mode, templates_);

      ChatRequest request;
      request.model_id = config_.model_id;
      request.temperature = config_.temperature;
      request.messages = {{ChatRole::System, bundle.system_text}, {ChatRole::User, bundle.user_text}};

      ChatResponse response;
      if (shared_client_) {
        response = shared_client_->complete(request);
      } else {
        ScriptedProvider script;
        if (auto text = read_text(config_.responses_dir / response_file_name(id, mode))) {
          script.responses.push_back({*text, config_.model_id, "stop", 0, 0});
        }
        ChatClient client(std::move(script), options_);
        response = client.complete(request);
        outcome.completions = client.completions();
      }
      write_file_atomic(config_.out_dir / response_file_name(id, mode), response.content);

      auto findings = parse_findings(response.content, mode);
      if (taxonomy) outcome.entry.diagnostics = resolve_findings(findings, *taxonomy);
      outcome.entry.findings = findings.size();
      write_findings_file(config_.out_dir / findings_file_name(id, run_label(mode)),
                          {id, run_label(mode), std::move(findings)});
    } catch (const PromptError& e) {
      fail(outcome, "PromptError", e.what());
    } catch (const LlmError& e) {
      fail(outcome, "LlmError", e.what());
    } catch (const ResponseParseError& e) {
      fail(outcome, "ResponseParseError", e.what());
    } catch (const std::exception& e) {
      fail(outcome, "Error", e.what());
    }
    return outcome;
  }

  RunManifest manifest(PromptMode mode) const {
    RunManifest m;
    m.mode = std::string{to_string(mode)};
    m.model_id = config_.model_id;
    m.temperature = config_.temperature;
    m.target_version = config_.target_version;
    m.taxonomy_digest = mode == PromptMode::WithTaxonomy ? digest_ : std::string{};
    m.provider = std::string{to_string(config_.provider)};
    return m;
  }

  std::size_t shared_completions() const { return shared_client_ ? shared_client_->completions() : 0; }

 private:
  void fail(SnippetOutcome& outcome, std::string_view kind, std::string_view message) {
    outcome.entry.status = SnippetStatus::Failed;
    outcome.entry.error = std::string{kind} + ": " + std::string{message};
    std::lock_guard lock(log_mutex_);
    err_ << "error: " << outcome.entry.snippet_id << ": " << outcome.entry.error << "\n";
  }

  const RunConfig& config_;
  std::ostream& err_;
  std::mutex log_mutex_;
  std::optional<Taxonomy> taxonomy_;
  std::string digest_;
  std::vector<CorpusEntry> corpus_;
  PromptTemplates templates_;
  ClientOptions options_;
  std::unique_ptr<ChatClient> shared_client_;
};

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err, RunSummary* summary) {
  RunContext context(config, err);
  try {
    context.prepare();
  } catch (const EnvironmentFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }

  RunSummary totals;
  std::size_t shared_before = 0;
  const auto& corpus = context.corpus();
  for (auto mode : config.modes) {
    std::vector<SnippetOutcome> outcomes(corpus.size());
    parallel_for(corpus.size(), config.jobs,
                 [&](std::size_t i) { outcomes[i] = context.process(corpus[i], mode); });
    auto manifest = context.manifest(mode);
    manifest.completions = context.shared_completions() - shared_before;
    shared_before = context.shared_completions();
    std::size_t failures = 0;
    for (auto& o : outcomes) {
      manifest.completions += o.completions;
      if (o.entry.status == SnippetStatus::Failed) ++failures;
      manifest.snippets.push_back(std::move(o.entry));
    }
    try {
      write_file_atomic(config.out_dir / ("manifest." + std::string{to_string(mode)} + ".json"),
                        serialize_manifest(manifest));
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitEnvironment;
    }
    out << to_string(mode) << ": " << corpus.size() - failures << "/" << corpus.size() << " snippets ok\n";
    totals.snippets += corpus.size();
    totals.failures += failures;
    totals.completions += manifest.completions;
  }
  out << "completions: " << totals.completions << "\n";
  if (summary) *summary = totals;
  return totals.failures ? kExitTaskFailure : kExitOk;
}

// ---------------------------------------------------------------------------

namespace {

bool has_findings_for(const fs::path& dir, RunLabel label) {
  auto suffix = "." + std::string{to_string(label)} + ".findings.json";
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename().string().ends_with(suffix)) return true;
  }
  return false;
}

}  // namespace

int cmd_score(const ScoreConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<CorpusEntry> corpus;
  std::vector<RunLabel> labels;
  OverrideSet overrides;
  try {
    std::optional<Taxonomy> taxonomy;
    if (!config.taxonomy_path.empty()) taxonomy = load_taxonomy_file(config.taxonomy_path);
    corpus = load_corpus_dir(config.corpus_root, taxonomy ? &*taxonomy : nullptr);
    if (!fs::is_directory(config.findings_dir)) {
      throw EnvironmentFailure("findings directory not found: " + config.findings_dir.string());
    }
    for (auto label : {RunLabel::WithTaxonomy, RunLabel::WithoutTaxonomy, RunLabel::Baseline}) {
      if (config.only && *config.only != label) continue;
      if (has_findings_for(config.findings_dir, label)) labels.push_back(label);
    }
    if (!config.overrides_path.empty()) {
      if (labels.size() > 1) {
        throw EnvironmentFailure("--overrides applies to one run; select it with --mode");
      }
      overrides = OverrideSet::parse(require_text(config.overrides_path, "overrides"));
    }
    if (config.out_dir.empty()) throw EnvironmentFailure("--out is required");
  } catch (const EnvironmentFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const EvaluationError& e) {
    err << "error: " << config.overrides_path.string() << ": " << e.what() << "\n";
    return kExitEnvironment;
  }
  if (labels.empty() && !corpus.empty()) {
    err << "error: no findings files in " << config.findings_dir.string() << "\n";
    return kExitTaskFailure;
  }
  if (labels.empty()) labels.push_back(config.only.value_or(RunLabel::WithTaxonomy));

  std::vector<ScoreReport> reports;
  for (auto label : labels) {
    std::vector<SnippetResult> results;
    for (const auto& entry : corpus) {
      auto path = config.findings_dir / findings_file_name(entry.snippet.id, label);
      if (!fs::is_regular_file(path)) {
        err << "error: missing findings for snippet " << entry.snippet.id << " (" << path.filename().string()
            << ")\n";
        return kExitTaskFailure;
      }
      try {
        auto doc = read_findings_file(path);
        if (doc.snippet_id != entry.snippet.id || doc.run != label) {
          err << "error: " << path.filename().string() << " describes " << doc.snippet_id << "."
              << to_string(doc.run) << "\n";
          return kExitTaskFailure;
        }
        results.push_back({entry.truth, grade_findings(doc.findings, entry.truth, &overrides)});
      } catch (const FindingsFormatError& e) {
        err << "error: " << e.what() << "\n";
        return kExitTaskFailure;
      } catch (const EvaluationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitTaskFailure;
      }
    }
    reports.push_back(build_score_report(label, std::move(results)));
  }

  auto text = render_report(reports, ReportFormat::TableText);
  try {
    ensure_dir(config.out_dir);
    write_file_atomic(config.out_dir / "report.txt", text);
    write_file_atomic(config.out_dir / "report.csv", render_report(reports, ReportFormat::Csv));
    write_file_atomic(config.out_dir / "report.json", render_report(reports, ReportFormat::Json));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }
  out << text;
  return kExitOk;
}

int cmd_baseline(const fs::path& taxonomy_path, const fs::path& corpus_root, const fs::path& out_dir,
                 std::ostream& out, std::ostream& err) {
  try {
    auto taxonomy = load_taxonomy_file(taxonomy_path);
    auto corpus = load_corpus_dir(corpus_root, &taxonomy);
    if (out_dir.empty()) throw EnvironmentFailure("--out is required");
    ensure_dir(out_dir);
    std::size_t total = 0;
    for (const auto& entry : corpus) {
      auto findings = hits_to_findings(scan_snippet(entry.snippet, taxonomy), taxonomy);
      total += findings.size();
      write_findings_file(out_dir / findings_file_name(entry.snippet.id, RunLabel::Baseline),
                          {entry.snippet.id, RunLabel::Baseline, std::move(findings)});
    }
    out << "baseline: " << total << " findings over " << corpus.size() << " snippets\n";
    return kExitOk;
  } catch (const EnvironmentFailure& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitEnvironment;
}

// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Taxonomy-guided Qiskit migration assistant", "qmigrate"};
  app.require_subcommand(1);

  auto* taxonomy_cmd = app.add_subcommand("taxonomy", "Taxonomy tools");
  taxonomy_cmd->require_subcommand(1);
  auto* validate_cmd = taxonomy_cmd->add_subcommand("validate", "Parse and validate a taxonomy file");
  std::string validate_path;
  validate_cmd->add_option("path", validate_path, "Taxonomy file")->required();

  RunConfig run;
  std::string run_mode = "both";
  std::string provider = "replay";
  std::string taxonomy_path, corpus_root, templates, cassettes, out_dir, responses;
  auto* run_cmd = app.add_subcommand("run", "Prompt the model for every corpus snippet");
  run_cmd->add_option("--taxonomy", taxonomy_path, "Taxonomy file");
  run_cmd->add_option("--corpus", corpus_root, "Corpus directory")->required();
  run_cmd->add_option("--mode", run_mode, "with-tax, no-tax or both")
      ->check(CLI::IsMember({"with-tax", "no-tax", "both"}));
  run_cmd->add_option("--target-version", run.target_version, "Target Qiskit version");
  run_cmd->add_option("--model", run.model_id, "Model id");
  run_cmd->add_option("--temperature", run.temperature, "Sampling temperature")->check(CLI::Range(0.0, 2.0));
  run_cmd->add_option("--provider", provider, "live, replay or scripted")
      ->check(CLI::IsMember({"live", "replay", "scripted"}));
  run_cmd->add_option("--endpoint", run.endpoint, "Chat-completion endpoint (live)");
  run_cmd->add_option("--cassettes", cassettes, "Cassette directory");
  run_cmd->add_option("--templates", templates, "Prompt template directory");
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--jobs", run.jobs, "Concurrent snippets")->check(CLI::PositiveNumber);
  run_cmd->add_option("--responses", responses, "Response files for the scripted provider");
  run_cmd->add_flag("--record", run.record, "Store completions as cassettes under --cassettes");

  ScoreConfig score;
  std::string score_mode, score_corpus, score_taxonomy, findings, overrides, score_out;
  auto* score_cmd = app.add_subcommand("score", "Grade findings and write reports");
  score_cmd->add_option("--corpus", score_corpus, "Corpus directory")->required();
  score_cmd->add_option("--taxonomy", score_taxonomy, "Taxonomy file");
  score_cmd->add_option("--findings", findings, "Findings directory")->required();
  score_cmd->add_option("--overrides", overrides, "Manual grade overrides");
  score_cmd->add_option("--mode", score_mode, "Score only with-tax, no-tax or baseline")
      ->check(CLI::IsMember({"with-tax", "no-tax", "baseline"}));
  score_cmd->add_option("--out", score_out, "Report directory")->required();

  std::string base_taxonomy, base_corpus, base_out;
  auto* baseline_cmd = app.add_subcommand("baseline", "Keyword-matching baseline findings");
  baseline_cmd->add_option("--taxonomy", base_taxonomy, "Taxonomy file")->required();
  baseline_cmd->add_option("--corpus", base_corpus, "Corpus directory")->required();
  baseline_cmd->add_option("--out", base_out, "Output directory")->required();

  std::string annotate_path;
  auto* annotate_cmd = app.add_subcommand("annotate", "Print a source file with line numbers");
  annotate_cmd->add_option("path", annotate_path, "Source file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int status = app.exit(e, out, err);
    return status == 0 ? kExitOk : kExitEnvironment;
  }

  if (validate_cmd->parsed()) return cmd_taxonomy_validate(validate_path, out, err);
  if (annotate_cmd->parsed()) return cmd_annotate(annotate_path, out, err);
  if (baseline_cmd->parsed()) return cmd_baseline(base_taxonomy, base_corpus, base_out, out, err);
  if (score_cmd->parsed()) {
    score.corpus_root = score_corpus;
    score.taxonomy_path = score_taxonomy;
    score.findings_dir = findings;
    score.overrides_path = overrides;
    score.out_dir = score_out;
    if (!score_mode.empty()) score.only = parse_run_label(score_mode);
    return cmd_score(score, out, err);
  }
  run.taxonomy_path = taxonomy_path;
  run.corpus_root = corpus_root;
  if (run_mode == "both") {
    run.modes = {PromptMode::WithTaxonomy, PromptMode::WithoutTaxonomy};
  } else {
    run.modes = {*parse_prompt_mode(run_mode)};
  }
  run.provider = *parse_provider(provider);
  run.cassette_dir = cassettes;
  run.template_dir = templates;
  run.out_dir = out_dir;
  run.responses_dir = responses;
  return cmd_run(run, out, err);
}

}  // namespace qmigrate::cli
