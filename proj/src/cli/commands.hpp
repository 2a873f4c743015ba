#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qmigrate/evaluation.hpp"
#include "qmigrate/llm_client.hpp"
#include "qmigrate/prompting.hpp"

namespace qmigrate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitTaskFailure = 1;
inline constexpr int kExitEnvironment = 2;

enum class ProviderChoice { Live, Replay, Scripted };

std::optional<ProviderChoice> parse_provider(std::string_view text);
std::string_view to_string(ProviderChoice provider);

struct RunConfig {
  std::filesystem::path taxonomy_path;
  std::filesystem::path corpus_root;
  std::vector<PromptMode> modes{PromptMode::WithTaxonomy, PromptMode::WithoutTaxonomy};
  std::string target_version = "0.46";
  std::string model_id = "gpt-4-0613";
  double temperature = kDefaultTemperature;
  ProviderChoice provider = ProviderChoice::Replay;
  std::string endpoint;
  std::filesystem::path cassette_dir;
  std::filesystem::path template_dir;
  std::filesystem::path out_dir;
  // Scripted provider input: <id>.<mode>.resp.txt files.
  std::filesystem::path responses_dir;
  bool record = false;
  std::size_t jobs = 1;
  ClientOptions client;
};

struct RunSummary {
  std::size_t snippets = 0;
  std::size_t failures = 0;
  std::size_t completions = 0;
};

struct ScoreConfig {
  std::filesystem::path corpus_root;
  std::filesystem::path taxonomy_path;
  std::filesystem::path findings_dir;
  std::filesystem::path overrides_path;
  std::filesystem::path out_dir;
  std::optional<RunLabel> only;
};

int cmd_taxonomy_validate(const std::filesystem::path& path, std::ostream& out, std::ostream& err);
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err, RunSummary* summary = nullptr);
int cmd_score(const ScoreConfig& config, std::ostream& out, std::ostream& err);
int cmd_baseline(const std::filesystem::path& taxonomy_path, const std::filesystem::path& corpus_root,
                 const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);
int cmd_annotate(const std::filesystem::path& source_path, std::ostream& out, std::ostream& err);

/// Parses the command line and dispatches to a command.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qmigrate::cli
