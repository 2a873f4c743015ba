#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "qmigrate/corpus.hpp"
#include "support.hpp"

using namespace qmigrate;
using namespace qmigrate::testing;
namespace fs = std::filesystem;

namespace {

std::size_t count_prefixed_lines(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(prefix, 0) == 0) ++n;
  }
  return n;
}

void expect_corpus_error(const fs::path& root, CorpusError::Kind kind, const std::string& snippet) {
  try {
    load_corpus(root, nullptr);
    FAIL() << "expected CorpusError";
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
    EXPECT_EQ(e.snippet_id(), snippet);
  }
}

}  // namespace

TEST(LineNumbers, CountLines) {
  EXPECT_EQ(count_lines(""), 0u);
  EXPECT_EQ(count_lines("a"), 1u);
  EXPECT_EQ(count_lines("a\n"), 1u);
  EXPECT_EQ(count_lines("a\n\nb"), 3u);
  EXPECT_EQ(count_lines("\n"), 1u);
}

TEST(LineNumbers, PrefixFormat) {
  EXPECT_EQ(number_lines("x = 1\n\ny = 2\n"), "1: x = 1\n2: \n3: y = 2\n");
}

TEST(LineNumbers, StripInvertsNumber) {
  for (const char* source : {"", "a", "a\n", "a\nb", "\n\n", "  indented\n\tx | y\n", "1: looks numbered\n"}) {
    EXPECT_EQ(strip_line_numbers(number_lines(source)), source) << source;
  }
}

TEST(LineNumbers, RandomRoundTrip) {
  std::mt19937 rng(7);
  const std::string alphabet = "ab :0123\n\t#";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    auto len = rng() % 40;
    for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
    ASSERT_EQ(strip_line_numbers(number_lines(s)), s);
  }
}

TEST(LineNumbers, MalformedLineIsReported) {
  try {
    strip_line_numbers("1: a\n2 b\n");
    FAIL();
  } catch (const MalformedNumberedLine& e) {
    EXPECT_EQ(e.line_index(), 2u);
  }
  EXPECT_THROW(strip_line_numbers("x: a\n"), MalformedNumberedLine);
}

TEST(GroundTruthSidecar, ParsesChanges) {
  auto truth = parse_ground_truth("s", "needs_refactoring: true\n"
                                       "change: 3 | QSK-046-001 | `a \\| b\\nc`\n"
                                       "change: 5 | QSK-046-002 |\n");
  ASSERT_EQ(truth.changes.size(), 2u);
  EXPECT_TRUE(truth.needs_refactoring);
  EXPECT_EQ(truth.changes[0].line_no, 3u);
  EXPECT_EQ(truth.changes[0].scenario_id, "QSK-046-001");
  EXPECT_EQ(truth.changes[0].expected_refactoring, "a | b\nc");
  EXPECT_EQ(truth.changes[1].expected_refactoring, "");
}

TEST(GroundTruthSidecar, SerializeRoundTrips) {
  GroundTruth truth{"s", true,
                    {{1, "QSK-046-001", "x = `y` | z\n  w"}, {2, "QSK-046-003", ""}, {4, "QSK-046-004", " lead"}}};
  EXPECT_EQ(parse_ground_truth("s", serialize_ground_truth(truth)), truth);
  GroundTruth clean{"c", false, {}};
  EXPECT_EQ(parse_ground_truth("c", serialize_ground_truth(clean)), clean);
}

TEST(GroundTruthSidecar, Errors) {
  auto kind_of = [](const char* text) {
    try {
      parse_ground_truth("s", text);
    } catch (const CorpusError& e) {
      return e.kind();
    }
    return CorpusError::Kind::Unreadable;
  };
  EXPECT_EQ(kind_of(""), CorpusError::Kind::MalformedSidecar);
  EXPECT_EQ(kind_of("needs_refactoring: maybe\n"), CorpusError::Kind::MalformedSidecar);
  EXPECT_EQ(kind_of("needs_refactoring: true\nchange: x | A | `b`\n"), CorpusError::Kind::MalformedSidecar);
  EXPECT_EQ(kind_of("needs_refactoring: true\nchange: 0 | A | `b`\n"), CorpusError::Kind::MalformedSidecar);
  EXPECT_EQ(kind_of("needs_refactoring: true\nremove: 1\n"), CorpusError::Kind::MalformedSidecar);
  EXPECT_EQ(kind_of("needs_refactoring: true\n"), CorpusError::Kind::InconsistentSidecar);
  EXPECT_EQ(kind_of("needs_refactoring: false\nchange: 1 | A | `b`\n"), CorpusError::Kind::InconsistentSidecar);
}

TEST(CorpusLoading, ReferenceCorpus) {
  auto taxonomy = parse_taxonomy(slurp(reference_taxonomy()));
  auto corpus = load_corpus(reference_corpus(), &taxonomy);
  ASSERT_EQ(corpus.size(), 25u);
  std::size_t expected = 0;
  std::size_t clean = 0;
  for (const auto& entry : fs::directory_iterator(reference_corpus())) {
    if (entry.path().extension() != ".truth") continue;
    auto text = slurp(entry.path());
    expected += count_prefixed_lines(text, "change:");
    if (count_prefixed_lines(text, "needs_refactoring: false") == 1) ++clean;
  }
  EXPECT_EQ(total_expected_changes(corpus), expected);
  EXPECT_EQ(expected, 81u);
  EXPECT_EQ(clean, 4u);
  for (std::size_t i = 1; i < corpus.size(); ++i) {
    EXPECT_LT(corpus[i - 1].snippet.id, corpus[i].snippet.id);
  }
  for (const auto& entry : corpus) {
    EXPECT_EQ(entry.snippet.line_count, count_lines(entry.snippet.source));
    EXPECT_EQ(entry.truth.snippet_id, entry.snippet.id);
  }
}

TEST(CorpusLoading, EmptyDirectoryIsEmptyCorpus) {
  TempDir dir;
  EXPECT_TRUE(load_corpus(dir.path(), nullptr).empty());
}

TEST(CorpusLoading, MissingDirectory) {
  TempDir dir;
  EXPECT_THROW(load_corpus(dir / "absent", nullptr), CorpusError);
}

TEST(CorpusLoading, MissingSidecar) {
  TempDir dir;
  spit(dir / "a.src", "x = 1\n");
  expect_corpus_error(dir.path(), CorpusError::Kind::MissingSidecar, "a");
}

TEST(CorpusLoading, LineOutOfRange) {
  TempDir dir;
  spit(dir / "a.src", "x = 1\ny = 2\n");
  spit(dir / "a.truth", "needs_refactoring: true\nchange: 3 | QSK-046-001 | `z`\n");
  expect_corpus_error(dir.path(), CorpusError::Kind::LineOutOfRange, "a");
}

TEST(CorpusLoading, DanglingScenarioIdOnlyWithTaxonomy) {
  TempDir dir;
  spit(dir / "a.src", "x = 1\n");
  spit(dir / "a.truth", "needs_refactoring: true\nchange: 1 | QSK-046-999 | `z`\n");
  EXPECT_EQ(load_corpus(dir.path(), nullptr).size(), 1u);
  auto taxonomy = parse_taxonomy(slurp(reference_taxonomy()));
  try {
    load_corpus(dir.path(), &taxonomy);
    FAIL();
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.kind(), CorpusError::Kind::DanglingScenarioId);
    EXPECT_EQ(e.detail(), "QSK-046-999");
  }
}

TEST(CorpusLoading, OtherFilesAreIgnored) {
  TempDir dir;
  spit(dir / "b.src", "x = 1\n");
  spit(dir / "b.truth", "needs_refactoring: false\n");
  spit(dir / "README.md", "notes\n");
  spit(dir / "orphan.truth", "needs_refactoring: false\n");
  auto corpus = load_corpus(dir.path(), nullptr);
  ASSERT_EQ(corpus.size(), 1u);
  EXPECT_EQ(corpus[0].snippet.id, "b");
}

TEST(LineNumbers, EveryCorpusLineGetsAPrefix) {
  static const std::regex prefixed{R"(^\d+: .*)"};
  for (const auto& entry : load_corpus(reference_corpus(), nullptr)) {
    auto numbered = number_lines(entry.snippet.source);
    EXPECT_EQ(count_lines(numbered), entry.snippet.line_count) << entry.snippet.id;
    std::istringstream in(numbered);
    for (std::string line; std::getline(in, line);) EXPECT_TRUE(std::regex_match(line, prefixed)) << line;
    EXPECT_EQ(strip_line_numbers(numbered), entry.snippet.source);
  }
}

TEST(LineNumbers, UnprefixedFirstLine) {
  try {
    strip_line_numbers("x = 1");
    FAIL();
  } catch (const MalformedNumberedLine& e) {
    EXPECT_EQ(e.line_index(), 1u);
  }
  EXPECT_EQ(strip_line_numbers("1: x = 1"), "x = 1");
}
