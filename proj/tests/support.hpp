#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace qmigrate::testing {

inline std::filesystem::path data_dir() { return QMIGRATE_DATA_DIR; }
inline std::filesystem::path fixture_dir() { return QMIGRATE_FIXTURE_DIR; }
inline std::filesystem::path reference_taxonomy() { return data_dir() / "taxonomy" / "qiskit-0.46.md"; }
inline std::filesystem::path reference_corpus() { return data_dir() / "corpus" / "qiskit-0.46"; }
inline std::filesystem::path default_templates() { return data_dir() / "templates" / "default"; }

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("qmigrate-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace qmigrate::testing
