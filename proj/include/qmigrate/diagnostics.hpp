#pragma once

#include <string>
#include <vector>

namespace qmigrate {

enum class Severity { Info, Warning, Error };

std::string_view to_string(Severity severity);

/// A finding produced by a validator. `code` is a stable machine-readable
/// name such as "DuplicateId"; `subject` names the offending item when there
/// is one (a scenario id, a snippet id).
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string subject;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

inline bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

std::string format_diagnostic(const Diagnostic& diagnostic);

}  // namespace qmigrate
