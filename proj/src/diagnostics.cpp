#include "qmigrate/diagnostics.hpp"

namespace qmigrate {

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
  }
  return "error";
}

std::string format_diagnostic(const Diagnostic& diagnostic) {
  std::string out{to_string(diagnostic.severity)};
  out += ": ";
  out += diagnostic.code;
  if (!diagnostic.subject.empty()) {
    out += " [";
    out += diagnostic.subject;
    out += "]";
  }
  if (!diagnostic.message.empty()) {
    out += ": ";
    out += diagnostic.message;
  }
  return out;
}

}  // namespace qmigrate
