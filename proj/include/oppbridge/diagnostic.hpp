#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace oppbridge {

// Declaration order is the sort order: errors first.
enum class Severity { error, warning };

enum class DiagnosticCode {
  Cycle,
  DuplicateLibrary,
  ModeMismatch,
  DeepIncludesUnsupported,
  DanglingDependency,
};

constexpr std::string_view to_string(Severity s) noexcept {
  return s == Severity::error ? "error" : "warning";
}

constexpr std::string_view to_string(DiagnosticCode code) noexcept {
  switch (code) {
    case DiagnosticCode::Cycle: return "Cycle";
    case DiagnosticCode::DuplicateLibrary: return "DuplicateLibrary";
    case DiagnosticCode::ModeMismatch: return "ModeMismatch";
    case DiagnosticCode::DeepIncludesUnsupported: return "DeepIncludesUnsupported";
    case DiagnosticCode::DanglingDependency: return "DanglingDependency";
  }
  return "Unknown";
}

struct Diagnostic {
  Severity severity = Severity::warning;
  DiagnosticCode code = DiagnosticCode::Cycle;
  /// Project name, or several names joined by ','.
  std::string subject;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;

  friend bool operator<(const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.severity, a.code, a.subject, a.message) <
           std::tie(b.severity, b.code, b.subject, b.message);
  }
};

/// `<severity>:<code>:<subject>:<message>`
inline std::string format_diagnostic(const Diagnostic& d) {
  std::string line;
  line += to_string(d.severity);
  line += ':';
  line += to_string(d.code);
  line += ':';
  line += d.subject;
  line += ':';
  line += d.message;
  return line;
}

inline void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
  std::sort(diagnostics.begin(), diagnostics.end());
  diagnostics.erase(std::unique(diagnostics.begin(), diagnostics.end()), diagnostics.end());
}

}  // namespace oppbridge
