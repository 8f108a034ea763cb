#pragma once

#include <optional>
#include <string>
#include <vector>

namespace risklang {

enum class DiagSeverity { Error, Warning, Note };

inline const char* to_string(DiagSeverity s) {
  switch (s) {
    case DiagSeverity::Error: return "error";
    case DiagSeverity::Warning: return "warning";
    case DiagSeverity::Note: return "note";
  }
  return "?";
}

// 1-based position of a finding in the source text. length 0 marks a point.
struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 0;
  bool operator==(const SourceSpan&) const = default;
};

struct Diagnostic {
  DiagSeverity severity = DiagSeverity::Error;
  std::string code;     // pattern: letter '-' word, e.g. E-REF, W-OVR
  std::string message;
  std::optional<SourceSpan> span;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == DiagSeverity::Error) return true;
  return false;
}

inline std::size_t count_code(const std::vector<Diagnostic>& diags, const std::string& code) {
  std::size_t n = 0;
  for (const auto& d : diags)
    if (d.code == code) ++n;
  return n;
}

}  // namespace risklang
