#pragma once

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "risklang/diagnostics.hpp"
#include "risklang/model.hpp"

namespace risklang {

enum class AsilLevel { QM, A, B, C, D };

inline constexpr std::array<AsilLevel, 5> kAllAsilLevels = {AsilLevel::QM, AsilLevel::A,
                                                           AsilLevel::B, AsilLevel::C,
                                                           AsilLevel::D};

inline const char* to_display(AsilLevel v) {
  switch (v) {
    case AsilLevel::QM: return "QM";
    case AsilLevel::A: return "A";
    case AsilLevel::B: return "B";
    case AsilLevel::C: return "C";
    case AsilLevel::D: return "D";
  }
  return "?";
}

inline std::optional<AsilLevel> parse_asil(std::string_view text) {
  const std::string t = detail::to_lower(text);
  for (AsilLevel v : kAllAsilLevels)
    if (t == detail::to_lower(to_display(v))) return v;
  return std::nullopt;
}

// S/E/C -> ASIL. Any zero class forces QM; otherwise a fixed 3x4x3 lookup.
inline AsilLevel determine_asil(SeverityClass severity, ExposureClass exposure,
                                ControllabilityClass controllability) {
  const int s = static_cast<int>(severity);
  const int e = static_cast<int>(exposure);
  const int c = static_cast<int>(controllability);
  if (s == 0 || e == 0 || c == 0) return AsilLevel::QM;

  using A = AsilLevel;
  // [S1..S3][E1..E4][C1..C3]
  static constexpr A table[3][4][3] = {
      {{A::QM, A::QM, A::QM}, {A::QM, A::QM, A::QM}, {A::QM, A::QM, A::A}, {A::QM, A::A, A::B}},
      {{A::QM, A::QM, A::QM}, {A::QM, A::QM, A::A}, {A::QM, A::A, A::B}, {A::A, A::B, A::C}},
      {{A::QM, A::QM, A::A}, {A::QM, A::A, A::B}, {A::A, A::B, A::C}, {A::B, A::C, A::D}},
  };
  return table[s - 1][e - 1][c - 1];
}

// (impact, feasibility) -> risk. Cells are optional so completeness can be
// linted on user-supplied matrices.
struct RiskMatrix {
  std::array<std::optional<QualLevel>, 9> cells;

  static constexpr int index(QualLevel impact, QualLevel feasibility) {
    return static_cast<int>(impact) * 3 + static_cast<int>(feasibility);
  }
  std::optional<QualLevel> cell(QualLevel impact, QualLevel feasibility) const {
    return cells[index(impact, feasibility)];
  }
  void set(QualLevel impact, QualLevel feasibility, QualLevel risk) {
    cells[index(impact, feasibility)] = risk;
  }
  bool operator==(const RiskMatrix&) const = default;
};

// Smallest monotone completion of the four cells the TARA table pins down,
// with the mixed extremes (H,L) and (L,H) mapped to Medium.
inline RiskMatrix default_risk_matrix() {
  using Q = QualLevel;
  RiskMatrix m;
  m.set(Q::Low, Q::Low, Q::Low);
  m.set(Q::Low, Q::Medium, Q::Low);
  m.set(Q::Low, Q::High, Q::Medium);
  m.set(Q::Medium, Q::Low, Q::Low);
  m.set(Q::Medium, Q::Medium, Q::Medium);
  m.set(Q::Medium, Q::High, Q::High);
  m.set(Q::High, Q::Low, Q::Medium);
  m.set(Q::High, Q::Medium, Q::High);
  m.set(Q::High, Q::High, Q::High);
  return m;
}

// Pure lookup; pre: matrix passes validate_matrix.
inline QualLevel determine_risk(QualLevel impact, QualLevel feasibility, const RiskMatrix& matrix) {
  return *matrix.cell(impact, feasibility);
}

// Checks totality over the 9 cells and monotonicity along both axes.
inline std::vector<Diagnostic> validate_matrix(const RiskMatrix& matrix) {
  std::vector<Diagnostic> out;
  for (QualLevel i : kAllQualLevels)
    for (QualLevel f : kAllQualLevels)
      if (!matrix.cell(i, f))
        out.push_back({DiagSeverity::Error, "E-CELL",
                       std::string("matrix cell (") + to_keyword(i) + ", " + to_keyword(f) +
                           ") is missing",
                       std::nullopt});
  if (!out.empty()) return out;

  auto check = [&](QualLevel i1, QualLevel f1, QualLevel i2, QualLevel f2) {
    if (*matrix.cell(i1, f1) > *matrix.cell(i2, f2))
      out.push_back({DiagSeverity::Error, "E-MONO",
                     std::string("risk drops from (") + to_keyword(i1) + ", " + to_keyword(f1) +
                         ") to (" + to_keyword(i2) + ", " + to_keyword(f2) + ")",
                     std::nullopt});
  };
  for (QualLevel f : kAllQualLevels) {
    check(QualLevel::Low, f, QualLevel::Medium, f);
    check(QualLevel::Medium, f, QualLevel::High, f);
  }
  for (QualLevel i : kAllQualLevels) {
    check(i, QualLevel::Low, i, QualLevel::Medium);
    check(i, QualLevel::Medium, i, QualLevel::High);
  }
  return out;
}

// Config format: one `impact,feasibility,risk` triple per line, values
// low|medium|high case-insensitive, `#` comments, blank lines ignored.
struct MatrixParseResult {
  std::optional<RiskMatrix> matrix;
  std::vector<Diagnostic> diagnostics;
};

inline MatrixParseResult parse_matrix_config(std::string_view text) {
  MatrixParseResult result;
  RiskMatrix m;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  auto error = [&](std::string code, std::string msg) {
    result.diagnostics.push_back({DiagSeverity::Error, std::move(code), std::move(msg),
                                  SourceSpan{line_no, 1, static_cast<int>(line.size())}});
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = line.substr(0, line.find('#'));
    if (!body.empty() && body.back() == '\r') body.pop_back();
    if (is_blank(body)) continue;

    std::array<std::string, 3> fields;
    std::size_t start = 0, n = 0;
    bool too_many = false;
    while (true) {
      std::size_t comma = body.find(',', start);
      std::string piece = body.substr(start, comma == std::string::npos ? comma : comma - start);
      if (n < 3)
        fields[n++] = normalize_text(piece);
      else
        too_many = true;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (n != 3 || too_many) {
      error("E-SYNTAX", "expected `impact,feasibility,risk`");
      continue;
    }
    auto impact = parse_qual_level(fields[0]);
    auto feasibility = parse_qual_level(fields[1]);
    auto risk = parse_qual_level(fields[2]);
    if (!impact || !feasibility || !risk) {
      error("E-ENUM", "values must be low, medium, or high");
      continue;
    }
    if (m.cell(*impact, *feasibility)) {
      error("E-DUP", "cell (" + fields[0] + ", " + fields[1] + ") given twice");
      continue;
    }
    m.set(*impact, *feasibility, *risk);
  }
  for (auto& d : validate_matrix(m)) result.diagnostics.push_back(std::move(d));
  if (!has_errors(result.diagnostics)) result.matrix = m;
  return result;
}

}  // namespace risklang
