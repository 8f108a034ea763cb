#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "risklang/diagnostics.hpp"

namespace risklang {

// ---------------------------------------------------------------------------
// Closed enumerations
// ---------------------------------------------------------------------------

// The five DNN limitation classes driving both hazards and threats.
enum class Limitation { Generalization, Efficiency, Explainability, Plausibility, Robustness };

enum class SecurityProperty { Confidentiality, Integrity, Availability, NonRepudiation };

enum class SeverityClass { S0, S1, S2, S3 };
enum class ExposureClass { E0, E1, E2, E3, E4 };
enum class ControllabilityClass { C0, C1, C2, C3 };

// Three-level qualitative scale shared by impact, feasibility, and risk.
enum class QualLevel { Low, Medium, High };

enum class Treatment { Avoidance, Reduction, Sharing, Acceptance };

inline constexpr std::array<Limitation, 5> kAllLimitations = {
    Limitation::Generalization, Limitation::Efficiency, Limitation::Explainability,
    Limitation::Plausibility, Limitation::Robustness};

inline constexpr std::array<SecurityProperty, 4> kAllProperties = {
    SecurityProperty::Confidentiality, SecurityProperty::Integrity,
    SecurityProperty::Availability, SecurityProperty::NonRepudiation};

inline constexpr std::array<QualLevel, 3> kAllQualLevels = {QualLevel::Low, QualLevel::Medium,
                                                           QualLevel::High};

inline constexpr std::array<Treatment, 4> kAllTreatments = {
    Treatment::Avoidance, Treatment::Reduction, Treatment::Sharing, Treatment::Acceptance};

// ---------------------------------------------------------------------------
// Text forms: keyword (canonical DSL text), letter codes, display names
// ---------------------------------------------------------------------------

namespace detail {
inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}
}  // namespace detail

inline const char* to_keyword(Limitation v) {
  switch (v) {
    case Limitation::Generalization: return "generalization";
    case Limitation::Efficiency: return "efficiency";
    case Limitation::Explainability: return "explainability";
    case Limitation::Plausibility: return "plausibility";
    case Limitation::Robustness: return "robustness";
  }
  return "?";
}

inline char to_letter(Limitation v) {
  switch (v) {
    case Limitation::Generalization: return 'G';
    case Limitation::Efficiency: return 'E';
    case Limitation::Explainability: return 'X';
    case Limitation::Plausibility: return 'P';
    case Limitation::Robustness: return 'R';
  }
  return '?';
}

// Accepts the full word or the single-letter code, case-insensitively.
inline std::optional<Limitation> parse_limitation(std::string_view text) {
  const std::string t = detail::to_lower(text);
  for (Limitation v : kAllLimitations) {
    if (t == to_keyword(v)) return v;
    if (t.size() == 1 && std::toupper(static_cast<unsigned char>(t[0])) == to_letter(v)) return v;
  }
  return std::nullopt;
}

inline const char* to_keyword(SecurityProperty v) {
  switch (v) {
    case SecurityProperty::Confidentiality: return "confidentiality";
    case SecurityProperty::Integrity: return "integrity";
    case SecurityProperty::Availability: return "availability";
    case SecurityProperty::NonRepudiation: return "non-repudiation";
  }
  return "?";
}

inline const char* to_display(SecurityProperty v) {
  switch (v) {
    case SecurityProperty::Confidentiality: return "Confidentiality";
    case SecurityProperty::Integrity: return "Integrity";
    case SecurityProperty::Availability: return "Availability";
    case SecurityProperty::NonRepudiation: return "Non-repudiation";
  }
  return "?";
}

inline std::optional<SecurityProperty> parse_property(std::string_view text) {
  const std::string t = detail::to_lower(text);
  for (SecurityProperty v : kAllProperties)
    if (t == to_keyword(v)) return v;
  if (t == "nonrepudiation" || t == "non_repudiation") return SecurityProperty::NonRepudiation;
  return std::nullopt;
}

inline std::string to_keyword(SeverityClass v) { return "S" + std::to_string(static_cast<int>(v)); }
inline std::string to_keyword(ExposureClass v) { return "E" + std::to_string(static_cast<int>(v)); }
inline std::string to_keyword(ControllabilityClass v) {
  return "C" + std::to_string(static_cast<int>(v));
}

template <typename Class, char Prefix, int Max>
inline std::optional<Class> parse_class(std::string_view text) {
  if (text.size() != 2) return std::nullopt;
  if (std::toupper(static_cast<unsigned char>(text[0])) != Prefix) return std::nullopt;
  if (text[1] < '0' || text[1] > '0' + Max) return std::nullopt;
  return static_cast<Class>(text[1] - '0');
}

inline std::optional<SeverityClass> parse_severity(std::string_view t) {
  return parse_class<SeverityClass, 'S', 3>(t);
}
inline std::optional<ExposureClass> parse_exposure(std::string_view t) {
  return parse_class<ExposureClass, 'E', 4>(t);
}
inline std::optional<ControllabilityClass> parse_controllability(std::string_view t) {
  return parse_class<ControllabilityClass, 'C', 3>(t);
}

inline const char* to_keyword(QualLevel v) {
  switch (v) {
    case QualLevel::Low: return "low";
    case QualLevel::Medium: return "medium";
    case QualLevel::High: return "high";
  }
  return "?";
}

inline const char* to_display(QualLevel v) {
  switch (v) {
    case QualLevel::Low: return "Low";
    case QualLevel::Medium: return "Medium";
    case QualLevel::High: return "High";
  }
  return "?";
}

inline std::optional<QualLevel> parse_qual_level(std::string_view text) {
  const std::string t = detail::to_lower(text);
  for (QualLevel v : kAllQualLevels)
    if (t == to_keyword(v)) return v;
  return std::nullopt;
}

inline const char* to_keyword(Treatment v) {
  switch (v) {
    case Treatment::Avoidance: return "avoidance";
    case Treatment::Reduction: return "reduction";
    case Treatment::Sharing: return "sharing";
    case Treatment::Acceptance: return "acceptance";
  }
  return "?";
}

inline const char* to_display(Treatment v) {
  switch (v) {
    case Treatment::Avoidance: return "Avoidance";
    case Treatment::Reduction: return "Reduction";
    case Treatment::Sharing: return "Sharing";
    case Treatment::Acceptance: return "Acceptance";
  }
  return "?";
}

inline std::optional<Treatment> parse_treatment(std::string_view text) {
  const std::string t = detail::to_lower(text);
  for (Treatment v : kAllTreatments)
    if (t == to_keyword(v)) return v;
  return std::nullopt;
}

// Identifiers: ASCII letter first, then letters, digits, hyphen, underscore.
inline bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_';
  });
}

// ---------------------------------------------------------------------------
// Record types
// ---------------------------------------------------------------------------

struct Item {
  std::string name;
  std::vector<std::string> functions;
  bool operator==(const Item&) const = default;
};

struct Protection {
  Limitation limitation;
  SecurityProperty property;
  std::string goal;
  bool operator==(const Protection&) const = default;
};

struct Asset {
  std::string id;
  std::string name;
  std::vector<Protection> protections;
  bool operator==(const Asset&) const = default;
};

struct Hazard {
  std::string id;
  Limitation limitation;
  std::string description;
  SeverityClass severity;
  ExposureClass exposure;
  ControllabilityClass controllability;
  std::optional<std::string> safety_goal;
  bool operator==(const Hazard&) const = default;
};

struct RiskOverride {
  QualLevel level;
  std::string rationale;
  bool operator==(const RiskOverride&) const = default;
};

struct Threat {
  std::string id;
  std::string asset;  // references Asset::id
  Limitation limitation;
  std::string scenario;
  QualLevel impact;
  QualLevel feasibility;
  Treatment treatment;
  std::optional<std::string> damage;
  std::optional<RiskOverride> risk_override;
  bool operator==(const Threat&) const = default;
};

struct Link {
  std::string hazard;
  std::string threat;
  bool operator==(const Link&) const = default;
  auto operator<=>(const Link&) const = default;
};

struct RiskModel {
  Item item;
  std::vector<Asset> assets;
  std::vector<Hazard> hazards;
  std::vector<Threat> threats;
  std::vector<Link> links;
  bool operator==(const RiskModel&) const = default;

  const Asset* find_asset(std::string_view id) const {
    for (const auto& a : assets)
      if (a.id == id) return &a;
    return nullptr;
  }
  const Hazard* find_hazard(std::string_view id) const {
    for (const auto& h : hazards)
      if (h.id == id) return &h;
    return nullptr;
  }
  const Threat* find_threat(std::string_view id) const {
    for (const auto& t : threats)
      if (t.id == id) return &t;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Collapses internal whitespace runs to single spaces and trims the ends.
inline std::string normalize_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_space = true;  // leading whitespace dropped
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(c);
      in_space = false;
    }
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

inline bool is_blank(std::string_view s) { return normalize_text(s).empty(); }

// Referential-integrity check. Findings are returned, never thrown; the empty
// list is the well-formedness certificate.
inline std::vector<Diagnostic> validate_model(const RiskModel& model) {
  std::vector<Diagnostic> out;
  auto error = [&out](std::string code, std::string msg) {
    out.push_back({DiagSeverity::Error, std::move(code), std::move(msg), std::nullopt});
  };
  auto check_text = [&](std::string_view what, std::string_view text) {
    if (is_blank(text)) error("E-EMPTY", std::string(what) + " must not be empty");
  };

  check_text("item name", model.item.name);
  if (model.item.functions.empty()) error("E-FIELD", "item declares no function");
  for (const auto& f : model.item.functions) check_text("function text", f);

  auto check_ids = [&](auto const& records, std::string_view kind) {
    std::set<std::string> seen;
    for (const auto& r : records) {
      if (!is_identifier(r.id))
        error("E-ID", std::string(kind) + " id '" + r.id + "' is not a valid identifier");
      if (!seen.insert(r.id).second)
        error("E-DUP", "duplicate " + std::string(kind) + " id '" + r.id + "'");
    }
  };
  check_ids(model.assets, "asset");
  check_ids(model.hazards, "hazard");
  check_ids(model.threats, "threat");

  for (const auto& a : model.assets) {
    check_text("asset name", a.name);
    std::set<std::pair<Limitation, SecurityProperty>> pairs;
    for (const auto& p : a.protections) {
      check_text("protection goal", p.goal);
      if (!pairs.insert({p.limitation, p.property}).second)
        error("E-DUP", "asset '" + a.id + "' repeats protection (" +
                           std::string(1, to_letter(p.limitation)) + ", " +
                           to_keyword(p.property) + ")");
    }
  }
  for (const auto& h : model.hazards) {
    check_text("hazard description", h.description);
    if (h.safety_goal) check_text("safety goal", *h.safety_goal);
  }
  for (const auto& t : model.threats) {
    check_text("threat scenario", t.scenario);
    if (!model.find_asset(t.asset))
      error("E-REF", "threat '" + t.id + "' references undeclared asset '" + t.asset + "'");
    if (t.risk_override) check_text("override rationale", t.risk_override->rationale);
  }
  for (const auto& l : model.links) {
    if (!model.find_hazard(l.hazard))
      error("E-REF", "link references undeclared hazard '" + l.hazard + "'");
    if (!model.find_threat(l.threat))
      error("E-REF", "link references undeclared threat '" + l.threat + "'");
  }
  return out;
}

// Sorts records by id, sorts and deduplicates links, and normalizes all text
// fields. Idempotent; preserves meaning of well-formed models.
inline RiskModel canonicalize(RiskModel model) {
  model.item.name = normalize_text(model.item.name);
  for (auto& f : model.item.functions) f = normalize_text(f);

  for (auto& a : model.assets) {
    a.name = normalize_text(a.name);
    for (auto& p : a.protections) p.goal = normalize_text(p.goal);
    std::sort(a.protections.begin(), a.protections.end(), [](const auto& x, const auto& y) {
      return std::pair{x.limitation, x.property} < std::pair{y.limitation, y.property};
    });
  }
  for (auto& h : model.hazards) {
    h.description = normalize_text(h.description);
    if (h.safety_goal) h.safety_goal = normalize_text(*h.safety_goal);
  }
  for (auto& t : model.threats) {
    t.scenario = normalize_text(t.scenario);
    if (t.damage) t.damage = normalize_text(*t.damage);
    if (t.risk_override) t.risk_override->rationale = normalize_text(t.risk_override->rationale);
  }

  auto by_id = [](const auto& x, const auto& y) { return x.id < y.id; };
  std::sort(model.assets.begin(), model.assets.end(), by_id);
  std::sort(model.hazards.begin(), model.hazards.end(), by_id);
  std::sort(model.threats.begin(), model.threats.end(), by_id);
  std::sort(model.links.begin(), model.links.end());
  model.links.erase(std::unique(model.links.begin(), model.links.end()), model.links.end());
  return model;
}

}  // namespace risklang
