#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "risklang/model.hpp"

namespace risklang {

// One row of the built-in standards coverage catalog.
struct StandardEntry {
  std::string id;
  int year;
  std::string description;
  std::set<Limitation> covers;
};

// Which automotive/AI standards address which DNN limitation classes.
// Compiled-in reference data; `standards_for` preserves this row order.
inline const std::vector<StandardEntry>& standards_catalog() {
  using L = Limitation;
  static const std::vector<StandardEntry> entries = {
      {"ISO 26262", 2018,
       "Functional safety of automotive electric/electronic systems, focus on system-level "
       "hazards, introduces HARA.",
       {}},
      {"ISO/IEC TR 24028", 2020,
       "Trustworthiness in AI; high-level properties including reliability, robustness, and "
       "security.",
       {L::Generalization, L::Explainability, L::Robustness}},
      {"ISO/SAE 21434", 2021, "Automotive cybersecurity, introduces TARA.", {L::Robustness}},
      {"ISO 21448", 2022,
       "Safety of the Intended Functionality (SOTIF); covers non-fault-based hazards including "
       "sensor/ML insufficiencies.",
       {L::Generalization, L::Plausibility, L::Robustness}},
      {"ISO PAS 8800", 2022, "Safety for ML components in automotive systems.",
       {L::Generalization, L::Efficiency, L::Robustness}},
      {"ANSI/UL 4600", 2022,
       "AV safety standard including ML, uncertainty, and assurance methods.",
       {L::Generalization, L::Efficiency, L::Explainability, L::Plausibility, L::Robustness}},
      {"ISO/IEC TR 24029", 2022,
       "Assessment of the robustness of DNNs; evaluation methodologies for AI reliability.",
       {L::Robustness}},
      {"ISO/IEC TR 5469", 2024,
       "Guidance for risk management of AI systems; considers intended use, lifecycle, and "
       "trustworthiness.",
       {L::Generalization, L::Explainability, L::Robustness}},
      {"EU AI Act", 2024,
       "Regulatory framework for trustworthy AI; includes robustness, transparency, and "
       "risk-based classification.",
       {L::Generalization, L::Explainability, L::Robustness}},
  };
  return entries;
}

inline std::vector<StandardEntry> standards_for(Limitation limitation) {
  std::vector<StandardEntry> out;
  for (const auto& e : standards_catalog())
    if (e.covers.count(limitation)) out.push_back(e);
  return out;
}

// Case-insensitive id lookup; nullopt for an unknown standard (E-UNKNOWN-STD).
inline std::optional<std::set<Limitation>> limitations_for(std::string_view standard_id) {
  const std::string wanted = detail::to_lower(standard_id);
  for (const auto& e : standards_catalog())
    if (detail::to_lower(e.id) == wanted) return e.covers;
  return std::nullopt;
}

}  // namespace risklang
