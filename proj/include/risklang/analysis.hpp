#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "risklang/diagnostics.hpp"
#include "risklang/model.hpp"
#include "risklang/tables.hpp"

namespace risklang {

struct ThreatRating {
  QualLevel computed;
  QualLevel effective;
  bool overridden = false;
  bool operator==(const ThreatRating&) const = default;
};

// A hazard-threat pair tied by a DNN limitation; the safety-security
// interdependency surface of the model.
struct CrossLink {
  std::string hazard;
  std::string threat;
  Limitation limitation;
  bool operator==(const CrossLink&) const = default;
};

struct Assessment {
  std::map<std::string, AsilLevel> hazard_ratings;
  std::map<std::string, ThreatRating> threat_ratings;
  std::vector<CrossLink> cross_links;
  std::vector<Diagnostic> diagnostics;
};

std::vector<Diagnostic> lint(const RiskModel& model, const Assessment& assessment);

// Rates every hazard and threat, derives cross-links (shared limitation plus
// manual links, deduplicated), and runs the lint catalog.
inline Assessment assess(const RiskModel& model, const RiskMatrix& matrix) {
  Assessment a;
  for (const auto& h : model.hazards)
    a.hazard_ratings[h.id] = determine_asil(h.severity, h.exposure, h.controllability);
  for (const auto& t : model.threats) {
    ThreatRating r;
    r.computed = determine_risk(t.impact, t.feasibility, matrix);
    r.overridden = t.risk_override.has_value();
    r.effective = r.overridden ? t.risk_override->level : r.computed;
    a.threat_ratings[t.id] = r;
  }

  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& h : model.hazards)
    for (const auto& t : model.threats)
      if (h.limitation == t.limitation && seen.insert({h.id, t.id}).second)
        a.cross_links.push_back({h.id, t.id, h.limitation});
  for (const auto& l : model.links) {
    if (!seen.insert({l.hazard, l.threat}).second) continue;
    // manual pair; tagged with the hazard's limitation
    const Hazard* h = model.find_hazard(l.hazard);
    a.cross_links.push_back({l.hazard, l.threat, h ? h->limitation : Limitation::Generalization});
  }

  a.diagnostics = lint(model, a);
  return a;
}

// Lint catalog. Rules L1-L6; each finding carries a stable diagnostic code.
//   L1 E-PROT   threat lacks a matching protect entry on its asset
//   L2 E-GOAL   hazard rated ASIL A or above without a safety goal
//   L3 E-ACCEPT / W-ACCEPT   acceptance of high / medium effective risk
//   L4 W-OVR    risk override in use (echoes the rationale)
//   L5 W-COVERAGE   limitation present on only one side of the analysis
//   L6 N-LINK   hazard with no cross-linked threat
inline std::vector<Diagnostic> lint(const RiskModel& model, const Assessment& assessment) {
  std::vector<Diagnostic> out;
  auto emit = [&out](DiagSeverity sev, std::string code, std::string msg) {
    out.push_back({sev, std::move(code), std::move(msg), std::nullopt});
  };

  // L1: every threat's (asset, limitation) needs a protection goal
  for (const auto& t : model.threats) {
    const Asset* asset = model.find_asset(t.asset);
    if (!asset) continue;  // validate_model territory
    bool covered = false;
    for (const auto& p : asset->protections)
      if (p.limitation == t.limitation) covered = true;
    if (!covered)
      emit(DiagSeverity::Error, "E-PROT",
           "rule L1: threat '" + t.id + "' targets asset '" + t.asset +
               "' which declares no protection for limitation " +
               std::string(1, to_letter(t.limitation)));
  }

  // L2: rated hazards need a safety goal
  for (const auto& h : model.hazards) {
    const AsilLevel asil = assessment.hazard_ratings.at(h.id);
    if (asil >= AsilLevel::A && !h.safety_goal)
      emit(DiagSeverity::Error, "E-GOAL",
           "rule L2: hazard '" + h.id + "' rates ASIL " + to_display(asil) +
               " but has no safety goal");
  }

  // L3: acceptance is only fine for low risk
  for (const auto& t : model.threats) {
    if (t.treatment != Treatment::Acceptance) continue;
    const QualLevel risk = assessment.threat_ratings.at(t.id).effective;
    if (risk == QualLevel::High)
      emit(DiagSeverity::Error, "E-ACCEPT",
           "rule L3: threat '" + t.id + "' accepts a high effective risk");
    else if (risk == QualLevel::Medium)
      emit(DiagSeverity::Warning, "W-ACCEPT",
           "rule L3: threat '" + t.id + "' accepts a medium effective risk");
  }

  // L4: surface every override together with its rationale
  for (const auto& t : model.threats)
    if (t.risk_override)
      emit(DiagSeverity::Warning, "W-OVR",
           "rule L4: threat '" + t.id + "' overrides computed risk to " +
               to_display(t.risk_override->level) + ": " + t.risk_override->rationale);

  // L5: limitations should appear on both the hazard and the threat side
  std::set<Limitation> in_hazards, in_threats;
  for (const auto& h : model.hazards) in_hazards.insert(h.limitation);
  for (const auto& t : model.threats) in_threats.insert(t.limitation);
  for (Limitation lim : kAllLimitations) {
    const bool hz = in_hazards.count(lim), th = in_threats.count(lim);
    if (hz && !th)
      emit(DiagSeverity::Warning, "W-COVERAGE",
           std::string("rule L5: limitation ") + to_letter(lim) +
               " appears in hazards but in no threat");
    if (th && !hz)
      emit(DiagSeverity::Warning, "W-COVERAGE",
           std::string("rule L5: limitation ") + to_letter(lim) +
               " appears in threats but in no hazard");
  }

  // L6: isolated hazards
  for (const auto& h : model.hazards) {
    bool linked = false;
    for (const auto& cl : assessment.cross_links)
      if (cl.hazard == h.id) linked = true;
    if (!linked)
      emit(DiagSeverity::Note, "N-LINK",
           "rule L6: hazard '" + h.id + "' has no cross-linked threat");
  }
  return out;
}

// ---------------------------------------------------------------------------
// What-if exploration
// ---------------------------------------------------------------------------

struct WhatIfOverride {
  std::string id;
  std::string field;  // severity|exposure|controllability|impact|feasibility
  std::string value;
};

struct DeltaEntry {
  std::string id;
  std::string before;  // ASIL letter or risk level, per target kind
  std::string after;
  bool operator==(const DeltaEntry&) const = default;
};

struct WhatIfResult {
  std::vector<DeltaEntry> deltas;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return !has_errors(diagnostics); }
};

// Applies field overrides to a copy, re-assesses, and reports the effective
// ratings that changed. The input model is left untouched.
inline WhatIfResult what_if(const RiskModel& model, const RiskMatrix& matrix,
                            const std::vector<WhatIfOverride>& overrides) {
  WhatIfResult result;
  auto error = [&result](std::string code, std::string msg) {
    result.diagnostics.push_back({DiagSeverity::Error, std::move(code), std::move(msg),
                                  std::nullopt});
  };

  RiskModel patched = model;
  for (const auto& ovr : overrides) {
    if (Hazard* h = const_cast<Hazard*>(patched.find_hazard(ovr.id))) {
      if (ovr.field == "severity") {
        if (auto v = parse_severity(ovr.value)) h->severity = *v;
        else error("E-ENUM", "unknown severity class '" + ovr.value + "'");
      } else if (ovr.field == "exposure") {
        if (auto v = parse_exposure(ovr.value)) h->exposure = *v;
        else error("E-ENUM", "unknown exposure class '" + ovr.value + "'");
      } else if (ovr.field == "controllability") {
        if (auto v = parse_controllability(ovr.value)) h->controllability = *v;
        else error("E-ENUM", "unknown controllability class '" + ovr.value + "'");
      } else {
        error("E-FIELD", "field '" + ovr.field + "' does not apply to hazard '" + ovr.id + "'");
      }
    } else if (Threat* t = const_cast<Threat*>(patched.find_threat(ovr.id))) {
      if (ovr.field == "impact" || ovr.field == "feasibility") {
        if (auto v = parse_qual_level(ovr.value)) {
          (ovr.field == "impact" ? t->impact : t->feasibility) = *v;
        } else {
          error("E-ENUM", "unknown level '" + ovr.value + "'");
        }
      } else {
        error("E-FIELD", "field '" + ovr.field + "' does not apply to threat '" + ovr.id + "'");
      }
    } else {
      error("E-REF", "no hazard or threat with id '" + ovr.id + "'");
    }
  }
  if (!result.ok()) return result;

  const Assessment before = assess(model, matrix);
  const Assessment after = assess(patched, matrix);
  for (const auto& [id, asil] : before.hazard_ratings) {
    const AsilLevel now = after.hazard_ratings.at(id);
    if (now != asil) result.deltas.push_back({id, to_display(asil), to_display(now)});
  }
  for (const auto& [id, rating] : before.threat_ratings) {
    const ThreatRating now = after.threat_ratings.at(id);
    if (now.effective != rating.effective)
      result.deltas.push_back({id, to_display(rating.effective), to_display(now.effective)});
  }
  return result;
}

}  // namespace risklang
