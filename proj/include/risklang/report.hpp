#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "risklang/analysis.hpp"
#include "risklang/model.hpp"
#include "risklang/tables.hpp"

namespace risklang {

enum class ReportFormat { Markdown, Csv, Json };

inline std::optional<ReportFormat> parse_report_format(std::string_view text) {
  const std::string t = detail::to_lower(text);
  if (t == "md" || t == "markdown") return ReportFormat::Markdown;
  if (t == "csv") return ReportFormat::Csv;
  if (t == "json") return ReportFormat::Json;
  return std::nullopt;
}

namespace report_detail {

struct Cell {
  std::string text;
  enum class Kind { Str, Bool, Int } kind = Kind::Str;
};

inline Cell str(std::string s) { return {std::move(s), Cell::Kind::Str}; }
inline Cell boolean(bool b) { return {b ? "true" : "false", Cell::Kind::Bool}; }
inline Cell integer(std::size_t n) { return {std::to_string(n), Cell::Kind::Int}; }

struct Table {
  std::vector<std::string> headers;    // display headers (md/csv)
  std::vector<std::string> json_keys;  // lower_snake_case, same arity
  std::vector<std::size_t> json_only;  // column indexes omitted from md/csv
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> footnotes;  // markdown only
};

inline std::string md_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

inline std::string csv_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

inline bool text_column(const Table& t, std::size_t i) {
  return std::find(t.json_only.begin(), t.json_only.end(), i) == t.json_only.end();
}

inline std::string render(const Table& t, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::Markdown) {
    out << "|";
    for (std::size_t i = 0; i < t.headers.size(); ++i)
      if (text_column(t, i)) out << " " << md_escape(t.headers[i]) << " |";
    out << "\n|";
    for (std::size_t i = 0; i < t.headers.size(); ++i)
      if (text_column(t, i)) out << " --- |";
    out << "\n";
    for (const auto& row : t.rows) {
      out << "|";
      for (std::size_t i = 0; i < row.size(); ++i)
        if (text_column(t, i)) out << " " << md_escape(row[i].text) << " |";
      out << "\n";
    }
    if (!t.footnotes.empty()) {
      out << "\n";
      for (const auto& fn : t.footnotes) out << "* " << md_escape(fn) << "\n";
    }
  } else if (format == ReportFormat::Csv) {
    auto line = [&](auto field_of) {
      bool first = true;
      for (std::size_t i = 0; i < t.headers.size(); ++i) {
        if (!text_column(t, i)) continue;
        if (!first) out << ",";
        out << csv_quote(field_of(i));
        first = false;
      }
      out << "\n";
    };
    line([&](std::size_t i) { return t.headers[i]; });
    for (const auto& row : t.rows)
      line([&](std::size_t i) { return row[i].text; });
  } else {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < row.size(); ++i) {
        switch (row[i].kind) {
          case Cell::Kind::Str: obj[t.json_keys[i]] = row[i].text; break;
          case Cell::Kind::Bool: obj[t.json_keys[i]] = (row[i].text == "true"); break;
          case Cell::Kind::Int: obj[t.json_keys[i]] = std::stoll(row[i].text); break;
        }
      }
      arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << "\n";
  }
  return out.str();
}

template <typename T>
inline std::vector<const T*> sorted_by_id(const std::vector<T>& items) {
  std::vector<const T*> out;
  for (const auto& x : items) out.push_back(&x);
  std::sort(out.begin(), out.end(), [](const T* a, const T* b) { return a->id < b->id; });
  return out;
}

}  // namespace report_detail

// HARA table: one row per hazard, canonical id order.
inline std::string render_hara_table(const RiskModel& model, const Assessment& assessment,
                                     ReportFormat format) {
  using namespace report_detail;
  Table t;
  t.headers = {"Limitation", "Hazard", "Severity", "Exposure", "Controllability", "ASIL",
               "Safety Goal"};
  t.json_keys = {"limitation", "hazard", "severity", "exposure", "controllability", "asil",
                 "safety_goal"};
  for (const Hazard* h : sorted_by_id(model.hazards)) {
    t.rows.push_back({str(std::string(1, to_letter(h->limitation))), str(h->description),
                      str(to_keyword(h->severity)), str(to_keyword(h->exposure)),
                      str(to_keyword(h->controllability)),
                      str(to_display(assessment.hazard_ratings.at(h->id))),
                      str(h->safety_goal.value_or(""))});
  }
  return render(t, format);
}

// TARA table: one row per threat. Overridden risk levels carry a trailing
// asterisk (md/csv) or an `overridden` flag (json); markdown appends the
// override rationales as footnotes.
inline std::string render_tara_table(const RiskModel& model, const Assessment& assessment,
                                     ReportFormat format) {
  using namespace report_detail;
  Table t;
  t.headers = {"Limitation", "Asset",      "Threat Scenario", "Impact",    "Feasibility",
               "Risk Level", "Treatment",  "Overridden",      "Override Rationale"};
  t.json_keys = {"limitation", "asset",      "threat_scenario", "impact",    "feasibility",
                 "risk_level", "treatment",  "overridden",      "override_rationale"};
  t.json_only = {7, 8};
  for (const Threat* th : sorted_by_id(model.threats)) {
    const ThreatRating& rating = assessment.threat_ratings.at(th->id);
    const Asset* asset = model.find_asset(th->asset);
    std::string risk = to_display(rating.effective);
    std::string rationale;
    if (rating.overridden) {
      rationale = th->risk_override->rationale;
      if (format != ReportFormat::Json) risk += "*";
      t.footnotes.push_back(th->id + ": " + rationale);
    }
    t.rows.push_back({str(std::string(1, to_letter(th->limitation))),
                      str(asset ? asset->name : th->asset), str(th->scenario),
                      str(to_display(th->impact)), str(to_display(th->feasibility)),
                      str(std::move(risk)), str(to_display(th->treatment)),
                      boolean(rating.overridden), str(std::move(rationale))});
  }
  return render(t, format);
}

// Asset table: one row per protection entry, joined with the scenarios of
// threats hitting the same (asset, limitation).
inline std::string render_asset_table(const RiskModel& model, ReportFormat format) {
  using namespace report_detail;
  Table t;
  t.headers = {"Asset", "Limitation", "Security Property", "Security Goal", "Threat Scenario"};
  t.json_keys = {"asset", "limitation", "security_property", "security_goal", "threat_scenario"};
  for (const Asset* a : sorted_by_id(model.assets)) {
    auto protections = a->protections;
    std::sort(protections.begin(), protections.end(), [](const auto& x, const auto& y) {
      return std::pair{x.limitation, x.property} < std::pair{y.limitation, y.property};
    });
    for (const auto& p : protections) {
      std::string scenarios;
      for (const Threat* th : sorted_by_id(model.threats)) {
        if (th->asset != a->id || th->limitation != p.limitation) continue;
        if (!scenarios.empty()) scenarios += "; ";
        scenarios += th->scenario;
      }
      t.rows.push_back({str(a->name), str(std::string(1, to_letter(p.limitation))),
                        str(to_display(p.property)), str(p.goal), str(std::move(scenarios))});
    }
  }
  return render(t, format);
}

// Traceability matrix: per-limitation aggregation of both analyses. All five
// limitations are always listed; empty aggregates show "-".
inline std::string render_trace_matrix(const RiskModel& model, const Assessment& assessment,
                                       ReportFormat format) {
  using namespace report_detail;
  Table t;
  t.headers = {"Limitation", "Hazards", "Threats", "Cross-Links", "Worst ASIL", "Worst Risk"};
  t.json_keys = {"limitation", "hazards", "threats", "cross_links", "worst_asil", "worst_risk"};
  for (Limitation lim : kAllLimitations) {
    std::size_t hazards = 0, threats = 0, links = 0;
    std::optional<AsilLevel> worst_asil;
    std::optional<QualLevel> worst_risk;
    for (const auto& h : model.hazards) {
      if (h.limitation != lim) continue;
      ++hazards;
      const AsilLevel asil = assessment.hazard_ratings.at(h.id);
      if (!worst_asil || asil > *worst_asil) worst_asil = asil;
    }
    for (const auto& th : model.threats) {
      if (th.limitation != lim) continue;
      ++threats;
      const QualLevel risk = assessment.threat_ratings.at(th.id).effective;
      if (!worst_risk || risk > *worst_risk) worst_risk = risk;
    }
    for (const auto& cl : assessment.cross_links)
      if (cl.limitation == lim) ++links;
    t.rows.push_back({str(std::string(1, to_letter(lim))), integer(hazards), integer(threats),
                      integer(links), str(worst_asil ? to_display(*worst_asil) : "-"),
                      str(worst_risk ? to_display(*worst_risk) : "-")});
  }
  return render(t, format);
}

}  // namespace risklang
