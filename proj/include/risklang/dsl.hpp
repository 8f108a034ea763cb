#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "risklang/diagnostics.hpp"
#include "risklang/model.hpp"

namespace risklang {

struct ParseResult {
  std::optional<RiskModel> model;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return model.has_value(); }
};

namespace dsl_detail {

enum class TokKind { Ident, String, LBrace, RBrace, Colon, DashDash, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;   // raw lexeme for Ident, decoded value for String
  SourceSpan span;
};

// Hand-rolled lexer; newline-agnostic (CR before LF is skipped like space).
class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  // Lexing errors are reported through `diags` and the offending input is
  // skipped, so the token stream always ends with an End token.
  Token next(std::vector<Diagnostic>& diags) {
    for (;;) {
      skip_trivia();
      if (pos_ >= src_.size()) return {TokKind::End, "", here(0)};

      const char c = src_[pos_];
      if (c == '{') return single(TokKind::LBrace);
      if (c == '}') return single(TokKind::RBrace);
      if (c == ':') return single(TokKind::Colon);
      if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        Token t{TokKind::DashDash, "--", here(2)};
        advance();
        advance();
        return t;
      }
      if (c == '"') return lex_string(diags);
      if (std::isalpha(static_cast<unsigned char>(c))) return lex_ident();

      diags.push_back({DiagSeverity::Error, "E-SYNTAX",
                       std::string("unexpected character '") + c + "'", here(1)});
      advance();
    }
  }

 private:
  SourceSpan here(int length) const { return {line_, col_, length}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token single(TokKind kind) {
    Token t{kind, std::string(1, src_[pos_]), here(1)};
    advance();
    return t;
  }

  Token lex_ident() {
    SourceSpan span = here(0);
    std::string text;
    while (pos_ < src_.size()) {
      const unsigned char c = static_cast<unsigned char>(src_[pos_]);
      if (!(std::isalnum(c) || c == '-' || c == '_')) break;
      text.push_back(static_cast<char>(c));
      advance();
    }
    span.length = static_cast<int>(text.size());
    return {TokKind::Ident, std::move(text), span};
  }

  Token lex_string(std::vector<Diagnostic>& diags) {
    SourceSpan span = here(0);
    int raw_len = 1;
    advance();  // opening quote
    std::string value;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') break;  // unterminated
      ++raw_len;
      if (c == '"') {
        advance();
        span.length = raw_len;
        return {TokKind::String, std::move(value), span};
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size() || src_[pos_] == '\n') break;
        const char esc = src_[pos_];
        ++raw_len;
        if (esc == '"' || esc == '\\') {
          value.push_back(esc);
        } else {
          diags.push_back({DiagSeverity::Error, "E-SYNTAX",
                           std::string("invalid escape '\\") + esc + "' in string",
                           SourceSpan{line_, col_ - 1, 2}});
        }
        advance();
      } else {
        value.push_back(c);
        advance();
      }
    }
    span.length = raw_len;
    diags.push_back({DiagSeverity::Error, "E-SYNTAX", "unterminated string", span});
    return {TokKind::String, std::move(value), span};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

inline bool is_keyword(const Token& t, std::string_view kw) {
  return t.kind == TokKind::Ident && detail::to_lower(t.text) == kw;
}

inline bool is_block_keyword(const Token& t) {
  if (t.kind != TokKind::Ident) return false;
  const std::string k = detail::to_lower(t.text);
  return k == "item" || k == "asset" || k == "hazard" || k == "threat" || k == "link" ||
         k == "version";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { shift(); }

  ParseResult run() {
    RiskModel model;
    bool have_item = false;
    SourceSpan item_span;

    // id -> declaration span, for duplicate reporting with spans
    std::map<std::string, SourceSpan> asset_ids, hazard_ids, threat_ids;

    while (tok_.kind != TokKind::End) {
      if (tok_.kind != TokKind::Ident) {
        error("E-SYNTAX", "expected a block keyword", tok_.span);
        recover_to_block();
        continue;
      }
      const std::string kw = detail::to_lower(tok_.text);
      if (kw == "item") {
        SourceSpan span = tok_.span;
        shift();
        Item item;
        if (parse_item(item)) {
          if (have_item) {
            error("E-DUP", "item declared more than once", span);
          } else {
            model.item = std::move(item);
            have_item = true;
            item_span = span;
          }
        }
      } else if (kw == "asset") {
        shift();
        Asset asset;
        SourceSpan id_span;
        if (parse_asset(asset, id_span)) {
          if (!asset_ids.emplace(asset.id, id_span).second)
            error("E-DUP", "duplicate asset id '" + asset.id + "'", id_span);
          else
            model.assets.push_back(std::move(asset));
        }
      } else if (kw == "hazard") {
        shift();
        Hazard hazard;
        SourceSpan id_span;
        if (parse_hazard(hazard, id_span)) {
          if (!hazard_ids.emplace(hazard.id, id_span).second)
            error("E-DUP", "duplicate hazard id '" + hazard.id + "'", id_span);
          else
            model.hazards.push_back(std::move(hazard));
        }
      } else if (kw == "threat") {
        shift();
        Threat threat;
        SourceSpan id_span;
        if (parse_threat(threat, id_span)) {
          if (!threat_ids.emplace(threat.id, id_span).second)
            error("E-DUP", "duplicate threat id '" + threat.id + "'", id_span);
          else
            model.threats.push_back(std::move(threat));
        }
      } else if (kw == "link") {
        shift();
        parse_link(model);
      } else if (kw == "version") {
        // reserved; value ignored
        shift();
        if (tok_.kind == TokKind::Colon) shift();
        if (tok_.kind == TokKind::Ident || tok_.kind == TokKind::String) shift();
      } else {
        error("E-SYNTAX", "unknown block keyword '" + tok_.text + "'", tok_.span);
        recover_to_block();
      }
    }

    if (!have_item) error("E-FIELD", "model declares no item block", SourceSpan{1, 1, 0});

    // Reference resolution, now that all declarations are known.
    for (const auto& [asset_id, span] : threat_refs_)
      if (!asset_ids.count(asset_id))
        error("E-REF", "threat references undeclared asset '" + asset_id + "'", span);
    for (const auto& [link, spans] : link_refs_) {
      if (!hazard_ids.count(link.hazard))
        error("E-REF", "link references undeclared hazard '" + link.hazard + "'", spans.first);
      if (!threat_ids.count(link.threat))
        error("E-REF", "link references undeclared threat '" + link.threat + "'", spans.second);
    }

    ParseResult result;
    result.diagnostics = std::move(diags_);
    if (!has_errors(result.diagnostics)) result.model = std::move(model);
    return result;
  }

 private:
  using TK = TokKind;

  void shift() { tok_ = lexer_.next(diags_); }

  void error(std::string code, std::string msg, SourceSpan span) {
    diags_.push_back({DiagSeverity::Error, std::move(code), std::move(msg), span});
  }

  // Skip tokens until the next top-level block keyword, consuming one
  // closing brace level on the way if present.
  void recover_to_block() {
    int depth = 0;
    while (tok_.kind != TK::End) {
      if (depth == 0 && is_block_keyword(tok_)) return;
      if (tok_.kind == TK::LBrace) ++depth;
      if (tok_.kind == TK::RBrace) {
        shift();
        if (depth <= 1) return;
        --depth;
        continue;
      }
      shift();
    }
  }

  bool expect(TK kind, std::string_view what) {
    if (tok_.kind == kind) return true;
    error("E-SYNTAX", "expected " + std::string(what), tok_.span);
    recover_to_block();
    return false;
  }

  bool take(TK kind, std::string_view what, Token* out = nullptr) {
    if (!expect(kind, what)) return false;
    if (out) *out = tok_;
    shift();
    return true;
  }

  bool take_string(std::string& out, std::string_view what, bool require_nonempty = true) {
    Token t;
    if (!take(TK::String, what, &t)) return false;
    if (require_nonempty && is_blank(t.text)) {
      error("E-EMPTY", std::string(what) + " must not be empty", t.span);
      // keep going; the error already blocks model construction
    }
    out = t.text;
    return true;
  }

  bool take_id(std::string& out, SourceSpan& span, std::string_view what) {
    Token t;
    if (!take(TK::Ident, what, &t)) return false;
    out = t.text;
    span = t.span;
    return true;
  }

  template <typename Enum, typename Fn>
  bool take_enum(Enum& out, Fn parse_fn, std::string_view what) {
    if (tok_.kind != TK::Ident) {
      error("E-SYNTAX", "expected " + std::string(what), tok_.span);
      recover_to_block();
      return false;
    }
    auto v = parse_fn(tok_.text);
    if (!v) {
      error("E-ENUM", "unknown " + std::string(what) + " '" + tok_.text + "'", tok_.span);
      shift();
      return false;
    }
    out = *v;
    shift();
    return true;
  }

  bool parse_item(Item& item) {
    if (!take_string(item.name, "item name")) return false;
    if (!take(TK::LBrace, "'{'")) return false;
    while (tok_.kind != TK::RBrace && tok_.kind != TK::End) {
      if (!is_keyword(tok_, "function")) {
        error("E-SYNTAX", "expected 'function' or '}'", tok_.span);
        recover_to_block();
        return false;
      }
      shift();
      std::string fn;
      if (!take_string(fn, "function text")) return false;
      item.functions.push_back(std::move(fn));
    }
    if (item.functions.empty())
      error("E-FIELD", "item declares no function", tok_.span);
    return take(TK::RBrace, "'}'");
  }

  bool parse_asset(Asset& asset, SourceSpan& id_span) {
    if (!take_id(asset.id, id_span, "asset id")) return false;
    if (!take_string(asset.name, "asset name")) return false;
    if (!take(TK::LBrace, "'{'")) return false;
    std::set<std::pair<Limitation, SecurityProperty>> pairs;
    while (tok_.kind != TK::RBrace && tok_.kind != TK::End) {
      if (!is_keyword(tok_, "protect")) {
        error("E-SYNTAX", "expected 'protect' or '}'", tok_.span);
        recover_to_block();
        return false;
      }
      SourceSpan protect_span = tok_.span;
      shift();
      Protection p{};
      if (!take_enum(p.property, parse_property, "security property")) return false;
      if (!is_keyword(tok_, "for")) {
        error("E-SYNTAX", "expected 'for'", tok_.span);
        recover_to_block();
        return false;
      }
      shift();
      if (!take_enum(p.limitation, parse_limitation, "limitation")) return false;
      if (!take(TK::Colon, "':'")) return false;
      if (!take_string(p.goal, "protection goal")) return false;
      if (!pairs.insert({p.limitation, p.property}).second)
        error("E-DUP",
              "asset '" + asset.id + "' repeats protection (" +
                  std::string(1, to_letter(p.limitation)) + ", " + to_keyword(p.property) + ")",
              protect_span);
      asset.protections.push_back(std::move(p));
    }
    if (asset.protections.empty())
      error("E-FIELD", "asset '" + asset.id + "' declares no protection", tok_.span);
    return take(TK::RBrace, "'}'");
  }

  // Shared field-block machinery for hazard and threat bodies. Returns the
  // lowercased field name, or nullopt at '}' / on recovery.
  std::optional<std::string> next_field(std::set<std::string>& seen) {
    if (tok_.kind == TK::RBrace || tok_.kind == TK::End) return std::nullopt;
    if (tok_.kind != TK::Ident) {
      error("E-SYNTAX", "expected a field name or '}'", tok_.span);
      recover_to_block();
      return std::nullopt;
    }
    const std::string name = detail::to_lower(tok_.text);
    if (!seen.insert(name).second)
      error("E-FIELD", "duplicate field '" + name + "'", tok_.span);
    shift();
    if (!take(TK::Colon, "':'")) return std::nullopt;
    return name;
  }

  bool parse_hazard(Hazard& hazard, SourceSpan& id_span) {
    if (!take_id(hazard.id, id_span, "hazard id")) return false;
    if (!take(TK::LBrace, "'{'")) return false;
    std::set<std::string> seen;
    bool bad = false;
    while (auto field = next_field(seen)) {
      if (*field == "limitation") {
        bad |= !take_enum(hazard.limitation, parse_limitation, "limitation");
      } else if (*field == "description") {
        bad |= !take_string(hazard.description, "description");
      } else if (*field == "severity") {
        bad |= !take_enum(hazard.severity, parse_severity, "severity class");
      } else if (*field == "exposure") {
        bad |= !take_enum(hazard.exposure, parse_exposure, "exposure class");
      } else if (*field == "controllability") {
        bad |= !take_enum(hazard.controllability, parse_controllability, "controllability class");
      } else if (*field == "safety_goal") {
        std::string goal;
        bad |= !take_string(goal, "safety goal");
        hazard.safety_goal = std::move(goal);
      } else {
        error("E-FIELD", "unknown hazard field '" + *field + "'", tok_.span);
        recover_to_block();
        return false;
      }
    }
    for (const char* req : {"limitation", "description", "severity", "exposure",
                            "controllability"})
      if (!seen.count(req))
        error("E-FIELD", "hazard '" + hazard.id + "' is missing field '" + req + "'", id_span);
    return take(TK::RBrace, "'}'") && !bad;
  }

  bool parse_threat(Threat& threat, SourceSpan& id_span) {
    if (!take_id(threat.id, id_span, "threat id")) return false;
    if (!take(TK::LBrace, "'{'")) return false;
    std::set<std::string> seen;
    bool bad = false;
    while (auto field = next_field(seen)) {
      if (*field == "asset") {
        if (take_id(threat.asset, asset_ref_span_, "asset id"))
          threat_refs_.push_back({threat.asset, asset_ref_span_});
        else
          bad = true;
      } else if (*field == "limitation") {
        bad |= !take_enum(threat.limitation, parse_limitation, "limitation");
      } else if (*field == "scenario") {
        bad |= !take_string(threat.scenario, "scenario");
      } else if (*field == "impact") {
        bad |= !take_enum(threat.impact, parse_qual_level, "level");
      } else if (*field == "feasibility") {
        bad |= !take_enum(threat.feasibility, parse_qual_level, "level");
      } else if (*field == "treatment") {
        bad |= !take_enum(threat.treatment, parse_treatment, "treatment");
      } else if (*field == "damage") {
        std::string damage;
        bad |= !take_string(damage, "damage", /*require_nonempty=*/false);
        threat.damage = std::move(damage);
      } else if (*field == "override") {
        RiskOverride ovr{};
        bad |= !take_enum(ovr.level, parse_qual_level, "level");
        if (!is_keyword(tok_, "because")) {
          error("E-SYNTAX", "expected 'because' after override level", tok_.span);
          recover_to_block();
          return false;
        }
        shift();
        bad |= !take_string(ovr.rationale, "override rationale");
        threat.risk_override = std::move(ovr);
      } else {
        error("E-FIELD", "unknown threat field '" + *field + "'", tok_.span);
        recover_to_block();
        return false;
      }
    }
    for (const char* req :
         {"asset", "limitation", "scenario", "impact", "feasibility", "treatment"})
      if (!seen.count(req))
        error("E-FIELD", "threat '" + threat.id + "' is missing field '" + req + "'", id_span);
    return take(TK::RBrace, "'}'") && !bad;
  }

  void parse_link(RiskModel& model) {
    Link link;
    SourceSpan hz_span, th_span;
    if (!take_id(link.hazard, hz_span, "hazard id")) return;
    if (!take(TK::DashDash, "'--'")) return;
    if (!take_id(link.threat, th_span, "threat id")) return;
    link_refs_.push_back({link, {hz_span, th_span}});
    model.links.push_back(std::move(link));
  }

  Lexer lexer_;
  Token tok_;
  std::vector<Diagnostic> diags_;
  SourceSpan asset_ref_span_;
  std::vector<std::pair<std::string, SourceSpan>> threat_refs_;
  std::vector<std::pair<Link, std::pair<SourceSpan, SourceSpan>>> link_refs_;
};

inline std::string escape_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace dsl_detail

// Parses `.rsk` text. On success the model passes validate_model; on failure
// every diagnostic carries a span and recovery reports multiple errors.
inline ParseResult parse_model(std::string_view text) {
  return dsl_detail::Parser(text).run();
}

// Emits canonical text: canonicalized model, fixed block and field order,
// two-space indentation, LF lines. parse(render(m)) == canonicalize(m).
inline std::string render_canonical(const RiskModel& input) {
  using dsl_detail::escape_string;
  const RiskModel model = canonicalize(input);
  std::ostringstream out;

  out << "item " << escape_string(model.item.name) << " {\n";
  for (const auto& fn : model.item.functions)
    out << "  function " << escape_string(fn) << "\n";
  out << "}\n";

  for (const auto& a : model.assets) {
    out << "\nasset " << a.id << " " << escape_string(a.name) << " {\n";
    for (const auto& p : a.protections)
      out << "  protect " << to_keyword(p.property) << " for " << to_keyword(p.limitation)
          << ": " << escape_string(p.goal) << "\n";
    out << "}\n";
  }

  for (const auto& h : model.hazards) {
    out << "\nhazard " << h.id << " {\n";
    out << "  limitation: " << to_keyword(h.limitation) << "\n";
    out << "  description: " << escape_string(h.description) << "\n";
    out << "  severity: " << to_keyword(h.severity) << "\n";
    out << "  exposure: " << to_keyword(h.exposure) << "\n";
    out << "  controllability: " << to_keyword(h.controllability) << "\n";
    if (h.safety_goal) out << "  safety_goal: " << escape_string(*h.safety_goal) << "\n";
    out << "}\n";
  }

  for (const auto& t : model.threats) {
    out << "\nthreat " << t.id << " {\n";
    out << "  asset: " << t.asset << "\n";
    out << "  limitation: " << to_keyword(t.limitation) << "\n";
    out << "  scenario: " << escape_string(t.scenario) << "\n";
    out << "  impact: " << to_keyword(t.impact) << "\n";
    out << "  feasibility: " << to_keyword(t.feasibility) << "\n";
    out << "  treatment: " << to_keyword(t.treatment) << "\n";
    if (t.damage) out << "  damage: " << escape_string(*t.damage) << "\n";
    if (t.risk_override)
      out << "  override: " << to_keyword(t.risk_override->level) << " because "
          << escape_string(t.risk_override->rationale) << "\n";
    out << "}\n";
  }

  if (!model.links.empty()) {
    out << "\n";
    for (const auto& l : model.links) out << "link " << l.hazard << " -- " << l.threat << "\n";
  }
  return out.str();
}

}  // namespace risklang
