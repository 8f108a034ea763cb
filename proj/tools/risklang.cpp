// risklang - combined HARA/TARA risk-model checker, rater, and reporter.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "risklang/analysis.hpp"
#include "risklang/catalog.hpp"
#include "risklang/dsl.hpp"
#include "risklang/model.hpp"
#include "risklang/report.hpp"
#include "risklang/tables.hpp"

namespace {

using namespace risklang;

constexpr int kExitOk = 0;
constexpr int kExitErrors = 1;
constexpr int kExitParseFailure = 2;
constexpr int kExitUsage = 3;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_diagnostic(std::ostream& out, const Diagnostic& d) {
  out << to_string(d.severity) << " " << d.code << " ";
  if (d.span)
    out << d.span->line << ":" << d.span->column;
  else
    out << "-";
  out << " " << d.message << "\n";
}

// Loads --matrix when given, the default matrix otherwise. Returns nullopt
// after printing diagnostics; *exit_code is set accordingly.
std::optional<RiskMatrix> load_matrix(const std::string& path, int* exit_code) {
  if (path.empty()) return default_risk_matrix();
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read matrix file '" << path << "'\n";
    *exit_code = kExitUsage;
    return std::nullopt;
  }
  MatrixParseResult parsed = parse_matrix_config(*text);
  if (!parsed.matrix) {
    for (const auto& d : parsed.diagnostics) print_diagnostic(std::cerr, d);
    *exit_code = kExitErrors;
    return std::nullopt;
  }
  return parsed.matrix;
}

struct LoadedModel {
  RiskModel model;
  Assessment assessment;
};

// parse + assess; diagnostics go to `diag_out`.
std::optional<LoadedModel> load_and_assess(const std::string& path, const RiskMatrix& matrix,
                                           std::ostream& diag_out, int* exit_code) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read file '" << path << "'\n";
    *exit_code = kExitUsage;
    return std::nullopt;
  }
  ParseResult parsed = parse_model(*text);
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics) print_diagnostic(diag_out, d);
    *exit_code = kExitParseFailure;
    return std::nullopt;
  }
  LoadedModel loaded{std::move(*parsed.model), {}};
  loaded.assessment = assess(loaded.model, matrix);
  return loaded;
}

int cmd_check(const std::vector<std::string>& files, const std::string& matrix_path) {
  int exit_code = kExitOk;
  auto matrix = load_matrix(matrix_path, &exit_code);
  if (!matrix) return exit_code;

  int worst = kExitOk;
  for (const auto& file : files) {
    int code = kExitOk;
    // check's requested artifact is the diagnostic listing itself
    auto loaded = load_and_assess(file, *matrix, std::cout, &code);
    if (!loaded) {
      worst = std::max(worst, code);
      continue;
    }
    for (const auto& d : loaded->assessment.diagnostics) print_diagnostic(std::cout, d);
    if (has_errors(loaded->assessment.diagnostics)) worst = std::max(worst, kExitErrors);
  }
  return worst;
}

int cmd_report(const std::string& file, const std::string& table, const std::string& format_name,
               const std::string& matrix_path, const std::string& out_path, bool force) {
  auto format = parse_report_format(format_name);
  if (!format) {
    std::cerr << "error: unknown format '" << format_name << "'\n";
    return kExitUsage;
  }
  int exit_code = kExitOk;
  auto matrix = load_matrix(matrix_path, &exit_code);
  if (!matrix) return exit_code;
  auto loaded = load_and_assess(file, *matrix, std::cerr, &exit_code);
  if (!loaded) return exit_code;

  for (const auto& d : loaded->assessment.diagnostics) print_diagnostic(std::cerr, d);
  if (has_errors(loaded->assessment.diagnostics) && !force) {
    std::cerr << "error: model has lint errors; pass --force to render anyway\n";
    return kExitErrors;
  }

  std::string doc;
  if (table == "hara")
    doc = render_hara_table(loaded->model, loaded->assessment, *format);
  else if (table == "tara")
    doc = render_tara_table(loaded->model, loaded->assessment, *format);
  else if (table == "assets")
    doc = render_asset_table(loaded->model, *format);
  else if (table == "trace")
    doc = render_trace_matrix(loaded->model, loaded->assessment, *format);
  else {
    std::cerr << "error: unknown table '" << table << "'\n";
    return kExitUsage;
  }

  if (out_path.empty()) {
    std::cout << doc;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kExitUsage;
    }
    out << doc;
  }
  return kExitOk;
}

int cmd_asil(const std::string& s, const std::string& e, const std::string& c) {
  auto sv = parse_severity(s);
  auto ev = parse_exposure(e);
  auto cv = parse_controllability(c);
  if (!sv || !ev || !cv) {
    std::cerr << "error: expected --severity S0..S3 --exposure E0..E4 --controllability C0..C3\n";
    return kExitUsage;
  }
  std::cout << to_display(determine_asil(*sv, *ev, *cv)) << "\n";
  return kExitOk;
}

int cmd_risk(const std::string& impact, const std::string& feasibility,
             const std::string& matrix_path) {
  auto iv = parse_qual_level(impact);
  auto fv = parse_qual_level(feasibility);
  if (!iv || !fv) {
    std::cerr << "error: impact and feasibility must be low|medium|high\n";
    return kExitUsage;
  }
  int exit_code = kExitOk;
  auto matrix = load_matrix(matrix_path, &exit_code);
  if (!matrix) return exit_code;
  std::cout << to_display(determine_risk(*iv, *fv, *matrix)) << "\n";
  return kExitOk;
}

int cmd_what_if(const std::string& file, const std::vector<std::string>& sets,
                const std::string& matrix_path) {
  std::vector<WhatIfOverride> overrides;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    const auto dot = s.rfind('.', eq == std::string::npos ? eq : eq - 1);
    if (eq == std::string::npos || dot == std::string::npos || dot == 0 || dot + 1 >= eq) {
      std::cerr << "error: --set expects <id>.<field>=<value>, got '" << s << "'\n";
      return kExitUsage;
    }
    overrides.push_back({s.substr(0, dot), detail::to_lower(s.substr(dot + 1, eq - dot - 1)),
                         s.substr(eq + 1)});
  }
  int exit_code = kExitOk;
  auto matrix = load_matrix(matrix_path, &exit_code);
  if (!matrix) return exit_code;
  auto loaded = load_and_assess(file, *matrix, std::cerr, &exit_code);
  if (!loaded) return exit_code;

  WhatIfResult result = what_if(loaded->model, *matrix, overrides);
  if (!result.ok()) {
    for (const auto& d : result.diagnostics) print_diagnostic(std::cerr, d);
    return kExitErrors;
  }
  for (const auto& delta : result.deltas)
    std::cout << delta.id << ": " << delta.before << " -> " << delta.after << "\n";
  return kExitOk;
}

int cmd_standards(const std::string& limitation, const std::string& standard_id) {
  if (!limitation.empty()) {
    auto lim = parse_limitation(limitation);
    if (!lim) {
      std::cerr << "error: unknown limitation '" << limitation << "'\n";
      return kExitUsage;
    }
    for (const auto& e : standards_for(*lim)) std::cout << e.id << "\n";
    return kExitOk;
  }
  auto covers = limitations_for(standard_id);
  if (!covers) {
    std::cerr << "error E-UNKNOWN-STD - unknown standard '" << standard_id << "'\n";
    return kExitErrors;
  }
  for (Limitation lim : kAllLimitations)
    if (covers->count(lim)) std::cout << to_keyword(lim) << "\n";
  return kExitOk;
}

int cmd_fmt(const std::string& file, bool write) {
  auto text = read_file(file);
  if (!text) {
    std::cerr << "error: cannot read file '" << file << "'\n";
    return kExitUsage;
  }
  ParseResult parsed = parse_model(*text);
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics) print_diagnostic(std::cerr, d);
    return kExitParseFailure;
  }
  const std::string canonical = render_canonical(*parsed.model);
  if (write) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << file << "'\n";
      return kExitUsage;
    }
    out << canonical;
  } else {
    std::cout << canonical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combined HARA/TARA risk-model analyzer for DNN-based perception"};
  app.require_subcommand(1);

  std::vector<std::string> check_files;
  std::string check_matrix;
  auto* check = app.add_subcommand("check", "Parse, assess, and print diagnostics");
  check->add_option("file", check_files, "Risk model file(s) (.rsk)")->required();
  check->add_option("--matrix", check_matrix, "Risk matrix config file");

  std::string rep_file, rep_table, rep_format, rep_matrix, rep_out;
  bool rep_force = false;
  auto* report = app.add_subcommand("report", "Render an assessment table");
  report->add_option("file", rep_file, "Risk model file (.rsk)")->required();
  report->add_option("--table", rep_table, "hara|tara|assets|trace")->required();
  report->add_option("--format", rep_format, "md|csv|json")->required();
  report->add_option("--matrix", rep_matrix, "Risk matrix config file");
  report->add_option("-o,--output", rep_out, "Output file (default: stdout)");
  report->add_flag("--force", rep_force, "Render even if lint errors exist");

  std::string asil_s, asil_e, asil_c;
  auto* asil = app.add_subcommand("asil", "Look up the ASIL for an S/E/C combination");
  asil->add_option("--severity", asil_s, "S0..S3")->required();
  asil->add_option("--exposure", asil_e, "E0..E4")->required();
  asil->add_option("--controllability", asil_c, "C0..C3")->required();

  std::string risk_impact, risk_feasibility, risk_matrix;
  auto* risk = app.add_subcommand("risk", "Look up the risk level for impact x feasibility");
  risk->add_option("--impact", risk_impact, "low|medium|high")->required();
  risk->add_option("--feasibility", risk_feasibility, "low|medium|high")->required();
  risk->add_option("--matrix", risk_matrix, "Risk matrix config file");

  std::string wi_file, wi_matrix;
  std::vector<std::string> wi_sets;
  auto* what_if_cmd = app.add_subcommand("what-if", "Re-rate under hypothetical field changes");
  what_if_cmd->add_option("file", wi_file, "Risk model file (.rsk)")->required();
  what_if_cmd->add_option("--set", wi_sets, "<id>.<field>=<value> (repeatable)")->required();
  what_if_cmd->add_option("--matrix", wi_matrix, "Risk matrix config file");

  std::string std_limitation, std_id;
  auto* standards = app.add_subcommand("standards", "Query the standards coverage catalog");
  auto* lim_opt = standards->add_option("--limitation", std_limitation, "Limitation name or letter");
  auto* id_opt = standards->add_option("--id", std_id, "Standard id, e.g. \"ISO 26262\"");
  lim_opt->excludes(id_opt);

  std::string fmt_file;
  bool fmt_write = false;
  auto* fmt = app.add_subcommand("fmt", "Print or rewrite the canonical form");
  fmt->add_option("file", fmt_file, "Risk model file (.rsk)")->required();
  fmt->add_flag("--write", fmt_write, "Rewrite the file in place");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (check->parsed()) return cmd_check(check_files, check_matrix);
  if (report->parsed())
    return cmd_report(rep_file, rep_table, rep_format, rep_matrix, rep_out, rep_force);
  if (asil->parsed()) return cmd_asil(asil_s, asil_e, asil_c);
  if (risk->parsed()) return cmd_risk(risk_impact, risk_feasibility, risk_matrix);
  if (what_if_cmd->parsed()) return cmd_what_if(wi_file, wi_sets, wi_matrix);
  if (standards->parsed()) {
    if (std_limitation.empty() && std_id.empty()) {
      std::cerr << "error: standards requires --limitation or --id\n";
      return kExitUsage;
    }
    return cmd_standards(std_limitation, std_id);
  }
  if (fmt->parsed()) return cmd_fmt(fmt_file, fmt_write);
  return kExitUsage;
}
