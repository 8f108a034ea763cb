#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "test_support.hpp"

using risklang::testkit::CliResult;
using risklang::testkit::fixture_path;
using risklang::testkit::read_file;
using risklang::testkit::run_cli;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = ::testing::TempDir() + "/" + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

TEST(Cli, AsilLookup) {
  CliResult r = run_cli("asil --severity S3 --exposure E4 --controllability C3");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output, "D\n");
  r = run_cli("asil --severity S0 --exposure E4 --controllability C3");
  EXPECT_EQ(r.output, "QM\n");
  r = run_cli("asil --severity S9 --exposure E4 --controllability C3");
  EXPECT_EQ(r.exit_code, 3);
}

TEST(Cli, RiskLookup) {
  CliResult r = run_cli("risk --impact high --feasibility medium");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output, "High\n");
  r = run_cli("risk --impact low --feasibility high");
  EXPECT_EQ(r.output, "Medium\n");
}

TEST(Cli, RiskLookupWithCustomMatrix) {
  const std::string path = temp_file(
      "flat.conf",
      "low,low,low\nlow,medium,low\nlow,high,low\nmedium,low,low\nmedium,medium,low\n"
      "medium,high,low\nhigh,low,low\nhigh,medium,low\nhigh,high,low\n");
  CliResult r = run_cli("risk --impact high --feasibility high --matrix " + path);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output, "Low\n");
}

TEST(Cli, CheckFixtureEmitsSingleOverrideWarning) {
  CliResult r = run_cli("check " + fixture_path());
  EXPECT_EQ(r.exit_code, 0);
  const auto nl = r.output.find('\n');
  ASSERT_NE(nl, std::string::npos);
  EXPECT_EQ(r.output.substr(nl + 1), "");  // exactly one line
  EXPECT_EQ(r.output.rfind("warning W-OVR ", 0), 0u);
  EXPECT_NE(r.output.find("T-P"), std::string::npos);
}

TEST(Cli, CheckExitCodes) {
  const std::string broken = temp_file("broken.rsk", "item \"x\" {");
  EXPECT_EQ(run_cli("check " + broken).exit_code, 2);

  const std::string erroneous = temp_file(
      "erroneous.rsk",
      "item \"x\" { function \"f\" }\n"
      "hazard H1 { limitation: g description: \"d\" severity: S3 exposure: E4 "
      "controllability: C3 }\n");
  // ASIL D hazard without a safety goal -> lint error (plus coverage warning)
  EXPECT_EQ(run_cli("check " + erroneous).exit_code, 1);

  EXPECT_EQ(run_cli("check /no/such/file.rsk").exit_code, 3);
  EXPECT_EQ(run_cli("frobnicate").exit_code, 3);
}

TEST(Cli, ReportGoesToStdoutAndFile) {
  CliResult r = run_cli("report " + fixture_path() + " --table hara --format csv");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output.rfind("\"Limitation\"", 0), 0u);

  const std::string out_path = ::testing::TempDir() + "/hara.csv";
  CliResult w = run_cli("report " + fixture_path() + " --table hara --format csv -o " + out_path);
  EXPECT_EQ(w.exit_code, 0);
  EXPECT_EQ(w.output, "");  // artifact went to the file, diagnostics to stderr
  EXPECT_EQ(read_file(out_path), r.output);
}

TEST(Cli, ReportRefusesErroneousModelUnlessForced) {
  const std::string erroneous = temp_file(
      "erroneous2.rsk",
      "item \"x\" { function \"f\" }\n"
      "hazard H1 { limitation: g description: \"d\" severity: S3 exposure: E4 "
      "controllability: C3 }\n");
  CliResult refused = run_cli("report " + erroneous + " --table hara --format md");
  EXPECT_EQ(refused.exit_code, 1);
  EXPECT_EQ(refused.output, "");
  CliResult forced = run_cli("report " + erroneous + " --table hara --format md --force");
  EXPECT_EQ(forced.exit_code, 0);
  EXPECT_NE(forced.output.find("| D |"), std::string::npos);
}

TEST(Cli, WhatIfDeltas) {
  CliResult r = run_cli("what-if " + fixture_path() + " --set H-G.exposure=E2");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output, "H-G: D -> B\n");
  r = run_cli("what-if " + fixture_path() + " --set T-R1.feasibility=low");
  EXPECT_EQ(r.output, "T-R1: High -> Medium\n");
  r = run_cli("what-if " + fixture_path() + " --set H-E.exposure=E3");
  EXPECT_EQ(r.output, "");
  EXPECT_EQ(run_cli("what-if " + fixture_path() + " --set Z.exposure=E1").exit_code, 1);
  EXPECT_EQ(run_cli("what-if " + fixture_path() + " --set garbage").exit_code, 3);
}

TEST(Cli, StandardsQueries) {
  CliResult r = run_cli("standards --limitation efficiency");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output, "ISO PAS 8800\nANSI/UL 4600\n");
  r = run_cli("standards --limitation E");
  EXPECT_EQ(r.output, "ISO PAS 8800\nANSI/UL 4600\n");
  r = run_cli("standards --id \"ISO/SAE 21434\"");
  EXPECT_EQ(r.output, "robustness\n");
  r = run_cli("standards --id \"ISO 26262\"");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output, "");
  EXPECT_EQ(run_cli("standards --id \"ISO 9001\"").exit_code, 1);
}

TEST(Cli, FmtIsIdempotent) {
  const std::string path = temp_file("fmt_me.rsk", read_file(fixture_path()));
  EXPECT_EQ(run_cli("fmt " + path + " --write").exit_code, 0);
  const std::string once = read_file(path);
  EXPECT_EQ(run_cli("fmt " + path + " --write").exit_code, 0);
  EXPECT_EQ(read_file(path), once);
  // stdout mode prints the same bytes
  CliResult printed = run_cli("fmt " + path);
  EXPECT_EQ(printed.output, once);
}

}  // namespace
