#include "risklang/dsl.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace risklang;

namespace {

TEST(ParseModel, MinimalModel) {
  const auto parsed = parse_model("item \"x\" { function \"f\" }");
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(parsed.model->item.name, "x");
  ASSERT_EQ(parsed.model->item.functions.size(), 1u);
  EXPECT_EQ(parsed.model->item.functions[0], "f");
  EXPECT_TRUE(parsed.model->assets.empty());
  EXPECT_TRUE(parsed.model->hazards.empty());
  EXPECT_TRUE(parsed.model->threats.empty());
}

TEST(ParseModel, FixtureCounts) {
  const auto parsed = parse_model(testkit::read_file(testkit::fixture_path()));
  ASSERT_TRUE(parsed.ok()) << (parsed.diagnostics.empty() ? "" : parsed.diagnostics[0].message);
  EXPECT_EQ(parsed.model->assets.size(), 3u);
  EXPECT_EQ(parsed.model->hazards.size(), 5u);
  EXPECT_EQ(parsed.model->threats.size(), 9u);
  EXPECT_TRUE(validate_model(*parsed.model).empty());
}

TEST(ParseModel, UnknownEnumLiteralHasSpanInsideToken) {
  const std::string src =
      "item \"x\" { function \"f\" }\n"
      "hazard H1 {\n"
      "  limitation: q\n"
      "  description: \"d\"\n"
      "  severity: S1\n  exposure: E1\n  controllability: C1\n}\n";
  const auto parsed = parse_model(src);
  ASSERT_FALSE(parsed.ok());
  ASSERT_EQ(count_code(parsed.diagnostics, "E-ENUM"), 1u);
  for (const auto& d : parsed.diagnostics) {
    if (d.code != "E-ENUM") continue;
    ASSERT_TRUE(d.span.has_value());
    EXPECT_EQ(d.span->line, 3);
    EXPECT_EQ(d.span->column, 15);
    EXPECT_EQ(d.span->length, 1);
  }
}

TEST(ParseModel, RecoversAtBlockBoundariesToReportMultipleErrors) {
  const std::string src =
      "item \"x\" { function \"f\" }\n"
      "hazard H1 { limitation: q description: \"d\" severity: S1 exposure: E1 "
      "controllability: C1 }\n"
      "threat T1 { asset: A1 limitation: g scenario: \"s\" impact: huge feasibility: low "
      "treatment: reduction }\n";
  const auto parsed = parse_model(src);
  ASSERT_FALSE(parsed.ok());
  EXPECT_EQ(count_code(parsed.diagnostics, "E-ENUM"), 2u);   // both blocks reported
  EXPECT_EQ(count_code(parsed.diagnostics, "E-REF"), 1u);    // A1 undeclared
}

TEST(ParseModel, FieldErrors) {
  const auto dup = parse_model(
      "item \"x\" { function \"f\" }\n"
      "hazard H1 { limitation: g limitation: g description: \"d\" severity: S1 exposure: E1 "
      "controllability: C1 }");
  ASSERT_FALSE(dup.ok());
  EXPECT_EQ(count_code(dup.diagnostics, "E-FIELD"), 1u);

  const auto missing = parse_model(
      "item \"x\" { function \"f\" }\nhazard H1 { limitation: g description: \"d\" }");
  ASSERT_FALSE(missing.ok());
  EXPECT_EQ(count_code(missing.diagnostics, "E-FIELD"), 3u);  // severity/exposure/controllability
}

TEST(ParseModel, SemanticErrorsCarrySpans) {
  const auto parsed = parse_model(
      "item \"x\" { function \"f\" }\n"
      "hazard H1 { limitation: g description: \"d\" severity: S1 exposure: E1 "
      "controllability: C1 }\n"
      "hazard H1 { limitation: g description: \"d\" severity: S1 exposure: E1 "
      "controllability: C1 }\n"
      "link H1 -- T9\n");
  ASSERT_FALSE(parsed.ok());
  for (const auto& d : parsed.diagnostics) EXPECT_TRUE(d.span.has_value()) << d.message;
  EXPECT_EQ(count_code(parsed.diagnostics, "E-DUP"), 1u);
  EXPECT_EQ(count_code(parsed.diagnostics, "E-REF"), 1u);
}

TEST(ParseModel, CaseInsensitiveKeywordsAndCrlf) {
  const auto parsed = parse_model(
      "ITEM \"x\" {\r\n  Function \"f\"\r\n}\r\nHazard H1 {\r\n  Limitation: ROBUSTNESS\r\n"
      "  DESCRIPTION: \"d\"\r\n  severity: s2\r\n  exposure: e3\r\n  controllability: c2\r\n}\r\n");
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(parsed.model->hazards[0].limitation, Limitation::Robustness);
  EXPECT_EQ(parsed.model->hazards[0].severity, SeverityClass::S2);
}

TEST(ParseModel, CommentsAndEmptyStrings) {
  const auto parsed = parse_model("# header\nitem \" \" { function \"f\" } # trailing");
  ASSERT_FALSE(parsed.ok());
  EXPECT_EQ(count_code(parsed.diagnostics, "E-EMPTY"), 1u);
}

TEST(ParseModel, MissingItemIsAnError) {
  const auto parsed = parse_model("# nothing here\n");
  ASSERT_FALSE(parsed.ok());
  EXPECT_EQ(count_code(parsed.diagnostics, "E-FIELD"), 1u);
}

TEST(ParseModel, VersionKeyIsIgnored) {
  const auto parsed = parse_model("version \"1\"\nitem \"x\" { function \"f\" }");
  ASSERT_TRUE(parsed.ok());
}

TEST(ParseModel, Deterministic) {
  const std::string src = testkit::read_file(testkit::fixture_path());
  const auto a = parse_model(src);
  const auto b = parse_model(src);
  ASSERT_TRUE(a.ok());
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(*a.model, *b.model);
}

TEST(RenderCanonical, MinimalModelExactText) {
  RiskModel m;
  m.item = {"x", {"f"}};
  EXPECT_EQ(render_canonical(m), "item \"x\" {\n  function \"f\"\n}\n");
}

TEST(RenderCanonical, EscapesQuotesAndBackslashes) {
  RiskModel m;
  m.item = {"say \"hi\" \\ bye", {"f"}};
  const std::string text = render_canonical(m);
  EXPECT_NE(text.find("\"say \\\"hi\\\" \\\\ bye\""), std::string::npos);
  const auto parsed = parse_model(text);
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(parsed.model->item.name, "say \"hi\" \\ bye");
}

TEST(RenderCanonical, FixtureRoundTrips) {
  const auto parsed = parse_model(testkit::read_file(testkit::fixture_path()));
  ASSERT_TRUE(parsed.ok());
  const auto reparsed = parse_model(render_canonical(*parsed.model));
  ASSERT_TRUE(reparsed.ok());
  EXPECT_EQ(*reparsed.model, canonicalize(*parsed.model));
}

// parse(render(m)) == canonicalize(m) over generated models covering all
// enum variants and awkward string content.
TEST(RoundTripProperty, GeneratedModels) {
  testkit::ModelGenerator gen(20240817);
  for (int i = 0; i < 1200; ++i) {
    const RiskModel m = gen.next();
    const std::string text = render_canonical(m);
    const auto parsed = parse_model(text);
    ASSERT_TRUE(parsed.ok()) << "iteration " << i << ":\n" << text;
    EXPECT_EQ(*parsed.model, canonicalize(m)) << "iteration " << i << ":\n" << text;
  }
}

}  // namespace
