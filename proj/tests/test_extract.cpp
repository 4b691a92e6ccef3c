//===- test_extract.cpp - Annotation harvesting tests -----------------------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "canon/extract.hpp"
#include "canon/parse.hpp"

#include <doctest.h>
#include <fstream>

using namespace canon;

namespace {

const char *kFixture = TERMCANON_FIXTURES_DIR "/ConditionalOpts.java";

} // namespace

TEST_CASE("the conditional fixture yields three rules and one duplicate") {
  ExtractionResult r = extract({kFixture});
  CHECK(r.report.files_scanned == 1);
  CHECK(r.report.comments_found == 3);
  CHECK(r.report.rules_parsed == 3);
  CHECK(r.report.parse_failures == 0);
  REQUIRE(r.report.duplicate_warnings.size() == 1);
  CHECK(r.report.duplicate_warnings[0].find("TrueCond") != std::string::npos);

  // The emitted file re-parses; the duplicate got suffixed.
  ParsedRules parsed = parse_rules(r.rule_file_text);
  REQUIRE(parsed.phases.size() == 1);
  CHECK(parsed.phases[0].name == "ConditionalOpts");
  REQUIRE(parsed.phases[0].rules.size() == 3);
  CHECK(parsed.phases[0].rules[0].name == "NegateCond");
  CHECK(parsed.phases[0].rules[1].name == "TrueCond");
  CHECK(parsed.phases[0].rules[2].name == "TrueCond_2");

  // Names in the extraction record stay verbatim.
  const FileExtraction &fe = r.report.files[0];
  CHECK(fe.rules[1].name == "TrueCond");
  CHECK(fe.rules[2].name == "TrueCond");
  CHECK(fe.rules[2].raw_text == "(false ? t : f) |-> f");
}

TEST_CASE("the full conditional listing also carries a BranchEqual rule") {
  std::string text = std::string("class C {\n") +
                     "  // veriopt: NegateCond: ((!c) ? t : f) |-> (c ? f : t)\n"
                     "  // veriopt: TrueCond: (true ? t : f) |-> t\n"
                     "  // veriopt: TrueCond: (false ? t : f) |-> f\n"
                     "  // veriopt: BranchEqual: (c ? x : x) |-> x\n"
                     "}\n";
  FileExtraction fe = extract_text("Full.java", text);
  CHECK(fe.rules.size() == 4);
  CHECK(fe.rules[3].name == "BranchEqual");
  for (const auto &r : fe.rules)
    CHECK(r.parsed.has_value());
}

TEST_CASE("booleans in annotations become 32-bit 0/1 constants") {
  FileExtraction fe = extract_text(
      "B.java", "// veriopt: TrueCond: (true ? t : f) |-> t\n");
  REQUIRE(fe.rules.size() == 1);
  REQUIRE(fe.rules[0].parsed);
  const TermPtr &cond = fe.rules[0].parsed->lhs->child(0);
  CHECK(cond->kind() == TermKind::Constant);
  CHECK(cond->value() == Value::of(32, 1));
}

TEST_CASE("malformed annotations are recorded, not fatal") {
  FileExtraction fe = extract_text(
      "Broken.java",
      "// veriopt: Broken: x |->\n// veriopt: Fine: x + y |-> y + x\n");
  REQUIRE(fe.rules.size() == 2);
  CHECK_FALSE(fe.rules[0].parsed);
  CHECK(fe.rules[0].line == 1);
  CHECK(!fe.rules[0].error.empty());
  CHECK(fe.rules[1].parsed.has_value());
}

TEST_CASE("files without annotations produce zero counts") {
  FileExtraction fe = extract_text("Plain.java", "int f() { return 0; }\n");
  CHECK(fe.rules.empty());
  ExtractionResult r = extract({});
  CHECK(r.report.files_scanned == 0);
  CHECK(r.report.comments_found == 0);
  CHECK(r.rule_file_text.empty());
}

TEST_CASE("unreadable files get a per-file error entry") {
  ExtractionResult r = extract({"/nonexistent/nowhere.java"});
  REQUIRE(r.report.files.size() == 1);
  CHECK_FALSE(r.report.files[0].readable);
  CHECK(r.report.comments_found == 0);
}

TEST_CASE("re-serialized rules re-parse to identical trees") {
  ExtractionResult r = extract({kFixture});
  for (const auto &fe : r.report.files)
    for (const auto &er : fe.rules) {
      REQUIRE(er.parsed);
      std::string rendered = to_dsl(*er.parsed->lhs) + " |-> " +
                             to_dsl(*er.parsed->rhs);
      RewriteRule again = parse_rule_body(rendered);
      CHECK(struct_eq(er.parsed->lhs, again.lhs));
      CHECK(struct_eq(er.parsed->rhs, again.rhs));
    }
}

TEST_CASE("extraction of the emitted file reproduces the same rules") {
  ExtractionResult first = extract({kFixture});
  ParsedRules parsed = parse_rules(first.rule_file_text);

  // Wrap each emitted rule back into an annotation comment and re-extract.
  std::string wrapped;
  for (const auto &rule : parsed.phases[0].rules)
    wrapped += "// veriopt: " + rule.name + ": " + to_dsl(*rule.lhs) +
               " |-> " + to_dsl(*rule.rhs) + "\n";
  FileExtraction again = extract_text("Wrapped.java", wrapped);
  REQUIRE(again.rules.size() == parsed.phases[0].rules.size());
  for (size_t i = 0; i < again.rules.size(); ++i) {
    REQUIRE(again.rules[i].parsed);
    CHECK(struct_eq(again.rules[i].parsed->lhs, parsed.phases[0].rules[i].lhs));
    CHECK(struct_eq(again.rules[i].parsed->rhs, parsed.phases[0].rules[i].rhs));
  }
}

TEST_CASE("the stats table summarizes counts") {
  ExtractionResult r = extract({kFixture});
  std::string table = stats_table(r.report);
  CHECK(table.find("1 file(s), 3 comment(s), 3 parsed, 0 failure(s), 1 "
                   "duplicate name(s)") != std::string::npos);
  std::string json = report_to_json(r.report);
  CHECK(json.find("\"comments_found\": 3") != std::string::npos);
}

TEST_CASE("multiple files produce one row each plus a total") {
  std::string other = "/tmp/tc_other_opts.java";
  {
    std::ofstream out(other);
    REQUIRE(out.good());
    out << "// veriopt: SubtractSelf: x - x |-> zero_like(x)\n";
  }
  ExtractionResult r = extract({kFixture, other});
  CHECK(r.report.files_scanned == 2);
  CHECK(r.report.comments_found == 4);
  std::string table = stats_table(r.report);
  CHECK(table.find("tc_other_opts.java") != std::string::npos);
  CHECK(table.find("total") != std::string::npos);
  // One phase per file, path-ordered.
  ParsedRules parsed = parse_rules(r.rule_file_text);
  REQUIRE(parsed.phases.size() == 2);
}

TEST_CASE("a phase-name override merges files into one phase") {
  ExtractionResult r = extract({kFixture}, "Merged");
  ParsedRules parsed = parse_rules(r.rule_file_text);
  REQUIRE(parsed.phases.size() == 1);
  CHECK(parsed.phases[0].name == "Merged");
  CHECK(parsed.phases[0].rules.size() == 3);
}
