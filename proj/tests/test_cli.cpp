//===- test_cli.cpp - End-to-end command-line tests --------------------------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string &args) {
  std::string cmd = std::string(TERMCANON_BIN) + " " + args + " 2>/dev/null";
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

size_t count_occurrences(const std::string &hay, const std::string &needle) {
  size_t count = 0;
  for (size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++count;
  return count;
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

const std::string kPaperRules = std::string(TERMCANON_RULES_DIR) +
                                "/paper.rules";

} // namespace

TEST_CASE("eval computes wrapped arithmetic") {
  RunResult r = run("eval --expr 'const i8 200 + const i8 100'");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "i8 44\n");

  RunResult p = run("eval --expr 'p0:i8 - p1:i8' --params 'i8 3,i8 4'");
  CHECK(p.exit_code == 0);
  CHECK(p.out == "i8 -1\n");

  RunResult leaf = run("eval --expr 'leaf 7:i8' --leaf '7=i8 5'");
  CHECK(leaf.out == "i8 5\n");

  RunResult undef = run("eval --expr 'p0:i8 + p1:i8'");
  CHECK(undef.exit_code == 0);
  CHECK(undef.out == "undefined(BadIndex)\n");
}

TEST_CASE("optimize-term reduces the walkthrough to p1") {
  RunResult r = run("optimize-term --rules " + kPaperRules +
                    " --expr '((p0:i32 - p1:i32) + p1:i32) - (p0:i32 - "
                    "p1:i32)'");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "p1:i32\n");
}

TEST_CASE("verify passes all shipped rules") {
  RunResult r = run("verify --rules " + kPaperRules + " --json /tmp/tc_v.json");
  CHECK(r.exit_code == 0);
  CHECK(count_occurrences(r.out, ": PASS(") == 9);
  CHECK(r.out.find("all rules passed (9 rule(s))") != std::string::npos);

  std::ifstream json("/tmp/tc_v.json");
  std::stringstream ss;
  ss << json.rdbuf();
  CHECK(ss.str().find("\"all_passed\": true") != std::string::npos);
}

TEST_CASE("verify reports five passes on the conditional phase alone") {
  write_file("/tmp/tc_conditional.rules",
             "phase ConditionalCanon {\n"
             "  NegateCond: ((!c) ? t : f) |-> (c ? f : t);\n"
             "  TrueCond: (true ? t : f) |-> t;\n"
             "  FalseCond: (false ? t : f) |-> f;\n"
             "  BranchEqual: (c ? x : x) |-> x;\n"
             "  LessCond: ((u < v) ? t : f) |-> t when StampUnder(u, v);\n"
             "}\n");
  RunResult r = run("verify --rules /tmp/tc_conditional.rules");
  CHECK(r.exit_code == 0);
  CHECK(count_occurrences(r.out, ": PASS(") == 5);
}

TEST_CASE("verify output is byte-identical under a fixed seed") {
  RunResult a = run("verify --rules " + kPaperRules + " --seed 7");
  RunResult b = run("verify --rules " + kPaperRules + " --seed 7");
  CHECK(a.out == b.out);
}

TEST_CASE("check-termination rejects the commute rule") {
  write_file("/tmp/tc_commute.rules",
             "phase Commute { AddCommute: x + y |-> y + x; }\n");
  RunResult r = run("check-termination --rules /tmp/tc_commute.rules");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("RULE AddCommute: FAIL") != std::string::npos);

  RunResult ok = run("check-termination --rules " + kPaperRules);
  CHECK(ok.exit_code == 0);
  CHECK(count_occurrences(ok.out, ": PASS") == 9);
}

TEST_CASE("an unchecked rule is admitted loudly") {
  write_file("/tmp/tc_unchecked.rules",
             "phase Commute { unchecked AddCommute: x + y |-> y + x; }\n");
  RunResult r = run("check-termination --rules /tmp/tc_unchecked.rules");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("UNCHECKED") != std::string::npos);
}

TEST_CASE("verify fails with exit 1 on an unsound rule") {
  write_file("/tmp/tc_bad.rules", "phase Bad { Drop: x + y |-> x; }\n");
  RunResult r = run("verify --rules /tmp/tc_bad.rules");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("RULE Drop: FAIL") != std::string::npos);
}

TEST_CASE("graph commands round-trip through documents") {
  RunResult build = run("graph-build --expr '(p0:i8 * p0:i8) + (p0:i8 * "
                        "p0:i8)' --out /tmp/tc_g.json");
  CHECK(build.exit_code == 0);
  CHECK(build.out == "root: 2\n");

  RunResult opt = run("graph-optimize --graph " +
                      std::string(TERMCANON_FIXTURES_DIR) +
                      "/shared_sub_chain.json --rules " + kPaperRules +
                      " --check --out /tmp/tc_g2.json");
  CHECK(opt.exit_code == 0);
  CHECK(opt.out.find("refinement: REFINED") != std::string::npos);

  RunResult dot = run("graph-export --graph /tmp/tc_g2.json");
  CHECK(dot.exit_code == 0);
  CHECK(dot.out.find("style=dashed") != std::string::npos);

  RunResult single = run("graph-optimize --graph " +
                         std::string(TERMCANON_FIXTURES_DIR) +
                         "/shared_sub_chain.json --rules " + kPaperRules +
                         " --node 2 --out /tmp/tc_g3.json");
  CHECK(single.exit_code == 0);
  CHECK(single.out.find("node 2 -> ref 4") != std::string::npos);
}

TEST_CASE("extract emits a rule file and a report") {
  RunResult r = run("extract " + std::string(TERMCANON_FIXTURES_DIR) +
                    "/ConditionalOpts.java --out /tmp/tc_extracted.rules "
                    "--json /tmp/tc_extract.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("3 comment(s), 3 parsed, 0 failure(s), 1 duplicate") !=
        std::string::npos);

  RunResult v = run("verify --rules /tmp/tc_extracted.rules");
  CHECK(v.exit_code == 0);
  CHECK(count_occurrences(v.out, ": PASS(") == 3);
}

TEST_CASE("demo walks the shared-graph example") {
  RunResult r = run("demo --out /tmp");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("step 2: p1:i32") != std::string::npos);
  CHECK(r.out.find("root resolves to node 5") != std::string::npos);
  CHECK(r.out.find("refinement: REFINED") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("verify").exit_code == 2);
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("").exit_code == 2);
}

TEST_CASE("bad inputs exit with 1") {
  write_file("/tmp/tc_syntax.rules", "phase P { R: x +");
  CHECK(run("verify --rules /tmp/tc_syntax.rules").exit_code == 1);
  CHECK(run("eval --expr 'const i8 1 +'").exit_code == 1);
  CHECK(run("graph-export --graph /nonexistent.json").exit_code == 1);
}
