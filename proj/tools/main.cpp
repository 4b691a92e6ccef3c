//===- main.cpp - termcanon command-line tool ------------------------------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "canon/extract.hpp"
#include "canon/graph_io.hpp"
#include "canon/parse.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace canon;

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

std::vector<unsigned> parse_width_list(const std::string &text) {
  std::vector<unsigned> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int w = std::stoi(item);
    if (w < 1 || w > 64)
      throw std::runtime_error("width out of range: " + item);
    out.push_back((unsigned)w);
  }
  if (out.empty())
    throw std::runtime_error("empty width list");
  return out;
}

struct CheckFlags {
  std::string widths = "1,2,4";
  std::string sample_widths = "8,32,64";
  unsigned samples = 256;
  unsigned depth = 2;
  uint64_t seed = 1;

  void attach(CLI::App *cmd) {
    cmd->add_option("--widths", widths,
                    "comma-separated widths enumerated exhaustively");
    cmd->add_option("--sample-widths", sample_widths,
                    "comma-separated widths checked by sampling");
    cmd->add_option("--samples", samples, "random samples per width");
    cmd->add_option("--depth", depth, "max instantiation depth");
    cmd->add_option("--seed", seed, "RNG seed");
  }

  CheckConfig config() const {
    CheckConfig cfg;
    cfg.exhaustive_widths = parse_width_list(widths);
    cfg.sample_widths = parse_width_list(sample_widths);
    cfg.samples_per_width = samples;
    cfg.max_instantiation_depth = depth;
    cfg.rng_seed = seed;
    return cfg;
  }
};

ParsedRules load_rules(const std::string &path) {
  ParsedRules rules = parse_rules(read_file(path));
  for (const auto &w : rules.warnings)
    std::cerr << "warning: " << w << "\n";
  return rules;
}

std::vector<Phase> select_phases(ParsedRules &rules,
                                 const std::string &phase_name) {
  if (phase_name.empty())
    return rules.phases;
  for (auto &p : rules.phases)
    if (p.name == phase_name)
      return {p};
  throw std::runtime_error("no phase named '" + phase_name + "'");
}

/// Termination gate for commands that execute phases. Rules failing the
/// check are fatal unless marked `unchecked`, which is reported loudly.
bool gate_termination(const std::vector<Phase> &phases) {
  bool ok = true;
  for (const auto &phase : phases)
    for (const auto &rule : phase.rules) {
      TerminationVerdict v = check_termination(rule, phase.measure);
      if (v.decreases)
        continue;
      if (rule.unchecked) {
        std::cerr << "warning: rule " << rule.name
                  << " is UNCHECKED and has no termination proof: "
                  << v.describe() << "\n";
      } else {
        std::cerr << "error: rule " << rule.name
                  << " fails the termination check: " << v.describe() << "\n";
        ok = false;
      }
    }
  return ok;
}

EvalContext parse_context(const std::string &params_text,
                          const std::vector<std::string> &leaf_bindings) {
  EvalContext ctx;
  if (!params_text.empty()) {
    std::stringstream ss(params_text);
    std::string item;
    while (std::getline(ss, item, ','))
      ctx.params.push_back(parse_value(item));
  }
  for (const auto &b : leaf_bindings) {
    size_t eq = b.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("--leaf expects <id>=<value>, e.g. 7='i32 5'");
    ctx.method_state[(uint32_t)std::stoul(b.substr(0, eq))] =
        parse_value(b.substr(eq + 1));
  }
  return ctx;
}

nlohmann::ordered_json report_json(const std::vector<RuleReport> &reports) {
  nlohmann::ordered_json out;
  out["rules"] = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto &r : reports) {
    nlohmann::ordered_json jr;
    jr["name"] = r.name;
    jr["unchecked"] = r.unchecked;
    jr["termination"] = r.termination.describe();
    switch (r.soundness.kind()) {
    case Verdict::Kind::VerifiedBounded:
      jr["soundness"] = {{"verdict", "VerifiedBounded"},
                         {"contexts", r.soundness.contexts_checked()}};
      break;
    case Verdict::Kind::Counterexample:
      jr["soundness"] = {{"verdict", "Counterexample"},
                         {"witness", r.soundness.counterexample().to_string()}};
      break;
    case Verdict::Kind::Inapplicable:
      jr["soundness"] = {{"verdict", "Inapplicable"},
                         {"reason", r.soundness.reason()}};
      break;
    }
    jr["passed"] = r.passed();
    all &= r.passed();
    out["rules"].push_back(std::move(jr));
  }
  out["all_passed"] = all;
  return out;
}

Graph demo_graph() {
  // Maximal-sharing graph of ((x - y) + y) - (x - y), x = p0, y = p1.
  Graph g;
  Stamp s = Stamp::integer_full(4);
  g.set(4, Node::parameter(0), s);
  g.set(5, Node::parameter(1), s);
  g.set(3, Node::binary(BinaryOp::Sub, 4, 5), s);
  g.set(2, Node::binary(BinaryOp::Add, 3, 5), s);
  g.set(1, Node::binary(BinaryOp::Sub, 2, 3), s);
  return g;
}

void print_graph(const Graph &g) {
  for (const auto &[id, entry] : g.nodes()) {
    const Node &n = entry.first;
    std::cout << "  " << id << ": " << kind_name(n);
    if (n.kind == Node::Kind::Constant)
      std::cout << " " << n.value.to_string();
    if (n.kind == Node::Kind::Parameter)
      std::cout << " " << n.index;
    if (!n.inputs.empty()) {
      std::cout << " (";
      for (size_t i = 0; i < n.inputs.size(); ++i)
        std::cout << (i ? ", " : "") << n.inputs[i];
      std::cout << ")";
    }
    std::cout << "\n";
  }
}

int run(int argc, char **argv) {
  CLI::App app{"term rewriting, bounded verification and term-graph "
               "canonicalization for fixed-width integer expressions"};
  app.require_subcommand(1);

  // eval
  auto *eval_cmd = app.add_subcommand("eval", "evaluate an expression");
  std::string eval_expr, eval_params;
  std::vector<std::string> eval_leaves;
  eval_cmd->add_option("--expr", eval_expr, "expression text")->required();
  eval_cmd->add_option("--params", eval_params,
                       "comma-separated parameter values, e.g. 'i8 3,i8 4'");
  eval_cmd->add_option("--leaf", eval_leaves, "leaf binding <id>=<value>");

  // optimize-term
  auto *opt_cmd = app.add_subcommand("optimize-term",
                                     "rewrite an expression to normal form");
  std::string opt_rules, opt_expr, opt_phase;
  opt_cmd->add_option("--rules", opt_rules, "rule file")->required();
  opt_cmd->add_option("--expr", opt_expr, "expression text")->required();
  opt_cmd->add_option("--phase", opt_phase, "apply only the named phase");

  // graph-build
  auto *gb_cmd = app.add_subcommand("graph-build",
                                    "build a maximally-shared graph");
  std::string gb_expr, gb_out;
  gb_cmd->add_option("--expr", gb_expr, "expression text")->required();
  gb_cmd->add_option("--out", gb_out, "output graph document");

  // graph-optimize
  auto *go_cmd = app.add_subcommand("graph-optimize",
                                    "rewrite a graph with a rule file");
  std::string go_graph, go_rules, go_out, go_phase;
  int64_t go_node = -1;
  bool go_check = false;
  go_cmd->add_option("--graph", go_graph, "input graph document")->required();
  go_cmd->add_option("--rules", go_rules, "rule file")->required();
  go_cmd->add_option("--node", go_node, "rewrite only this node id");
  go_cmd->add_option("--phase", go_phase, "apply only the named phase");
  go_cmd->add_option("--out", go_out, "output graph document");
  go_cmd->add_flag("--check", go_check,
                   "check input-vs-output graph refinement afterwards");
  CheckFlags go_flags;
  go_flags.attach(go_cmd);

  // graph-export
  auto *ge_cmd = app.add_subcommand("graph-export", "export a graph to DOT");
  std::string ge_graph, ge_out;
  ge_cmd->add_option("--graph", ge_graph, "input graph document")->required();
  ge_cmd->add_option("--out", ge_out, "output DOT file");

  // verify
  auto *v_cmd = app.add_subcommand(
      "verify", "check termination and bounded soundness of every rule");
  std::string v_rules, v_json;
  v_cmd->add_option("--rules", v_rules, "rule file")->required();
  v_cmd->add_option("--json", v_json, "write a machine-readable report here");
  CheckFlags v_flags;
  v_flags.attach(v_cmd);

  // check-termination
  auto *ct_cmd = app.add_subcommand("check-termination",
                                    "check only the measure obligations");
  std::string ct_rules;
  ct_cmd->add_option("--rules", ct_rules, "rule file")->required();

  // extract
  auto *ex_cmd = app.add_subcommand(
      "extract", "harvest `// veriopt:` comments into a rule file");
  std::vector<std::string> ex_paths;
  std::string ex_out, ex_phase, ex_json;
  ex_cmd->add_option("paths", ex_paths, "source files to scan")->required();
  ex_cmd->add_option("--out", ex_out, "write the rule file here");
  ex_cmd->add_option("--phase-name", ex_phase,
                     "group all rules into one phase of this name");
  ex_cmd->add_option("--json", ex_json, "write a machine-readable report here");

  // demo
  auto *demo_cmd = app.add_subcommand(
      "demo", "walk through a shared-graph rewrite end to end");
  std::string demo_out = ".";
  demo_cmd->add_option("--out", demo_out, "directory for DOT output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  if (eval_cmd->parsed()) {
    TermPtr e = parse_expr(eval_expr);
    EvalContext ctx = parse_context(eval_params, eval_leaves);
    std::cout << evaluate(ctx, *e).to_string() << "\n";
    return 0;
  }

  if (opt_cmd->parsed()) {
    ParsedRules rules = load_rules(opt_rules);
    std::vector<Phase> phases = select_phases(rules, opt_phase);
    if (!gate_termination(phases))
      return 1;
    TermPtr e = parse_expr(opt_expr);
    std::cout << to_dsl(*optimize_term(phases, e)) << "\n";
    return 0;
  }

  if (gb_cmd->parsed()) {
    TermPtr e = parse_expr(gb_expr);
    auto [g, root] = insert_term(Graph{}, e);
    std::string doc = save_graph(g);
    if (gb_out.empty()) {
      std::cerr << "root: " << root << "\n";
      std::cout << doc;
    } else {
      write_file(gb_out, doc);
      std::cout << "root: " << root << "\n";
    }
    return 0;
  }

  if (go_cmd->parsed()) {
    Graph g = load_graph(read_file(go_graph));
    ParsedRules rules = load_rules(go_rules);
    std::vector<Phase> phases = select_phases(rules, go_phase);
    if (!gate_termination(phases))
      return 1;
    Graph before = g;
    size_t rewrites = 0;
    if (go_node >= 0) {
      RewriteResult r = rewrite_at(g, (NodeId)go_node, phases);
      if (r.changed) {
        std::cout << "node " << go_node << " -> ref " << r.target << "\n";
        ++rewrites;
      }
      g = std::move(r.graph);
    } else {
      for (int pass = 0; pass < 64; ++pass) {
        bool changed = false;
        std::vector<NodeId> ids;
        for (const auto &[id, entry] : g.nodes())
          ids.push_back(id);
        for (NodeId id : ids) {
          RewriteResult r = rewrite_at(g, id, phases);
          if (r.changed) {
            std::cout << "node " << id << " -> ref " << r.target << "\n";
            ++rewrites;
            changed = true;
          }
          g = std::move(r.graph);
        }
        if (!changed)
          break;
      }
    }
    std::cout << rewrites << " rewrite(s)\n";
    std::string doc = save_graph(g);
    if (go_out.empty())
      std::cout << doc;
    else
      write_file(go_out, doc);
    if (go_check) {
      GraphRefinementVerdict v =
          check_graph_refinement(before, g, go_flags.config());
      std::cout << "refinement: " << v.to_string() << "\n";
      if (!v.refined())
        return 1;
    }
    return 0;
  }

  if (ge_cmd->parsed()) {
    Graph g = load_graph(read_file(ge_graph));
    std::string dot = dot_export(g);
    if (ge_out.empty())
      std::cout << dot;
    else
      write_file(ge_out, dot);
    return 0;
  }

  if (v_cmd->parsed()) {
    ParsedRules rules = load_rules(v_rules);
    std::vector<RuleReport> reports =
        verify_phases(rules.phases, v_flags.config());
    bool all = true;
    for (const auto &r : reports) {
      std::cout << report_line(r) << "\n";
      all &= r.passed();
    }
    std::cout << (all ? "all rules passed" : "some rules FAILED") << " ("
              << reports.size() << " rule(s))\n";
    if (!v_json.empty())
      write_file(v_json, report_json(reports).dump(2) + "\n");
    return all ? 0 : 1;
  }

  if (ct_cmd->parsed()) {
    ParsedRules rules = load_rules(ct_rules);
    bool all = true;
    for (const auto &phase : rules.phases)
      for (const auto &rule : phase.rules) {
        TerminationVerdict v = check_termination(rule, phase.measure);
        std::cout << "RULE " << rule.name << ": ";
        if (v.decreases)
          std::cout << "PASS (measure decreases)\n";
        else if (rule.unchecked)
          std::cout << "UNCHECKED (admitted without proof) " << v.describe()
                    << "\n";
        else {
          std::cout << "FAIL " << v.describe() << "\n";
          all = false;
        }
      }
    return all ? 0 : 1;
  }

  if (ex_cmd->parsed()) {
    ExtractionResult r = extract(ex_paths, ex_phase);
    if (ex_out.empty()) {
      std::cout << r.rule_file_text;
      std::cerr << stats_table(r.report);
    } else {
      write_file(ex_out, r.rule_file_text);
      std::cout << stats_table(r.report);
    }
    for (const auto &w : r.report.duplicate_warnings)
      std::cerr << "warning: " << w << "\n";
    if (!ex_json.empty())
      write_file(ex_json, report_to_json(r.report));
    return 0;
  }

  if (demo_cmd->parsed()) {
    ParsedRules rs = parse_rules(
        "phase Inverse { InverseLeftSub: (x - y) + y |-> x; }\n"
        "phase Redundant { RedundantSubtract: x - (x - y) |-> y; }\n");
    const Phase &inverse = rs.phases[0];
    const Phase &redundant = rs.phases[1];
    std::vector<Phase> both{inverse, redundant};

    std::cout << "== term rewriting ==\n";
    TermPtr t0 =
        parse_expr("((p0:i32 - p1:i32) + p1:i32) - (p0:i32 - p1:i32)");
    std::cout << "input:  " << to_dsl(*t0) << "\n";
    TermPtr t1 = optimize_term(inverse, t0);
    std::cout << "step 1: " << to_dsl(*t1) << "   [InverseLeftSub]\n";
    TermPtr t2 = optimize_term(redundant, t1);
    std::cout << "step 2: " << to_dsl(*t2) << "   [RedundantSubtract]\n";

    std::cout << "== shared-graph rewriting ==\n";
    Graph g0 = demo_graph();
    std::cout << "initial graph: root 1 is " << to_dsl(*extract_term(g0, 1))
              << "\n";
    print_graph(g0);
    write_file(demo_out + "/demo_initial.dot", dot_export(g0));
    RewriteResult r1 = rewrite_at(g0, 2, std::span<const Phase>(both));
    std::cout << "rewrite at node 2 -> ref " << r1.target << ", root 1 is now "
              << to_dsl(*extract_term(r1.graph, 1)) << "\n";
    print_graph(r1.graph);
    write_file(demo_out + "/demo_after_first.dot", dot_export(r1.graph));
    RewriteResult r2 = rewrite_at(r1.graph, 1, std::span<const Phase>(both));
    std::cout << "rewrite at node 1 -> ref " << r2.target << ", root 1 is now "
              << to_dsl(*extract_term(r2.graph, 1)) << "\n";
    print_graph(r2.graph);
    write_file(demo_out + "/demo_final.dot", dot_export(r2.graph));
    std::cout << "root resolves to node " << resolve(r2.graph, 1) << "\n";

    CheckConfig cfg;
    GraphRefinementVerdict v = check_graph_refinement(g0, r2.graph, cfg);
    std::cout << "refinement: " << v.to_string() << "\n";
    std::cout << "DOT files written to " << demo_out << "\n";
    return v.refined() ? 0 : 1;
  }

  return 2;
}

} // namespace

int main(int argc, char **argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const GraphError &e) {
    std::cerr << "graph error: " << e.what() << "\n";
    return 1;
  } catch (const RuleError &e) {
    std::cerr << "rule error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
