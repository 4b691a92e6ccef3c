//===- extract.cpp - Harvesting annotated rewrite rules --------------------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "canon/extract.hpp"
#include "canon/parse.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace canon {

namespace {

std::string trim(const std::string &s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos)
    return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool is_ident(const std::string &s) {
  if (s.empty() || (!std::isalpha((unsigned char)s[0]) && s[0] != '_'))
    return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum((unsigned char)c) || c == '_';
  });
}

/// Matches `// veriopt: <Name>: <payload>` anywhere in the line.
std::optional<std::pair<std::string, std::string>>
match_annotation(const std::string &line) {
  size_t pos = line.find("//");
  if (pos == std::string::npos)
    return std::nullopt;
  std::string rest = trim(line.substr(pos + 2));
  const std::string keyword = "veriopt:";
  if (rest.compare(0, keyword.size(), keyword) != 0)
    return std::nullopt;
  rest = trim(rest.substr(keyword.size()));
  size_t colon = rest.find(':');
  if (colon == std::string::npos)
    return std::nullopt;
  std::string name = trim(rest.substr(0, colon));
  std::string payload = trim(rest.substr(colon + 1));
  if (!is_ident(name))
    return std::nullopt;
  return std::make_pair(name, payload);
}

std::string phase_name_for(const std::string &path) {
  size_t slash = path.find_last_of("/\\");
  std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
  size_t dot = stem.find_last_of('.');
  if (dot != std::string::npos && dot > 0)
    stem = stem.substr(0, dot);
  std::string name;
  for (char c : stem)
    name += std::isalnum((unsigned char)c) ? c : '_';
  if (name.empty() || std::isdigit((unsigned char)name[0]))
    name = "P" + name;
  return name;
}

} // namespace

FileExtraction extract_text(const std::string &path, const std::string &text) {
  FileExtraction out;
  out.path = path;
  out.phase_name = phase_name_for(path);

  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto m = match_annotation(line);
    if (!m)
      continue;
    ExtractedRule r;
    r.source_file = path;
    r.line = lineno;
    r.name = m->first;
    r.raw_text = m->second;
    try {
      RewriteRule rule = parse_rule_body(r.raw_text);
      rule.name = r.name;
      r.parsed = std::move(rule);
    } catch (const ParseError &e) {
      r.error = e.what();
    }
    out.rules.push_back(std::move(r));
  }
  return out;
}

ExtractionResult extract(const std::vector<std::string> &paths,
                         const std::string &phase_name_override) {
  ExtractionResult result;
  ExtractionReport &report = result.report;

  std::vector<std::string> sorted = paths;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  for (const std::string &path : sorted) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      FileExtraction fe;
      fe.path = path;
      fe.phase_name = phase_name_for(path);
      fe.readable = false;
      fe.read_error = "cannot open file";
      report.files.push_back(std::move(fe));
      continue;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    report.files.push_back(extract_text(path, buf.str()));
  }

  report.files_scanned = report.files.size();
  for (const auto &fe : report.files)
    for (const auto &r : fe.rules) {
      ++report.comments_found;
      if (r.parsed)
        ++report.rules_parsed;
      else
        ++report.parse_failures;
    }

  // Emit one phase per file (or one merged phase when overridden), with
  // duplicate names warned about and auto-suffixed.
  std::string text;
  auto emit_phase = [&](const std::string &name,
                        const std::vector<const ExtractedRule *> &rules) {
    if (rules.empty())
      return;
    text += "phase " + name + " {\n";
    std::set<std::string> used;
    for (const ExtractedRule *r : rules) {
      std::string rule_name = r->name;
      if (used.count(rule_name)) {
        int suffix = 2;
        while (used.count(r->name + "_" + std::to_string(suffix)))
          ++suffix;
        rule_name = r->name + "_" + std::to_string(suffix);
        report.duplicate_warnings.push_back(
            r->source_file + ":" + std::to_string(r->line) +
            ": duplicate rule name '" + r->name + "' (emitted as '" +
            rule_name + "')");
      }
      used.insert(rule_name);
      const RewriteRule &rule = *r->parsed;
      text += "  " + rule_name + ": " + to_dsl(*rule.lhs) + " |-> " +
              to_dsl(*rule.rhs);
      if (rule.cond && rule.cond->kind != Condition::Kind::True)
        text += " when " + rule.cond->to_string();
      text += ";\n";
    }
    text += "}\n";
  };

  if (!phase_name_override.empty()) {
    std::vector<const ExtractedRule *> all;
    for (const auto &fe : report.files)
      for (const auto &r : fe.rules)
        if (r.parsed)
          all.push_back(&r);
    emit_phase(phase_name_override, all);
  } else {
    for (const auto &fe : report.files) {
      std::vector<const ExtractedRule *> rules;
      for (const auto &r : fe.rules)
        if (r.parsed)
          rules.push_back(&r);
      emit_phase(fe.phase_name, rules);
    }
  }
  result.rule_file_text = std::move(text);
  return result;
}

std::string stats_table(const ExtractionReport &report) {
  std::string out;
  out += "file                                     comments  parsed  failures\n";
  auto row = [&out](const std::string &name, size_t c, size_t p, size_t f) {
    std::string n = name.size() > 40 ? "..." + name.substr(name.size() - 37)
                                     : name;
    out += n;
    out.append(41 > n.size() ? 41 - n.size() : 1, ' ');
    auto col = [&out](size_t v, size_t width) {
      std::string s = std::to_string(v);
      out.append(width > s.size() ? width - s.size() : 1, ' ');
      out += s;
    };
    col(c, 8);
    col(p, 8);
    col(f, 10);
    out += "\n";
  };
  size_t tc = 0, tp = 0, tf = 0;
  for (const auto &fe : report.files) {
    size_t c = fe.rules.size(), p = 0;
    for (const auto &r : fe.rules)
      if (r.parsed)
        ++p;
    size_t f = c - p;
    if (!fe.readable) {
      out += fe.path + "  (unreadable: " + fe.read_error + ")\n";
      continue;
    }
    row(fe.path, c, p, f);
    tc += c;
    tp += p;
    tf += f;
  }
  row("total", tc, tp, tf);
  out += std::to_string(report.files_scanned) + " file(s), " +
         std::to_string(report.comments_found) + " comment(s), " +
         std::to_string(report.rules_parsed) + " parsed, " +
         std::to_string(report.parse_failures) + " failure(s), " +
         std::to_string(report.duplicate_warnings.size()) +
         " duplicate name(s)\n";
  return out;
}

std::string report_to_json(const ExtractionReport &report) {
  nlohmann::ordered_json j;
  j["files_scanned"] = report.files_scanned;
  j["comments_found"] = report.comments_found;
  j["rules_parsed"] = report.rules_parsed;
  j["parse_failures"] = report.parse_failures;
  j["duplicate_warnings"] = report.duplicate_warnings;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto &fe : report.files) {
    nlohmann::ordered_json jf;
    jf["path"] = fe.path;
    jf["phase"] = fe.phase_name;
    jf["readable"] = fe.readable;
    if (!fe.readable)
      jf["error"] = fe.read_error;
    jf["rules"] = nlohmann::ordered_json::array();
    for (const auto &r : fe.rules) {
      nlohmann::ordered_json jr;
      jr["line"] = r.line;
      jr["name"] = r.name;
      jr["text"] = r.raw_text;
      jr["parsed"] = r.parsed.has_value();
      if (!r.parsed)
        jr["error"] = r.error;
      jf["rules"].push_back(std::move(jr));
    }
    j["files"].push_back(std::move(jf));
  }
  return j.dump(2) + "\n";
}

} // namespace canon
