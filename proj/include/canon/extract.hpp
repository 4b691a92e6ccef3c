//===- extract.hpp - Harvesting annotated rewrite rules ---------*- C++ -*-===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Scans source files for line comments of the form
//
//   // veriopt: <Name>: <lhs> |-> <rhs> [when <cond>]
//
// and emits a rule file in the phase grammar, one phase per source file,
// together with per-file statistics. No language parsing: plain text,
// single-line comments only.
//
//===----------------------------------------------------------------------===//

#ifndef CANON_EXTRACT_HPP
#define CANON_EXTRACT_HPP

#include "canon/rules.hpp"

#include <optional>
#include <string>
#include <vector>

namespace canon {

struct ExtractedRule {
  std::string source_file;
  size_t line = 0;
  std::string name;     // verbatim from the comment
  std::string raw_text; // comment payload, trimmed at the ends only
  std::optional<RewriteRule> parsed;
  std::string error; // set when parsing failed
};

struct FileExtraction {
  std::string path;
  std::string phase_name;
  bool readable = true;
  std::string read_error;
  std::vector<ExtractedRule> rules;
};

struct ExtractionReport {
  size_t files_scanned = 0;
  size_t comments_found = 0;
  size_t rules_parsed = 0;
  size_t parse_failures = 0;
  std::vector<FileExtraction> files; // normalized by path
  std::vector<std::string> duplicate_warnings;
};

struct ExtractionResult {
  std::string rule_file_text;
  ExtractionReport report;
};

/// Scan the given files. Per-line parse failures and unreadable files are
/// recorded, never fatal. When phase_name_override is non-empty all rules
/// are grouped into a single phase of that name.
ExtractionResult extract(const std::vector<std::string> &paths,
                         const std::string &phase_name_override = "");

/// Extraction over in-memory text, for tests and for idempotence checks.
FileExtraction extract_text(const std::string &path, const std::string &text);

/// Human-readable per-file table plus a totals row.
std::string stats_table(const ExtractionReport &report);

/// Machine-readable report.
std::string report_to_json(const ExtractionReport &report);

} // namespace canon

#endif // CANON_EXTRACT_HPP
