//===- graph_io.hpp - Graph documents and DOT export -------------*- C++ -*-===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Graph document (JSON):
//   {"nodes":[{"id":1,"kind":"AddNode","inputs":[2,3],
//              "stamp":{"type":"int","width":32,"lo":L,"hi":H}}, ...]}
// ConstantNode entries add {"value":{"width":W,"value":<signed>}},
// ParameterNode entries add {"index":N}. save(load(x)) == x on canonical
// documents. DOT: one record per node labeled `id: kind`; Ref nodes and
// Ref edges are dashed.
//
//===----------------------------------------------------------------------===//

#ifndef CANON_GRAPH_IO_HPP
#define CANON_GRAPH_IO_HPP

#include "canon/graph.hpp"

#include <string>

namespace canon {

/// Parse and validate a graph document: unique ids, known kinds, correct
/// arity, closure, acyclicity, well-formed stamps.
Graph load_graph(const std::string &text);

/// Canonical document: ascending ids, fixed key order, two-space indent.
std::string save_graph(const Graph &g);

std::string dot_export(const Graph &g);

/// The document kind name for a node ("AddNode", "RefNode", ...).
std::string kind_name(const Node &n);

} // namespace canon

#endif // CANON_GRAPH_IO_HPP
