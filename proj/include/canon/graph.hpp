//===- graph.hpp - Shared term-graph IR --------------------------*- C++ -*-===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// A graph is a finite map from numeric node ids to (node, stamp) pairs.
// Data-flow reachability is acyclic and every referenced id is present.
// Graphs are values: operations return new graphs and never mutate their
// input; a rewrite never deletes nodes, it installs a Ref indirection at
// the rewritten id.
//
//===----------------------------------------------------------------------===//

#ifndef CANON_GRAPH_HPP
#define CANON_GRAPH_HPP

#include "canon/refine.hpp"

#include <map>
#include <set>
#include <span>
#include <stdexcept>

namespace canon {

using NodeId = uint32_t;

class GraphError : public std::runtime_error {
public:
  enum class Code {
    UnknownNode,
    CyclicRef,
    CyclicGraph,
    ClosureViolation,
    LeafNotPresent,
    StampMismatch,
    Malformed,
  };

  GraphError(Code code, const std::string &msg,
             std::vector<NodeId> path = {})
      : std::runtime_error(msg), code(code), path(std::move(path)) {}

  Code code;
  std::vector<NodeId> path; // offending id chain, when known
};

/// A stored graph node. Lookup misses are reported as null pointers, never
/// as a stored sentinel.
struct Node {
  enum class Kind : uint8_t {
    Constant,
    Parameter,
    LeafMarker,
    Unary,
    Binary,
    Conditional,
    Ref,
  };

  Kind kind = Kind::Constant;
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  Value value;        // Constant
  uint32_t index = 0; // Parameter
  std::vector<NodeId> inputs;

  static Node constant(Value v);
  static Node parameter(uint32_t index);
  static Node leaf_marker();
  static Node unary(UnaryOp op, NodeId arg);
  static Node binary(BinaryOp op, NodeId left, NodeId right);
  static Node conditional(NodeId cond, NodeId t, NodeId f);
  static Node ref(NodeId target);

  /// Kind, payload and input ids all equal.
  bool same_shape(const Node &o) const;

  friend bool operator==(const Node &, const Node &) = default;
};

class Graph {
public:
  using Entry = std::pair<Node, Stamp>;

  const Node *node(NodeId id) const;
  const Stamp *stamp(NodeId id) const;
  bool contains(NodeId id) const { return nodes_.contains(id); }
  size_t node_count() const { return nodes_.size(); }
  NodeId next_id() const { return next_id_; }
  const std::map<NodeId, Entry> &nodes() const { return nodes_; }

  /// Store at a fresh id (next_id), returning it.
  NodeId add(Node n, Stamp s);

  /// Store at a specific id; used by the loader and by rewrites. Grows
  /// next_id as needed.
  void set(NodeId id, Node n, Stamp s);

  friend bool operator==(const Graph &, const Graph &) = default;

private:
  std::map<NodeId, Entry> nodes_;
  NodeId next_id_ = 0;
};

/// Follow Ref indirections to the first non-Ref node.
NodeId resolve(const Graph &g, NodeId n);

/// The unique term represented by the sub-graph at n. Shared nodes
/// duplicate in the term; Refs are transparent; evaluation cycles are
/// detected and reported with the offending id path.
TermPtr extract_term(const Graph &g, NodeId n);

/// Any stored non-Ref node matching kind, payload, resolved inputs and
/// stamp exactly, excluding `forbidden`. Smallest id wins.
std::optional<NodeId> find_matching(const Graph &g, const Node &node,
                                    const Stamp &stamp,
                                    const std::set<NodeId> &forbidden);

/// Insert a term bottom-up with maximal sharing: existing matching nodes
/// are reused (unless forbidden), new nodes are allocated at fresh ids.
/// Constants are stamped with their singleton stamp, composites with the
/// term's inferred stamp. Leaf terms must reference an existing
/// leaf-marker node with the same stamp. Pre-existing nodes are unchanged.
std::pair<Graph, NodeId> insert_term(const Graph &g, const TermPtr &e,
                                     const std::set<NodeId> &forbidden = {});

/// Evaluate the term represented at n.
EvalResult graph_eval(const Graph &g, NodeId n, const EvalContext &ctx);

/// Ids of nodes that can reach n (including n itself).
std::set<NodeId> ancestors_of(const Graph &g, NodeId n);

struct RewriteResult {
  Graph graph;
  bool changed = false;
  NodeId target = 0; // the id n now redirects to, when changed
};

/// Extract the term at n, normalize it with the phases, and if it changed
/// insert the result (reuse restricted to nodes that cannot reach n, so no
/// cycle can form) and replace n by a Ref to the new root, keeping n's
/// original stamp. All other ids are untouched.
RewriteResult rewrite_at(const Graph &g, NodeId n, std::span<const Phase> phases);
RewriteResult rewrite_at(const Graph &g, NodeId n, const Phase &phase);

struct GraphRefinementVerdict {
  enum class Kind { Refined, DomainViolation, NotRefined };

  Kind kind = Kind::Refined;
  std::vector<NodeId> missing_ids; // DomainViolation
  NodeId failed_node = 0;          // NotRefined
  Verdict node_verdict;            // NotRefined
  uint64_t nodes_checked = 0;
  uint64_t contexts_checked = 0;

  bool refined() const { return kind == Kind::Refined; }
  std::string to_string() const;
};

/// g1 is refined by g2: every id of g1 is in g2 and every term g1
/// represents is refined (bounded check) by the term g2 represents at the
/// same id.
GraphRefinementVerdict check_graph_refinement(const Graph &g1, const Graph &g2,
                                              const CheckConfig &cfg);

} // namespace canon

#endif // CANON_GRAPH_HPP
