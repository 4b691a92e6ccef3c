//===- graph.cpp - Shared term-graph IR ------------------------------------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "canon/graph.hpp"

#include <algorithm>

namespace canon {

Node Node::constant(Value v) {
  assert(!v.is_undef());
  Node n;
  n.kind = Kind::Constant;
  n.value = v;
  return n;
}

Node Node::parameter(uint32_t index) {
  Node n;
  n.kind = Kind::Parameter;
  n.index = index;
  return n;
}

Node Node::leaf_marker() {
  Node n;
  n.kind = Kind::LeafMarker;
  return n;
}

Node Node::unary(UnaryOp op, NodeId arg) {
  Node n;
  n.kind = Kind::Unary;
  n.uop = op;
  n.inputs = {arg};
  return n;
}

Node Node::binary(BinaryOp op, NodeId left, NodeId right) {
  Node n;
  n.kind = Kind::Binary;
  n.bop = op;
  n.inputs = {left, right};
  return n;
}

Node Node::conditional(NodeId cond, NodeId t, NodeId f) {
  Node n;
  n.kind = Kind::Conditional;
  n.inputs = {cond, t, f};
  return n;
}

Node Node::ref(NodeId target) {
  Node n;
  n.kind = Kind::Ref;
  n.inputs = {target};
  return n;
}

bool Node::same_shape(const Node &o) const {
  if (kind != o.kind || inputs != o.inputs)
    return false;
  switch (kind) {
  case Kind::Constant:
    return value == o.value;
  case Kind::Parameter:
    return index == o.index;
  case Kind::Unary:
    return uop == o.uop;
  case Kind::Binary:
    return bop == o.bop;
  default:
    return true;
  }
}

const Node *Graph::node(NodeId id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second.first;
}

const Stamp *Graph::stamp(NodeId id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second.second;
}

NodeId Graph::add(Node n, Stamp s) {
  NodeId id = next_id_++;
  nodes_.emplace(id, Entry{std::move(n), s});
  return id;
}

void Graph::set(NodeId id, Node n, Stamp s) {
  nodes_[id] = Entry{std::move(n), s};
  next_id_ = std::max(next_id_, id + 1);
}

NodeId resolve(const Graph &g, NodeId n) {
  std::set<NodeId> seen;
  NodeId cur = n;
  for (;;) {
    const Node *node = g.node(cur);
    if (!node)
      throw GraphError(GraphError::Code::UnknownNode,
                       "node " + std::to_string(cur) + " is not in the graph",
                       {cur});
    if (node->kind != Node::Kind::Ref)
      return cur;
    if (!seen.insert(cur).second)
      throw GraphError(GraphError::Code::CyclicRef,
                       "ref cycle through node " + std::to_string(cur), {cur});
    cur = node->inputs[0];
  }
}

namespace {

TermPtr extract_rec(const Graph &g, NodeId n, std::vector<NodeId> &path,
                    std::set<NodeId> &on_path,
                    std::map<NodeId, TermPtr> &memo) {
  NodeId id = resolve(g, n);
  if (auto it = memo.find(id); it != memo.end())
    return it->second;
  if (!on_path.insert(id).second) {
    path.push_back(id);
    throw GraphError(GraphError::Code::CyclicGraph,
                     "evaluation cycle at node " + std::to_string(id), path);
  }
  path.push_back(id);
  const Node &node = *g.node(id);
  const Stamp &stamp = *g.stamp(id);

  TermPtr out;
  switch (node.kind) {
  case Node::Kind::Constant:
    out = Term::constant(node.value);
    break;
  case Node::Kind::Parameter:
    out = Term::parameter(node.index, stamp);
    break;
  case Node::Kind::LeafMarker:
    out = Term::leaf(id, stamp);
    break;
  case Node::Kind::Unary:
    out = Term::unary(node.uop, extract_rec(g, node.inputs[0], path, on_path, memo));
    break;
  case Node::Kind::Binary: {
    TermPtr l = extract_rec(g, node.inputs[0], path, on_path, memo);
    TermPtr r = extract_rec(g, node.inputs[1], path, on_path, memo);
    out = Term::binary(node.bop, std::move(l), std::move(r));
    break;
  }
  case Node::Kind::Conditional: {
    TermPtr c = extract_rec(g, node.inputs[0], path, on_path, memo);
    TermPtr t = extract_rec(g, node.inputs[1], path, on_path, memo);
    TermPtr f = extract_rec(g, node.inputs[2], path, on_path, memo);
    out = Term::conditional(std::move(c), std::move(t), std::move(f));
    break;
  }
  case Node::Kind::Ref:
    assert(false && "resolved id cannot be a Ref");
    break;
  }
  on_path.erase(id);
  path.pop_back();
  memo.emplace(id, out);
  return out;
}

} // namespace

TermPtr extract_term(const Graph &g, NodeId n) {
  std::vector<NodeId> path;
  std::set<NodeId> on_path;
  std::map<NodeId, TermPtr> memo;
  return extract_rec(g, n, path, on_path, memo);
}

std::optional<NodeId> find_matching(const Graph &g, const Node &node,
                                    const Stamp &stamp,
                                    const std::set<NodeId> &forbidden) {
  assert(node.kind != Node::Kind::Ref);
  for (const auto &[id, entry] : g.nodes()) {
    if (forbidden.contains(id))
      continue;
    const Node &stored = entry.first;
    if (stored.kind != node.kind || !(entry.second == stamp))
      continue;
    Node normalized = stored;
    for (NodeId &in : normalized.inputs)
      in = resolve(g, in);
    if (normalized.same_shape(node))
      return id;
  }
  return std::nullopt;
}

namespace {

NodeId insert_rec(Graph &g, const TermPtr &e,
                  const std::set<NodeId> &forbidden) {
  Node node;
  Stamp stamp;

  switch (e->kind()) {
  case TermKind::Constant:
    node = Node::constant(e->value());
    stamp = constant_as_stamp(e->value());
    break;
  case TermKind::Parameter:
    node = Node::parameter(e->index());
    stamp = e->stamp();
    break;
  case TermKind::Leaf: {
    // Leaves reference pre-existing nodes; they are never allocated here.
    if (!g.contains(e->index()))
      throw GraphError(GraphError::Code::LeafNotPresent,
                       "leaf term references node " +
                           std::to_string(e->index()) +
                           " which is not in the graph",
                       {e->index()});
    NodeId id = resolve(g, e->index());
    if (g.node(id)->kind != Node::Kind::LeafMarker)
      throw GraphError(GraphError::Code::LeafNotPresent,
                       "leaf term references node " + std::to_string(id) +
                           " which is not a leaf node",
                       {id});
    if (!(*g.stamp(id) == e->stamp()))
      throw GraphError(GraphError::Code::StampMismatch,
                       "leaf term stamp " + e->stamp().to_string() +
                           " does not match node " + std::to_string(id) +
                           " stamp " + g.stamp(id)->to_string(),
                       {id});
    return id;
  }
  case TermKind::Unary: {
    NodeId a = insert_rec(g, e->child(0), forbidden);
    node = Node::unary(e->unary_op(), a);
    stamp = infer_stamp(*e);
    break;
  }
  case TermKind::Binary: {
    NodeId l = insert_rec(g, e->child(0), forbidden);
    NodeId r = insert_rec(g, e->child(1), forbidden);
    node = Node::binary(e->binary_op(), l, r);
    stamp = infer_stamp(*e);
    break;
  }
  case TermKind::Conditional: {
    NodeId c = insert_rec(g, e->child(0), forbidden);
    NodeId t = insert_rec(g, e->child(1), forbidden);
    NodeId f = insert_rec(g, e->child(2), forbidden);
    node = Node::conditional(c, t, f);
    stamp = infer_stamp(*e);
    break;
  }
  default:
    throw GraphError(GraphError::Code::Malformed,
                     "only ground terms can be inserted into a graph");
  }

  if (auto existing = find_matching(g, node, stamp, forbidden))
    return *existing;
  return g.add(std::move(node), stamp);
}

} // namespace

std::pair<Graph, NodeId> insert_term(const Graph &g, const TermPtr &e,
                                     const std::set<NodeId> &forbidden) {
  assert(e && e->is_ground());
  Graph out = g;
  NodeId root = insert_rec(out, e, forbidden);
  return {std::move(out), root};
}

EvalResult graph_eval(const Graph &g, NodeId n, const EvalContext &ctx) {
  return evaluate(ctx, *extract_term(g, n));
}

std::set<NodeId> ancestors_of(const Graph &g, NodeId n) {
  std::map<NodeId, std::vector<NodeId>> users;
  for (const auto &[id, entry] : g.nodes())
    for (NodeId in : entry.first.inputs)
      users[in].push_back(id);

  std::set<NodeId> seen{n};
  std::vector<NodeId> work{n};
  while (!work.empty()) {
    NodeId cur = work.back();
    work.pop_back();
    for (NodeId u : users[cur])
      if (seen.insert(u).second)
        work.push_back(u);
  }
  return seen;
}

RewriteResult rewrite_at(const Graph &g, NodeId n,
                         std::span<const Phase> phases) {
  TermPtr before = extract_term(g, n);
  TermPtr after = optimize_term(phases, before);
  if (struct_eq(before, after))
    return {g, false, n};

  // Reuse is restricted to nodes that cannot reach n; installing the Ref
  // then cannot close a cycle.
  std::set<NodeId> forbidden = ancestors_of(g, n);
  auto [g2, root] = insert_term(g, after, forbidden);
  Stamp original = *g2.stamp(n);
  g2.set(n, Node::ref(root), original);
  return {std::move(g2), true, root};
}

RewriteResult rewrite_at(const Graph &g, NodeId n, const Phase &phase) {
  return rewrite_at(g, n, std::span<const Phase>(&phase, 1));
}

std::string GraphRefinementVerdict::to_string() const {
  switch (kind) {
  case Kind::Refined:
    return "REFINED(" + std::to_string(nodes_checked) + " nodes, " +
           std::to_string(contexts_checked) + " contexts)";
  case Kind::DomainViolation: {
    std::string s = "DOMAIN VIOLATION: missing ids";
    for (NodeId id : missing_ids)
      s += " " + std::to_string(id);
    return s;
  }
  case Kind::NotRefined:
    return "NOT REFINED at node " + std::to_string(failed_node) + ": " +
           node_verdict.counterexample().to_string();
  }
  return "?";
}

GraphRefinementVerdict check_graph_refinement(const Graph &g1, const Graph &g2,
                                              const CheckConfig &cfg) {
  GraphRefinementVerdict out;
  for (const auto &[id, entry] : g1.nodes())
    if (!g2.contains(id))
      out.missing_ids.push_back(id);
  if (!out.missing_ids.empty()) {
    out.kind = GraphRefinementVerdict::Kind::DomainViolation;
    return out;
  }

  for (const auto &[id, entry] : g1.nodes()) {
    TermPtr e1 = extract_term(g1, id);
    TermPtr e2 = extract_term(g2, id);
    Verdict v = refines(e1, e2, cfg);
    if (v.kind() == Verdict::Kind::Counterexample) {
      out.kind = GraphRefinementVerdict::Kind::NotRefined;
      out.failed_node = id;
      out.node_verdict = std::move(v);
      return out;
    }
    ++out.nodes_checked;
    if (v.kind() == Verdict::Kind::VerifiedBounded)
      out.contexts_checked += v.contexts_checked();
  }
  out.kind = GraphRefinementVerdict::Kind::Refined;
  return out;
}

} // namespace canon
