//===- graph_io.cpp - Graph documents and DOT export ------------------------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "canon/graph_io.hpp"

#include <json.hpp>

#include <map>

namespace canon {

namespace {

using json = nlohmann::ordered_json;

const std::map<std::string, UnaryOp> kUnaryKinds = {
    {"AbsNode", UnaryOp::Abs},
    {"NegateNode", UnaryOp::Neg},
    {"NotNode", UnaryOp::Not},
    {"LogicNegationNode", UnaryOp::LogicNegate},
};

const std::map<std::string, BinaryOp> kBinaryKinds = {
    {"AddNode", BinaryOp::Add},
    {"SubNode", BinaryOp::Sub},
    {"MulNode", BinaryOp::Mul},
    {"AndNode", BinaryOp::And},
    {"OrNode", BinaryOp::Or},
    {"XorNode", BinaryOp::Xor},
    {"LeftShiftNode", BinaryOp::LeftShift},
    {"RightShiftNode", BinaryOp::RightShiftSigned},
    {"UnsignedRightShiftNode", BinaryOp::RightShiftUnsigned},
    {"IntegerLessThanNode", BinaryOp::IntegerLessThan},
    {"IntegerEqualsNode", BinaryOp::IntegerEquals},
};

[[noreturn]] void malformed(const std::string &msg) {
  throw GraphError(GraphError::Code::Malformed, msg);
}

json stamp_to_json(const Stamp &s) {
  json j;
  switch (s.kind()) {
  case Stamp::Kind::Integer:
    j["type"] = "int";
    j["width"] = s.width();
    j["lo"] = s.lo();
    j["hi"] = s.hi();
    break;
  case Stamp::Kind::Void:
    j["type"] = "void";
    break;
  case Stamp::Kind::Illegal:
    j["type"] = "illegal";
    break;
  }
  return j;
}

Stamp stamp_from_json(const json &j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    malformed("stamp must be an object with a \"type\"");
  std::string type = j["type"];
  if (type == "void")
    return Stamp::void_stamp();
  if (type == "illegal")
    return Stamp::illegal();
  if (type != "int")
    malformed("unknown stamp type '" + type + "'");
  if (!j.contains("width") || !j["width"].is_number_unsigned())
    malformed("integer stamp needs an unsigned \"width\"");
  uint64_t w = j["width"];
  if (w < 1 || w > 64)
    malformed("stamp width must be in 1..64");
  if (!j.contains("lo") || !j.contains("hi") || !j["lo"].is_number_integer() ||
      !j["hi"].is_number_integer())
    malformed("integer stamp needs integer \"lo\" and \"hi\"");
  int64_t lo = j["lo"], hi = j["hi"];
  if (lo > hi || lo < min_signed((unsigned)w) || hi > max_signed((unsigned)w))
    malformed("stamp bounds out of range for width " + std::to_string(w));
  return Stamp::integer((unsigned)w, lo, hi);
}

void check_acyclic(const Graph &g) {
  // Three-color DFS over all data-flow edges (Ref targets included).
  std::map<NodeId, int> color; // 0 white, 1 gray, 2 black
  for (const auto &[start, entry] : g.nodes()) {
    (void)entry;
    if (color[start] != 0)
      continue;
    std::vector<std::pair<NodeId, size_t>> stack{{start, 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto &[id, next] = stack.back();
      const Node &node = *g.node(id);
      if (next >= node.inputs.size()) {
        color[id] = 2;
        stack.pop_back();
        continue;
      }
      NodeId in = node.inputs[next++];
      if (color[in] == 1) {
        std::vector<NodeId> path;
        for (const auto &[sid, _] : stack)
          path.push_back(sid);
        path.push_back(in);
        throw GraphError(GraphError::Code::CyclicGraph,
                         "cycle through node " + std::to_string(in), path);
      }
      if (color[in] == 0) {
        color[in] = 1;
        stack.push_back({in, 0});
      }
    }
  }
}

} // namespace

std::string kind_name(const Node &n) {
  switch (n.kind) {
  case Node::Kind::Constant:
    return "ConstantNode";
  case Node::Kind::Parameter:
    return "ParameterNode";
  case Node::Kind::LeafMarker:
    return "LeafNode";
  case Node::Kind::Conditional:
    return "ConditionalNode";
  case Node::Kind::Ref:
    return "RefNode";
  case Node::Kind::Unary:
    for (const auto &[name, op] : kUnaryKinds)
      if (op == n.uop)
        return name;
    break;
  case Node::Kind::Binary:
    for (const auto &[name, op] : kBinaryKinds)
      if (op == n.bop)
        return name;
    break;
  }
  return "?";
}

Graph load_graph(const std::string &text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded())
    malformed("document is not valid JSON");
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
    malformed("document must be {\"nodes\": [...]}");

  Graph g;
  for (const json &jn : doc["nodes"]) {
    if (!jn.is_object() || !jn.contains("id") ||
        !jn["id"].is_number_unsigned() || !jn.contains("kind") ||
        !jn["kind"].is_string())
      malformed("each node needs an unsigned \"id\" and a string \"kind\"");
    uint64_t id64 = jn["id"];
    if (id64 > UINT32_MAX - 1)
      malformed("node id out of range");
    NodeId id = (NodeId)id64;
    if (g.contains(id))
      malformed("duplicate node id " + std::to_string(id));
    std::string kind = jn["kind"];

    std::vector<NodeId> inputs;
    if (jn.contains("inputs")) {
      if (!jn["inputs"].is_array())
        malformed("\"inputs\" must be an array");
      for (const json &ji : jn["inputs"]) {
        if (!ji.is_number_unsigned())
          malformed("input ids must be unsigned integers");
        uint64_t in = ji;
        if (in > UINT32_MAX - 1)
          malformed("input id out of range");
        inputs.push_back((NodeId)in);
      }
    }
    if (!jn.contains("stamp"))
      malformed("node " + std::to_string(id) + " has no stamp");
    Stamp stamp = stamp_from_json(jn["stamp"]);

    auto need_arity = [&](size_t n) {
      if (inputs.size() != n)
        malformed("node " + std::to_string(id) + " (" + kind + ") needs " +
                  std::to_string(n) + " inputs");
    };

    Node node;
    if (kind == "ConstantNode") {
      need_arity(0);
      if (!jn.contains("value") || !jn["value"].is_object())
        malformed("ConstantNode needs a \"value\" object");
      const json &jv = jn["value"];
      if (!jv.contains("width") || !jv["width"].is_number_unsigned() ||
          !jv.contains("value") || !jv["value"].is_number_integer())
        malformed("constant value needs \"width\" and integer \"value\"");
      uint64_t w = jv["width"];
      if (w < 1 || w > 64)
        malformed("constant width must be in 1..64");
      int64_t x = jv["value"];
      Value v = Value::of_signed((unsigned)w, x);
      if (v.as_signed() != x && !(x >= 0 && (uint64_t)x == v.bits()))
        malformed("constant value out of range for width " + std::to_string(w));
      node = Node::constant(v);
    } else if (kind == "ParameterNode") {
      need_arity(0);
      if (!jn.contains("index") || !jn["index"].is_number_unsigned())
        malformed("ParameterNode needs an unsigned \"index\"");
      node = Node::parameter((uint32_t)(uint64_t)jn["index"]);
    } else if (kind == "LeafNode") {
      need_arity(0);
      node = Node::leaf_marker();
    } else if (kind == "ConditionalNode") {
      need_arity(3);
      node = Node::conditional(inputs[0], inputs[1], inputs[2]);
    } else if (kind == "RefNode") {
      need_arity(1);
      node = Node::ref(inputs[0]);
    } else if (auto it = kUnaryKinds.find(kind); it != kUnaryKinds.end()) {
      need_arity(1);
      node = Node::unary(it->second, inputs[0]);
    } else if (auto it2 = kBinaryKinds.find(kind); it2 != kBinaryKinds.end()) {
      need_arity(2);
      node = Node::binary(it2->second, inputs[0], inputs[1]);
    } else {
      malformed("unknown node kind '" + kind + "'");
    }
    g.set(id, std::move(node), stamp);
  }

  // Closure: every referenced id must be present.
  for (const auto &[id, entry] : g.nodes())
    for (NodeId in : entry.first.inputs)
      if (!g.contains(in))
        throw GraphError(GraphError::Code::ClosureViolation,
                         "node " + std::to_string(id) + " references node " +
                             std::to_string(in) + " which is not in the graph",
                         {id, in});
  check_acyclic(g);
  return g;
}

std::string save_graph(const Graph &g) {
  json doc;
  doc["nodes"] = json::array();
  for (const auto &[id, entry] : g.nodes()) {
    const auto &[node, stamp] = entry;
    json jn;
    jn["id"] = id;
    jn["kind"] = kind_name(node);
    if (node.kind == Node::Kind::Constant) {
      jn["value"] = {{"width", node.value.width()},
                     {"value", node.value.as_signed()}};
    }
    if (node.kind == Node::Kind::Parameter)
      jn["index"] = node.index;
    jn["inputs"] = node.inputs;
    jn["stamp"] = stamp_to_json(stamp);
    doc["nodes"].push_back(std::move(jn));
  }
  return doc.dump(2) + "\n";
}

std::string dot_export(const Graph &g) {
  std::string out = "digraph ir {\n  node [shape=record];\n";
  for (const auto &[id, entry] : g.nodes()) {
    const Node &node = entry.first;
    out += "  n" + std::to_string(id) + " [label=\"" + std::to_string(id) +
           ": " + kind_name(node) + "\"";
    if (node.kind == Node::Kind::Ref)
      out += ", style=dashed";
    out += "];\n";
  }
  for (const auto &[id, entry] : g.nodes()) {
    const Node &node = entry.first;
    for (size_t i = 0; i < node.inputs.size(); ++i) {
      out += "  n" + std::to_string(id) + " -> n" +
             std::to_string(node.inputs[i]);
      if (node.kind == Node::Kind::Ref)
        out += " [style=dashed]";
      else if (node.inputs.size() > 1)
        out += " [label=\"" + std::to_string(i) + "\"]";
      out += ";\n";
    }
  }
  out += "}\n";
  return out;
}

} // namespace canon
