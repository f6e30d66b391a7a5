#include "tgr/dot.hpp"

#include <sstream>
#include <vector>

namespace tgr {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string node_label(const TermGraph& g, const NodeId& id, const std::set<NodeId>* bottoms) {
  const auto& label = g.label(id);
  if (label) return id + ":" + label->name;
  if (bottoms && bottoms->count(id)) return id + ":⊥";
  return id + ":⊥var";
}

/// Emits nodes and edges with every node id prefixed by `scope`.
void emit_body(std::ostream& os, const TermGraph& g, const std::string& scope,
               const std::string& indent, const NodeId* point, const std::set<NodeId>* bottoms) {
  for (const auto& [id, node] : g.nodes()) {
    os << indent << quote(scope + id) << " [label=" << quote(node_label(g, id, bottoms));
    if (point && *point == id) os << ", peripheries=2";
    os << "];\n";
  }
  for (const auto& [id, node] : g.nodes()) {
    auto succ = g.successors(id);
    for (std::size_t i = 0; i < succ.size(); ++i)
      os << indent << quote(scope + id) << " -> " << quote(scope + succ[i]) << " [label=\""
         << i + 1 << "\"];\n";
  }
}

void emit_cluster(std::ostream& os, const TermGraph& g, const std::string& name,
                  const NodeId* point = nullptr, const std::set<NodeId>* bottoms = nullptr) {
  os << "  subgraph " << quote("cluster_" + name) << " {\n";
  os << "    label=" << quote(name) << ";\n";
  emit_body(os, g, name + "/", "    ", point, bottoms);
  os << "  }\n";
}

void emit_morphism(std::ostream& os, const GraphMorphism& f, const std::string& name,
                   const std::string& from, const std::string& to) {
  for (const auto& [a, b] : f.map)
    os << "  " << quote(from + "/" + a) << " -> " << quote(to + "/" + b)
       << " [style=dashed, constraint=false, color=gray, label=" << quote(name) << "];\n";
}

}  // namespace

std::string graph_to_dot(const TermGraph& g, const std::string& name, const NodeId* point,
                         const std::set<NodeId>* bottoms) {
  std::ostringstream os;
  os << "digraph " << quote(name) << " {\n";
  emit_body(os, g, "", "  ", point, bottoms);
  os << "}\n";
  return os.str();
}

std::string graph_to_dot(const RationalTerm& t, const std::string& name) {
  return graph_to_dot(t.graph(), name, &t.point(), &t.bottoms());
}

std::string rule_to_dot(const EvaluationRule& p) {
  std::ostringstream os;
  os << "digraph " << quote(p.name) << " {\n";
  emit_cluster(os, p.L, "L", &p.root);
  emit_cluster(os, p.K, "K");
  emit_cluster(os, p.R, "R");
  emit_morphism(os, p.l, "l", "K", "L");
  emit_morphism(os, p.r, "r", "K", "R");
  os << "}\n";
  return os.str();
}

std::string derivation_to_dot(const DirectDerivation& dd) {
  const EvaluationRule& p = dd.match.rule;
  std::ostringstream os;
  os << "digraph " << quote(p.name + "@" + dd.match.root_image()) << " {\n";
  emit_cluster(os, p.L, "L", &p.root);
  emit_cluster(os, p.K, "K");
  emit_cluster(os, p.R, "R");
  emit_cluster(os, dd.G(), "G");
  emit_cluster(os, dd.D, "D");
  emit_cluster(os, dd.H, "H");
  emit_morphism(os, p.l, "l", "K", "L");
  emit_morphism(os, p.r, "r", "K", "R");
  emit_morphism(os, dd.match.g, "g", "L", "G");
  emit_morphism(os, dd.k, "k", "K", "D");
  emit_morphism(os, dd.d, "d", "D", "G");
  emit_morphism(os, dd.h, "h", "R", "H");
  emit_morphism(os, dd.b, "b", "D", "H");
  os << "}\n";
  return os.str();
}

}  // namespace tgr
