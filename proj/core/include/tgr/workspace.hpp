#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tgr/rules.hpp"
#include "tgr/term_graph.hpp"

namespace tgr {

struct NamedGraph {
  std::string name;
  TermGraph graph;
  std::optional<NodeId> root;
  std::set<NodeId> bottoms;

  /// Throws InputError when the graph has no root.
  RationalTerm pointed() const;
  RationalTerm pointed_at(const NodeId& n) const { return RationalTerm(graph, n, bottoms); }
};

struct WorkspaceConfig {
  std::size_t depth = 16;
  std::size_t approximants = 0;
  std::uint64_t seed = 0;
  std::size_t cases = 200;
};

/// Everything declared by a set of workspace files.
///
///   sig f/1 g/1 a/0
///   graph G { n: f(n); root n; }
///   rule Rf: f(x) -> g(x)
///   rule Ro: f(x) -> @G.n
///   config depth = 32;
struct Workspace {
  Signature sig;
  std::vector<NamedGraph> graphs;
  TRS trs;
  TGRS tgrs;
  /// Rules whose rhs was given as a graph reference.
  std::map<std::string, std::pair<std::string, NodeId>> rhs_refs;
  WorkspaceConfig config;
  /// Orthogonality of the rule set, computed at load.
  bool orthogonal = true;
  std::vector<std::string> orthogonality_problems;

  const NamedGraph* find_graph(const std::string& name) const;
  const NamedGraph& graph(const std::string& name) const;
  void add_graph(NamedGraph g);
  /// Adds the rule to both the TRS and, through G[R], the TGRS.
  void add_rule(RewriteRule rule);
  /// Recomputes the orthogonality flag.
  void refresh();
};

/// Parses and validates; `files` holds (name, text) pairs read in order.
Workspace parse_workspace(const std::vector<std::pair<std::string, std::string>>& files);
Workspace parse_workspace(std::string_view text, const std::string& file = "<input>");
/// Reads the files from disk.
Workspace load_workspace(const std::vector<std::string>& paths);

std::string print_graph(const NamedGraph& g);
std::string print_workspace(const Workspace& w);

}  // namespace tgr
