#pragma once

#include <map>
#include <set>
#include <vector>

#include "tgr/term_graph.hpp"

namespace tgr {

/// Pairs variable nodes of the first term with variable nodes of the second
/// that denote the same variable. Unlisted variable nodes correspond by name.
using VariableCorrespondence = std::map<NodeId, NodeId>;

/// U[a] = U[b]. Bottom nodes of either side match each other only.
bool bisim_equal(const RationalTerm& a, const RationalTerm& b,
                 const VariableCorrespondence& vars = {});

/// U[a] ≤ U[b] in the approximation order.
bool rational_approx_leq(const RationalTerm& a, const RationalTerm& b,
                         const VariableCorrespondence& vars = {});

struct Minimized {
  TermGraph graph;
  /// Every input node to its class representative (the smallest id of the class).
  std::map<NodeId, NodeId> map;
};

/// Quotient by the largest bisimulation. Only labelled nodes are merged.
Minimized minimize(const TermGraph& g);

/// Same for a rational term; its bottom nodes are merged into one.
RationalTerm minimize(const RationalTerm& t);

struct GraphOfTerms {
  TermGraph graph;
  /// Class of each input term, in input order.
  std::vector<NodeId> points;
  std::set<NodeId> bottoms;
  /// For each input, its nodes to their classes.
  std::vector<std::map<NodeId, NodeId>> node_maps;

  RationalTerm term(std::size_t i) const { return RationalTerm(graph, points.at(i), bottoms); }
};

/// G[T]: one node per distinct subterm of the inputs. Variable nodes with
/// the same name denote the same variable and are shared; all bottoms share
/// one node. Labelled nodes get fresh ids in breadth-first order.
GraphOfTerms graph_of_terms(const std::vector<RationalTerm>& terms);

/// Graph isomorphism ignoring ids.
bool is_isomorphic(const TermGraph& a, const TermGraph& b);
/// Isomorphism of whole graphs that maps point to point and bottoms to bottoms.
bool is_isomorphic(const RationalTerm& a, const RationalTerm& b);

}  // namespace tgr
