#pragma once

#include <string>

#include "tgr/dpo.hpp"
#include "tgr/rules.hpp"
#include "tgr/term_graph.hpp"

namespace tgr {

/// One digraph. Nodes are labelled `id:op`, `id:⊥var` (variable) or `id:⊥`
/// (bottom); edges carry the child index; the point, if any, is doubled.
std::string graph_to_dot(const TermGraph& g, const std::string& name,
                         const NodeId* point = nullptr, const std::set<NodeId>* bottoms = nullptr);
std::string graph_to_dot(const RationalTerm& t, const std::string& name);

/// L, K and R as clusters with dashed morphism edges for l and r.
std::string rule_to_dot(const EvaluationRule& p);

/// The full diagram L ← K → R over G ← D → H: six clusters and the morphism
/// edges of l, r, g, k, d, h and b.
std::string derivation_to_dot(const DirectDerivation& dd);

}  // namespace tgr
