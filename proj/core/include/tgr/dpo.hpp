#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tgr/parallel.hpp"
#include "tgr/rules.hpp"
#include "tgr/term_graph.hpp"

namespace tgr {

/// An occurrence g: L → host of an evaluation rule.
struct Match {
  EvaluationRule rule;
  GraphMorphism g;

  const TermGraph& host() const { return g.target; }
  /// g(root of L).
  const NodeId& root_image() const { return g(rule.root); }
};

/// All matches, by ascending root image.
std::vector<Match> find_matches(const EvaluationRule& p, const TermGraph& host);
/// The match with the given root image, if any.
std::optional<Match> match_at(const EvaluationRule& p, const TermGraph& host, const NodeId& at);

struct Complement {
  TermGraph D;
  GraphMorphism k;  // K → D
  GraphMorphism d;  // D → host
};

/// D is the host with label and successors removed at the root image.
/// Throws InputError for self-overlapping rules.
Complement pushout_complement(const Match& m);

struct Pushout {
  TermGraph H;
  GraphMorphism h;  // R → H
  GraphMorphism b;  // D → H
};

/// Gluing of R and D along K. A class keeps the id of its labelled D node,
/// else of a D node outside `demoted`, else its smallest D id; classes with
/// no D node get fresh ids h#1, h#2, ... in R-id order. Throws EngineError on
/// a label or successor conflict.
Pushout pushout(const GraphMorphism& r, const GraphMorphism& k,
                const std::set<NodeId>& demoted = {});

struct DirectDerivation {
  Match match;
  TermGraph D;
  GraphMorphism k;
  GraphMorphism d;
  TermGraph H;
  GraphMorphism h;
  GraphMorphism b;
  /// tr = b on nodes.
  std::map<NodeId, NodeId> track;

  const TermGraph& G() const { return match.host(); }
};

DirectDerivation derive(const Match& m);

/// σ: var(H) → var(G) ∪ {⊥} with σ(x) = y when y is a variable of G
/// (not in `host_bottoms`) and tr(y) = x, σ(x) = ⊥ otherwise. Throws
/// EngineError when tr is not injective on variables or sends one to a
/// labelled node.
Substitution track_substitution(const DirectDerivation& dd,
                                const std::set<NodeId>& host_bottoms = {});

/// The pointed result of a derivation on a pointed host: H pointed at
/// tr(point), with the variables σ sends to ⊥ marked as bottoms.
RationalTerm derived_term(const DirectDerivation& dd, const RationalTerm& host);

/// Φ = {(O(π), U[p]) | π a path from n to the root image}.
RationalRedexSet induced_parallel_redex(const Match& m, const NodeId& n);

}  // namespace tgr
