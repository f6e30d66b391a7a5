#pragma once

#include <string>
#include <vector>

#include "tgr/dpo.hpp"
#include "tgr/parallel.hpp"
#include "tgr/rules.hpp"

namespace tgr {

struct VerifyOptions {
  std::size_t depth = 16;
  /// 0 lets the oracle use every occurrence its source depth holds.
  std::size_t approximants = 0;
  std::size_t source_depth = 0;
  std::size_t budget = 20000;

  OracleOptions oracle() const;
};

/// `STEP <rule> at <node> : <from> => <to>` followed by a `track:` block.
std::string derivation_trace(const DirectDerivation& dd, const std::string& from,
                             const std::string& to);

struct SoundnessReport {
  std::string rule;
  NodeId root_image;
  NodeId node;
  std::string trace;
  std::string phi;
  /// truncate(U_H[tr(n)]σ, D).
  Term left;
  /// The oracle's limit approximant.
  Term right;
  OracleReport oracle;
  bool pass = false;

  std::string to_text() const;
};

/// One graph step against the parallel reduction it induces at node n.
SoundnessReport verify_soundness(const RationalTerm& host, const Match& m, const NodeId& n,
                                 const VerifyOptions& options = {});

struct NormalFormReport {
  bool graph_normal = false;
  bool term_normal = false;
  /// `rule@node` for every match in the graph.
  std::vector<std::string> graph_redexes;
  /// `rule@node` for every reachable node where an unraveled lhs matches.
  std::vector<std::string> term_redexes;

  /// The asserted direction: graph normal form implies term normal form.
  bool pass() const { return !graph_normal || term_normal; }
  /// The term is normal but the graph is not.
  bool converse_fails() const { return term_normal && !graph_normal; }
  std::string to_text() const;
};

NormalFormReport check_weak_normal_form_preservation(const RationalTerm& host, const TGRS& p);

struct CofinalityReport {
  /// The graph result of applying every match, pointed and with bottoms.
  RationalTerm result;
  /// truncate(U_{G'}[tr(point)]σ, D).
  Term expected;
  /// Φ developed first, then the residuals of the rest of U[M].
  Term reached;
  std::size_t steps = 0;
  bool pass = false;

  std::string to_text() const;
};

/// Applies every match of `matches` to the host (in order, each transported
/// along the tracks) and checks that reducing by the sets flagged in `in_phi`
/// and then by the residuals of the others reaches the same prefix.
CofinalityReport check_cofinality_step(const RationalTerm& host, const std::vector<Match>& matches,
                                       const std::vector<bool>& in_phi,
                                       const VerifyOptions& options = {});

struct SequenceReport {
  std::vector<SoundnessReport> steps;
  RationalTerm final_term;
  bool pass = true;
};

/// Up to `k` steps, each at the first match of the current graph, each
/// verified at the current point; bottoms and the point are carried along.
SequenceReport check_derivation_sequence(const RationalTerm& host, const TGRS& p, std::size_t k,
                                         const VerifyOptions& options = {});

}  // namespace tgr
