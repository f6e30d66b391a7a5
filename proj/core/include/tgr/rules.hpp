#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tgr/occurrence.hpp"
#include "tgr/term.hpp"
#include "tgr/term_graph.hpp"

namespace tgr {

/// l → r. The rhs is a rational term whose variable nodes are named by the
/// variable they stand for.
struct RewriteRule {
  std::string name;
  Term lhs;
  RationalTerm rhs;

  static RewriteRule finite(std::string name, Term lhs, const Term& rhs) {
    return RewriteRule{std::move(name), std::move(lhs), RationalTerm::from_term(rhs)};
  }
};

/// Variables of the rhs: its non-bottom empty nodes reachable from the point.
std::set<std::string> rhs_variables(const RewriteRule& rule);

/// Lhs finite, total, linear and not a variable; rhs total and well formed;
/// var(rhs) ⊆ var(lhs). With a signature, every operator must be declared.
CheckResult check_rule(const RewriteRule& rule);
CheckResult check_rule(const RewriteRule& rule, const Signature& sig);

/// A variable of the rhs has infinitely many occurrences: its node is
/// reachable from a cycle that is reachable from the rhs point.
bool is_infinite_copying(const RewriteRule& rule);

/// Facts about a valid rule that the term-side machinery consults often.
struct RuleInfo {
  std::map<std::string, Occurrence> lhs_variable_at;
  /// Occurrences of each variable in the rhs. Empty when infinite_copying.
  std::map<std::string, std::vector<Occurrence>> rhs_variable_at;
  std::size_t lhs_height = 0;
  bool infinite_copying = false;
  /// The rhs is a variable.
  bool collapsing = false;
  /// The rhs unraveling is finite.
  bool rhs_finite = false;
  /// Whole rhs when rhs_finite.
  Term rhs_term;
};

RuleInfo analyze_rule(const RewriteRule& rule);

/// Instance of the rhs, unraveled to `depth`, with variables bound by σ.
Term instantiate_rhs(const RewriteRule& rule, const Substitution& sigma, std::size_t depth);

class TRS {
 public:
  TRS() = default;
  explicit TRS(Signature sig) : sig_(std::move(sig)) {}

  /// Throws InputError on a duplicate name.
  void add(RewriteRule rule);
  const RewriteRule* find(const std::string& name) const;
  const RewriteRule& at(const std::string& name) const;
  const RuleInfo& info(const std::string& name) const;

  const Signature& signature() const { return sig_; }
  Signature& signature() { return sig_; }
  const std::vector<RewriteRule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

 private:
  Signature sig_;
  std::vector<RewriteRule> rules_;
  std::vector<RuleInfo> infos_;
};

/// An lhs of `inner` unifies with the non-variable subterm of `outer`'s lhs
/// at `at` (at ≠ λ when both are the same rule).
struct Overlap {
  std::string outer;
  std::string inner;
  Occurrence at;
};

std::vector<Overlap> find_overlaps(const std::vector<RewriteRule>& rules);
/// Left-linear and non-overlapping.
CheckResult check_orthogonal(const TRS& trs);

/// L ← K → R with L a tree rooted at `root`, K = L with the root emptied,
/// `l` the node-identity inclusion.
struct EvaluationRule {
  std::string name;
  TermGraph L;
  NodeId root;
  TermGraph K;
  TermGraph R;
  GraphMorphism l;
  GraphMorphism r;

  /// Empty nodes of L.
  std::set<NodeId> variable_nodes() const { return L.empty_nodes(); }
};

/// Clauses 1–3 of the evaluation-rule shape plus well-formedness of all
/// three graphs and both morphisms. `r` need only be injective on variable
/// nodes; collapsing rules identify the root with a variable.
CheckResult check_evaluation_rule(const EvaluationRule& p);

/// U[p]: lhs = U_L[root]; rhs = U_R[r(root)] with each variable node r(y)
/// renamed to y.
RewriteRule unravel_rule(const EvaluationRule& p);

/// G[R]. L is the lhs tree: variable nodes are named by their variable and
/// operator nodes by their occurrence (root `o`, child `o_1`, ...). R is
/// G[{rhs, t1..tk}] for lhs f(t1..tk).
EvaluationRule graph_of_rule(const RewriteRule& rule);

/// The lhs of U[p] does not unify with any proper non-variable subterm of itself.
bool check_self_overlap(const EvaluationRule& p);

class TGRS {
 public:
  TGRS() = default;
  explicit TGRS(Signature sig) : sig_(std::move(sig)) {}

  void add(EvaluationRule rule);
  const EvaluationRule* find(const std::string& name) const;
  const EvaluationRule& at(const std::string& name) const;

  const Signature& signature() const { return sig_; }
  Signature& signature() { return sig_; }
  const std::vector<EvaluationRule>& rules() const { return rules_; }

  /// U[P], rules in the same order and under the same names.
  TRS unraveled() const;
  /// Orthogonality of U[P]; computed once.
  bool orthogonal() const;

 private:
  Signature sig_;
  std::vector<EvaluationRule> rules_;
  mutable std::optional<bool> orthogonal_;
};

}  // namespace tgr
