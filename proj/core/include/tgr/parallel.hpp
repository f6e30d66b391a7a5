#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tgr/rules.hpp"
#include "tgr/term.hpp"
#include "tgr/term_graph.hpp"

namespace tgr {

/// (w, R): rule R applies at occurrence w.
struct Redex {
  Occurrence at;
  std::string rule;

  friend bool operator==(const Redex&, const Redex&) = default;
  /// Length-lexicographic on the occurrence, then by rule name.
  friend std::strong_ordering operator<=>(const Redex& a, const Redex& b) {
    if (auto c = a.at <=> b.at; c != 0) return c;
    return a.rule.compare(b.rule) <=> 0;
  }
  std::string to_string() const { return "(" + at.to_string() + "," + rule + ")"; }
};

using FiniteParallelRedex = std::set<Redex>;

/// Φ = {(O(π), rule) | π a path from the carrier's point to `target`}.
struct RationalRedexSet {
  RationalTerm carrier;
  NodeId target;
  std::string rule;

  const NodeId& start() const { return carrier.point(); }
  /// Walks the carrier along w.
  bool contains(const Occurrence& w) const;
  bool finite() const;
};

// ----------------------------------------------------------- finite terms

/// All (w, R) with R's lhs matching t/w on every operator position.
std::set<Redex> find_redexes(const Term& t, const TRS& trs);
bool is_redex(const Term& t, const Redex& r, const TRS& trs);

/// t[w ← rσ]. A rational rhs is unraveled to `rhs_depth` below w.
/// Throws InputError when `r` is not a redex of t.
Term reduce(const Term& t, const Redex& r, const TRS& trs,
            std::size_t rhs_depth = static_cast<std::size_t>(-1));

/// Δ\Δ'. Throws InfiniteResidualError when Δ is nested below Δ' and Δ''s
/// rule copies a variable infinitely often.
std::set<Redex> residuals(const Redex& d, const Redex& by, const TRS& trs);

enum class DevelopmentOrder { kOutermostFirst, kInnermostFirst, kRandom };

struct DevelopmentOptions {
  DevelopmentOrder order = DevelopmentOrder::kOutermostFirst;
  std::uint64_t seed = 0;
  std::size_t rhs_depth = static_cast<std::size_t>(-1);
  /// Redexes of the input whose residuals are reported alongside the result.
  std::set<Redex> tracked;
};

template <class T>
struct Development {
  T result;
  std::vector<Redex> steps;
  std::set<Redex> tracked_residuals;
};

/// Contracts residuals of Φ until none is left.
Development<Term> complete_development(const Term& t, const FiniteParallelRedex& phi,
                                       const TRS& trs, const DevelopmentOptions& options = {});

// --------------------------------------------------------- rational terms

/// Binds each lhs variable to the node it matches, if the lhs matches at n.
std::optional<std::map<std::string, NodeId>> match_at_node(const Term& lhs, const TermGraph& g,
                                                           const NodeId& n);

std::set<Redex> find_redexes(const RationalTerm& t, const TRS& trs, std::size_t max_length);

/// The path to Δ.at is unfolded into fresh nodes and the rhs graph is spliced
/// in with its variables bound to the matched nodes. Garbage is dropped.
RationalTerm reduce(const RationalTerm& t, const Redex& r, const TRS& trs);

Development<RationalTerm> complete_development(const RationalTerm& t,
                                               const FiniteParallelRedex& phi, const TRS& trs,
                                               const DevelopmentOptions& options = {});

/// Common reduct of two finite parallel reductions of t.
struct Join {
  Term t3;
  FiniteParallelRedex psi;        // Φ\Φ', applied after Φ'
  FiniteParallelRedex psi_prime;  // Φ'\Φ, applied after Φ
  Term via_phi;                   // t after Φ
  Term via_phi_prime;             // t after Φ'
};

/// Throws EngineError when the two sides disagree.
Join join_parallel(const Term& t, const FiniteParallelRedex& phi,
                   const FiniteParallelRedex& phi_prime, const TRS& trs);

// ------------------------------------------------------------ the oracle

/// First `count` occurrences of Φ in length-lexicographic order.
std::vector<Occurrence> enumerate_occurrences(const RationalRedexSet& phi, std::size_t count);

/// t_i: the unraveling of t truncated at `depth` with ⊥ at every w_j, j > i
/// (1-based). The enumeration must be prefix-respecting and `depth` must be
/// at least |w_j| + lhs_height for every j ≤ i.
Term chain_term(const RationalTerm& t, const std::vector<Occurrence>& enumeration, std::size_t i,
                std::size_t depth, std::size_t lhs_height);

struct OracleOptions {
  /// Chain index to develop up to; 0 picks every occurrence the source depth can hold.
  std::size_t approximants = 0;
  /// Output depth D.
  std::size_t depth = 16;
  /// Source truncation depth; 0 picks a collapse-aware default from `depth`.
  std::size_t source_depth = 0;
  /// Largest number of Φ occurrences the oracle will enumerate.
  std::size_t budget = 20000;
  /// When set, the enumeration is a random prefix-respecting order.
  std::optional<std::uint64_t> shuffle_seed;
  /// Record every index rather than a checkpoint subset.
  bool record_all = false;
  /// When non-empty, one flag per redex set: flagged sets are developed
  /// first and the residuals of the others afterwards.
  std::vector<bool> first_phase;
};

struct OracleReport {
  std::vector<Redex> enumeration;
  /// Recorded chain indices with their t_i, |Φ_i| and d_i.
  std::vector<std::size_t> indices;
  std::vector<Term> t;
  std::vector<std::size_t> phi_sizes;
  std::vector<Term> d;
  Term limit;
  bool monotone = true;
  std::size_t source_depth = 0;
  std::size_t depth = 0;

  std::string to_text() const;
};

/// Source depth used when OracleOptions::source_depth is 0.
std::size_t default_source_depth(std::size_t depth, std::size_t lhs_height);

/// Develops the approximating chain of the union of the given redex sets,
/// which must share the carrier's graph and point. Throws BudgetError when
/// more than `budget` occurrences would be needed, InfiniteResidualError for
/// infinite-copying rules and EngineError when the chain conditions fail.
OracleReport infinite_parallel_reduce(const RationalTerm& t,
                                      const std::vector<RationalRedexSet>& phis, const TRS& trs,
                                      const OracleOptions& options = {});

}  // namespace tgr
