#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tgr/rules.hpp"
#include "tgr/term.hpp"
#include "tgr/term_graph.hpp"
#include "tgr/workspace.hpp"

namespace tgr {

using Rng = std::mt19937_64;

/// Upper bounds for the generators.
struct RandomSizes {
  std::size_t operators = 4;
  int max_arity = 2;
  std::size_t nodes = 8;
  std::size_t rules = 3;
  /// Height bound for generated lhs and finite rhs.
  std::size_t rule_height = 3;
  /// Height bound for generated terms.
  std::size_t term_height = 5;
  /// Probability that a graph node is left empty.
  double empty_node_rate = 0.1;
  /// Probability that a rule gets a cyclic rhs.
  double rational_rhs_rate = 0.25;
};

/// Draw in [0, n). n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);
bool coin(Rng& rng, double p);

/// Per-case seed derived from a suite seed, a stream tag and a case index.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index);

/// Operators named a, b, c, ... for constants and f, g, h, ... otherwise;
/// at least one constant and at least one non-constant.
Signature random_signature(Rng& rng, const RandomSizes& sizes);

/// Well-formed graph over `sig` with between 1 and sizes.nodes nodes named
/// `<prefix>0`, `<prefix>1`, ... Empty nodes only appear with
/// sizes.empty_node_rate > 0.
TermGraph random_graph(Rng& rng, const Signature& sig, const RandomSizes& sizes,
                       const std::string& prefix = "n");

/// Total term of height ≤ `height` over `sig` and the given variable names.
Term random_term(Rng& rng, const Signature& sig, std::size_t height,
                 const std::vector<std::string>& vars = {});

/// Valid rule whose lhs is a linear pattern over `sig`. The rhs is finite
/// unless `allow_rational` and a coin flip say otherwise; a cyclic rhs never
/// copies a variable infinitely often.
RewriteRule random_rule(Rng& rng, const Signature& sig, const std::string& name,
                        const RandomSizes& sizes, bool allow_rational = true);

/// Up to sizes.rules rules, generated one at a time and kept only when the
/// set stays orthogonal. Names are R0, R1, ...
std::vector<RewriteRule> random_orthogonal_rules(Rng& rng, const Signature& sig,
                                                 const RandomSizes& sizes,
                                                 bool allow_rational = true);

/// Signature, rules and one rooted graph `G`. The graph is biased towards
/// containing lhs instances so that matches exist.
Workspace random_workspace(Rng& rng, const RandomSizes& sizes, bool allow_rational = true);

}  // namespace tgr
