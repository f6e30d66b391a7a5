#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tgr/error.hpp"
#include "tgr/occurrence.hpp"

namespace tgr {

/// A one-sorted ranked alphabet.
class Signature {
 public:
  Signature() = default;

  /// Declares `name` with `arity`. Redeclaring with the same arity is a no-op;
  /// a different arity throws InputError.
  void add(const std::string& name, int arity);
  bool contains(std::string_view name) const;
  std::optional<int> arity(std::string_view name) const;
  const std::map<std::string, int, std::less<>>& operators() const { return ops_; }
  bool empty() const { return ops_.empty(); }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::map<std::string, int, std::less<>> ops_;
};

enum class SymbolKind { kOperator, kVariable };

/// The value of a term at an occurrence.
struct Symbol {
  SymbolKind kind;
  std::string name;
  int arity = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// A finite, possibly partial term. ⊥ is the default-constructed value.
///
/// Terms are immutable trees of shared nodes, so identical subterms produced
/// by unraveling or substitution are stored once and the tree may be
/// exponentially larger than its memory footprint. Operations that walk the
/// term memoize on node identity to stay proportional to the shared size.
/// Operator nodes always carry exactly `arity` argument slots; missing
/// arguments are ⊥.
class Term {
 public:
  Term() = default;

  static Term bottom() { return Term(); }
  static Term variable(std::string name);
  static Term op(std::string name, std::vector<Term> args = {});

  bool is_bottom() const { return node_ == nullptr; }
  bool is_variable() const;
  bool is_operator() const;

  /// Operator or variable name. Must not be called on ⊥.
  const std::string& name() const;
  std::size_t arity() const;
  /// Zero-based argument access.
  const Term& arg(std::size_t i) const;
  std::span<const Term> args() const;

  /// t(w): the symbol at `w`, or nullopt when w ∉ O(t).
  std::optional<Symbol> at(const Occurrence& w) const;

  /// Stable address of the shared root node (nullptr for ⊥); used for memoization.
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    SymbolKind kind;
    std::string name;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

using Substitution = std::map<std::string, Term, std::less<>>;

/// t/w. ⊥ when w ∉ O(t).
Term subterm(const Term& t, const Occurrence& w);

/// t[w ← s]: the occurrences at or below w are taken from s, except that the
/// result is t itself when t/w = ⊥ (replacement never grows a term).
Term replace(const Term& t, const Occurrence& w, const Term& s);

/// Installs s at w even where t/w = ⊥, provided the parent of w is an operator
/// with enough argument slots. Construction helper, not part of the term algebra.
Term graft(const Term& t, const Occurrence& w, const Term& s);

/// t ≤ t2 in the approximation order.
bool approx_leq(const Term& t, const Term& t2);

/// Greatest lower bound: the largest prefix-closed common part.
Term glb(const Term& t, const Term& t2);

/// Least upper bound of a ≤-chain. Throws InputError naming the first adjacent
/// pair that is not ordered.
Term chain_lub(std::span<const Term> chain);

/// Homomorphic extension of σ. Unbound variables are left unchanged.
Term apply_subst(const Term& t, const Substitution& sigma);

/// Restriction to occurrences of length < depth.
Term truncate(const Term& t, std::size_t depth);

/// The unique σ with pattern·σ = t for a linear pattern, if any. Positions of
/// t below pattern variables are copied verbatim, ⊥ included.
std::optional<Substitution> match_linear(const Term& pattern, const Term& t);

/// Occurrence-map view O(t) → Σ ∪ X. Exponential for heavily shared terms.
std::map<Occurrence, Symbol> occurrence_map(const Term& t);
/// Inverse of occurrence_map. Throws InputError when the map is not
/// prefix-closed or violates arities.
Term from_occurrence_map(const std::map<Occurrence, Symbol>& map);

/// Variables occurring in t.
std::set<std::string> variables(const Term& t);
/// Occurrences of every variable (finite terms only; exponential when shared).
std::map<std::string, std::vector<Occurrence>> variable_occurrences(const Term& t);
bool is_linear(const Term& t);
/// No ⊥ below any operator and t itself is not ⊥.
bool is_total(const Term& t);
/// Number of levels: ⊥ → 0, a leaf → 1.
std::size_t height(const Term& t);
/// Number of tree positions, saturating at SIZE_MAX.
std::size_t tree_size(const Term& t);
/// Number of distinct shared nodes.
std::size_t dag_size(const Term& t);

/// Every operator of t is declared in `sig` with a matching arity, and no
/// variable name clashes with an operator name.
CheckResult check_term(const Term& t, const Signature& sig);

/// Term literal: `f(a, _|_, x)`. Constants print without parentheses.
std::string to_string(const Term& t);
/// Same, but elides output after roughly `max_symbols` symbols with "...".
std::string to_string(const Term& t, std::size_t max_symbols);

/// Parses a term literal. Identifiers declared in `sig` are operators (their
/// arity is enforced; constants may omit the parentheses); all other
/// identifiers are variables.
Term parse_term(std::string_view text, const Signature& sig);

}  // namespace tgr
