#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tgr/error.hpp"
#include "tgr/occurrence.hpp"
#include "tgr/term.hpp"

namespace tgr {

/// Opaque node identifier, unique within one graph. Node order is the
/// lexicographic order of ids.
using NodeId = std::string;

struct Operator {
  std::string name;
  int arity = 0;

  friend bool operator==(const Operator&, const Operator&) = default;
  friend auto operator<=>(const Operator&, const Operator&) = default;
};

/// A finite term graph: a node set with partial labelling and successor
/// functions. Empty (unlabelled) nodes are the graph's variables and unravel
/// to variables named by their id.
///
/// The mutators never validate; run check_wellformed() on anything built by
/// hand or read from outside.
class TermGraph {
 public:
  struct Node {
    std::optional<Operator> label;
    std::optional<std::vector<NodeId>> successors;

    friend bool operator==(const Node&, const Node&) = default;
  };

  /// Adds (or overwrites) an empty node.
  void add_empty(const NodeId& id);
  /// Adds (or overwrites) a labelled node; the arity is the successor count.
  void add_node(const NodeId& id, const std::string& op, std::vector<NodeId> successors = {});
  /// Raw write, for building deliberately malformed graphs.
  void set_node(const NodeId& id, Node node);
  /// Makes label and successors undefined at `id`.
  void clear_label(const NodeId& id);
  void erase(const NodeId& id);

  bool contains(const NodeId& id) const { return nodes_.count(id) != 0; }
  /// Throws InputError for unknown ids.
  const Node& node(const NodeId& id) const;
  bool is_empty_node(const NodeId& id) const { return !node(id).label.has_value(); }
  const std::optional<Operator>& label(const NodeId& id) const { return node(id).label; }
  /// Successor list; empty when undefined.
  std::span<const NodeId> successors(const NodeId& id) const;

  const std::map<NodeId, Node>& nodes() const { return nodes_; }
  std::vector<NodeId> node_ids() const;
  std::set<NodeId> empty_nodes() const;
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  /// Identical graphs, ids included.
  friend bool operator==(const TermGraph&, const TermGraph&) = default;

 private:
  std::map<NodeId, Node> nodes_;
};

/// Label and successors defined on the same nodes, successor lengths equal
/// to arities, successor targets exist, and each operator name used with a
/// single arity. The second overload also checks against a signature.
CheckResult check_wellformed(const TermGraph& g);
CheckResult check_wellformed(const TermGraph& g, const Signature& sig);

/// A path ⟨n1, j1, n2, ..., jk, n(k+1)⟩.
struct Path {
  std::vector<NodeId> nodes;
  std::vector<int> indices;

  Occurrence occurrence() const { return Occurrence(indices); }
  const NodeId& source() const { return nodes.front(); }
  const NodeId& target() const { return nodes.back(); }
};

/// The unique path from `from` with occurrence `w`, if it exists.
std::optional<Path> path_along(const TermGraph& g, const NodeId& from, const Occurrence& w);
/// Target of path_along.
std::optional<NodeId> node_at(const TermGraph& g, const NodeId& from, const Occurrence& w);

std::set<NodeId> reachable(const TermGraph& g, const NodeId& from);
/// Nodes lying on some cycle.
std::set<NodeId> cyclic_nodes(const TermGraph& g);
bool is_acyclic(const TermGraph& g);
/// Exactly one path from `root` to every node.
bool is_tree(const TermGraph& g, const NodeId& root);

/// A possibly infinite rational term: a pointed term graph. Empty nodes in
/// `bottoms` denote ⊥ rather than a variable.
class RationalTerm {
 public:
  RationalTerm();  // ⊥
  RationalTerm(TermGraph graph, NodeId point, std::set<NodeId> bottoms = {});

  /// Graph of a finite term with one node per shared term node. Variable
  /// nodes are named by the variable; ⊥ positions share one bottom node.
  static RationalTerm from_term(const Term& t);

  const TermGraph& graph() const { return graph_; }
  const NodeId& point() const { return point_; }
  const std::set<NodeId>& bottoms() const { return bottoms_; }
  bool is_bottom_node(const NodeId& id) const { return bottoms_.count(id) != 0; }

  /// Same graph, different point.
  RationalTerm repointed(const NodeId& point) const;
  /// Drops nodes unreachable from the point.
  RationalTerm garbage_collected() const;

 private:
  TermGraph graph_;
  NodeId point_;
  std::set<NodeId> bottoms_;
};

/// Renders an empty node reached with `remaining` levels still available.
using EmptyNodeRenderer = std::function<Term(const NodeId& node, std::size_t remaining)>;

/// truncate(U_G[n], depth). Empty nodes become variables named by their id.
Term unravel(const TermGraph& g, const NodeId& n, std::size_t depth);
/// Same for a rational term; bottom nodes render as ⊥.
Term unravel(const RationalTerm& t, std::size_t depth);
/// Unraveling with a caller-supplied rendering of empty nodes.
Term unravel_with(const TermGraph& g, const NodeId& n, std::size_t depth,
                  const EmptyNodeRenderer& empty_node);
/// The whole unraveling of an acyclic part. Throws InputError when a cycle is
/// reachable from `n`.
Term unravel_finite(const TermGraph& g, const NodeId& n);
Term unravel_finite(const RationalTerm& t);

/// All occurrences O(π), |O(π)| ≤ max_length, of paths from `from` to `to`.
std::set<Occurrence> paths_to(const TermGraph& g, const NodeId& from, const NodeId& to,
                              std::size_t max_length);

/// Number of such paths (saturating at SIZE_MAX).
std::size_t count_paths(const TermGraph& g, const NodeId& from, const NodeId& to,
                        std::size_t max_length);

/// Whether the set of paths from `from` to `to` is finite.
bool finitely_many_paths(const TermGraph& g, const NodeId& from, const NodeId& to);

/// The first `max_count` path occurrences from `from` to `to` in
/// length-lexicographic order, restricted to length ≤ max_length.
std::vector<Occurrence> enumerate_paths(const TermGraph& g, const NodeId& from, const NodeId& to,
                                        std::size_t max_length, std::size_t max_count);

/// A graph morphism f: source → target.
struct GraphMorphism {
  TermGraph source;
  TermGraph target;
  std::map<NodeId, NodeId> map;

  const NodeId& operator()(const NodeId& n) const;
};

/// Totality, label preservation and successor preservation.
CheckResult check_morphism(const GraphMorphism& f);
GraphMorphism identity_morphism(const TermGraph& g);
/// g ∘ f.
GraphMorphism compose(const GraphMorphism& g, const GraphMorphism& f);

/// σ_f: x ↦ U_target[f(x)] for every empty node x of the source.
std::map<NodeId, RationalTerm> induced_substitution(const GraphMorphism& f);

/// All morphisms from the tree `l` (rooted at `root`) into `h`, one per
/// admissible root image, in ascending order of the root image.
std::vector<GraphMorphism> find_tree_morphisms(const TermGraph& l, const NodeId& root,
                                               const TermGraph& h);
/// The morphism sending `root` to `image`, if one exists.
std::optional<GraphMorphism> tree_morphism_at(const TermGraph& l, const NodeId& root,
                                              const TermGraph& h, const NodeId& image);

}  // namespace tgr
