#include "tgr/term_graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace tgr {

namespace {

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

std::size_t sat_add(std::size_t a, std::size_t b) { return kUnbounded - a < b ? kUnbounded : a + b; }

/// Picks an id prefix such that no name in `taken` has the form prefix+digits.
std::string fresh_prefix(std::string prefix, const std::set<std::string>& taken) {
  auto clashes = [&](const std::string& p) {
    for (const auto& name : taken) {
      if (name.size() > p.size() && name.compare(0, p.size(), p) == 0 &&
          std::all_of(name.begin() + static_cast<std::ptrdiff_t>(p.size()), name.end(),
                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return true;
    }
    return false;
  };
  while (clashes(prefix)) prefix = "_" + prefix;
  return prefix;
}

std::string fresh_name(std::string name, const std::set<std::string>& taken) {
  while (taken.count(name)) name = "_" + name;
  return name;
}

}  // namespace

// ----------------------------------------------------------------- TermGraph

void TermGraph::add_empty(const NodeId& id) { nodes_[id] = Node{}; }

void TermGraph::add_node(const NodeId& id, const std::string& op, std::vector<NodeId> successors) {
  int arity = static_cast<int>(successors.size());
  nodes_[id] = Node{Operator{op, arity}, std::move(successors)};
}

void TermGraph::set_node(const NodeId& id, Node node) { nodes_[id] = std::move(node); }

void TermGraph::clear_label(const NodeId& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw InputError("unknown node '" + id + "'");
  it->second = Node{};
}

void TermGraph::erase(const NodeId& id) { nodes_.erase(id); }

const TermGraph::Node& TermGraph::node(const NodeId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw InputError("unknown node '" + id + "'");
  return it->second;
}

std::span<const NodeId> TermGraph::successors(const NodeId& id) const {
  const Node& n = node(id);
  if (!n.successors) return {};
  return *n.successors;
}

std::vector<NodeId> TermGraph::node_ids() const {
  std::vector<NodeId> out;
  out.reserve(nodes_.size());
  for (const auto& [id, n] : nodes_) out.push_back(id);
  return out;
}

std::set<NodeId> TermGraph::empty_nodes() const {
  std::set<NodeId> out;
  for (const auto& [id, n] : nodes_)
    if (!n.label) out.insert(id);
  return out;
}

CheckResult check_wellformed(const TermGraph& g) {
  CheckResult r;
  std::map<std::string, int> arities;
  for (const auto& [id, n] : g.nodes()) {
    if (n.label.has_value() != n.successors.has_value()) {
      r.fail("node '" + id + "': label and successor function must be defined on the same nodes (" +
             (n.label ? "label defined, successors undefined" : "successors defined, label undefined") + ")");
      continue;
    }
    if (!n.label) continue;
    if (n.successors->size() != static_cast<std::size_t>(n.label->arity))
      r.fail("node '" + id + "': operator '" + n.label->name + "' has arity " +
             std::to_string(n.label->arity) + " but " + std::to_string(n.successors->size()) +
             " successors");
    auto [it, inserted] = arities.emplace(n.label->name, n.label->arity);
    if (!inserted && it->second != n.label->arity)
      r.fail("node '" + id + "': operator '" + n.label->name + "' used with arities " +
             std::to_string(it->second) + " and " + std::to_string(n.label->arity));
    for (const auto& s : *n.successors)
      if (!g.contains(s)) r.fail("node '" + id + "': successor '" + s + "' is not a node");
  }
  return r;
}

CheckResult check_wellformed(const TermGraph& g, const Signature& sig) {
  CheckResult r = check_wellformed(g);
  for (const auto& [id, n] : g.nodes()) {
    if (!n.label) continue;
    auto ar = sig.arity(n.label->name);
    if (!ar)
      r.fail("node '" + id + "': undeclared operator '" + n.label->name + "'");
    else if (*ar != n.label->arity)
      r.fail("node '" + id + "': operator '" + n.label->name + "' is declared with arity " +
             std::to_string(*ar));
  }
  return r;
}

// --------------------------------------------------------------------- paths

std::optional<Path> path_along(const TermGraph& g, const NodeId& from, const Occurrence& w) {
  Path p;
  p.nodes.push_back(from);
  NodeId cur = from;
  for (int i : w.positions()) {
    auto succ = g.successors(cur);
    if (static_cast<std::size_t>(i) > succ.size()) return std::nullopt;
    cur = succ[static_cast<std::size_t>(i - 1)];
    p.indices.push_back(i);
    p.nodes.push_back(cur);
  }
  return p;
}

std::optional<NodeId> node_at(const TermGraph& g, const NodeId& from, const Occurrence& w) {
  const NodeId* cur = &g.nodes().find(from)->first;
  if (!g.contains(from)) throw InputError("unknown node '" + from + "'");
  for (int i : w.positions()) {
    auto succ = g.successors(*cur);
    if (static_cast<std::size_t>(i) > succ.size()) return std::nullopt;
    cur = &succ[static_cast<std::size_t>(i - 1)];
  }
  return *cur;
}

std::set<NodeId> reachable(const TermGraph& g, const NodeId& from) {
  std::set<NodeId> seen{from};
  std::deque<NodeId> queue{from};
  g.node(from);
  while (!queue.empty()) {
    NodeId n = queue.front();
    queue.pop_front();
    for (const auto& s : g.successors(n))
      if (seen.insert(s).second) queue.push_back(s);
  }
  return seen;
}

std::set<NodeId> cyclic_nodes(const TermGraph& g) {
  // Tarjan's SCC; a node is cyclic if its component has >1 node or a self loop.
  std::vector<NodeId> ids = g.node_ids();
  std::map<NodeId, std::size_t> index_of;
  for (std::size_t i = 0; i < ids.size(); ++i) index_of[ids[i]] = i;
  const std::size_t n = ids.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& s : g.successors(ids[i])) adj[i].push_back(index_of.at(s));

  std::vector<std::size_t> idx(n, kUnbounded), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0;
  std::set<NodeId> out;

  // Iterative DFS to avoid deep recursion on long chains.
  for (std::size_t root = 0; root < n; ++root) {
    if (idx[root] != kUnbounded) continue;
    std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
    idx[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < adj[v].size()) {
        std::size_t w = adj[v][next++];
        if (idx[w] == kUnbounded) {
          idx[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
        continue;
      }
      if (low[v] == idx[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        bool cyclic = comp.size() > 1 ||
                      std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
        if (cyclic)
          for (std::size_t c : comp) out.insert(ids[c]);
      }
      std::size_t finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  return out;
}

bool is_acyclic(const TermGraph& g) { return cyclic_nodes(g).empty(); }

bool is_tree(const TermGraph& g, const NodeId& root) {
  if (!g.contains(root)) return false;
  std::map<NodeId, int> indegree;
  for (const auto& [id, n] : g.nodes())
    for (const auto& s : g.successors(id)) ++indegree[s];
  if (indegree[root] != 0) return false;
  for (const auto& [id, n] : g.nodes())
    if (id != root && indegree[id] != 1) return false;
  return reachable(g, root).size() == g.size();
}

// -------------------------------------------------------------- RationalTerm

RationalTerm::RationalTerm() : point_("_bot"), bottoms_{"_bot"} { graph_.add_empty("_bot"); }

RationalTerm::RationalTerm(TermGraph graph, NodeId point, std::set<NodeId> bottoms)
    : graph_(std::move(graph)), point_(std::move(point)), bottoms_(std::move(bottoms)) {
  if (!graph_.contains(point_)) throw InputError("point '" + point_ + "' is not a node of the graph");
  for (const auto& b : bottoms_) {
    if (!graph_.contains(b)) throw InputError("bottom node '" + b + "' is not a node of the graph");
    if (!graph_.is_empty_node(b)) throw InputError("bottom node '" + b + "' is labelled");
  }
}

RationalTerm RationalTerm::from_term(const Term& t) {
  std::set<std::string> vars = variables(t);
  std::string prefix = fresh_prefix("t", vars);
  std::string bottom = fresh_name("_bot", vars);
  TermGraph g;
  bool uses_bottom = false;
  std::map<const void*, NodeId> ids;
  std::function<NodeId(const Term&)> rec = [&](const Term& u) -> NodeId {
    if (u.is_bottom()) {
      uses_bottom = true;
      if (!g.contains(bottom)) g.add_empty(bottom);
      return bottom;
    }
    if (u.is_variable()) {
      if (!g.contains(u.name())) g.add_empty(u.name());
      return u.name();
    }
    if (auto it = ids.find(u.identity()); it != ids.end()) return it->second;
    NodeId id = prefix + std::to_string(ids.size());
    ids.emplace(u.identity(), id);
    std::vector<NodeId> succ;
    for (const Term& a : u.args()) succ.push_back(rec(a));
    g.add_node(id, u.name(), std::move(succ));
    return id;
  };
  NodeId point = rec(t);
  std::set<NodeId> bottoms;
  if (uses_bottom) bottoms.insert(bottom);
  return RationalTerm(std::move(g), point, std::move(bottoms));
}

RationalTerm RationalTerm::repointed(const NodeId& point) const {
  return RationalTerm(graph_, point, bottoms_);
}

RationalTerm RationalTerm::garbage_collected() const {
  std::set<NodeId> keep = reachable(graph_, point_);
  TermGraph g;
  std::set<NodeId> bottoms;
  for (const auto& [id, n] : graph_.nodes()) {
    if (!keep.count(id)) continue;
    g.set_node(id, n);
    if (bottoms_.count(id)) bottoms.insert(id);
  }
  return RationalTerm(std::move(g), point_, std::move(bottoms));
}

// ---------------------------------------------------------------- unraveling

Term unravel_with(const TermGraph& g, const NodeId& n, std::size_t depth,
                  const EmptyNodeRenderer& empty_node) {
  auto root = g.nodes().find(n);
  if (root == g.nodes().end()) throw InputError("unknown node '" + n + "'");
  std::map<std::pair<const NodeId*, std::size_t>, Term> memo;
  std::function<Term(const NodeId&, std::size_t)> rec = [&](const NodeId& id,
                                                            std::size_t d) -> Term {
    if (d == 0) return Term{};
    auto it = g.nodes().find(id);
    const TermGraph::Node& node = it->second;
    if (!node.label) return empty_node(id, d);
    auto key = std::make_pair(&it->first, d);
    if (auto m = memo.find(key); m != memo.end()) return m->second;
    std::vector<Term> args;
    args.reserve(node.successors->size());
    for (const auto& s : *node.successors) args.push_back(rec(s, d - 1));
    Term out = Term::op(node.label->name, std::move(args));
    memo.emplace(key, out);
    return out;
  };
  return rec(root->first, depth);
}

Term unravel(const TermGraph& g, const NodeId& n, std::size_t depth) {
  return unravel_with(g, n, depth, [](const NodeId& id, std::size_t) { return Term::variable(id); });
}

Term unravel(const RationalTerm& t, std::size_t depth) {
  return unravel_with(t.graph(), t.point(), depth, [&](const NodeId& id, std::size_t) {
    return t.is_bottom_node(id) ? Term{} : Term::variable(id);
  });
}

namespace {

std::size_t finite_depth_or_throw(const TermGraph& g, const NodeId& n) {
  std::set<NodeId> reach = reachable(g, n);
  std::set<NodeId> cyc = cyclic_nodes(g);
  for (const auto& id : reach)
    if (cyc.count(id)) throw InputError("the unraveling at '" + n + "' is infinite");
  return reach.size() + 1;
}

}  // namespace

Term unravel_finite(const TermGraph& g, const NodeId& n) {
  return unravel(g, n, finite_depth_or_throw(g, n));
}

Term unravel_finite(const RationalTerm& t) {
  return unravel(t, finite_depth_or_throw(t.graph(), t.point()));
}

// ------------------------------------------------------- path enumeration

namespace {

struct Indexed {
  std::vector<NodeId> ids;
  std::map<NodeId, std::size_t> index;
  std::vector<std::vector<std::size_t>> succ;

  explicit Indexed(const TermGraph& g) : ids(g.node_ids()) {
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
    succ.resize(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (const auto& s : g.successors(ids[i])) succ[i].push_back(index.at(s));
  }
  std::size_t at(const NodeId& id) const {
    auto it = index.find(id);
    if (it == index.end()) throw InputError("unknown node '" + id + "'");
    return it->second;
  }
};

/// counts[l][v]: number of paths of exactly l steps from v to `to`.
std::vector<std::vector<std::size_t>> path_counts(const Indexed& ix, std::size_t to,
                                                  std::size_t max_length) {
  std::vector<std::vector<std::size_t>> counts;
  counts.emplace_back(ix.ids.size(), 0);
  counts[0][to] = 1;
  for (std::size_t l = 1; l <= max_length; ++l) {
    std::vector<std::size_t> next(ix.ids.size(), 0);
    for (std::size_t v = 0; v < ix.ids.size(); ++v)
      for (std::size_t c : ix.succ[v]) next[v] = sat_add(next[v], counts[l - 1][c]);
    counts.push_back(std::move(next));
  }
  return counts;
}

}  // namespace

std::size_t count_paths(const TermGraph& g, const NodeId& from, const NodeId& to,
                        std::size_t max_length) {
  Indexed ix(g);
  std::size_t f = ix.at(from);
  std::size_t t = ix.at(to);
  if (max_length == kUnbounded) {
    if (!finitely_many_paths(g, from, to)) return kUnbounded;
    max_length = g.size();
  }
  auto counts = path_counts(ix, t, max_length);
  std::size_t total = 0;
  for (const auto& level : counts) total = sat_add(total, level[f]);
  return total;
}

bool finitely_many_paths(const TermGraph& g, const NodeId& from, const NodeId& to) {
  std::set<NodeId> fwd = reachable(g, from);
  if (!fwd.count(to)) return true;
  // Co-reachability of `to` inside the forward region.
  std::set<NodeId> back{to};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& id : fwd) {
      if (back.count(id)) continue;
      for (const auto& s : g.successors(id))
        if (back.count(s)) {
          back.insert(id);
          grew = true;
          break;
        }
    }
  }
  std::set<NodeId> cyc = cyclic_nodes(g);
  for (const auto& id : back)
    if (fwd.count(id) && cyc.count(id)) return false;
  return true;
}

std::vector<Occurrence> enumerate_paths(const TermGraph& g, const NodeId& from, const NodeId& to,
                                        std::size_t max_length, std::size_t max_count) {
  Indexed ix(g);
  const std::size_t f = ix.at(from);
  const std::size_t t = ix.at(to);
  std::vector<Occurrence> out;
  if (max_count == 0) return out;

  std::size_t limit = max_length;
  if (finitely_many_paths(g, from, to)) limit = std::min(limit, g.size());
  if (limit == kUnbounded && max_count == kUnbounded)
    throw InputError("unbounded enumeration of an infinite path set");

  // Shrink the length bound to the shortest one that already yields max_count paths.
  std::vector<std::vector<std::size_t>> counts;
  counts.emplace_back(ix.ids.size(), 0);
  counts[0][t] = 1;
  std::size_t cumulative = counts[0][f];
  std::size_t effective = 0;
  while (effective < limit && cumulative < max_count) {
    std::vector<std::size_t> next(ix.ids.size(), 0);
    for (std::size_t v = 0; v < ix.ids.size(); ++v)
      for (std::size_t c : ix.succ[v]) next[v] = sat_add(next[v], counts.back()[c]);
    counts.push_back(std::move(next));
    ++effective;
    cumulative = sat_add(cumulative, counts.back()[f]);
  }

  // viable[r][v]: `to` reachable from v within r steps.
  std::vector<std::vector<bool>> viable(effective + 1, std::vector<bool>(ix.ids.size(), false));
  for (std::size_t r = 0; r <= effective; ++r)
    for (std::size_t v = 0; v < ix.ids.size(); ++v)
      viable[r][v] = counts[r][v] > 0 || (r > 0 && viable[r - 1][v]);

  struct State {
    std::size_t node;
    Occurrence occ;
  };
  std::vector<State> level;
  if (viable[effective][f]) level.push_back({f, Occurrence{}});
  for (std::size_t k = 0; k <= effective && !level.empty(); ++k) {
    for (const State& s : level) {
      if (s.node == t) {
        out.push_back(s.occ);
        if (out.size() >= max_count) return out;
      }
    }
    if (k == effective) break;
    std::vector<State> next;
    for (const State& s : level) {
      for (std::size_t i = 0; i < ix.succ[s.node].size(); ++i) {
        std::size_t c = ix.succ[s.node][i];
        if (viable[effective - k - 1][c]) next.push_back({c, s.occ.child(static_cast<int>(i + 1))});
      }
    }
    level = std::move(next);
  }
  return out;
}

std::set<Occurrence> paths_to(const TermGraph& g, const NodeId& from, const NodeId& to,
                              std::size_t max_length) {
  auto v = enumerate_paths(g, from, to, max_length, kUnbounded);
  return {v.begin(), v.end()};
}

// ---------------------------------------------------------------- morphisms

const NodeId& GraphMorphism::operator()(const NodeId& n) const {
  auto it = map.find(n);
  if (it == map.end()) throw InputError("morphism undefined on node '" + n + "'");
  return it->second;
}

CheckResult check_morphism(const GraphMorphism& f) {
  CheckResult r;
  for (const auto& [id, node] : f.source.nodes()) {
    auto it = f.map.find(id);
    if (it == f.map.end()) {
      r.fail("node '" + id + "' has no image");
      continue;
    }
    if (!f.target.contains(it->second)) {
      r.fail("image '" + it->second + "' of '" + id + "' is not a target node");
      continue;
    }
    if (!node.label) continue;
    const auto& tnode = f.target.node(it->second);
    if (tnode.label != node.label) {
      r.fail("label of '" + id + "' not preserved");
      continue;
    }
    const auto& ss = *node.successors;
    const auto& ts = *tnode.successors;
    for (std::size_t i = 0; i < ss.size(); ++i) {
      auto img = f.map.find(ss[i]);
      if (img == f.map.end() || i >= ts.size() || img->second != ts[i]) {
        r.fail("successor " + std::to_string(i + 1) + " of '" + id + "' not preserved");
        break;
      }
    }
  }
  for (const auto& [src, dst] : f.map)
    if (!f.source.contains(src)) r.fail("map entry for unknown source node '" + src + "'");
  return r;
}

GraphMorphism identity_morphism(const TermGraph& g) {
  GraphMorphism f{g, g, {}};
  for (const auto& [id, n] : g.nodes()) f.map.emplace(id, id);
  return f;
}

GraphMorphism compose(const GraphMorphism& g, const GraphMorphism& f) {
  GraphMorphism out{f.source, g.target, {}};
  for (const auto& [a, b] : f.map) out.map.emplace(a, g(b));
  return out;
}

std::map<NodeId, RationalTerm> induced_substitution(const GraphMorphism& f) {
  std::map<NodeId, RationalTerm> sigma;
  for (const auto& id : f.source.empty_nodes()) sigma.emplace(id, RationalTerm(f.target, f(id)));
  return sigma;
}

std::optional<GraphMorphism> tree_morphism_at(const TermGraph& l, const NodeId& root,
                                              const TermGraph& h, const NodeId& image) {
  if (!h.contains(image)) throw InputError("unknown node '" + image + "'");
  GraphMorphism f{l, h, {}};
  f.map.emplace(root, image);
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId a = stack.back();
    stack.pop_back();
    const auto& an = l.node(a);
    if (!an.label) continue;
    const NodeId& b = f.map.at(a);
    const auto& bn = h.node(b);
    if (bn.label != an.label) return std::nullopt;
    const auto& as = *an.successors;
    const auto& bs = *bn.successors;
    for (std::size_t i = 0; i < as.size(); ++i) {
      auto [it, inserted] = f.map.emplace(as[i], bs[i]);
      if (!inserted) {
        if (it->second != bs[i]) return std::nullopt;
        continue;
      }
      stack.push_back(as[i]);
    }
  }
  return f;
}

std::vector<GraphMorphism> find_tree_morphisms(const TermGraph& l, const NodeId& root,
                                               const TermGraph& h) {
  if (!is_tree(l, root)) throw InputError("pattern graph is not a tree rooted at '" + root + "'");
  std::vector<GraphMorphism> out;
  for (const auto& [id, n] : h.nodes())
    if (auto f = tree_morphism_at(l, root, h, id)) out.push_back(std::move(*f));
  return out;
}

}  // namespace tgr
