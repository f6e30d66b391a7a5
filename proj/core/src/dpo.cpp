#include "tgr/dpo.hpp"

#include <numeric>

namespace tgr {

std::vector<Match> find_matches(const EvaluationRule& p, const TermGraph& host) {
  std::vector<Match> out;
  for (auto& g : find_tree_morphisms(p.L, p.root, host)) out.push_back(Match{p, std::move(g)});
  return out;
}

std::optional<Match> match_at(const EvaluationRule& p, const TermGraph& host, const NodeId& at) {
  if (!is_tree(p.L, p.root)) throw InputError("rule '" + p.name + "' has a non-tree lhs");
  auto g = tree_morphism_at(p.L, p.root, host, at);
  if (!g) return std::nullopt;
  return Match{p, std::move(*g)};
}

Complement pushout_complement(const Match& m) {
  if (!check_self_overlap(m.rule))
    throw InputError("rule '" + m.rule.name + "' is self-overlapping");
  Complement c;
  c.D = m.host();
#ifndef TGR_MUTANT_KEEP_ROOT_LABEL
  c.D.clear_label(m.root_image());
#endif
  c.k = GraphMorphism{m.rule.K, c.D, m.g.map};
  c.d = identity_morphism(c.D);
  c.d.target = m.host();
  return c;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Pushout pushout(const GraphMorphism& r, const GraphMorphism& k, const std::set<NodeId>& demoted) {
  const TermGraph& R = r.target;
  const TermGraph& D = k.target;
  // Elements 0..|R|-1 are R nodes, the rest D nodes, each in id order.
  std::vector<NodeId> rid = R.node_ids();
  std::vector<NodeId> did = D.node_ids();
  std::map<NodeId, std::size_t> ri, di;
  for (std::size_t i = 0; i < rid.size(); ++i) ri[rid[i]] = i;
  for (std::size_t i = 0; i < did.size(); ++i) di[did[i]] = rid.size() + i;
  UnionFind uf(rid.size() + did.size());
  for (const auto& [n, node] : r.source.nodes()) uf.unite(ri.at(r(n)), di.at(k(n)));

  // Class names.
  std::map<std::size_t, NodeId> name;
  std::map<std::size_t, int> rank;  // 0 labelled D, 1 other D, 2 demoted D
  for (std::size_t i = 0; i < did.size(); ++i) {
    std::size_t c = uf.find(rid.size() + i);
    int rk = D.is_empty_node(did[i]) ? (demoted.count(did[i]) ? 2 : 1) : 0;
    auto it = rank.find(c);
    if (it == rank.end() || rk < it->second) {
      rank[c] = rk;
      name[c] = did[i];
    }
  }
  std::size_t fresh = 1;
  for (std::size_t i = 0; i < rid.size(); ++i) {
    std::size_t c = uf.find(i);
    if (name.count(c)) continue;
    NodeId id;
    do id = "h#" + std::to_string(fresh++);
    while (D.contains(id));
    name[c] = id;
  }

  Pushout out;
  out.h = GraphMorphism{R, {}, {}};
  out.b = GraphMorphism{D, {}, {}};
  for (std::size_t i = 0; i < rid.size(); ++i) out.h.map.emplace(rid[i], name.at(uf.find(i)));
  for (std::size_t i = 0; i < did.size(); ++i)
    out.b.map.emplace(did[i], name.at(uf.find(rid.size() + i)));

  std::map<NodeId, TermGraph::Node> nodes;
  auto contribute = [&](const NodeId& cls, const TermGraph::Node& node,
                        const GraphMorphism& into) {
    auto [it, inserted] = nodes.emplace(cls, TermGraph::Node{});
    if (!node.label) return;
    TermGraph::Node mapped{node.label, std::vector<NodeId>{}};
    for (const auto& s : *node.successors) mapped.successors->push_back(into(s));
    if (!it->second.label) {
      it->second = std::move(mapped);
    } else if (!(it->second == mapped)) {
      throw EngineError("pushout: conflicting labels or successors glued at '" + cls + "'");
    }
  };
  for (const auto& id : did) contribute(out.b(id), D.node(id), out.b);
  for (const auto& id : rid) contribute(out.h(id), R.node(id), out.h);
  for (auto& [id, node] : nodes) out.H.set_node(id, std::move(node));
  out.h.target = out.H;
  out.b.target = out.H;
  return out;
}

DirectDerivation derive(const Match& m) {
  Complement c = pushout_complement(m);
  Pushout po = pushout(m.rule.r, c.k, {m.root_image()});
  DirectDerivation dd{m, std::move(c.D), std::move(c.k), std::move(c.d),
                      std::move(po.H), std::move(po.h), std::move(po.b), {}};
  dd.track = dd.b.map;
  return dd;
}

Substitution track_substitution(const DirectDerivation& dd, const std::set<NodeId>& host_bottoms) {
  Substitution sigma;
  std::map<NodeId, NodeId> preimage;
  for (const auto& y : dd.G().empty_nodes()) {
    if (host_bottoms.count(y)) continue;
    const NodeId& x = dd.track.at(y);
    if (!dd.H.is_empty_node(x))
      throw EngineError("track sends variable '" + y + "' to labelled node '" + x + "'");
    auto [it, inserted] = preimage.emplace(x, y);
    if (!inserted)
      throw EngineError("track identifies variables '" + it->second + "' and '" + y + "'");
  }
  for (const auto& x : dd.H.empty_nodes()) {
    auto it = preimage.find(x);
    sigma.emplace(x, it == preimage.end() ? Term{} : Term::variable(it->second));
  }
  return sigma;
}

RationalTerm derived_term(const DirectDerivation& dd, const RationalTerm& host) {
  if (!(host.graph() == dd.G())) throw InputError("derivation is not on this host");
  Substitution sigma = track_substitution(dd, host.bottoms());
  std::set<NodeId> bottoms;
  std::map<NodeId, NodeId> rename;
  for (const auto& [x, s] : sigma) {
    if (s.is_bottom())
      bottoms.insert(x);
    else if (s.name() != x)
      rename.emplace(x, s.name());
  }
  if (!rename.empty()) throw EngineError("track moves a variable node");
  return RationalTerm(dd.H, dd.track.at(host.point()), std::move(bottoms));
}

RationalRedexSet induced_parallel_redex(const Match& m, const NodeId& n) {
  if (!m.host().contains(n)) throw InputError("unknown node '" + n + "'");
  return RationalRedexSet{RationalTerm(m.host(), n), m.root_image(), m.rule.name};
}

}  // namespace tgr
