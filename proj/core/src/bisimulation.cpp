#include "tgr/bisimulation.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <utility>

namespace tgr {

namespace {

/// Flat view of a graph (or a union of graphs) for refinement.
struct Flat {
  std::vector<NodeId> ids;
  std::vector<std::optional<Operator>> labels;
  std::vector<std::vector<std::size_t>> succ;
};

/// Signature-based partition refinement. `initial` gives the starting block
/// key of every node; returns the stable block number of every node.
std::vector<std::size_t> refine(const Flat& f, const std::vector<std::string>& initial) {
  const std::size_t n = f.ids.size();
  std::vector<std::size_t> block(n);
  {
    std::map<std::string, std::size_t> keys;
    for (std::size_t v = 0; v < n; ++v)
      block[v] = keys.emplace(initial[v], keys.size()).first->second;
  }
  std::size_t count = std::set<std::size_t>(block.begin(), block.end()).size();
  while (true) {
    std::map<std::vector<std::size_t>, std::size_t> sigs;
    std::vector<std::size_t> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::size_t> sig{block[v]};
      for (std::size_t c : f.succ[v]) sig.push_back(block[c]);
      next[v] = sigs.emplace(std::move(sig), sigs.size()).first->second;
    }
    block = std::move(next);
    if (sigs.size() == count) return block;
    count = sigs.size();
  }
}

void append(Flat& f, std::map<NodeId, std::size_t>& index, const TermGraph& g,
            const std::set<NodeId>& keep) {
  for (const auto& id : keep) {
    index[id] = f.ids.size();
    f.ids.push_back(id);
    f.labels.push_back(g.label(id));
  }
  f.succ.resize(f.ids.size());
  for (const auto& id : keep)
    for (const auto& s : g.successors(id)) f.succ[index.at(id)].push_back(index.at(s));
}

std::string label_key(const Operator& op) { return "o:" + op.name + "/" + std::to_string(op.arity); }

}  // namespace

bool bisim_equal(const RationalTerm& a, const RationalTerm& b, const VariableCorrespondence& vars) {
  Flat f;
  std::map<NodeId, std::size_t> ia, ib;
  append(f, ia, a.graph(), reachable(a.graph(), a.point()));
  std::size_t split = f.ids.size();
  append(f, ib, b.graph(), reachable(b.graph(), b.point()));
  std::vector<std::string> initial(f.ids.size());
  for (std::size_t v = 0; v < f.ids.size(); ++v) {
    const bool left = v < split;
    const RationalTerm& side = left ? a : b;
    const NodeId& id = f.ids[v];
    if (f.labels[v]) {
      initial[v] = label_key(*f.labels[v]);
    } else if (side.is_bottom_node(id)) {
      initial[v] = "b";
    } else {
      NodeId name = id;
      if (left)
        if (auto it = vars.find(id); it != vars.end()) name = it->second;
      initial[v] = "v:" + name;
    }
  }
  auto block = refine(f, initial);
  return block[ia.at(a.point())] == block[ib.at(b.point())];
}

bool rational_approx_leq(const RationalTerm& a, const RationalTerm& b,
                         const VariableCorrespondence& vars) {
  std::set<NodeId> ra = reachable(a.graph(), a.point());
  std::set<NodeId> rb = reachable(b.graph(), b.point());
  auto locally_ok = [&](const NodeId& x, const NodeId& y) {
    if (a.is_bottom_node(x)) return true;
    const auto& lx = a.graph().label(x);
    const auto& ly = b.graph().label(y);
    if (!lx) {
      if (ly || b.is_bottom_node(y)) return false;
      auto it = vars.find(x);
      return (it == vars.end() ? x : it->second) == y;
    }
    return ly == lx;
  };
  std::set<std::pair<NodeId, NodeId>> rel;
  for (const auto& x : ra)
    for (const auto& y : rb)
      if (locally_ok(x, y)) rel.emplace(x, y);
  // Greatest fixpoint: drop pairs whose children are not related.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = rel.begin(); it != rel.end();) {
      const auto& [x, y] = *it;
      bool ok = true;
      if (!a.is_bottom_node(x) && a.graph().label(x)) {
        auto sx = a.graph().successors(x);
        auto sy = b.graph().successors(y);
        for (std::size_t i = 0; i < sx.size() && ok; ++i) ok = rel.count({sx[i], sy[i]}) != 0;
      }
      if (ok) {
        ++it;
      } else {
        it = rel.erase(it);
        changed = true;
      }
    }
  }
  return rel.count({a.point(), b.point()}) != 0;
}

namespace {

Minimized quotient(const TermGraph& g, const std::set<NodeId>& merged_empty) {
  Flat f;
  std::map<NodeId, std::size_t> index;
  std::set<NodeId> all;
  for (const auto& id : g.node_ids()) all.insert(id);
  append(f, index, g, all);
  std::vector<std::string> initial(f.ids.size());
  for (std::size_t v = 0; v < f.ids.size(); ++v) {
    if (f.labels[v])
      initial[v] = label_key(*f.labels[v]);
    else if (merged_empty.count(f.ids[v]))
      initial[v] = "b";
    else
      initial[v] = "e:" + f.ids[v];
  }
  auto block = refine(f, initial);
  // ids are visited in ascending order, so the first member is the smallest.
  std::map<std::size_t, NodeId> rep;
  for (std::size_t v = 0; v < f.ids.size(); ++v) rep.emplace(block[v], f.ids[v]);
  Minimized out;
  for (std::size_t v = 0; v < f.ids.size(); ++v) {
    const NodeId& r = rep.at(block[v]);
    out.map.emplace(f.ids[v], r);
    if (r != f.ids[v]) continue;
    if (!f.labels[v]) {
      out.graph.add_empty(r);
      continue;
    }
    std::vector<NodeId> succ;
    for (std::size_t c : f.succ[v]) succ.push_back(rep.at(block[c]));
    out.graph.set_node(r, TermGraph::Node{f.labels[v], std::move(succ)});
  }
  return out;
}

}  // namespace

Minimized minimize(const TermGraph& g) { return quotient(g, {}); }

RationalTerm minimize(const RationalTerm& t) {
  Minimized m = quotient(t.graph(), t.bottoms());
  std::set<NodeId> bottoms;
  for (const auto& b : t.bottoms()) bottoms.insert(m.map.at(b));
  return RationalTerm(std::move(m.graph), m.map.at(t.point()), std::move(bottoms));
}

GraphOfTerms graph_of_terms(const std::vector<RationalTerm>& terms) {
  // Disjoint union; variable nodes keep their names so equal names coincide.
  std::set<std::string> var_names;
  for (const auto& t : terms)
    for (const auto& id : t.graph().empty_nodes())
      if (!t.is_bottom_node(id)) var_names.insert(id);

  TermGraph u;
  std::set<NodeId> bottoms;
  std::vector<std::map<NodeId, NodeId>> to_union(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const RationalTerm& t = terms[i];
    auto uid = [&](const NodeId& id) -> NodeId {
      if (t.graph().is_empty_node(id) && !t.is_bottom_node(id)) return id;
      return "\x01" + std::to_string(i) + ":" + id;
    };
    for (const auto& [id, node] : t.graph().nodes()) {
      NodeId nid = uid(id);
      to_union[i].emplace(id, nid);
      if (!node.label) {
        u.add_empty(nid);
        if (t.is_bottom_node(id)) bottoms.insert(nid);
        continue;
      }
      std::vector<NodeId> succ;
      for (const auto& s : *node.successors) succ.push_back(uid(s));
      u.set_node(nid, TermGraph::Node{node.label, std::move(succ)});
    }
  }
  Minimized m = quotient(u, bottoms);

  // Canonical ids: breadth-first from the points in input order.
  std::string prefix = "n";
  for (bool clash = true; clash;) {
    clash = false;
    for (const auto& v : var_names)
      if (v.size() > prefix.size() && v.compare(0, prefix.size(), prefix) == 0 &&
          std::all_of(v.begin() + static_cast<std::ptrdiff_t>(prefix.size()), v.end(),
                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        clash = true;
        prefix = "_" + prefix;
        break;
      }
  }
  NodeId bottom_name = "_bot";
  while (var_names.count(bottom_name)) bottom_name = "_" + bottom_name;

  std::map<NodeId, NodeId> rename;
  std::size_t counter = 0;
  auto name_of = [&](const NodeId& rep) {
    if (auto it = rename.find(rep); it != rename.end()) return it->second;
    NodeId name;
    if (bottoms.count(rep))
      name = bottom_name;
    else if (m.graph.is_empty_node(rep))
      name = rep;
    else
      name = prefix + std::to_string(counter++);
    rename.emplace(rep, name);
    return name;
  };
  std::deque<NodeId> queue;
  std::set<NodeId> seen;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    NodeId rep = m.map.at(to_union[i].at(terms[i].point()));
    if (seen.insert(rep).second) queue.push_back(rep);
  }
  auto drain = [&] {
    while (!queue.empty()) {
      NodeId rep = queue.front();
      queue.pop_front();
      name_of(rep);
      for (const auto& s : m.graph.successors(rep))
        if (seen.insert(s).second) queue.push_back(s);
    }
  };
  drain();
  for (const auto& id : m.graph.node_ids())
    if (seen.insert(id).second) {
      queue.push_back(id);
      drain();
    }

  GraphOfTerms out;
  for (const auto& [rep, node] : m.graph.nodes()) {
    NodeId name = rename.at(rep);
    if (!node.label) {
      out.graph.add_empty(name);
      if (bottoms.count(rep)) out.bottoms.insert(name);
      continue;
    }
    std::vector<NodeId> succ;
    for (const auto& s : *node.successors) succ.push_back(rename.at(s));
    out.graph.set_node(name, TermGraph::Node{node.label, std::move(succ)});
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::map<NodeId, NodeId> nm;
    for (const auto& [id, uid] : to_union[i]) nm.emplace(id, rename.at(m.map.at(uid)));
    out.points.push_back(nm.at(terms[i].point()));
    out.node_maps.push_back(std::move(nm));
  }
  return out;
}

namespace {

struct IsoSearch {
  const TermGraph& a;
  const TermGraph& b;
  const std::set<NodeId>& bot_a;
  const std::set<NodeId>& bot_b;

  bool compatible(const NodeId& x, const NodeId& y) const {
    return a.label(x) == b.label(y) && bot_a.count(x) == bot_b.count(y);
  }

  /// Extends `fwd`/`bwd` with x ↦ y and everything successor-forced.
  bool assign(std::map<NodeId, NodeId>& fwd, std::map<NodeId, NodeId>& bwd, const NodeId& x0,
              const NodeId& y0) const {
    std::vector<std::pair<NodeId, NodeId>> work{{x0, y0}};
    while (!work.empty()) {
      auto [x, y] = work.back();
      work.pop_back();
      auto fx = fwd.find(x);
      auto by = bwd.find(y);
      if (fx != fwd.end() || by != bwd.end()) {
        if (fx == fwd.end() || by == bwd.end() || fx->second != y) return false;
        continue;
      }
      if (!compatible(x, y)) return false;
      fwd.emplace(x, y);
      bwd.emplace(y, x);
      auto sx = a.successors(x);
      auto sy = b.successors(y);
      for (std::size_t i = 0; i < sx.size(); ++i) work.emplace_back(sx[i], sy[i]);
    }
    return true;
  }

  bool search(std::map<NodeId, NodeId> fwd, std::map<NodeId, NodeId> bwd) const {
    const NodeId* pick = nullptr;
    for (const auto& [id, n] : a.nodes())
      if (!fwd.count(id)) {
        pick = &id;
        break;
      }
    if (!pick) return true;
    for (const auto& [id, n] : b.nodes()) {
      if (bwd.count(id) || !compatible(*pick, id)) continue;
      auto f2 = fwd;
      auto b2 = bwd;
      if (assign(f2, b2, *pick, id) && search(std::move(f2), std::move(b2))) return true;
    }
    return false;
  }
};

bool label_census_equal(const TermGraph& a, const TermGraph& b) {
  std::map<std::optional<Operator>, int> ca, cb;
  for (const auto& [id, n] : a.nodes()) ++ca[n.label];
  for (const auto& [id, n] : b.nodes()) ++cb[n.label];
  return ca == cb;
}

}  // namespace

bool is_isomorphic(const TermGraph& a, const TermGraph& b) {
  if (a.size() != b.size() || !label_census_equal(a, b)) return false;
  std::set<NodeId> none;
  return IsoSearch{a, b, none, none}.search({}, {});
}

bool is_isomorphic(const RationalTerm& a, const RationalTerm& b) {
  const TermGraph& ga = a.graph();
  const TermGraph& gb = b.graph();
  if (ga.size() != gb.size() || a.bottoms().size() != b.bottoms().size() ||
      !label_census_equal(ga, gb))
    return false;
  IsoSearch s{ga, gb, a.bottoms(), b.bottoms()};
  std::map<NodeId, NodeId> fwd, bwd;
  if (!s.assign(fwd, bwd, a.point(), b.point())) return false;
  return s.search(std::move(fwd), std::move(bwd));
}

}  // namespace tgr
