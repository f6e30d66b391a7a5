#include "tgr/rules.hpp"

#include <limits>

#include "tgr/bisimulation.hpp"
#include "tgr/unification.hpp"

namespace tgr {

namespace {

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

}  // namespace

std::set<std::string> rhs_variables(const RewriteRule& rule) {
  std::set<std::string> out;
  const TermGraph& g = rule.rhs.graph();
  for (const auto& id : reachable(g, rule.rhs.point()))
    if (g.is_empty_node(id) && !rule.rhs.is_bottom_node(id)) out.insert(id);
  return out;
}

CheckResult check_rule(const RewriteRule& rule) {
  CheckResult r;
  const std::string where = "rule '" + rule.name + "': ";
  if (rule.name.empty()) r.fail("rule without a name");
  if (rule.lhs.is_bottom()) {
    r.fail(where + "lhs is ⊥");
    return r;
  }
  if (rule.lhs.is_variable()) r.fail(where + "lhs is a variable");
  if (!is_total(rule.lhs)) r.fail(where + "lhs is not total");
  if (!is_linear(rule.lhs)) r.fail(where + "lhs is not linear");
  r.merge(check_wellformed(rule.rhs.graph()), where + "rhs graph: ");
  if (!r.ok()) return r;
  for (const auto& id : reachable(rule.rhs.graph(), rule.rhs.point()))
    if (rule.rhs.is_bottom_node(id)) {
      r.fail(where + "rhs is not total");
      break;
    }
  std::set<std::string> lv = variables(rule.lhs);
  for (const auto& v : rhs_variables(rule))
    if (!lv.count(v)) r.fail(where + "rhs variable '" + v + "' does not occur in the lhs");
  return r;
}

CheckResult check_rule(const RewriteRule& rule, const Signature& sig) {
  CheckResult r = check_rule(rule);
  const std::string where = "rule '" + rule.name + "': ";
  r.merge(check_term(rule.lhs, sig), where + "lhs: ");
  r.merge(check_wellformed(rule.rhs.graph(), sig), where + "rhs: ");
  for (const auto& v : rhs_variables(rule))
    if (sig.contains(v)) r.fail(where + "rhs variable '" + v + "' is an operator name");
  return r;
}

bool is_infinite_copying(const RewriteRule& rule) {
  const TermGraph& g = rule.rhs.graph();
  std::set<NodeId> reach = reachable(g, rule.rhs.point());
  std::set<NodeId> cyc = cyclic_nodes(g);
  for (const auto& c : cyc) {
    if (!reach.count(c)) continue;
    for (const auto& n : reachable(g, c))
      if (g.is_empty_node(n) && !rule.rhs.is_bottom_node(n)) return true;
  }
  return false;
}

RuleInfo analyze_rule(const RewriteRule& rule) {
  RuleInfo info;
  for (const auto& [v, occs] : variable_occurrences(rule.lhs)) info.lhs_variable_at.emplace(v, occs.front());
  info.lhs_height = height(rule.lhs);
  info.infinite_copying = is_infinite_copying(rule);
  const TermGraph& g = rule.rhs.graph();
  info.collapsing = g.is_empty_node(rule.rhs.point()) && !rule.rhs.is_bottom_node(rule.rhs.point());
  if (!info.infinite_copying)
    for (const auto& v : rhs_variables(rule))
      info.rhs_variable_at.emplace(v, enumerate_paths(g, rule.rhs.point(), v, kUnbounded, kUnbounded));
  std::set<NodeId> reach = reachable(g, rule.rhs.point());
  std::set<NodeId> cyc = cyclic_nodes(g);
  info.rhs_finite = true;
  for (const auto& n : reach)
    if (cyc.count(n)) info.rhs_finite = false;
  if (info.rhs_finite) info.rhs_term = unravel_finite(rule.rhs);
  return info;
}

Term instantiate_rhs(const RewriteRule& rule, const Substitution& sigma, std::size_t depth) {
  std::map<std::pair<NodeId, std::size_t>, Term> cache;
  return unravel_with(rule.rhs.graph(), rule.rhs.point(), depth,
                      [&](const NodeId& id, std::size_t remaining) -> Term {
                        if (rule.rhs.is_bottom_node(id)) return Term{};
                        auto key = std::make_pair(id, remaining);
                        if (auto it = cache.find(key); it != cache.end()) return it->second;
                        auto s = sigma.find(id);
                        Term out = s == sigma.end() ? Term::variable(id) : truncate(s->second, remaining);
                        cache.emplace(key, out);
                        return out;
                      });
}

// ---------------------------------------------------------------------- TRS

void TRS::add(RewriteRule rule) {
  if (find(rule.name)) throw InputError("duplicate rule name '" + rule.name + "'");
  infos_.push_back(analyze_rule(rule));
  rules_.push_back(std::move(rule));
}

const RewriteRule* TRS::find(const std::string& name) const {
  for (const auto& r : rules_)
    if (r.name == name) return &r;
  return nullptr;
}

const RewriteRule& TRS::at(const std::string& name) const {
  if (const RewriteRule* r = find(name)) return *r;
  throw InputError("unknown rule '" + name + "'");
}

const RuleInfo& TRS::info(const std::string& name) const {
  for (std::size_t i = 0; i < rules_.size(); ++i)
    if (rules_[i].name == name) return infos_[i];
  throw InputError("unknown rule '" + name + "'");
}

std::vector<Overlap> find_overlaps(const std::vector<RewriteRule>& rules) {
  std::vector<Overlap> out;
  for (const auto& outer : rules) {
    Term lo = rename_variables(outer.lhs, "'1");
    for (const auto& [u, sym] : occurrence_map(lo)) {
      if (sym.kind != SymbolKind::kOperator) continue;
      for (const auto& inner : rules) {
        if (&inner == &outer && u.empty()) continue;
        if (unify(subterm(lo, u), rename_variables(inner.lhs, "'2")))
          out.push_back(Overlap{outer.name, inner.name, u});
      }
    }
  }
  return out;
}

CheckResult check_orthogonal(const TRS& trs) {
  CheckResult r;
  for (const auto& rule : trs.rules())
    if (!rule.lhs.is_bottom() && !is_linear(rule.lhs))
      r.fail("rule '" + rule.name + "' is not left-linear");
  for (const auto& o : find_overlaps(trs.rules()))
    r.fail("rule '" + o.inner + "' overlaps rule '" + o.outer + "' at " + o.at.to_string());
  return r;
}

// ---------------------------------------------------------- evaluation rules

CheckResult check_evaluation_rule(const EvaluationRule& p) {
  CheckResult r;
  const std::string where = "evaluation rule '" + p.name + "': ";
  r.merge(check_wellformed(p.L), where + "L: ");
  r.merge(check_wellformed(p.K), where + "K: ");
  r.merge(check_wellformed(p.R), where + "R: ");
  if (!r.ok()) return r;

  // Clause 1.
  if (!p.L.contains(p.root)) {
    r.fail(where + "root '" + p.root + "' is not a node of L");
    return r;
  }
  if (!is_tree(p.L, p.root)) r.fail(where + "L is not a tree rooted at '" + p.root + "'");
  if (p.L.is_empty_node(p.root)) r.fail(where + "L is a single empty node");

  // Clause 2.
  if (p.K.node_ids() != p.L.node_ids()) {
    r.fail(where + "K and L have different nodes");
  } else {
    for (const auto& [id, node] : p.K.nodes()) {
      if (id == p.root) {
        if (node.label) r.fail(where + "K is labelled at the root");
      } else if (!(node == p.L.node(id))) {
        r.fail(where + "K differs from L at '" + id + "'");
      }
    }
  }
  if (!(p.l.source == p.K) || !(p.l.target == p.L)) r.fail(where + "l is not a morphism K → L");
  for (const auto& id : p.K.node_ids()) {
    auto it = p.l.map.find(id);
    if (it == p.l.map.end() || it->second != id) {
      r.fail(where + "l is not the inclusion at '" + id + "'");
      break;
    }
  }
  if (p.l.map.size() != p.K.size()) r.fail(where + "l is not bijective");

  // Clause 3.
  if (!(p.r.source == p.K) || !(p.r.target == p.R)) r.fail(where + "r is not a morphism K → R");
  CheckResult rm = check_morphism(p.r);
  r.merge(rm, where + "r: ");
  if (!rm.ok()) return r;
  std::set<NodeId> images;
  for (const auto& y : p.variable_nodes()) {
    const NodeId& x = p.r(y);
    if (!p.R.is_empty_node(x))
      r.fail(where + "r maps variable '" + y + "' to labelled node '" + x + "'");
    if (!images.insert(x).second) r.fail(where + "r identifies variables at '" + x + "'");
  }
  for (const auto& x : p.R.empty_nodes())
    if (!images.count(x)) r.fail(where + "R variable '" + x + "' is not the image of an L variable");
  return r;
}

namespace {

/// Renames nodes by `fixed`; other nodes keep their id unless it is taken.
TermGraph rename_nodes(const TermGraph& g, const std::map<NodeId, NodeId>& fixed,
                       std::map<NodeId, NodeId>& out_map) {
  std::set<NodeId> taken;
  for (const auto& [from, to] : fixed) taken.insert(to);
  for (const auto& id : g.node_ids()) {
    if (auto it = fixed.find(id); it != fixed.end()) {
      out_map[id] = it->second;
      continue;
    }
    NodeId name = id;
    while (taken.count(name)) name = "_" + name;
    taken.insert(name);
    out_map[id] = name;
  }
  TermGraph h;
  for (const auto& [id, node] : g.nodes()) {
    TermGraph::Node n = node;
    if (n.successors)
      for (auto& s : *n.successors) s = out_map.at(s);
    h.set_node(out_map.at(id), std::move(n));
  }
  return h;
}

}  // namespace

RewriteRule unravel_rule(const EvaluationRule& p) {
  RewriteRule out;
  out.name = p.name;
  out.lhs = unravel_finite(p.L, p.root);
  std::map<NodeId, NodeId> fixed;
  for (const auto& y : p.variable_nodes()) fixed.emplace(p.r(y), y);
  std::map<NodeId, NodeId> renamed;
  TermGraph g = rename_nodes(p.R, fixed, renamed);
  out.rhs = RationalTerm(std::move(g), renamed.at(p.r(p.root))).garbage_collected();
  return out;
}

EvaluationRule graph_of_rule(const RewriteRule& rule) {
  CheckResult ok = check_rule(rule);
  if (!ok) throw InputError(ok.first());
  const Term& lhs = rule.lhs;
  std::set<std::string> vars = variables(lhs);
  std::string prefix = "o";
  auto clashes = [&](const std::string& p) {
    for (const auto& v : vars)
      if (v == p || v.rfind(p + "_", 0) == 0) return true;
    return false;
  };
  while (clashes(prefix)) prefix = "_" + prefix;

  EvaluationRule p;
  p.name = rule.name;
  p.root = prefix;
  std::map<NodeId, Occurrence> occ_of;
  std::function<NodeId(const Term&, const std::string&, const Occurrence&)> build =
      [&](const Term& t, const std::string& id, const Occurrence& w) -> NodeId {
    if (t.is_variable()) {
      p.L.add_empty(t.name());
      occ_of.emplace(t.name(), w);
      return t.name();
    }
    std::vector<NodeId> succ;
    for (std::size_t i = 0; i < t.arity(); ++i)
      succ.push_back(build(t.arg(i), id + "_" + std::to_string(i + 1), w.child(static_cast<int>(i + 1))));
    p.L.add_node(id, t.name(), std::move(succ));
    occ_of.emplace(id, w);
    return id;
  };
  build(lhs, prefix, Occurrence{});

  p.K = p.L;
  p.K.clear_label(p.root);
  p.l = identity_morphism(p.K);
  p.l.target = p.L;

  std::vector<RationalTerm> parts{rule.rhs.garbage_collected()};
  for (const Term& a : lhs.args()) parts.push_back(RationalTerm::from_term(a));
  GraphOfTerms got = graph_of_terms(parts);
  p.R = got.graph;
  p.r = GraphMorphism{p.K, p.R, {}};
  for (const auto& [id, w] : occ_of) {
    if (w.empty()) {
      p.r.map.emplace(id, got.points[0]);
      continue;
    }
    auto n = node_at(p.R, got.points.at(static_cast<std::size_t>(w[0])), w.suffix_from(1));
    if (!n) throw EngineError("lhs subterm missing from G[T]");
    p.r.map.emplace(id, *n);
  }
  return p;
}

bool check_self_overlap(const EvaluationRule& p) {
  return find_overlaps({unravel_rule(p)}).empty();
}

// --------------------------------------------------------------------- TGRS

void TGRS::add(EvaluationRule rule) {
  if (find(rule.name)) throw InputError("duplicate rule name '" + rule.name + "'");
  rules_.push_back(std::move(rule));
  orthogonal_.reset();
}

const EvaluationRule* TGRS::find(const std::string& name) const {
  for (const auto& r : rules_)
    if (r.name == name) return &r;
  return nullptr;
}

const EvaluationRule& TGRS::at(const std::string& name) const {
  if (const EvaluationRule* r = find(name)) return *r;
  throw InputError("unknown rule '" + name + "'");
}

TRS TGRS::unraveled() const {
  TRS trs(sig_);
  for (const auto& p : rules_) trs.add(unravel_rule(p));
  return trs;
}

bool TGRS::orthogonal() const {
  if (!orthogonal_) orthogonal_ = check_orthogonal(unraveled()).ok();
  return *orthogonal_;
}

}  // namespace tgr
