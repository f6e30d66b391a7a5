#include "tgr/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <thread>

#include "tgr/bisimulation.hpp"
#include "tgr/dpo.hpp"
#include "tgr/verify.hpp"

namespace tgr {

using Status = CaseOutcome::Status;

// ------------------------------------------------------------- oracles

Term develop_bottom_up(const Term& t, const FiniteParallelRedex& phi, const TRS& trs) {
  std::map<Occurrence, std::string> at;
  for (const Redex& r : phi) at.emplace(r.at, r.rule);
  std::function<Term(const Term&, const Occurrence&)> go = [&](const Term& s,
                                                               const Occurrence& w) -> Term {
    if (!s.is_operator()) return s;
    auto it = at.find(w);
    if (it == at.end()) {
      std::vector<Term> args;
      for (std::size_t i = 0; i < s.arity(); ++i)
        args.push_back(go(s.arg(i), w.child(static_cast<int>(i) + 1)));
      return Term::op(s.name(), std::move(args));
    }
    const RuleInfo& info = trs.info(it->second);
    if (!info.rhs_finite) throw InputError("bottom-up development needs finite right-hand sides");
    // Nested redexes of Φ sit below lhs variables only.
    Substitution sigma;
    for (const auto& [x, v] : info.lhs_variable_at) sigma[x] = go(subterm(s, v), w.concat(v));
    return apply_subst(info.rhs_term, sigma);
  };
  return go(t, Occurrence{});
}

Term random_redex_term(Rng& rng, const TRS& trs, std::size_t height) {
  const Signature& sig = trs.signature();
  if (height <= 1) {
    std::vector<std::string> consts;
    for (const auto& [name, arity] : sig.operators())
      if (arity == 0) consts.push_back(name);
    return Term::op(consts[uniform_index(rng, consts.size())]);
  }
  if (!trs.empty() && coin(rng, 0.35)) {
    const RewriteRule& r = trs.rules()[uniform_index(rng, trs.rules().size())];
    std::size_t below = height > trs.info(r.name).lhs_height ? height - trs.info(r.name).lhs_height : 1;
    Substitution sigma;
    for (const auto& x : variables(r.lhs)) sigma[x] = random_redex_term(rng, trs, std::max<std::size_t>(below, 1));
    return apply_subst(r.lhs, sigma);
  }
  auto it = sig.operators().begin();
  std::advance(it, static_cast<std::ptrdiff_t>(uniform_index(rng, sig.operators().size())));
  std::vector<Term> args;
  for (int i = 0; i < it->second; ++i) args.push_back(random_redex_term(rng, trs, height - 1));
  return Term::op(it->first, std::move(args));
}

// ------------------------------------------------------------- shrinking

namespace {

std::optional<Workspace> rebuild(const Workspace& from, const std::vector<RewriteRule>& rules,
                                 const std::vector<NamedGraph>& graphs) {
  try {
    Workspace w;
    w.sig = from.sig;
    for (const auto& r : rules) {
      w.add_rule(r);
      if (auto it = from.rhs_refs.find(r.name); it != from.rhs_refs.end()) w.rhs_refs.insert(*it);
    }
    for (const auto& g : graphs) w.add_graph(g);
    w.refresh();
    return w;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

Workspace shrink_workspace(const Workspace& w, const std::function<bool(const Workspace&)>& fails) {
  Workspace best = w;
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t i = 0; i < best.trs.rules().size() && !progress; ++i) {
      std::vector<RewriteRule> rules = best.trs.rules();
      rules.erase(rules.begin() + static_cast<std::ptrdiff_t>(i));
      if (auto c = rebuild(best, rules, best.graphs); c && fails(*c)) {
        best = std::move(*c);
        progress = true;
      }
    }
    if (progress || best.graphs.empty()) continue;
    const NamedGraph& g = best.graphs.front();
    for (const auto& id : g.graph.node_ids()) {
      if (g.root && id == *g.root) continue;
      NamedGraph smaller = g;
      smaller.graph.erase(id);
      smaller.bottoms.erase(id);
      for (const auto& [n, node] : g.graph.nodes()) {
        if (n == id || !node.label) continue;
        std::vector<NodeId> succ = *node.successors;
        for (auto& s : succ)
          if (s == id) s = *g.root;
        smaller.graph.add_node(n, node.label->name, std::move(succ));
      }
      std::vector<NamedGraph> graphs = best.graphs;
      graphs.front() = std::move(smaller);
      if (auto c = rebuild(best, best.trs.rules(), graphs); c && fails(*c)) {
        best = std::move(*c);
        progress = true;
        break;
      }
    }
  }
  return best;
}

// ------------------------------------------------------------- properties

namespace {

std::string show(const Term& t) { return to_string(t, 120); }

CaseOutcome guarded(const std::function<CaseOutcome()>& f) {
  try {
    return f();
  } catch (const BudgetError& e) {
    return CaseOutcome::skip(e.what());
  } catch (const std::exception& e) {
    return CaseOutcome::fail(std::string("error: ") + e.what());
  }
}

using WorkspaceCheck = std::function<CaseOutcome(const Workspace&, std::uint64_t, const SuiteConfig&)>;

// Generates a workspace from the case seed, checks it and shrinks failures.
std::function<CaseOutcome(std::uint64_t, const SuiteConfig&)> over_workspaces(WorkspaceCheck check) {
  return [check](std::uint64_t seed, const SuiteConfig& config) {
    Rng rng(seed);
    Workspace w = random_workspace(rng, config.sizes);
    CaseOutcome out = guarded([&] { return check(w, seed, config); });
    if (out.status == Status::kFail) {
      Workspace small = shrink_workspace(w, [&](const Workspace& c) {
        return guarded([&] { return check(c, seed, config); }).status == Status::kFail;
      });
      try {
        out.counterexample = print_workspace(small);
      } catch (const std::exception& e) {
        out.counterexample = std::string("(unprintable: ") + e.what() + ")";
      }
    }
    return out;
  };
}

std::optional<RationalTerm> host_of(const Workspace& w) {
  if (w.graphs.empty() || !w.graphs.front().root) return std::nullopt;
  return w.graphs.front().pointed();
}

std::vector<Match> all_matches(const Workspace& w, const TermGraph& g) {
  std::vector<Match> out;
  for (const auto& p : w.tgrs.rules())
    for (auto& m : find_matches(p, g)) out.push_back(std::move(m));
  return out;
}

Term random_partial_term(Rng& rng, const Signature& sig, std::size_t height) {
  std::function<Term(const Term&, bool)> cut = [&](const Term& t, bool root) -> Term {
    if (!root && coin(rng, 0.12)) return Term{};
    if (!t.is_operator()) return t;
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(cut(a, false));
    return Term::op(t.name(), std::move(args));
  };
  return cut(random_term(rng, sig, height, {"x", "y"}), false);
}

// Largest prefix-closed set of agreeing occurrences; parents come first in
// length-lexicographic order.
std::map<Occurrence, Symbol> common_prefix(const std::map<Occurrence, Symbol>& a,
                                           const std::map<Occurrence, Symbol>& b) {
  std::map<Occurrence, Symbol> out;
  for (const auto& [w, s] : a) {
    auto it = b.find(w);
    if (it == b.end() || !(it->second == s)) continue;
    if (!w.empty() && !out.count(w.prefix(w.size() - 1))) continue;
    out.emplace(w, s);
  }
  return out;
}

bool submap(const std::map<Occurrence, Symbol>& a, const std::map<Occurrence, Symbol>& b) {
  for (const auto& [w, s] : a) {
    auto it = b.find(w);
    if (it == b.end() || !(it->second == s)) return false;
  }
  return true;
}

CaseOutcome term_algebra(std::uint64_t seed, const SuiteConfig& config) {
  Rng rng(seed);
  Signature sig = random_signature(rng, config.sizes);
  Term t = random_partial_term(rng, sig, config.sizes.term_height);
  Term s = coin(rng, 0.5) ? truncate(t, 1 + uniform_index(rng, config.sizes.term_height))
                          : random_partial_term(rng, sig, config.sizes.term_height);
  CaseOutcome out;
  auto expect = [&](bool ok, const std::string& what) {
    ++out.checks;
    if (!ok && out.status == Status::kPass) {
      out.status = Status::kFail;
      out.message = what + " for t = " + show(t) + ", s = " + show(s);
    }
  };
  auto mt = occurrence_map(t), ms = occurrence_map(s);
  expect(from_occurrence_map(mt) == t, "occurrence map roundtrip");
  expect(approx_leq(t, s) == submap(mt, ms), "approx_leq against occurrence maps");
  expect(approx_leq(s, t) == submap(ms, mt), "approx_leq against occurrence maps");
  Term g = glb(t, s);
  expect(occurrence_map(g) == common_prefix(mt, ms), "glb against the common prefix");
  expect(glb(t, t) == t, "glb idempotent");
  expect(!(approx_leq(t, s) && approx_leq(s, t)) || t == s, "approx_leq antisymmetric");
  std::vector<Term> chain;
  for (std::size_t k = 0; k <= height(t); ++k) chain.push_back(truncate(t, k));
  for (std::size_t k = 1; k < chain.size(); ++k)
    expect(approx_leq(chain[k - 1], chain[k]), "truncations form a chain");
  expect(chain_lub(chain) == t, "lub of truncations");
  if (!mt.empty()) {
    auto it = mt.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(uniform_index(rng, mt.size())));
    Term u = random_term(rng, sig, 3);
    expect(subterm(replace(t, it->first, u), it->first) == u, "subterm after replace");
    expect(replace(t, it->first, subterm(t, it->first)) == t, "replace by own subterm");
  }
  expect(parse_term(to_string(t), sig) == t, "print/parse roundtrip");
  return out;
}

TermGraph renamed(const TermGraph& g, const std::string& prefix) {
  std::map<NodeId, NodeId> to;
  std::size_t i = 0;
  for (const auto& id : g.node_ids()) to[id] = prefix + std::to_string(i++);
  TermGraph out;
  for (const auto& [id, node] : g.nodes()) {
    if (!node.label) {
      out.add_empty(to[id]);
      continue;
    }
    std::vector<NodeId> succ;
    for (const auto& s : *node.successors) succ.push_back(to[s]);
    out.add_node(to[id], node.label->name, std::move(succ));
  }
  return out;
}

CaseOutcome graph_invariants(std::uint64_t seed, const SuiteConfig& config) {
  Rng rng(seed);
  Signature sig = random_signature(rng, config.sizes);
  TermGraph g = random_graph(rng, sig, config.sizes);
  CaseOutcome out;
  auto expect = [&](bool ok, const std::string& what) {
    ++out.checks;
    if (!ok && out.status == Status::kPass) {
      out.status = Status::kFail;
      out.message = what;
      out.counterexample = print_graph(NamedGraph{"G", g, std::nullopt, {}});
    }
  };
  expect(check_wellformed(g, sig).ok(), "generated graph is well formed");
  const std::size_t deep = 2 * g.size() + 2;
  Minimized m = minimize(g);
  std::vector<NodeId> ids = g.node_ids();
  std::vector<RationalTerm> terms;
  for (const auto& n : ids) {
    expect(unravel(m.graph, m.map.at(n), deep) == unravel(g, n, deep), "minimize keeps " + n);
    terms.push_back(RationalTerm(g, n));
  }
  for (const auto& a : ids)
    for (const auto& b : ids)
      expect(bisim_equal(RationalTerm(g, a), RationalTerm(g, b)) ==
                 (unravel(g, a, deep) == unravel(g, b, deep)),
             "bisimilarity of " + a + " and " + b + " against deep unravelings");
  GraphOfTerms got = graph_of_terms(terms);
  for (std::size_t i = 0; i < terms.size(); ++i)
    expect(bisim_equal(got.term(i), terms[i]), "graph_of_terms keeps term " + ids[i]);
  expect(is_isomorphic(g, renamed(g, "q")), "isomorphic to a renaming");
  const NodeId& a = ids[uniform_index(rng, ids.size())];
  const NodeId& b = ids[uniform_index(rng, ids.size())];
  expect(finitely_many_paths(g, a, b) == (count_paths(g, a, b, SIZE_MAX) != SIZE_MAX),
         "finite path sets are counted");
  auto paths = enumerate_paths(g, a, b, 6, SIZE_MAX);
  expect(paths.size() == count_paths(g, a, b, 6), "enumerated paths agree with the count");
  expect(std::is_sorted(paths.begin(), paths.end()), "paths in length-lexicographic order");
  for (const auto& w : paths) expect(node_at(g, a, w) == b, "enumerated path ends at target");
  return out;
}

CaseOutcome workspace_roundtrip(const Workspace& w, std::uint64_t, const SuiteConfig&) {
  CaseOutcome out;
  Workspace back = parse_workspace(print_workspace(w));
  auto expect = [&](bool ok, const std::string& what) {
    ++out.checks;
    if (!ok && out.status == Status::kPass) {
      out.status = Status::kFail;
      out.message = what;
    }
  };
  expect(back.sig == w.sig, "signature survives");
  expect(back.trs.rules().size() == w.trs.rules().size(), "rule count survives");
  for (std::size_t i = 0; i < std::min(back.trs.rules().size(), w.trs.rules().size()); ++i) {
    const auto &x = w.trs.rules()[i], &y = back.trs.rules()[i];
    expect(x.name == y.name && x.lhs == y.lhs && bisim_equal(x.rhs, y.rhs), "rule " + x.name);
  }
  // Printing may add a graph for a cyclic rhs; every original graph must come back.
  for (const auto& g : w.graphs) {
    const NamedGraph* h = back.find_graph(g.name);
    expect(h && h->root == g.root && h->bottoms == g.bottoms && h->graph == g.graph,
           "graph " + g.name + " survives");
  }
  return out;
}

CaseOutcome soundness(const Workspace& w, std::uint64_t, const SuiteConfig& config) {
  CaseOutcome out;
  auto host = host_of(w);
  if (!host) return out;
  VerifyOptions options;
  options.depth = config.soundness_depth;
  options.budget = config.budget;
  for (const Match& m : all_matches(w, host->graph())) {
    std::set<NodeId> nodes{host->point(), m.root_image()};
    for (const NodeId& n : nodes) {
      SoundnessReport r = verify_soundness(*host, m, n, options);
      ++out.checks;
      if (!r.pass) return CaseOutcome::fail(r.to_text());
    }
  }
  return out;
}

CaseOutcome well_definedness(const Workspace& w, std::uint64_t seed, const SuiteConfig& config) {
  CaseOutcome out;
  auto host = host_of(w);
  if (!host) return out;
  std::vector<Match> matches = all_matches(w, host->graph());
  if (matches.empty()) return out;
  Rng rng(seed ^ 0x5a5a5a5aULL);
  const Match& m = matches[uniform_index(rng, matches.size())];
  RationalRedexSet phi = induced_parallel_redex(m, host->point());
  TRS trs = w.tgrs.unraveled();
  OracleOptions a;
  a.depth = config.chain_depth;
  a.budget = config.budget;
  OracleOptions b = a;
  b.shuffle_seed = seed;
  OracleOptions c = a;
  c.shuffle_seed = seed + 1;
  c.source_depth = default_source_depth(a.depth, trs.info(phi.rule).lhs_height) + 2;
  OracleReport ra = infinite_parallel_reduce(*host, {phi}, trs, a);
  OracleReport rb = infinite_parallel_reduce(*host, {phi}, trs, b);
  OracleReport rc = infinite_parallel_reduce(*host, {phi}, trs, c);
  auto expect = [&](bool ok, const std::string& what) {
    ++out.checks;
    if (!ok && out.status == Status::kPass) {
      out.status = Status::kFail;
      out.message = what + " (rule " + m.rule.name + " at " + m.root_image() + ")";
    }
  };
  expect(ra.monotone && rb.monotone && rc.monotone, "d-chains are monotone");
  expect(ra.d.back() == rb.d.back(), "shuffled enumeration ends in the same development");
  expect(ra.limit == rb.limit && ra.limit == rc.limit,
         "enumerations agree at depth " + std::to_string(a.depth) + ": " + show(ra.limit) +
             " vs " + show(rc.limit));
  for (const Term& d : ra.d) expect(approx_leq(d, rc.d.back()), "shallow chain below the deep one");
  return out;
}

FiniteParallelRedex random_subset(Rng& rng, const std::set<Redex>& all, double p) {
  FiniteParallelRedex out;
  for (const Redex& r : all)
    if (coin(rng, p)) out.insert(r);
  return out;
}

struct FiniteInstance {
  TRS trs;
  Term t;
  std::set<Redex> redexes;
};

FiniteInstance finite_instance(Rng& rng, const SuiteConfig& config) {
  FiniteInstance in;
  Signature sig = random_signature(rng, config.sizes);
  in.trs = TRS(sig);
  for (auto& r : random_orthogonal_rules(rng, sig, config.sizes, false)) in.trs.add(std::move(r));
  in.t = random_redex_term(rng, in.trs, config.sizes.term_height);
  in.redexes = find_redexes(in.t, in.trs);
  return in;
}

std::string redexes_text(const FiniteParallelRedex& phi) {
  std::string s = "{";
  for (const Redex& r : phi) s += (s.size() > 1 ? " " : "") + r.to_string();
  return s + "}";
}

CaseOutcome confluence(std::uint64_t seed, const SuiteConfig& config) {
  Rng rng(seed);
  FiniteInstance in = finite_instance(rng, config);
  FiniteParallelRedex phi = random_subset(rng, in.redexes, 0.5);
  FiniteParallelRedex phi2 = random_subset(rng, in.redexes, 0.5);
  CaseOutcome out;
  Join j = join_parallel(in.t, phi, phi2, in.trs);
  Term left = develop_bottom_up(j.via_phi, j.psi_prime, in.trs);
  Term right = develop_bottom_up(j.via_phi_prime, j.psi, in.trs);
  out.checks = 4;
  if (j.via_phi != develop_bottom_up(in.t, phi, in.trs) ||
      j.via_phi_prime != develop_bottom_up(in.t, phi2, in.trs) || left != right || left != j.t3)
    return CaseOutcome::fail("diamond fails on " + show(in.t) + " with " + redexes_text(phi) +
                             " and " + redexes_text(phi2));
  return out;
}

CaseOutcome development_order(std::uint64_t seed, const SuiteConfig& config) {
  Rng rng(seed);
  FiniteInstance in = finite_instance(rng, config);
  CaseOutcome out;
  if (in.redexes.empty()) return out;
  FiniteParallelRedex phi = random_subset(rng, in.redexes, 0.6);
  auto it = in.redexes.begin();
  std::advance(it, static_cast<std::ptrdiff_t>(uniform_index(rng, in.redexes.size())));
  DevelopmentOptions o;
  o.tracked = {*it};
  std::vector<Development<Term>> runs;
  for (DevelopmentOrder order : {DevelopmentOrder::kOutermostFirst, DevelopmentOrder::kInnermostFirst,
                                 DevelopmentOrder::kRandom}) {
    o.order = order;
    o.seed = seed;
    runs.push_back(complete_development(in.t, phi, in.trs, o));
  }
  Term expected = develop_bottom_up(in.t, phi, in.trs);
  for (const auto& r : runs) {
    out.checks += 2;
    if (r.result != expected || r.tracked_residuals != runs.front().tracked_residuals)
      return CaseOutcome::fail("orders disagree on " + show(in.t) + " with " + redexes_text(phi) +
                               ", third redex " + it->to_string());
  }
  ++out.checks;
  if (phi.count(*it) && !runs.front().tracked_residuals.empty())
    return CaseOutcome::fail("a contracted redex kept residuals");
  return out;
}

CaseOutcome weak_normal_form(const Workspace& w, std::uint64_t seed, const SuiteConfig&) {
  CaseOutcome out;
  auto host = host_of(w);
  if (!host) return out;
  Rng rng(seed ^ 0x3c3c3c3cULL);
  RationalTerm t = *host;
  std::vector<Match> matches = all_matches(w, t.graph());
  // Half the cases look at a derived graph, which carries bottoms and garbage.
  if (!matches.empty() && coin(rng, 0.5)) {
    DirectDerivation dd = derive(matches[uniform_index(rng, matches.size())]);
    t = derived_term(dd, t);
    matches = all_matches(w, t.graph());
  }
  NormalFormReport r = check_weak_normal_form_preservation(t, w.tgrs);
  bool term_normal = find_redexes(t, w.tgrs.unraveled(), t.graph().size()).empty();
  out.checks = 3;
  if (!r.pass()) return CaseOutcome::fail("graph normal form without term normal form\n" + r.to_text());
  if (r.graph_normal != matches.empty()) return CaseOutcome::fail("graph normal form misjudged");
  if (r.term_normal != term_normal) return CaseOutcome::fail("term normal form misjudged\n" + r.to_text());
  return out;
}

struct RandomMorphism {
  TermGraph G;
  GraphMorphism f;
};

RandomMorphism random_morphism(Rng& rng, const Signature& sig, const TermGraph& h,
                               std::size_t max_nodes) {
  std::vector<NodeId> hid = h.node_ids();
  std::map<NodeId, NodeId> img;
  std::vector<NodeId> queue{"m0"};
  img["m0"] = hid[uniform_index(rng, hid.size())];
  std::size_t count = 1;
  RandomMorphism out;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const NodeId u = queue[q];
    const NodeId x = img[u];
    if (h.is_empty_node(x) || !coin(rng, 0.75)) {
      out.G.add_empty(u);
      continue;
    }
    std::vector<NodeId> succ;
    for (const auto& y : h.successors(x)) {
      std::vector<NodeId> same;
      for (const auto& [v, iv] : img)
        if (iv == y) same.push_back(v);
      if (!same.empty() && (coin(rng, 0.5) || count >= max_nodes)) {
        succ.push_back(same[uniform_index(rng, same.size())]);
      } else if (count < max_nodes) {
        NodeId v = "m" + std::to_string(count++);
        img[v] = y;
        queue.push_back(v);
        succ.push_back(v);
      } else {
        succ.clear();
        break;
      }
    }
    if (succ.size() != h.successors(x).size())
      out.G.add_empty(u);
    else
      out.G.add_node(u, h.label(x)->name, std::move(succ));
  }
  (void)sig;
  out.f = GraphMorphism{out.G, h, img};
  return out;
}

CaseOutcome morphism_substitution(std::uint64_t seed, const SuiteConfig& config) {
  Rng rng(seed);
  Signature sig = random_signature(rng, config.sizes);
  TermGraph h = random_graph(rng, sig, config.sizes, "h");
  RandomMorphism rm = random_morphism(rng, sig, h, config.sizes.nodes);
  const std::size_t D = config.morphism_depth;
  CaseOutcome out;
  auto expect = [&](bool ok, const std::string& what) {
    ++out.checks;
    if (!ok && out.status == Status::kPass) {
      out.status = Status::kFail;
      out.message = what;
      out.counterexample = print_graph(NamedGraph{"G", rm.G, std::nullopt, {}}) +
                           print_graph(NamedGraph{"H", h, std::nullopt, {}});
    }
  };
  expect(check_morphism(rm.f).ok(), "generated morphism is a morphism");
  Substitution sigma;
  for (const auto& x : rm.G.empty_nodes()) sigma[x] = unravel(h, rm.f(x), D);
  for (const auto& [x, t] : induced_substitution(rm.f))
    expect(unravel(t, D) == sigma.at(x), "induced substitution at " + x);
  for (const auto& n : rm.G.node_ids())
    expect(truncate(apply_subst(unravel(rm.G, n, D), sigma), D) == unravel(h, rm.f(n), D),
           "square commutes at " + n);
  expect(compose(rm.f, identity_morphism(rm.G)).map == rm.f.map, "identity is neutral");

  // Tree morphisms and matching substitutions determine each other.
  RewriteRule rule = random_rule(rng, sig, "P", config.sizes, false);
  EvaluationRule p = graph_of_rule(rule);
  const RuleInfo info = analyze_rule(rule);
  for (const auto& x : h.node_ids()) {
    auto mo = tree_morphism_at(p.L, p.root, h, x);
    auto sub = match_linear(rule.lhs, unravel(h, x, D));
    expect(mo.has_value() == sub.has_value(), "morphism exists iff the lhs matches at " + x);
    if (!mo || !sub) continue;
    expect(check_morphism(*mo).ok(), "tree morphism at " + x);
    for (const auto& [v, w] : info.lhs_variable_at)
      expect(sub->at(v) == unravel(h, mo->map.at(v), D - w.size()),
             "substitution and morphism agree on " + v + " at " + x);
  }
  return out;
}

RewriteRule fixed_rule(int k) {
  Signature sig;
  for (auto [n, a] : std::vector<std::pair<const char*, int>>{
           {"f", 1}, {"g", 1}, {"I", 1}, {"cdr", 1}, {"cons", 2}})
    sig.add(n, a);
  auto parse = [&](const char* s) { return parse_term(s, sig); };
  switch (k) {
    case 0: return RewriteRule::finite("R_f", parse("f(x)"), parse("g(x)"));
    case 1: return RewriteRule::finite("R_cdr", parse("cdr(cons(x, y))"), parse("y"));
    default: return RewriteRule::finite("R_I", parse("I(x)"), parse("x"));
  }
}

CaseOutcome rule_roundtrip(std::uint64_t seed, const SuiteConfig& config) {
  Rng rng(seed);
  std::vector<RewriteRule> rules;
  Signature sig = random_signature(rng, config.sizes);
  rules.push_back(random_rule(rng, sig, "R", config.sizes, true));
  // The named rules ride along with every case; they are cheap.
  for (int k = 0; k < 3; ++k) rules.push_back(fixed_rule(k));
  CaseOutcome out;
  for (const auto& rule : rules) {
    EvaluationRule p = graph_of_rule(rule);
    CheckResult ok = check_evaluation_rule(p);
    RewriteRule u = unravel_rule(p);
    EvaluationRule p2 = graph_of_rule(u);
    out.checks += 4;
    if (!ok) return CaseOutcome::fail(rule.name + ": " + ok.first());
    if (u.lhs != rule.lhs || !bisim_equal(u.rhs, rule.rhs))
      return CaseOutcome::fail(rule.name + ": unravel_rule does not invert graph_of_rule, got " +
                               show(u.lhs) + " -> " + show(unravel(u.rhs, 8)));
    if (!is_isomorphic(p.L, p2.L) || !is_isomorphic(p.R, p2.R))
      return CaseOutcome::fail(rule.name + ": graph_of_rule is not stable");
  }
  return out;
}

CaseOutcome cofinality(const Workspace& w, std::uint64_t seed, const SuiteConfig& config) {
  CaseOutcome out;
  auto host = host_of(w);
  if (!host) return out;
  std::vector<Match> matches = all_matches(w, host->graph());
  if (matches.size() > 4) matches.resize(4);
  Rng rng(seed ^ 0x1234ULL);
  std::vector<bool> in_phi;
  for (std::size_t i = 0; i < matches.size(); ++i) in_phi.push_back(coin(rng, 0.5));
  VerifyOptions options;
  options.depth = config.morphism_depth;
  options.budget = config.budget;
  CofinalityReport r = check_cofinality_step(*host, matches, in_phi, options);
  out.checks = 1;
  if (!r.pass) return CaseOutcome::fail(r.to_text());
  return out;
}

CaseOutcome derivation_sequence(const Workspace& w, std::uint64_t, const SuiteConfig& config) {
  CaseOutcome out;
  auto host = host_of(w);
  if (!host) return out;
  VerifyOptions options;
  options.depth = config.morphism_depth;
  options.budget = config.budget;
  SequenceReport r = check_derivation_sequence(*host, w.tgrs, 4, options);
  out.checks = r.steps.size();
  if (!r.pass) {
    std::string text = "sequence fails after " + std::to_string(r.steps.size()) + " steps\n";
    if (!r.steps.empty()) text += r.steps.back().to_text();
    return CaseOutcome::fail(text);
  }
  return out;
}

std::function<CaseOutcome(std::uint64_t, const SuiteConfig&)> plain(
    CaseOutcome (*f)(std::uint64_t, const SuiteConfig&)) {
  return [f](std::uint64_t seed, const SuiteConfig& config) {
    return guarded([&] { return f(seed, config); });
  };
}

}  // namespace

const std::vector<Property>& properties() {
  static const std::vector<Property> all = {
      {"term-algebra", "approximation order, glb, lub, replacement, printing", 200,
       plain(term_algebra)},
      {"graph-invariants", "minimization, bisimilarity, graph_of_terms, path counting", 200,
       plain(graph_invariants)},
      {"workspace-roundtrip", "parse(print(W)) is isomorphic to W", 100,
       over_workspaces(workspace_roundtrip)},
      {"soundness", "every graph step equals its induced parallel reduction at depth 32", 200,
       over_workspaces(soundness)},
      {"well-definedness", "monotone d-chains; distinct enumerations agree at depth 32", 100,
       over_workspaces(well_definedness)},
      {"confluence", "finite parallel reductions close the diamond", 200, plain(confluence)},
      {"development-order", "developments in three orders agree, residuals included", 200,
       plain(development_order)},
      {"weak-normal-form", "graph normal forms unravel to term normal forms", 200,
       over_workspaces(weak_normal_form)},
      {"morphism-substitution", "morphisms and substitutions commute with unraveling", 200,
       plain(morphism_substitution)},
      {"rule-roundtrip", "unravel_rule inverts graph_of_rule", 50, plain(rule_roundtrip)},
      {"cofinality", "residual developments reach the graph result", 100,
       over_workspaces(cofinality)},
      {"derivation-sequence", "chained soundness over up to four steps", 50,
       over_workspaces(derivation_sequence)},
  };
  return all;
}

PropertyResult run_property(const Property& p, const SuiteConfig& config) {
  auto start = std::chrono::steady_clock::now();
  PropertyResult result;
  result.name = p.name;
  result.about = p.about;
  std::size_t target = p.default_cases;
  if (config.cases) target = config.cases;
  if (auto it = config.case_counts.find(p.name); it != config.case_counts.end()) target = it->second;
  std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());

  std::size_t drawn = 0;
  while (result.cases < target && drawn < 10 * target) {
    std::size_t batch = target - result.cases;
    std::vector<CaseOutcome> outcomes(batch);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i; (i = next++) < batch;)
        outcomes[i] = p.run(derive_seed(config.seed, p.name, drawn + i), config);
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::min(threads, batch); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    drawn += batch;
    for (std::size_t i = 0; i < batch; ++i) {
      const CaseOutcome& o = outcomes[i];
      if (o.status == Status::kSkip) {
        ++result.skipped;
        continue;
      }
      ++result.cases;
      result.checks += o.checks;
      if (o.status == Status::kFail) {
        ++result.failures;
        if (result.counterexamples.size() < 3) {
          std::string text = "case " + std::to_string(drawn - batch + i) + ": " + o.message;
          if (!o.counterexample.empty()) text += "\nshrunk input:\n" + o.counterexample;
          result.counterexamples.push_back(std::move(text));
        }
      }
    }
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SuiteSummary run_property_suite(const SuiteConfig& config) {
  SuiteSummary summary;
  summary.seed = config.seed;
  for (const Property& p : properties())
    if (config.only.empty() || config.only.count(p.name))
      summary.properties.push_back(run_property(p, config));
  return summary;
}

std::string PropertyResult::to_text() const {
  std::ostringstream os;
  os << std::left << std::setw(24) << name << (pass() ? "PASS" : "FAIL") << "  cases " << cases
     << "  skipped " << skipped << "  checks " << checks << "  failures " << failures << "  "
     << std::fixed << std::setprecision(2) << seconds << "s\n";
  for (const auto& c : counterexamples) os << "  counterexample " << c << '\n';
  return os.str();
}

bool SuiteSummary::pass() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.pass(); });
}

const PropertyResult* SuiteSummary::find(const std::string& name) const {
  for (const auto& p : properties)
    if (p.name == name) return &p;
  return nullptr;
}

std::string SuiteSummary::to_text() const {
  std::ostringstream os;
  os << "suite seed " << seed << '\n';
  for (const auto& p : properties) os << p.to_text();
  os << (pass() ? "all properties hold" : "some properties fail") << '\n';
  return os.str();
}

}  // namespace tgr
