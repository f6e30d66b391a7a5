#include <doctest.h>

#include <functional>

#include "helpers.hpp"
#include "tgr/bisimulation.hpp"
#include "tgr/random.hpp"

using namespace tgr;
using namespace tgr::test;

namespace {

Occurrence O(const char* s) { return Occurrence::parse(s); }

TermGraph graph_of(const std::string& text) { return W(text).graphs.front().graph; }

// Walks every index sequence of length ≤ max from `from`, by hand.
std::set<Occurrence> walk_paths(const TermGraph& g, const NodeId& from, const NodeId& to,
                                std::size_t max) {
  std::set<Occurrence> out;
  std::function<void(const NodeId&, std::vector<int>&)> go = [&](const NodeId& n, std::vector<int>& w) {
    if (n == to) out.insert(Occurrence(w));
    if (w.size() == max) return;
    auto succ = g.successors(n);
    for (std::size_t i = 0; i < succ.size(); ++i) {
      w.push_back(static_cast<int>(i + 1));
      go(succ[i], w);
      w.pop_back();
    }
  };
  std::vector<int> w;
  go(from, w);
  return out;
}

}  // namespace

TEST_CASE("wellformedness") {
  TermGraph h;
  h.add_node("n", "f", {"n"});
  CHECK(check_wellformed(h).ok());

  TermGraph bad_arity;
  bad_arity.add_node("n", "f", {"n"});
  bad_arity.add_node("m", "f", {"n", "n"});
  CHECK_FALSE(check_wellformed(bad_arity).ok());
  CHECK_FALSE(check_wellformed(bad_arity, sig()).ok());

  TermGraph no_succ;
  no_succ.set_node("n", TermGraph::Node{Operator{"f", 1}, std::nullopt});
  CHECK_FALSE(check_wellformed(no_succ).ok());

  TermGraph dangling;
  dangling.add_node("n", "f", {"missing"});
  CHECK_FALSE(check_wellformed(dangling).ok());
}

TEST_CASE("unraveling") {
  TermGraph f = graph_of(kCircularF);
  CHECK(unravel(f, "n", 3) == T("f(f(f(_|_)))"));

  TermGraph v;
  v.add_empty("n");
  CHECK(unravel(v, "n", 5) == Term::variable("n"));

  TermGraph g0 = graph_of(kG0);
  CHECK(unravel(g0, "o", 2) == T("cdr(cons(_|_, _|_))"));
  CHECK(unravel(g0, "o", 5) == T("cdr(cons(f(a), cdr(cons(f(_|_), cdr(_|_)))))"));
  CHECK_THROWS_AS(unravel_finite(g0, "o"), InputError);
  CHECK(unravel_finite(g0, "fa") == T("f(a)"));

  NamedGraph ng{"B", v, "n", {"n"}};
  CHECK(unravel(ng.pointed(), 3).is_bottom());
}

TEST_CASE("paths between nodes") {
  TermGraph ci = graph_of(kCircularI);
  CHECK(paths_to(ci, "n", "n", 3) == std::set<Occurrence>{O(""), O("1"), O("1.1"), O("1.1.1")});

  TermGraph g0 = graph_of(kG0);
  CHECK(paths_to(g0, "o", "d", 8) ==
        std::set<Occurrence>{O("1.2"), O("1.2.1.2"), O("1.2.1.2.1.2"), O("1.2.1.2.1.2.1.2")});
  CHECK_FALSE(finitely_many_paths(g0, "o", "d"));

  TermGraph tree;
  tree.add_node("r", "f", {"l"});
  tree.add_node("l", "a");
  CHECK(paths_to(tree, "r", "l", 4) == std::set<Occurrence>{O("1")});
  CHECK(finitely_many_paths(tree, "r", "l"));
  CHECK(count_paths(g0, "o", "d", 8) == 4);
  CHECK(enumerate_paths(g0, "o", "d", 8, 2) == std::vector<Occurrence>{O("1.2"), O("1.2.1.2")});
}

TEST_CASE("path occurrences are unique") {
  TermGraph g0 = graph_of(kG0);
  auto p = path_along(g0, "o", O("1.2.1.1"));
  REQUIRE(p);
  CHECK(p->nodes == std::vector<NodeId>{"o", "c", "d", "c", "fa"});
  CHECK(p->occurrence() == O("1.2.1.1"));
  CHECK_FALSE(path_along(g0, "o", O("1.3")));
  CHECK_FALSE(node_at(g0, "o", O("1.1.1.1")));
}

TEST_CASE("cycles and reachability") {
  TermGraph g0 = graph_of(kG0);
  CHECK(cyclic_nodes(g0) == std::set<NodeId>{"c", "d"});
  CHECK(reachable(g0, "d") == std::set<NodeId>{"a", "c", "d", "fa"});
  CHECK_FALSE(is_acyclic(g0));
  TermGraph shared = graph_of(kShared);
  CHECK(is_acyclic(shared));
  CHECK_FALSE(is_tree(shared, "k"));
}

TEST_CASE("induced substitution") {
  Workspace w = W(kCircularF + kRf + kG0 + kRcdr);
  const EvaluationRule& rf = w.tgrs.at("R_f");
  auto ms = find_tree_morphisms(rf.L, rf.root, w.graph("F").graph);
  REQUIRE(ms.size() == 1);
  auto sigma = induced_substitution(ms.front());
  REQUIRE(sigma.size() == 1);
  CHECK(bisim_equal(sigma.begin()->second, w.graph("F").pointed()));

  auto id = identity_morphism(w.graph("G0").graph);
  CHECK(induced_substitution(id).empty());
  TermGraph vars;
  vars.add_empty("x");
  vars.add_node("m", "f", {"x"});
  auto idv = induced_substitution(identity_morphism(vars));
  REQUIRE(idv.size() == 1);
  CHECK(unravel(idv.at("x"), 4) == Term::variable("x"));

  const EvaluationRule& rc = w.tgrs.at("R_cdr");
  const TermGraph& g0 = w.graph("G0").graph;
  auto m = tree_morphism_at(rc.L, rc.root, g0, "o");
  REQUIRE(m);
  auto s = induced_substitution(*m);
  CHECK(unravel(s.at("x"), 16) == T("f(a)"));
  CHECK(bisim_equal(s.at("y"), RationalTerm(g0, "d")));
  // The square U_L[root]·σ = U_G0[o] at depth 16.
  Substitution fin;
  for (const auto& [x, t] : s) fin[x] = unravel(t, 16);
  CHECK(truncate(apply_subst(unravel(rc.L, rc.root, 16), fin), 16) == unravel(g0, "o", 16));
}

TEST_CASE("tree morphisms") {
  Workspace w = W(kCircularF + kCircularG + kRf + kG0 + kRcdr);
  const EvaluationRule& rf = w.tgrs.at("R_f");
  const EvaluationRule& rc = w.tgrs.at("R_cdr");
  CHECK(find_tree_morphisms(rf.L, rf.root, w.graph("F").graph).size() == 1);
  auto cdr = find_tree_morphisms(rc.L, rc.root, w.graph("G0").graph);
  REQUIRE(cdr.size() == 2);
  CHECK(cdr[0](rc.root) == "d");
  CHECK(cdr[1](rc.root) == "o");
  CHECK(find_tree_morphisms(rf.L, rf.root, w.graph("Gg").graph).empty());
  for (const auto& m : cdr) CHECK(check_morphism(m).ok());

  TermGraph notree;
  notree.add_node("r", "h", {"x", "x"});
  notree.add_empty("x");
  CHECK_THROWS_AS(find_tree_morphisms(notree, "r", w.graph("G0").graph), InputError);
}

TEST_CASE("morphism composition") {
  Workspace w = W(kCircularF + kRf);
  const EvaluationRule& rf = w.tgrs.at("R_f");
  auto m = find_tree_morphisms(rf.L, rf.root, w.graph("F").graph).front();
  auto id = identity_morphism(w.graph("F").graph);
  auto c = compose(id, m);
  CHECK(c.map == m.map);
  CHECK(check_morphism(c).ok());
}

TEST_CASE("property: unraveling, paths and the rationality bound on random graphs") {
  RandomSizes sizes;
  sizes.nodes = 6;
  for (std::uint64_t i = 0; i < 150; ++i) {
    Rng rng(derive_seed(11, "graphs", i));
    Signature s = random_signature(rng, sizes);
    TermGraph g = random_graph(rng, s, sizes);
    REQUIRE(check_wellformed(g, s).ok());
    std::vector<NodeId> ids = g.node_ids();
    const std::size_t D = 7;
    for (const auto& n : ids) {
      for (std::size_t d = 0; d + 1 <= D; ++d) CHECK(approx_leq(unravel(g, n, d), unravel(g, n, d + 1)));
      Term full = unravel(g, n, 2 * D);
      for (const auto& m : ids) {
        auto ps = paths_to(g, n, m, D);
        CHECK(ps == walk_paths(g, n, m, D));
        for (const auto& w : ps)
          CHECK(truncate(subterm(full, w), D) == unravel(g, m, D));
      }
    }
    // Distinct node unravelings never outnumber the nodes.
    std::set<std::string> distinct;
    for (const auto& n : ids) distinct.insert(to_string(unravel(g, n, 12)));
    CHECK(distinct.size() <= g.size());
  }
}

TEST_CASE("property: commuting square of random morphisms") {
  RandomSizes sizes;
  sizes.nodes = 5;
  std::size_t found = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng(derive_seed(12, "morph", i));
    Signature s = random_signature(rng, sizes);
    TermGraph h = random_graph(rng, s, sizes, "h");
    // A tree with fresh variables, matched at every node of h.
    std::vector<std::string> vars{"x", "y", "z"};
    Term t = random_term(rng, s, 3, {});
    int next = 0;
    std::function<Term(const Term&)> holes = [&](const Term& u) -> Term {
      if (u.arity() == 0 && coin(rng, 0.5)) return Term::variable("v" + std::to_string(next++));
      std::vector<Term> args;
      for (const Term& a : u.args()) args.push_back(holes(a));
      return Term::op(u.name(), std::move(args));
    };
    t = holes(t);
    if (t.is_variable()) continue;
    RewriteRule probe = RewriteRule::finite("P", t, t);
    EvaluationRule p = graph_of_rule(probe);
    for (const auto& n : h.node_ids()) {
      auto m = tree_morphism_at(p.L, p.root, h, n);
      auto by_term = match_linear(t, unravel(h, n, 12));
      CHECK(m.has_value() == by_term.has_value());
      if (!m) continue;
      ++found;
      auto sigma = induced_substitution(*m);
      Substitution fin;
      for (const auto& [x, r] : sigma) fin[x] = unravel(r, 12);
      CHECK(truncate(apply_subst(t, fin), 12) == unravel(h, n, 12));
      for (const auto& [x, r] : *by_term)
        CHECK(truncate(fin.at(x), 12 - height(t)) == truncate(r, 12 - height(t)));
    }
  }
  CHECK(found > 20);
}
