#include <doctest.h>

#include "helpers.hpp"
#include "tgr/bisimulation.hpp"
#include "tgr/random.hpp"

using namespace tgr;
using namespace tgr::test;

namespace {

RationalTerm cycle(const std::string& op, int length) {
  TermGraph g;
  for (int i = 0; i < length; ++i) g.add_node("c" + std::to_string(i), op, {"c" + std::to_string((i + 1) % length)});
  return RationalTerm(g, "c0");
}

// Truncation equality at |N1|·|N2|+1 decides equality of rational unravelings.
bool equal_by_truncation(const RationalTerm& a, const RationalTerm& b) {
  std::size_t d = a.graph().size() * b.graph().size() + 1;
  return unravel(a, d) == unravel(b, d);
}

}  // namespace

TEST_CASE("bisimilarity") {
  CHECK(bisim_equal(cycle("f", 1), cycle("f", 2)));
  CHECK(equal_by_truncation(cycle("f", 1), cycle("f", 2)));
  CHECK_FALSE(bisim_equal(cycle("f", 1), cycle("g", 1)));
  CHECK(bisim_equal(RationalTerm::from_term(T("f(a)")), RationalTerm::from_term(T("f(a)"))));

  TermGraph a;
  a.add_node("p", "f", {"q"});
  a.add_node("q", "a");
  TermGraph b;
  b.add_node("z", "f", {"y"});
  b.add_node("y", "a");
  CHECK(bisim_equal(RationalTerm(a, "p"), RationalTerm(b, "z")));
}

TEST_CASE("bisimilarity of variable nodes") {
  TermGraph a;
  a.add_node("p", "f", {"x"});
  a.add_empty("x");
  TermGraph b;
  b.add_node("p", "f", {"y"});
  b.add_empty("y");
  CHECK_FALSE(bisim_equal(RationalTerm(a, "p"), RationalTerm(b, "p")));
  CHECK(bisim_equal(RationalTerm(a, "p"), RationalTerm(b, "p"), {{"x", "y"}}));
  // A bottom is not a variable.
  CHECK_FALSE(bisim_equal(RationalTerm(a, "p", {"x"}), RationalTerm(a, "p")));
  CHECK(bisim_equal(RationalTerm(a, "p", {"x"}), RationalTerm(b, "p", {"y"})));
}

TEST_CASE("rational approximation order") {
  CHECK(rational_approx_leq(RationalTerm(), cycle("f", 1)));
  CHECK(rational_approx_leq(RationalTerm::from_term(T("f(_|_)")), cycle("f", 1)));
  CHECK_FALSE(rational_approx_leq(cycle("f", 1), cycle("g", 1)));
  CHECK_FALSE(rational_approx_leq(cycle("f", 1), RationalTerm::from_term(T("f(_|_)"))));
}

TEST_CASE("minimization") {
  Minimized m = minimize(cycle("f", 2).graph());
  CHECK(m.graph.size() == 1);
  CHECK(unravel(m.graph, m.map.at("c1"), 5) == T("f(f(f(f(f(_|_)))))"));

  TermGraph two_a;
  two_a.add_node("r", "h", {"a1", "a2"});
  two_a.add_node("a1", "a");
  two_a.add_node("a2", "a");
  Minimized shared = minimize(two_a);
  CHECK(shared.graph.size() == 2);
  CHECK(shared.map.at("a1") == shared.map.at("a2"));

  TermGraph f = cycle("f", 1).graph();
  CHECK(is_isomorphic(minimize(f).graph, f));

  // Empty nodes stay apart.
  TermGraph vars;
  vars.add_node("r", "h", {"x", "y"});
  vars.add_empty("x");
  vars.add_empty("y");
  CHECK(minimize(vars).graph.size() == 3);

  TermGraph bots;
  bots.add_node("r", "h", {"x", "y"});
  bots.add_empty("x");
  bots.add_empty("y");
  RationalTerm rb = minimize(RationalTerm(bots, "r", {"x", "y"}));
  CHECK(rb.graph().size() == 2);
  CHECK(unravel(rb, 3) == T("h(_|_, _|_)"));
}

TEST_CASE("graph of terms") {
  GraphOfTerms fa = graph_of_terms({RationalTerm::from_term(T("f(a)"))});
  CHECK(fa.graph.size() == 2);
  NodeId root = fa.points[0];
  REQUIRE(fa.graph.label(root));
  CHECK(fa.graph.label(root)->name == "f");
  CHECK(fa.graph.label(fa.graph.successors(root)[0])->name == "a");

  GraphOfTerms x = graph_of_terms({RationalTerm::from_term(Term::variable("x"))});
  CHECK(x.graph.size() == 1);
  CHECK(x.graph.is_empty_node(x.points[0]));

  GraphOfTerms fw = graph_of_terms({cycle("f", 3)});
  CHECK(fw.graph.size() == 1);
  CHECK(bisim_equal(fw.term(0), cycle("f", 1)));

  GraphOfTerms both = graph_of_terms({RationalTerm::from_term(T("h(x, f(x))")), RationalTerm::from_term(T("f(x)"))});
  CHECK(both.graph.size() == 3);
  CHECK(both.graph.successors(both.points[0])[1] == both.points[1]);
}

TEST_CASE("isomorphism") {
  CHECK(is_isomorphic(cycle("f", 2).graph(), cycle("f", 2).graph()));
  CHECK_FALSE(is_isomorphic(cycle("f", 2).graph(), cycle("f", 1).graph()));
  CHECK(is_isomorphic(cycle("f", 2), cycle("f", 2).repointed("c1")));
}

TEST_CASE("property: bisimulation against truncation equality on random graphs") {
  RandomSizes sizes;
  sizes.nodes = 5;
  sizes.empty_node_rate = 0;
  std::size_t equal_pairs = 0;
  for (std::uint64_t i = 0; i < 150; ++i) {
    Rng rng(derive_seed(21, "bisim", i));
    Signature s = random_signature(rng, sizes);
    TermGraph g = random_graph(rng, s, sizes);
    TermGraph h = random_graph(rng, s, sizes, "m");
    Minimized mg = minimize(g);
    CHECK(is_isomorphic(minimize(mg.graph).graph, mg.graph));
    for (const auto& n : g.node_ids()) {
      CHECK(unravel(mg.graph, mg.map.at(n), 10) == unravel(g, n, 10));
      for (const auto& m : h.node_ids()) {
        RationalTerm a(g, n), b(h, m);
        bool eq = bisim_equal(a, b);
        CHECK(eq == equal_by_truncation(a, b));
        CHECK(eq == (rational_approx_leq(a, b) && rational_approx_leq(b, a)));
        equal_pairs += eq;
      }
      GraphOfTerms gt = graph_of_terms({RationalTerm(g, n)});
      CHECK(bisim_equal(gt.term(0), RationalTerm(g, n)));
      CHECK(gt.graph.size() <= g.size());
    }
  }
  CHECK(equal_pairs > 50);
}
