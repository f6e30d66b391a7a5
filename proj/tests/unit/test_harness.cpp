#include <doctest.h>

#include <regex>

#include "helpers.hpp"
#include "tgr/bisimulation.hpp"
#include "tgr/dot.hpp"
#include "tgr/suite.hpp"
#include "tgr/verify.hpp"

using namespace tgr;
using namespace tgr::test;

namespace {

const std::string kG1 = "graph G1 { c: cons(fa, d); fa: f(a); a: a; d: cdr(c); root d; }\n";
const std::string kG3 = "graph G3 { c: cons(fa, d); fa: f(a); a: a; d: _|_; root d; }\n";

Match match(const Workspace& w, const std::string& rule, const std::string& graph, const NodeId& at) {
  auto m = match_at(w.tgrs.at(rule), w.graph(graph).graph, at);
  REQUIRE(m);
  return *m;
}

std::size_t count(const std::string& text, const std::string& pattern) {
  std::regex re(pattern);
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re),
                                                std::sregex_iterator()));
}

}  // namespace

TEST_CASE("workspace parsing") {
  Workspace circ = parse_workspace("sig f/1 g/1 a/0\n" + kCircularF + kRf);
  CHECK(circ.graphs.size() == 1);
  CHECK(circ.trs.rules().size() == 1);
  CHECK(circ.tgrs.rules().size() == 1);
  CHECK(circ.orthogonal);

  Workspace empty = parse_workspace("");
  CHECK(empty.graphs.empty());
  CHECK(empty.trs.empty());
  CHECK(empty.sig.empty());

  try {
    parse_workspace("sig f/1 a/0\ngraph B { n: f(a, a); a: a; }\n");
    FAIL("arity mismatch accepted");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("arity") != std::string::npos);
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_workspace("sig f/1 a/0\nrule R: f(x) -> f(a, a)\n"), ParseError);
  CHECK_THROWS_AS(parse_workspace("sig f/1\nrule R: x -> f(x)\n"), InputError);
  CHECK_THROWS_AS(parse_workspace("graph G { n: f(n); }\n"), ParseError);

  Workspace rat = W("graph Cg { n: g(n); root n; }\nrule R_o: f(x) -> @Cg.n\n");
  CHECK(unravel(rat.trs.at("R_o").rhs, 3) == T("g(g(g(_|_)))"));
  Workspace cfg = W("config depth = 32;\n");
  CHECK(cfg.config.depth == 32);
  Workspace over = W(kRf + "rule R_fa: f(a) -> a\n");
  CHECK_FALSE(over.orthogonal);
  CHECK_FALSE(over.orthogonality_problems.empty());
}

TEST_CASE("print and parse round trip") {
  Workspace w = W(kG0 + kG3 + kShared + kRf + kRcdr + "graph Cg { n: g(n); root n; }\nrule R_o: I(x) -> @Cg.n\n");
  Workspace back = parse_workspace(print_workspace(w));
  CHECK(back.sig == w.sig);
  REQUIRE(back.graphs.size() == w.graphs.size());
  for (std::size_t i = 0; i < w.graphs.size(); ++i) {
    CHECK(back.graphs[i].graph == w.graphs[i].graph);
    CHECK(back.graphs[i].root == w.graphs[i].root);
    CHECK(back.graphs[i].bottoms == w.graphs[i].bottoms);
  }
  REQUIRE(back.trs.rules().size() == w.trs.rules().size());
  for (std::size_t i = 0; i < w.trs.rules().size(); ++i) {
    CHECK(back.trs.rules()[i].lhs == w.trs.rules()[i].lhs);
    CHECK(bisim_equal(back.trs.rules()[i].rhs, w.trs.rules()[i].rhs));
  }
  CHECK(print_workspace(back) == print_workspace(w));
}

TEST_CASE("soundness on the worked examples") {
  Workspace w = W(kCircularF + kCircularI + kRf + kRI + kG0 + kRcdr);
  VerifyOptions opts;
  opts.depth = 16;
  SoundnessReport f = verify_soundness(w.graph("F").pointed(), match(w, "R_f", "F", "n"), "n", opts);
  CHECK(f.pass);
  Term g16;
  for (int i = 0; i < 16; ++i) g16 = Term::op("g", {g16});
  CHECK(f.left == g16);
  CHECK(f.right == g16);

  SoundnessReport i = verify_soundness(w.graph("CI").pointed(), match(w, "R_I", "CI", "n"), "n", opts);
  CHECK(i.pass);
  CHECK(i.left.is_bottom());
  CHECK(i.right.is_bottom());

  opts.depth = 12;
  SoundnessReport c = verify_soundness(w.graph("G0").pointed(), match(w, "R_cdr", "G0", "d"), "o", opts);
  CHECK(c.pass);
  CHECK(c.left == T("cdr(cons(f(a), _|_))"));
  CHECK(c.trace.find("STEP R_cdr at d") != std::string::npos);
  CHECK(c.to_text().find("verdict: pass") != std::string::npos);
}

TEST_CASE("soundness at every node of the cdr/cons graph") {
  Workspace w = W(kG0 + kG1 + kRcdr);
  VerifyOptions opts;
  opts.depth = 12;
  for (const auto& [graph, at] : std::vector<std::pair<std::string, NodeId>>{{"G0", "o"}, {"G0", "d"}, {"G1", "d"}}) {
    const NamedGraph& g = w.graph(graph);
    for (const auto& n : g.graph.node_ids())
      CHECK(verify_soundness(g.pointed_at(n), match(w, "R_cdr", graph, at), n, opts).pass);
  }
}

TEST_CASE("weak preservation of normal forms") {
  Workspace w = W(kG3 + kRf + kRcdr + "graph A { n: a; root n; }\n" + kCircularF);
  NormalFormReport g3 = check_weak_normal_form_preservation(w.graph("G3").pointed(), w.tgrs);
  CHECK_FALSE(g3.graph_normal);
  CHECK(g3.term_normal);
  CHECK(g3.pass());
  CHECK(g3.converse_fails());
  CHECK(g3.graph_redexes == std::vector<std::string>{"R_f@fa"});

  NormalFormReport a = check_weak_normal_form_preservation(w.graph("A").pointed(), w.tgrs);
  CHECK(a.graph_normal);
  CHECK(a.term_normal);
  CHECK(a.pass());

  NormalFormReport f = check_weak_normal_form_preservation(w.graph("F").pointed(), w.tgrs);
  CHECK_FALSE(f.graph_normal);
  CHECK_FALSE(f.term_normal);
  CHECK(f.pass());
  CHECK_FALSE(f.converse_fails());
}

TEST_CASE("cofinality steps") {
  Workspace w = W(kG0 + kRcdr + kRf);
  RationalTerm g0 = w.graph("G0").pointed();
  std::vector<Match> both{match(w, "R_cdr", "G0", "o"), match(w, "R_cdr", "G0", "d")};
  VerifyOptions opts;
  opts.depth = 12;
  CofinalityReport one = check_cofinality_step(g0, both, {true, false}, opts);
  CHECK(one.pass);
  CHECK(one.expected.is_bottom());
  CHECK(one.reached == one.expected);

  CofinalityReport full = check_cofinality_step(g0, both, {true, true}, opts);
  CHECK(full.pass);
  CHECK(full.reached.is_bottom());

  CofinalityReport none = check_cofinality_step(g0, {}, {}, opts);
  CHECK(none.pass);
  CHECK(none.expected == unravel(g0, 12));
  CHECK(bisim_equal(none.result, g0));
}

TEST_CASE("derivation sequences") {
  Workspace w = W(kG0 + kRcdr + kRf + kCircularF);
  VerifyOptions opts;
  opts.depth = 12;
  SequenceReport s = check_derivation_sequence(w.graph("G0").pointed(), w.tgrs, 3, opts);
  CHECK(s.pass);
  // Matches are taken by ascending root image over all rules: d, fa, o.
  REQUIRE(s.steps.size() == 3);
  CHECK(s.steps[0].root_image == "d");
  CHECK(s.steps[1].rule == "R_f");
  CHECK(s.steps[2].root_image == "o");
  CHECK(unravel(s.final_term, 12).is_bottom());
  SequenceReport f = check_derivation_sequence(w.graph("F").pointed(), w.tgrs, 4, opts);
  CHECK(f.pass);
  CHECK(f.steps.size() == 1);
}

TEST_CASE("dot export") {
  Workspace w = W(kCircularF + kShared + kRf);
  std::string f = graph_to_dot(w.graph("F").pointed(), "F");
  CHECK(count(f, R"(\[label="n:f")") == 1);
  CHECK(count(f, R"("n" -> "n" \[label="1"\])") == 1);
  CHECK(count(f, "->") == 1);

  const NamedGraph& fig = w.graph("Shared");
  std::string g = graph_to_dot(fig.pointed(), "Shared");
  CHECK(count(g, R"(\[label="[a-z]+:)") == 4);
  CHECK(count(g, R"(-> "fn")") == 2);
  CHECK(graph_to_dot(fig.pointed(), "Shared") == g);

  auto m = find_matches(w.tgrs.at("R_f"), w.graph("F").graph).front();
  std::string dpo = derivation_to_dot(derive(m));
  CHECK(count(dpo, "subgraph \"cluster_") == 6);
  for (const char* edge : {"l", "r", "g", "k", "d", "h", "b"})
    CHECK(count(dpo, std::string("label=\"") + edge + "\"\\]") > 0);
  CHECK(count(rule_to_dot(w.tgrs.at("R_f")), "subgraph \"cluster_") == 3);
}

TEST_CASE("property suite plumbing") {
  SuiteConfig vacuous;
  vacuous.sizes.nodes = 0;
  vacuous.cases = 5;
  vacuous.only = {"soundness", "weak-normal-form"};
  SuiteSummary v = run_property_suite(vacuous);
  CHECK(v.pass());
  REQUIRE(v.find("soundness"));
  CHECK(v.find("soundness")->failures == 0);

  SuiteConfig c;
  c.seed = 3;
  c.cases = 6;
  c.only = {"confluence", "graph-invariants"};
  SuiteSummary a = run_property_suite(c);
  c.threads = 1;
  SuiteSummary b = run_property_suite(c);
  CHECK(a.pass());
  REQUIRE(a.properties.size() == b.properties.size());
  for (std::size_t i = 0; i < a.properties.size(); ++i) {
    CHECK(a.properties[i].name == b.properties[i].name);
    CHECK(a.properties[i].cases == b.properties[i].cases);
    CHECK(a.properties[i].checks == b.properties[i].checks);
  }
  CHECK(properties().size() == 12);
}

TEST_CASE("shrinking keeps the failure and drops the rest") {
  Workspace w = W(kG0 + kShared + kRf + kRcdr + kRI);
  // Fails while R_cdr is present and some graph still has a cdr node.
  auto fails = [](const Workspace& x) {
    if (!x.trs.find("R_cdr")) return false;
    for (const auto& g : x.graphs)
      for (const auto& [id, n] : g.graph.nodes())
        if (n.label && n.label->name == "cdr") return true;
    return false;
  };
  Workspace s = shrink_workspace(w, fails);
  CHECK(fails(s));
  CHECK(s.trs.rules().size() == 1);
  std::size_t nodes = 0;
  for (const auto& g : s.graphs) nodes += g.graph.size();
  CHECK(nodes < 9);
}
