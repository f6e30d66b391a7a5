#include <doctest.h>

#include "helpers.hpp"
#include "tgr/bisimulation.hpp"
#include "tgr/dpo.hpp"
#include "tgr/random.hpp"

using namespace tgr;
using namespace tgr::test;

namespace {

Occurrence O(const char* s) { return Occurrence::parse(s); }

const std::string kG1 = "graph G1 { c: cons(fa, d); fa: f(a); a: a; d: cdr(c); root d; }\n";
const std::string kG3 = "graph G3 { c: cons(fa, d); fa: f(a); a: a; d: _|_; root d; }\n";

Workspace cdr_cons() { return W(kG0 + kG1 + kG3 + kRf + kRcdr); }

DirectDerivation step(const Workspace& w, const std::string& rule, const std::string& graph,
                      const NodeId& at) {
  auto m = match_at(w.tgrs.at(rule), w.graph(graph).graph, at);
  REQUIRE(m);
  return derive(*m);
}

// The left square by hand: D is the host with only the root image emptied,
// and restoring L's root there gives the host back.
void check_left_square(const Match& m, const Complement& c) {
  const TermGraph& host = m.host();
  const NodeId& top = m.root_image();
  CHECK(c.D.node_ids() == host.node_ids());
  for (const auto& n : host.node_ids()) {
    CHECK(c.d(n) == n);
    if (n != top) CHECK(c.D.node(n) == host.node(n));
  }
  CHECK(c.D.is_empty_node(top));
  CHECK(host.label(top) == m.rule.L.label(m.rule.root));
  auto ls = m.rule.L.successors(m.rule.root);
  auto hs = host.successors(top);
  REQUIRE(ls.size() == hs.size());
  for (std::size_t i = 0; i < ls.size(); ++i) CHECK(m.g(ls[i]) == hs[i]);
  for (const auto& [kn, dn] : c.k.map) CHECK(dn == m.g(kn));
}

void check_squares(const DirectDerivation& dd) {
  const EvaluationRule& p = dd.match.rule;
  for (const auto& n : p.K.node_ids()) {
    CHECK(dd.match.g(p.l(n)) == dd.d(dd.k(n)));
    CHECK(dd.h(p.r(n)) == dd.b(dd.k(n)));
  }
  // Every node of H comes from R or D.
  std::set<NodeId> covered;
  for (const auto& [_, x] : dd.h.map) covered.insert(x);
  for (const auto& [_, x] : dd.b.map) covered.insert(x);
  std::vector<NodeId> all = dd.H.node_ids();
  CHECK(covered == std::set<NodeId>(all.begin(), all.end()));
  CHECK(check_morphism(dd.h).ok());
  CHECK(check_morphism(dd.b).ok());
  CHECK(check_wellformed(dd.H).ok());
  for (const auto& [n, t] : dd.track) CHECK(t == dd.b(n));
}

}  // namespace

TEST_CASE("matches") {
  Workspace w = W(kCircularF + kRf + kG0 + kRcdr + "graph A { n: a; root n; }\n");
  CHECK(find_matches(w.tgrs.at("R_f"), w.graph("F").graph).size() == 1);
  auto cdr = find_matches(w.tgrs.at("R_cdr"), w.graph("G0").graph);
  REQUIRE(cdr.size() == 2);
  CHECK(cdr[0].root_image() == "d");
  CHECK(cdr[1].root_image() == "o");
  CHECK(find_matches(w.tgrs.at("R_f"), w.graph("A").graph).empty());
  CHECK_FALSE(match_at(w.tgrs.at("R_cdr"), w.graph("G0").graph, "c"));
}

TEST_CASE("pushout complements") {
  Workspace w = W(kCircularF + kRf + kG0 + kRcdr + kShared);
  auto mf = find_matches(w.tgrs.at("R_f"), w.graph("F").graph).front();
  Complement cf = pushout_complement(mf);
  CHECK(cf.D.size() == 1);
  CHECK(cf.D.is_empty_node("n"));
  check_left_square(mf, cf);

  auto mo = *match_at(w.tgrs.at("R_cdr"), w.graph("G0").graph, "o");
  Complement co = pushout_complement(mo);
  check_left_square(mo, co);
  CHECK(co.D.empty_nodes() == std::set<NodeId>{"o"});

  auto m1 = *match_at(w.tgrs.at("R_f"), w.graph("Shared").graph, "fn");
  Complement c1 = pushout_complement(m1);
  check_left_square(m1, c1);
  CHECK(c1.D.empty_nodes() == std::set<NodeId>{"fn"});

  Workspace ff = W("rule R_ff: f(f(x)) -> x\n" + kCircularF);
  auto mff = match_at(ff.tgrs.at("R_ff"), ff.graph("F").graph, "n");
  REQUIRE(mff);
  CHECK_THROWS_AS(pushout_complement(*mff), InputError);
}

TEST_CASE("pushouts") {
  Workspace w = W(kCircularF + kCircularG + kCircularI + kRf + kRI);
  auto mf = find_matches(w.tgrs.at("R_f"), w.graph("F").graph).front();
  Pushout pf = pushout(mf.rule.r, pushout_complement(mf).k);
  CHECK(is_isomorphic(pf.H, w.graph("Gg").graph));

  auto mi = find_matches(w.tgrs.at("R_I"), w.graph("CI").graph).front();
  Pushout pi = pushout(mi.rule.r, pushout_complement(mi).k);
  CHECK(pi.H.size() == 1);
  CHECK(pi.H.empty_nodes().size() == 1);

  TermGraph one;
  one.add_empty("v");
  GraphMorphism id = identity_morphism(one);
  Pushout trivial = pushout(id, id);
  CHECK(trivial.H == one);

  // Two labelled nodes glued together with different labels.
  TermGraph k;
  k.add_empty("v");
  TermGraph r;
  r.add_node("v", "a");
  TermGraph d;
  d.add_node("v", "b");
  CHECK_THROWS_AS(pushout(GraphMorphism{k, r, {{"v", "v"}}}, GraphMorphism{k, d, {{"v", "v"}}}), EngineError);
}

TEST_CASE("direct derivations") {
  Workspace w = W(kCircularF + kCircularG + kRf);
  DirectDerivation fg = step(w, "R_f", "F", "n");
  CHECK(is_isomorphic(fg.H, w.graph("Gg").graph));
  CHECK(fg.H.label(fg.track.at("n"))->name == "g");
  CHECK(fg.H.successors(fg.track.at("n"))[0] == fg.track.at("n"));
  check_squares(fg);
}

TEST_CASE("the cdr/cons derivations") {
  Workspace w = cdr_cons();
  const std::size_t D = 24;
  Term t0 = unravel(w.graph("G0").pointed(), D);

  DirectDerivation d1 = step(w, "R_cdr", "G0", "o");
  check_squares(d1);
  CHECK(d1.track.at("o") == "d");
  CHECK(is_isomorphic(RationalTerm(d1.H, "d"), RationalTerm(w.graph("G1").graph, "d")));
  CHECK(unravel(derived_term(d1, w.graph("G0").pointed()), D) == t0);

  DirectDerivation d2 = step(w, "R_cdr", "G0", "d");
  check_squares(d2);
  CHECK(d2.H.empty_nodes() == std::set<NodeId>{"d"});
  RationalTerm t2 = derived_term(d2, w.graph("G0").pointed());
  CHECK(unravel(t2, D) == T("cdr(cons(f(a), _|_))"));

  DirectDerivation d3 = step(w, "R_cdr", "G1", "d");
  RationalTerm t3 = derived_term(d3, w.graph("G1").pointed());
  CHECK(unravel(t3, D).is_bottom());
  CHECK(is_isomorphic(d3.H, w.graph("G3").graph));

  TermGraph g2 = d2.H;
  NamedGraph n2{"G2", g2, "o", {"d"}};
  Workspace w2 = w;
  w2.add_graph(n2);
  DirectDerivation d4 = step(w2, "R_cdr", "G2", "o");
  CHECK(unravel(derived_term(d4, n2.pointed()), D).is_bottom());
  CHECK(is_isomorphic(d4.H, w.graph("G3").graph));
}

TEST_CASE("rewriting garbage leaves the point alone") {
  Workspace w = cdr_cons();
  const NamedGraph& g3 = w.graph("G3");
  auto ms = find_matches(w.tgrs.at("R_f"), g3.graph);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].root_image() == "fa");
  DirectDerivation dd = derive(ms[0]);
  CHECK(dd.track.at("d") == "d");
  CHECK(unravel(derived_term(dd, g3.pointed()), 8).is_bottom());
  CHECK(dd.H.label("fa")->name == "g");
}

TEST_CASE("induced parallel redexes") {
  Workspace w = cdr_cons();
  Workspace wf = W(kCircularF + kRf + kShared);
  auto mf = find_matches(wf.tgrs.at("R_f"), wf.graph("F").graph).front();
  RationalRedexSet phi = induced_parallel_redex(mf, "n");
  CHECK(enumerate_occurrences(phi, 4) == std::vector<Occurrence>{O(""), O("1"), O("1.1"), O("1.1.1")});
  CHECK_FALSE(phi.finite());
  CHECK(phi.rule == "R_f");

  auto m3 = *match_at(w.tgrs.at("R_cdr"), w.graph("G1").graph, "d");
  RationalRedexSet phi3 = induced_parallel_redex(m3, "d");
  CHECK(enumerate_occurrences(phi3, 3) == std::vector<Occurrence>{O(""), O("1.2"), O("1.2.1.2")});
  CHECK(phi3.contains(O("1.2.1.2.1.2")));
  CHECK_FALSE(phi3.contains(O("1.1")));

  auto m2 = *match_at(w.tgrs.at("R_cdr"), w.graph("G0").graph, "d");
  RationalRedexSet phi2 = induced_parallel_redex(m2, "o");
  CHECK(enumerate_occurrences(phi2, 2) == std::vector<Occurrence>{O("1.2"), O("1.2.1.2")});

  auto m1 = *match_at(wf.tgrs.at("R_f"), wf.graph("Shared").graph, "fn");
  RationalRedexSet fig = induced_parallel_redex(m1, "k");
  CHECK(fig.finite());
  CHECK(enumerate_occurrences(fig, 10) == std::vector<Occurrence>{O("1"), O("2.1")});
}

TEST_CASE("track substitution") {
  Workspace w = W(kCircularI + kRI + kCircularF + kRf +
                  "graph V { m: h(v, fv); fv: f(a); a: a; v: ; root m; }\n");
  DirectDerivation di = step(w, "R_I", "CI", "n");
  Substitution si = track_substitution(di);
  REQUIRE(si.size() == 1);
  CHECK(si.begin()->second.is_bottom());
  CHECK(unravel(derived_term(di, w.graph("CI").pointed()), 4).is_bottom());

  DirectDerivation df = step(w, "R_f", "F", "n");
  CHECK(track_substitution(df).empty());

  DirectDerivation dv = step(w, "R_f", "V", "fv");
  Substitution sv = track_substitution(dv);
  REQUIRE(sv.count(dv.track.at("v")));
  CHECK(sv.at(dv.track.at("v")) == Term::variable("v"));
  CHECK(unravel(derived_term(dv, w.graph("V").pointed()), 5) == T("h(v, g(a))"));
}

TEST_CASE("property: derivation invariants on random workspaces") {
  RandomSizes sizes;
  std::size_t steps = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng(derive_seed(41, "dpo", i));
    Workspace w = random_workspace(rng, sizes, true);
    if (w.graphs.empty() || !w.orthogonal) continue;
    const NamedGraph& g = w.graphs.front();
    for (const auto& p : w.tgrs.rules()) {
      for (const auto& m : find_matches(p, g.graph)) {
        ++steps;
        Complement c = pushout_complement(m);
        check_left_square(m, c);
        DirectDerivation dd = derive(m);
        check_squares(dd);
        DirectDerivation again = derive(m);
        CHECK(again.H == dd.H);
        CHECK(again.track == dd.track);
        // Away from the root image, a non-collapsing step keeps every label
        // and every edge.
        if (!analyze_rule(unravel_rule(p)).collapsing) {
          for (const auto& n : g.graph.node_ids()) {
            if (n == m.root_image()) continue;
            CHECK(dd.H.label(dd.track.at(n)) == g.graph.label(n));
            auto gs = g.graph.successors(n);
            auto hs = dd.H.successors(dd.track.at(n));
            REQUIRE(gs.size() == hs.size());
            for (std::size_t j = 0; j < gs.size(); ++j) CHECK(hs[j] == dd.track.at(gs[j]));
          }
        }
      }
    }
  }
  CHECK(steps > 100);
}
