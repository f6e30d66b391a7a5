// Acceptance run: one PASS/FAIL line per criterion with its wall time.
// Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tgr/bisimulation.hpp"
#include "tgr/dpo.hpp"
#include "tgr/parallel.hpp"
#include "tgr/suite.hpp"
#include "tgr/verify.hpp"
#include "tgr/workspace.hpp"

using namespace tgr;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<Verdict()> run;
};

Workspace load(const std::string& file) { return load_workspace({std::string(TGR_DATA_DIR) + "/" + file}); }

Term P(const Workspace& w, const std::string& text) { return parse_term(text, w.sig); }

Term tower(const std::string& op, std::size_t n) {
  Term t;
  for (std::size_t i = 0; i < n; ++i) t = Term::op(op, {t});
  return t;
}

Match match(const Workspace& w, const std::string& rule, const TermGraph& g, const NodeId& at) {
  auto m = match_at(w.tgrs.at(rule), g, at);
  if (!m) throw EngineError(rule + " does not match at " + at);
  return *m;
}

// Φ restricted to occurrences of length ≤ 12.
std::vector<Occurrence> phi_up_to_12(const RationalRedexSet& phi) {
  std::vector<Occurrence> out;
  for (const auto& w : enumerate_occurrences(phi, 64))
    if (w.size() <= 12) out.push_back(w);
  return out;
}

// (12)^k for k from `first` while the length stays ≤ 12.
std::vector<Occurrence> powers_of_12(int first) {
  std::vector<Occurrence> out;
  for (int k = first; 2 * k <= 12; ++k) {
    std::vector<int> w;
    for (int i = 0; i < k; ++i) {
      w.push_back(1);
      w.push_back(2);
    }
    out.emplace_back(w);
  }
  return out;
}

PropertyResult property(const std::string& name) {
  SuiteConfig c;
  c.seed = 0;
  for (const auto& p : properties())
    if (p.name == name) return run_property(p, c);
  throw EngineError("no property " + name);
}

void require_property(Verdict& v, const PropertyResult& r, std::size_t cases) {
  std::ostringstream os;
  os << r.name << ": " << r.cases << " cases, " << r.skipped << " skipped, " << r.checks << " checks, "
     << r.failures << " failures";
  v.require(r.cases == cases, os.str() + " (expected " + std::to_string(cases) + " cases)");
  v.require(r.failures == 0, os.str());
  if (v.pass) v.detail += (v.detail.empty() ? "" : "; ") + os.str();
  for (const auto& c : r.counterexamples) std::cerr << c << "\n";
}

Verdict circular_i() {
  Verdict v;
  Workspace w = load("circular_i.tgr");
  const NamedGraph& g = w.graph("circular_I");
  DirectDerivation dd = derive(match(w, "R_I", g.graph, "n"));
  v.require(dd.H.size() == 1 && dd.H.empty_nodes().size() == 1, "result is not a single unlabelled node");
  RationalTerm result = derived_term(dd, g.pointed());
  for (std::size_t depth : {0, 1, 5, 64}) v.require(unravel(result, depth).is_bottom(), "unraveling is not ⊥");
  OracleOptions o;
  o.approximants = 8;
  o.depth = 8;
  o.record_all = true;
  OracleReport r = infinite_parallel_reduce(g.pointed(), {RationalRedexSet{g.pointed(), "n", "R_I"}}, w.trs, o);
  v.require(r.d.size() >= 9, "fewer than 9 approximants");
  for (std::size_t i = 0; i < r.d.size() && i <= 8; ++i) v.require(r.d[i].is_bottom(), "d_" + std::to_string(i) + " is not ⊥");
  v.require(r.limit.is_bottom(), "limit is not ⊥");
  if (v.pass) v.detail = "H = one empty node; d_0..d_8 = ⊥";
  return v;
}

Verdict circular_f() {
  Verdict v;
  Workspace w = load("circular_f.tgr");
  const NamedGraph& g = w.graph("circular_f");
  Match m = match(w, "R_f", g.graph, "n");
  DirectDerivation dd = derive(m);
  TermGraph cg;
  cg.add_node("m", "g", {"m"});
  v.require(is_isomorphic(dd.H, cg), "result is not circular-g");
  VerifyOptions opts;
  opts.depth = 64;
  SoundnessReport s = verify_soundness(g.pointed(), m, "n", opts);
  v.require(s.pass, "soundness fails at D = 64");
  v.require(s.left == tower("g", 64) && s.right == tower("g", 64), "sides differ from the g^ω prefix");
  OracleOptions o;
  o.approximants = 16;
  o.depth = 16;
  o.record_all = true;
  OracleReport r = infinite_parallel_reduce(g.pointed(), {RationalRedexSet{g.pointed(), "n", "R_f"}}, w.trs, o);
  v.require(r.d.size() >= 17, "fewer than 17 approximants");
  for (std::size_t i = 0; i < r.d.size() && i <= 16; ++i)
    v.require(r.d[i] == tower("g", i), "d_" + std::to_string(i) + " is not g^i(⊥)");
  if (v.pass) v.detail = "H ≅ circular-g; both sides = g^64 prefix; d_i = g^i(⊥) for i ≤ 16";
  return v;
}

Verdict cdr_cons() {
  Verdict v;
  Workspace w = load("cdr_cons.tgr");
  const NamedGraph& g0 = w.graph("G0");
  Workspace drawn = parse_workspace(
      "sig cdr/1 cons/2 f/1 g/1 a/0\n"
      "graph G1 { c: cons(fa, d); fa: f(a); a: a; d: cdr(c); root d; }\n"
      "graph G2 { o: cdr(c); c: cons(fa, d); fa: f(a); a: a; d: _|_; root o; }\n"
      "graph G3 { c: cons(fa, d); fa: f(a); a: a; d: _|_; root d; }\n");
  auto same = [](const RationalTerm& got, const NamedGraph& want) {
    return is_isomorphic(got, want.pointed()) && bisim_equal(got, want.pointed());
  };
  const std::size_t D = 24;

  Match m1 = match(w, "R_cdr", g0.graph, "o");
  DirectDerivation d1 = derive(m1);
  RationalTerm t1 = derived_term(d1, g0.pointed());
  Match m2 = match(w, "R_cdr", g0.graph, "d");
  DirectDerivation d2 = derive(m2);
  RationalTerm t2 = derived_term(d2, g0.pointed());
  Match m3 = match(w, "R_cdr", t1.graph(), "d");
  RationalTerm t3 = derived_term(derive(m3), t1);
  Match m4 = match(w, "R_cdr", t2.graph(), "o");
  RationalTerm t4 = derived_term(derive(m4), t2);

  v.require(same(t1, drawn.graph("G1")), "R_cdr at o on G0 does not give G1");
  v.require(same(t2, drawn.graph("G2")), "R_cdr at d on G0 does not give G2");
  v.require(same(t3, drawn.graph("G3")), "R_cdr at d on G1 does not give G3");
  v.require(same(t4, drawn.graph("G3")), "R_cdr at o on G2 does not give G3");

  // t_0 = cdr(cons(f(a), t_0)), built up to depth D by hand.
  Term t0;
  for (std::size_t k = 0; k < D; ++k) t0 = Term::op("cdr", {Term::op("cons", {P(w, "f(a)"), t0})});
  t0 = truncate(t0, D);
  v.require(unravel(g0.pointed(), D) == t0, "t_0 prefix");
  v.require(unravel(t1, D) == t0, "t_1 prefix");
  v.require(unravel(t2, D) == P(w, "cdr(cons(f(a), _|_))"), "t_2");
  v.require(unravel(t3, D).is_bottom() && unravel(t4, D).is_bottom(), "t_3");

  std::vector<Occurrence> lambda{Occurrence{}};
  v.require(phi_up_to_12(induced_parallel_redex(m1, "o")) == lambda, "Φ_1");
  v.require(phi_up_to_12(induced_parallel_redex(m2, "o")) == powers_of_12(1), "Φ_2");
  v.require(phi_up_to_12(induced_parallel_redex(m3, "d")) == powers_of_12(0), "Φ_3");
  v.require(phi_up_to_12(induced_parallel_redex(m4, "o")) == lambda, "Φ_4");
  if (v.pass) v.detail = "G_1, G_2, G_3 reproduced; t_0 = t_1 (D = 24), t_2 = cdr(cons(f(a), ⊥)), t_3 = ⊥; Φ_1..Φ_4 exact";
  return v;
}

Verdict sharing() {
  Verdict v;
  Workspace w = load("shared_f.tgr");
  const NamedGraph& g = w.graph("G");
  DirectDerivation dd = derive(match(w, "R_f", g.graph, "fn"));
  RationalTerm after = derived_term(dd, g.pointed());
  Term expected = P(w, "k(g(a), r(g(a)))");
  v.require(unravel_finite(after) == expected, "graph step gives " + to_string(unravel_finite(after)));
  FiniteParallelRedex phi{{Occurrence{1}, "R_f"}, {Occurrence{2, 1}, "R_f"}};
  auto dev = complete_development(P(w, "k(f(a), r(f(a)))"), phi, w.trs);
  v.require(dev.result == expected, "development gives " + to_string(dev.result));
  v.require(dev.steps.size() == 2, "development is not two steps");
  if (v.pass) v.detail = "one graph step = two-step development = k(g(a), r(g(a)))";
  return v;
}

Verdict normal_forms() {
  Verdict v;
  Workspace w = load("cdr_cons.tgr");
  Workspace g3 = parse_workspace("sig cdr/1 cons/2 f/1 g/1 a/0\n"
                                 "graph G3 { c: cons(fa, d); fa: f(a); a: a; d: _|_; root d; }\n");
  NormalFormReport r = check_weak_normal_form_preservation(g3.graph("G3").pointed(), w.tgrs);
  v.require(!r.graph_normal, "G_3 reported normal");
  v.require(r.term_normal, "t_3 reported not normal");
  v.require(r.converse_fails(), "converse failure not recorded");
  require_property(v, property("weak-normal-form"), 200);
  if (v.pass) v.detail = "G_3 not normal, t_3 = ⊥ normal; " + v.detail;
  return v;
}

Verdict suite(const std::string& name, std::size_t cases) {
  Verdict v;
  require_property(v, property(name), cases);
  return v;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "circular-I collapses to ⊥", 1, circular_i},
      {2, "circular-f rewrites to circular-g", 1, circular_f},
      {3, "cdr/cons derivations", 1, cdr_cons},
      {4, "one shared step is a two-redex development", 1, sharing},
      {5, "soundness of graph steps", 60, [] { return suite("soundness", 200); }},
      {6, "well-definedness of infinite parallel reduction", 30, [] { return suite("well-definedness", 100); }},
      {7, "strong confluence", 30, [] { return suite("confluence", 200); }},
      {8, "development order independence", 30, [] { return suite("development-order", 200); }},
      {9, "weak preservation of normal forms", 30, normal_forms},
      {10, "morphism/substitution correspondence", 30, [] { return suite("morphism-substitution", 200); }},
      {11, "rule translation roundtrip", 5, [] { return suite("rule-roundtrip", 50); }},
  };
  bool all = true;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (s >= c.limit_seconds) v.require(false, "over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit");
    all = all && v.pass;
    char time[32];
    std::snprintf(time, sizeof time, "%.3f s", s);
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.title << "  [" << time << "]  " << v.detail
              << std::endl;
  }
  std::cout << (all ? "all criteria pass" : "some criteria fail") << std::endl;
  return all ? 0 : 1;
}
