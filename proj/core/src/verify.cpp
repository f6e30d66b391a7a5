#include "tgr/verify.hpp"

#include <sstream>

namespace tgr {

OracleOptions VerifyOptions::oracle() const {
  OracleOptions o;
  o.depth = depth;
  o.approximants = approximants;
  o.source_depth = source_depth;
  o.budget = budget;
  return o;
}

std::string derivation_trace(const DirectDerivation& dd, const std::string& from,
                             const std::string& to) {
  std::ostringstream os;
  os << "STEP " << dd.match.rule.name << " at " << dd.match.root_image() << " : " << from
     << " => " << to << "\n";
  os << "track:\n";
  for (const auto& [n, m] : dd.track) os << "  " << n << " -> " << m << "\n";
  return os.str();
}

namespace {

TRS single_rule_system(const Match& m) {
  TRS trs;
  trs.add(unravel_rule(m.rule));
  return trs;
}

}  // namespace

SoundnessReport verify_soundness(const RationalTerm& host, const Match& m, const NodeId& n,
                                 const VerifyOptions& options) {
  if (!(host.graph() == m.host())) throw InputError("match is not into this graph");
  SoundnessReport rep;
  rep.rule = m.rule.name;
  rep.root_image = m.root_image();
  rep.node = n;
  DirectDerivation dd = derive(m);
  rep.trace = derivation_trace(dd, "G", "H");
  RationalTerm start = host.repointed(n);
  rep.left = unravel(derived_term(dd, start), options.depth);

  RationalRedexSet phi = induced_parallel_redex(m, n);
  std::ostringstream desc;
  desc << "paths " << n << " -> " << phi.target << " with rule " << phi.rule
       << (phi.finite() ? " (finite)" : " (infinite)");
  rep.phi = desc.str();
  TRS trs = single_rule_system(m);
  rep.oracle = infinite_parallel_reduce(start, {phi}, trs, options.oracle());
  rep.right = rep.oracle.limit;
  rep.pass = rep.oracle.monotone && rep.left == rep.right;
  return rep;
}

std::string SoundnessReport::to_text() const {
  std::ostringstream os;
  os << trace;
  os << "phi: " << phi << "\n";
  os << "depth " << oracle.depth << ", source depth " << oracle.source_depth << ", approximants "
     << (oracle.indices.empty() ? 0 : oracle.indices.back()) << "\n";
  os << "graph side:  " << to_string(left) << "\n";
  os << "oracle side: " << to_string(right) << "\n";
  os << "verdict: " << (pass ? "pass" : "FAIL") << "\n";
  return os.str();
}

NormalFormReport check_weak_normal_form_preservation(const RationalTerm& host, const TGRS& p) {
  NormalFormReport rep;
  for (const auto& rule : p.rules())
    for (const auto& m : find_matches(rule, host.graph()))
      rep.graph_redexes.push_back(rule.name + "@" + m.root_image());
  TRS u = p.unraveled();
  for (const auto& n : reachable(host.graph(), host.point()))
    for (const auto& rule : u.rules()) {
      Term approx = unravel(host.repointed(n), height(rule.lhs));
      if (match_linear(rule.lhs, approx)) rep.term_redexes.push_back(rule.name + "@" + n);
    }
  rep.graph_normal = rep.graph_redexes.empty();
  rep.term_normal = rep.term_redexes.empty();
  return rep;
}

std::string NormalFormReport::to_text() const {
  std::ostringstream os;
  auto list = [&](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
    return s.empty() ? std::string("none") : s;
  };
  os << "graph normal form: " << (graph_normal ? "yes" : "no") << " (matches: "
     << list(graph_redexes) << ")\n";
  os << "term normal form:  " << (term_normal ? "yes" : "no") << " (redexes: "
     << list(term_redexes) << ")\n";
  if (converse_fails()) os << "converse fails: the term is normal but the graph is not\n";
  os << "verdict: " << (pass() ? "pass" : "FAIL") << "\n";
  return os.str();
}

CofinalityReport check_cofinality_step(const RationalTerm& host, const std::vector<Match>& matches,
                                       const std::vector<bool>& in_phi,
                                       const VerifyOptions& options) {
  if (in_phi.size() != matches.size()) throw InputError("one selector flag per match is required");
  CofinalityReport rep;
  std::vector<RationalRedexSet> sets;
  TRS trs;
  for (const auto& m : matches) {
    if (!(m.host() == host.graph())) throw InputError("match is not into this graph");
    sets.push_back(induced_parallel_redex(m, host.point()));
    if (!trs.find(m.rule.name)) trs.add(unravel_rule(m.rule));
  }

  // Graph side: apply the matches one by one, transporting the rest.
  RationalTerm cur = host;
  std::vector<std::pair<const EvaluationRule*, NodeId>> todo;
  for (const auto& m : matches) todo.emplace_back(&m.rule, m.root_image());
  for (std::size_t i = 0; i < todo.size(); ++i) {
    auto m = match_at(*todo[i].first, cur.graph(), todo[i].second);
    if (!m) throw EngineError("match of '" + todo[i].first->name + "' lost after earlier steps");
    DirectDerivation dd = derive(*m);
    cur = derived_term(dd, cur);
    for (std::size_t j = i + 1; j < todo.size(); ++j) todo[j].second = dd.track.at(todo[j].second);
    ++rep.steps;
  }
  rep.result = cur;
  rep.expected = unravel(cur, options.depth);

  OracleOptions o = options.oracle();
  o.first_phase = in_phi;
  rep.reached = infinite_parallel_reduce(host, sets, trs, o).limit;
  rep.pass = rep.expected == rep.reached;
  return rep;
}

std::string CofinalityReport::to_text() const {
  std::ostringstream os;
  os << "graph steps: " << steps << "\n";
  os << "graph side:  " << to_string(expected) << "\n";
  os << "term side:   " << to_string(reached) << "\n";
  os << "verdict: " << (pass ? "pass" : "FAIL") << "\n";
  return os.str();
}

SequenceReport check_derivation_sequence(const RationalTerm& host, const TGRS& p, std::size_t k,
                                         const VerifyOptions& options) {
  SequenceReport rep;
  RationalTerm cur = host;
  for (std::size_t step = 0; step < k; ++step) {
    std::optional<Match> first;
    for (const auto& rule : p.rules()) {
      auto ms = find_matches(rule, cur.graph());
      if (!ms.empty() && (!first || ms.front().root_image() < first->root_image()))
        first = ms.front();
    }
    if (!first) break;
    rep.steps.push_back(verify_soundness(cur, *first, cur.point(), options));
    rep.pass = rep.pass && rep.steps.back().pass;
    cur = derived_term(derive(*first), cur);
  }
  rep.final_term = cur;
  if (!rep.steps.empty() && !(rep.steps.back().left == unravel(cur, options.depth))) rep.pass = false;
  return rep;
}

}  // namespace tgr
