// tgr: command-line front end to the term graph rewriting engine.
//
// Exit codes: 0 pass, 1 verification failure, 2 input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "tgr/bisimulation.hpp"
#include "tgr/dot.hpp"
#include "tgr/dpo.hpp"
#include "tgr/parallel.hpp"
#include "tgr/suite.hpp"
#include "tgr/verify.hpp"
#include "tgr/workspace.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace tgr;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;

struct Options {
  std::vector<std::string> files;
  bool json = false;
};

json graph_json(const TermGraph& g, const std::optional<NodeId>& root,
                const std::set<NodeId>& bottoms) {
  json nodes = json::array();
  for (const auto& [id, node] : g.nodes()) {
    json n{{"id", id}};
    if (bottoms.count(id))
      n["bottom"] = true;
    else if (node.label)
      n["label"] = node.label->name, n["successors"] = *node.successors;
    else
      n["label"] = nullptr;
    nodes.push_back(std::move(n));
  }
  json out{{"nodes", std::move(nodes)}};
  out["root"] = root ? json(*root) : json(nullptr);
  return out;
}

json term_json(const RationalTerm& t, std::size_t depth) {
  json out = graph_json(t.graph(), t.point(), t.bottoms());
  out["unraveling"] = to_string(unravel(t, depth));
  out["depth"] = depth;
  return out;
}

std::string occurrences_text(const std::vector<Occurrence>& occs) {
  std::string s;
  for (const auto& w : occs) s += w.to_string() + "\n";
  return s;
}

/// RULE@NODE
std::pair<std::string, NodeId> parse_redex_spec(const std::string& spec) {
  auto at = spec.find('@');
  if (at == std::string::npos || at == 0 || at + 1 == spec.size())
    throw InputError("expected RULE@NODE, got '" + spec + "'");
  return {spec.substr(0, at), spec.substr(at + 1)};
}

std::vector<std::pair<std::string, NodeId>> parse_redex_specs(const std::string& specs) {
  std::vector<std::pair<std::string, NodeId>> out;
  std::size_t start = 0;
  while (start <= specs.size()) {
    auto comma = specs.find(',', start);
    std::string one = specs.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!one.empty()) out.push_back(parse_redex_spec(one));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw InputError("no redex given");
  return out;
}

Match require_match(const Workspace& w, const std::string& rule, const TermGraph& g,
                    const NodeId& at) {
  const EvaluationRule& p = w.tgrs.at(rule);
  if (!g.contains(at)) throw InputError("unknown node '" + at + "'");
  auto m = match_at(p, g, at);
  if (!m) throw InputError("rule '" + rule + "' does not match at '" + at + "'");
  return *m;
}

NodeId node_or_root(const NamedGraph& g, const std::string& node) {
  if (!node.empty()) {
    if (!g.graph.contains(node)) throw InputError("graph '" + g.name + "' has no node '" + node + "'");
    return node;
  }
  if (!g.root) throw InputError("graph '" + g.name + "' has no root; pass a node");
  return *g.root;
}

/// First match in the graph: lowest root image, earliest rule on ties.
std::optional<Match> first_match(const Workspace& w, const TermGraph& g) {
  std::optional<Match> best;
  for (const auto& p : w.tgrs.rules()) {
    auto ms = find_matches(p, g);
    if (!ms.empty() && (!best || ms.front().root_image() < best->root_image())) best = ms.front();
  }
  return best;
}

void emit(const Options& o, const std::string& text, const json& j) {
  if (o.json)
    std::cout << j.dump(2) << '\n';
  else
    std::cout << text;
}

// ------------------------------------------------------------------ commands

int cmd_check(const Options& o) {
  Workspace w = load_workspace(o.files);
  std::ostringstream os;
  json rules = json::array();
  os << "signature: " << w.sig.operators().size() << " operators\n";
  os << "graphs: " << w.graphs.size() << "\n";
  for (const auto& g : w.graphs)
    os << "  " << g.name << ": " << g.graph.size() << " nodes"
       << (g.root ? ", root " + *g.root : std::string(", no root")) << '\n';
  os << "rules: " << w.trs.rules().size() << "\n";
  for (const auto& r : w.trs.rules()) {
    const RuleInfo& info = w.trs.info(r.name);
    os << "  " << r.name << ": lhs height " << info.lhs_height
       << (info.collapsing ? ", collapsing" : "") << (info.rhs_finite ? "" : ", cyclic rhs")
       << (info.infinite_copying ? ", infinite-copying" : "") << '\n';
    rules.push_back({{"name", r.name},
                     {"lhs", to_string(r.lhs)},
                     {"lhs_height", info.lhs_height},
                     {"collapsing", info.collapsing},
                     {"rhs_finite", info.rhs_finite},
                     {"infinite_copying", info.infinite_copying}});
  }
  os << "orthogonal: " << (w.orthogonal ? "yes" : "no") << '\n';
  for (const auto& p : w.orthogonality_problems) os << "  " << p << '\n';
  json graphs = json::array();
  for (const auto& g : w.graphs) graphs.push_back({{"name", g.name}, {"nodes", g.graph.size()}});
  emit(o, os.str(),
       {{"graphs", graphs}, {"rules", rules}, {"orthogonal", w.orthogonal},
        {"problems", w.orthogonality_problems}});
  return kPass;
}

int cmd_unravel(const Options& o, const std::string& graph, const std::string& node,
                std::optional<std::size_t> depth) {
  Workspace w = load_workspace(o.files);
  const NamedGraph& g = w.graph(graph);
  std::size_t d = depth.value_or(w.config.depth);
  Term t = unravel(g.pointed_at(node_or_root(g, node)), d);
  emit(o, to_string(t) + "\n", {{"graph", graph}, {"depth", d}, {"term", to_string(t)}});
  return kPass;
}

int cmd_matches(const Options& o, const std::string& rule, const std::string& graph) {
  Workspace w = load_workspace(o.files);
  const NamedGraph& g = w.graph(graph);
  std::ostringstream os;
  json out = json::array();
  for (const Match& m : find_matches(w.tgrs.at(rule), g.graph)) {
    os << rule << " at " << m.root_image() << ":";
    json map = json::object();
    for (const auto& x : m.rule.variable_nodes()) {
      os << ' ' << x << "->" << m.g(x);
      map[x] = m.g(x);
    }
    os << '\n';
    out.push_back({{"rule", rule}, {"root", m.root_image()}, {"variables", map}});
  }
  if (out.empty()) os << "no matches\n";
  emit(o, os.str(), out);
  return kPass;
}

int cmd_rewrite(const Options& o, const std::string& rule, const std::string& graph,
                const std::string& at, bool dot) {
  Workspace w = load_workspace(o.files);
  const NamedGraph& g = w.graph(graph);
  Match m = require_match(w, rule, g.graph, at);
  DirectDerivation dd = derive(m);
  if (dot) {
    std::cout << derivation_to_dot(dd);
    return kPass;
  }
  NamedGraph h{graph + "_1", dd.H, std::nullopt, {}};
  std::optional<RationalTerm> result;
  if (g.root) {
    result = derived_term(dd, g.pointed());
    h.root = result->point();
    h.bottoms = result->bottoms();
  }
  std::string text = derivation_trace(dd, graph, h.name) + print_graph(h);
  json j{{"trace", derivation_trace(dd, graph, h.name)},
         {"result", graph_json(h.graph, h.root, h.bottoms)}};
  if (result) {
    text += "unraveling: " + to_string(unravel(*result, w.config.depth)) + "\n";
    j["unraveling"] = to_string(unravel(*result, w.config.depth));
  }
  emit(o, text, j);
  return kPass;
}

int cmd_derive(const Options& o, const std::string& graph, std::size_t steps, bool trace) {
  Workspace w = load_workspace(o.files);
  RationalTerm cur = w.graph(graph).pointed();
  std::ostringstream os;
  json j{{"steps", json::array()}};
  std::size_t done = 0;
  for (; done < steps; ++done) {
    auto m = first_match(w, cur.graph());
    if (!m) break;
    DirectDerivation dd = derive(*m);
    std::string from = done ? graph + "_" + std::to_string(done) : graph;
    std::string to = graph + "_" + std::to_string(done + 1);
    if (trace) os << derivation_trace(dd, from, to);
    j["steps"].push_back({{"rule", m->rule.name}, {"at", m->root_image()},
                          {"trace", derivation_trace(dd, from, to)}});
    cur = derived_term(dd, cur);
  }
  NamedGraph last{graph + "_" + std::to_string(done), cur.graph(), cur.point(), cur.bottoms()};
  os << done << " step" << (done == 1 ? "" : "s") << "\n" << print_graph(last);
  os << "unraveling: " << to_string(unravel(cur, w.config.depth)) << "\n";
  j["result"] = term_json(cur, w.config.depth);
  emit(o, os.str(), j);
  return kPass;
}

int cmd_redex_set(const Options& o, const std::string& rule, const std::string& graph,
                  const std::string& at, const std::string& from, std::size_t count) {
  Workspace w = load_workspace(o.files);
  const NamedGraph& g = w.graph(graph);
  Match m = require_match(w, rule, g.graph, at);
  RationalRedexSet phi = induced_parallel_redex(m, node_or_root(g, from));
  auto occs = enumerate_occurrences(phi, count);
  std::string text = occurrences_text(occs) + "finite: " + (phi.finite() ? "yes" : "no") + "\n";
  json list = json::array();
  for (const auto& w2 : occs) list.push_back(w2.to_string());
  emit(o, text, {{"rule", rule}, {"target", at}, {"finite", phi.finite()}, {"occurrences", list}});
  return kPass;
}

int cmd_oracle(const Options& o, const std::string& graph, const std::string& spec,
               const std::string& from, const OracleOptions& oo) {
  Workspace w = load_workspace(o.files);
  const NamedGraph& g = w.graph(graph);
  RationalTerm t = g.pointed_at(node_or_root(g, from));
  std::vector<RationalRedexSet> sets;
  TRS trs = w.tgrs.unraveled();
  for (const auto& [rule, at] : parse_redex_specs(spec))
    sets.push_back(induced_parallel_redex(require_match(w, rule, g.graph, at), t.point()));
  OracleReport r = infinite_parallel_reduce(t, sets, trs, oo);
  json rows = json::array();
  for (std::size_t k = 0; k < r.indices.size(); ++k)
    rows.push_back({{"i", r.indices[k]}, {"phi_size", r.phi_sizes[k]}, {"t", to_string(r.t[k])},
                    {"d", to_string(r.d[k])}});
  emit(o, r.to_text(),
       {{"source_depth", r.source_depth}, {"depth", r.depth},
        {"occurrences", r.enumeration.size()}, {"chain", rows}, {"limit", to_string(r.limit)},
        {"monotone", r.monotone}});
  return r.monotone ? kPass : kFail;
}

int cmd_verify_soundness(const Options& o, const std::string& rule, const std::string& graph,
                         const std::string& at, const std::string& node, VerifyOptions vo,
                         bool depth_given) {
  Workspace w = load_workspace(o.files);
  const NamedGraph& g = w.graph(graph);
  if (!depth_given) vo.depth = w.config.depth;
  if (!vo.approximants) vo.approximants = w.config.approximants;
  RationalTerm host = g.root ? g.pointed() : g.pointed_at(at);
  Match m = require_match(w, rule, g.graph, at);
  SoundnessReport r = verify_soundness(host, m, node_or_root(g, node), vo);
  emit(o, r.to_text(),
       {{"rule", r.rule}, {"root_image", r.root_image}, {"node", r.node}, {"trace", r.trace},
        {"phi", r.phi}, {"left", to_string(r.left)}, {"right", to_string(r.right)},
        {"source_depth", r.oracle.source_depth}, {"depth", r.oracle.depth},
        {"verdict", r.pass ? "pass" : "fail"}});
  return r.pass ? kPass : kFail;
}

int cmd_verify_nf(const Options& o, const std::string& graph) {
  Workspace w = load_workspace(o.files);
  NormalFormReport r = check_weak_normal_form_preservation(w.graph(graph).pointed(), w.tgrs);
  emit(o, r.to_text(),
       {{"graph_normal", r.graph_normal}, {"term_normal", r.term_normal},
        {"graph_redexes", r.graph_redexes}, {"term_redexes", r.term_redexes},
        {"converse_fails", r.converse_fails()}, {"verdict", r.pass() ? "pass" : "fail"}});
  return r.pass() ? kPass : kFail;
}

int cmd_verify_cofinality(const Options& o, const std::string& graph,
                          const std::vector<std::string>& match_specs,
                          const std::vector<std::string>& phi_specs, VerifyOptions vo,
                          bool depth_given) {
  Workspace w = load_workspace(o.files);
  const NamedGraph& g = w.graph(graph);
  if (!depth_given) vo.depth = w.config.depth;
  std::vector<Match> matches;
  std::vector<bool> in_phi;
  std::set<std::pair<std::string, NodeId>> phi;
  for (const auto& s : phi_specs) phi.insert(parse_redex_spec(s));
  for (const auto& s : match_specs) {
    auto [rule, at] = parse_redex_spec(s);
    matches.push_back(require_match(w, rule, g.graph, at));
    in_phi.push_back(phi.erase({rule, at}) != 0);
  }
  if (!phi.empty())
    throw InputError("--phi names " + phi.begin()->first + "@" + phi.begin()->second +
                     ", which is not among the matches");
  CofinalityReport r = check_cofinality_step(g.pointed(), matches, in_phi, vo);
  emit(o, r.to_text(),
       {{"steps", r.steps}, {"graph_side", to_string(r.expected)},
        {"term_side", to_string(r.reached)}, {"verdict", r.pass ? "pass" : "fail"}});
  return r.pass ? kPass : kFail;
}

int cmd_suite(const Options& o, SuiteConfig config) {
  SuiteSummary s = run_property_suite(config);
  json props = json::array();
  for (const auto& p : s.properties)
    props.push_back({{"name", p.name}, {"cases", p.cases}, {"skipped", p.skipped},
                     {"checks", p.checks}, {"failures", p.failures},
                     {"counterexamples", p.counterexamples}});
  emit(o, s.to_text(), {{"seed", s.seed}, {"properties", props}, {"pass", s.pass()}});
  return s.pass() ? kPass : kFail;
}

int cmd_dot(const Options& o, const std::string& item, const std::string& dpo, const std::string& at) {
  Workspace w = load_workspace(o.files);
  if (!dpo.empty()) {
    const NamedGraph& g = w.graph(item);
    std::cout << derivation_to_dot(derive(require_match(w, dpo, g.graph, at)));
    return kPass;
  }
  if (const NamedGraph* g = w.find_graph(item)) {
    std::cout << graph_to_dot(g->graph, g->name, g->root ? &*g->root : nullptr, &g->bottoms);
    return kPass;
  }
  if (const EvaluationRule* p = w.tgrs.find(item)) {
    std::cout << rule_to_dot(*p);
    return kPass;
  }
  throw InputError("no graph or rule named '" + item + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Term graph rewriting: DPO derivations checked against infinite parallel term "
               "reduction"};
  app.require_subcommand(1);
  Options o;
  std::function<int()> run;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-f,--file", o.files, "Workspace file (repeatable)")->allow_extra_args(false)->check(CLI::ExistingFile);
    sub->add_flag("--json", o.json, "Machine-readable output");
  };

  {
    auto* sub = app.add_subcommand("check", "Load, validate and summarize workspace files");
    auto* positional = sub->add_option("files", o.files, "Workspace files")->check(CLI::ExistingFile);
    (void)positional;
    sub->add_flag("--json", o.json, "Machine-readable output");
    sub->callback([&] { run = [&] { return cmd_check(o); }; });
  }

  std::string graph, rule, node, at, from, spec, dpo;
  std::optional<std::size_t> depth;
  std::size_t count = 10, steps = 1;
  bool dot = false, trace = false;
  OracleOptions oo;
  VerifyOptions vo;
  std::vector<std::string> match_specs, phi_specs, only;
  SuiteConfig sc;

  {
    auto* sub = app.add_subcommand("unravel", "Print the unraveling of a graph at a node");
    common(sub);
    sub->add_option("graph", graph)->required();
    sub->add_option("--node", node, "Start node (default: root)");
    sub->add_option("-D,--depth", depth, "Truncation depth (default: workspace config)");
    sub->callback([&] { run = [&] { return cmd_unravel(o, graph, node, depth); }; });
  }
  {
    auto* sub = app.add_subcommand("matches", "List the matches of a rule in a graph");
    common(sub);
    sub->add_option("rule", rule)->required();
    sub->add_option("graph", graph)->required();
    sub->callback([&] { run = [&] { return cmd_matches(o, rule, graph); }; });
  }
  {
    auto* sub = app.add_subcommand("rewrite", "Apply one rule at one node");
    common(sub);
    sub->add_option("rule", rule)->required();
    sub->add_option("graph", graph)->required();
    sub->add_option("--at", at, "Root image of the match")->required();
    sub->add_flag("--dot", dot, "Print the DPO diagram as dot");
    sub->callback([&] { run = [&] { return cmd_rewrite(o, rule, graph, at, dot); }; });
  }
  {
    auto* sub = app.add_subcommand("derive", "Apply the first match repeatedly");
    common(sub);
    sub->add_option("graph", graph)->required();
    sub->add_option("--steps", steps, "Maximum number of steps");
    sub->add_flag("--trace", trace, "Print every step");
    sub->callback([&] { run = [&] { return cmd_derive(o, graph, steps, trace); }; });
  }
  {
    auto* sub = app.add_subcommand("redex-set", "Enumerate the parallel redex induced by a match");
    common(sub);
    sub->add_option("rule", rule)->required();
    sub->add_option("graph", graph)->required();
    sub->add_option("--at", at, "Root image of the match")->required();
    sub->add_option("--from", from, "Node whose unraveling carries the redexes (default: root)");
    sub->add_option("--count", count, "Number of occurrences");
    sub->callback([&] { run = [&] { return cmd_redex_set(o, rule, graph, at, from, count); }; });
  }
  {
    auto* sub = app.add_subcommand("oracle", "Infinite parallel reduction by approximating chains");
    common(sub);
    sub->add_option("graph", graph)->required();
    sub->add_option("redexes", spec, "RULE@NODE[,RULE@NODE...]")->required();
    sub->add_option("--from", from, "Node whose unraveling is reduced (default: root)");
    sub->add_option("-N,--approximants", oo.approximants, "Chain index to develop up to (0: all)");
    sub->add_option("-D,--depth", oo.depth, "Output depth");
    sub->add_option("--source-depth", oo.source_depth, "Source truncation depth (0: automatic)");
    sub->add_option("--budget", oo.budget, "Largest number of occurrences to enumerate");
    sub->add_option("--shuffle", oo.shuffle_seed, "Random prefix-respecting enumeration seed");
    sub->add_flag("--all", oo.record_all, "Record every chain index");
    sub->callback([&] { run = [&] { return cmd_oracle(o, graph, spec, from, oo); }; });
  }
  {
    auto* sub = app.add_subcommand("verify-soundness", "Check one graph step against its parallel reduction");
    common(sub);
    sub->add_option("rule", rule)->required();
    sub->add_option("graph", graph)->required();
    sub->add_option("--at", at, "Root image of the match")->required();
    sub->add_option("--node", node, "Node n whose unraveling is compared (default: root)");
    auto* d = sub->add_option("-D,--depth", vo.depth, "Comparison depth");
    sub->add_option("-N,--approximants", vo.approximants, "Chain index to develop up to (0: all)");
    sub->add_option("--source-depth", vo.source_depth, "Source truncation depth (0: automatic)");
    sub->add_option("--budget", vo.budget, "Largest number of occurrences to enumerate");
    sub->callback([&, d] {
      run = [&, d] { return cmd_verify_soundness(o, rule, graph, at, node, vo, d->count() > 0); };
    });
  }
  {
    auto* sub = app.add_subcommand("verify-nf", "Check weak preservation of normal forms");
    common(sub);
    sub->add_option("graph", graph)->required();
    sub->callback([&] { run = [&] { return cmd_verify_nf(o, graph); }; });
  }
  {
    auto* sub = app.add_subcommand("verify-cofinality", "Check a cofinality step for a set of matches");
    common(sub);
    sub->add_option("graph", graph)->required();
    sub->add_option("--match", match_specs, "RULE@NODE (repeatable)");
    sub->add_option("--phi", phi_specs, "RULE@NODE of a match reduced first (repeatable)");
    auto* d = sub->add_option("-D,--depth", vo.depth, "Comparison depth");
    sub->add_option("--budget", vo.budget, "Largest number of occurrences to enumerate");
    sub->callback([&, d] {
      run = [&, d] {
        return cmd_verify_cofinality(o, graph, match_specs, phi_specs, vo, d->count() > 0);
      };
    });
  }
  {
    auto* sub = app.add_subcommand("suite", "Run the randomized property suite");
    sub->add_flag("--json", o.json, "Machine-readable output");
    sub->add_option("--seed", sc.seed, "Suite seed");
    sub->add_option("--cases", sc.cases, "Cases per property (0: each property's default)");
    sub->add_option("--only", only, "Property to run (repeatable)");
    sub->add_option("--budget", sc.budget, "Oracle budget per case");
    sub->add_option("--threads", sc.threads, "Worker threads (0: hardware)");
    sub->add_option("--nodes", sc.sizes.nodes, "Largest generated graph");
    sub->add_option("--rules", sc.sizes.rules, "Largest generated rule set");
    sub->callback([&] {
      sc.only.insert(only.begin(), only.end());
      run = [&] { return cmd_suite(o, sc); };
    });
  }
  {
    auto* sub = app.add_subcommand("dot", "Export a graph, a rule or a DPO diagram as dot");
    common(sub);
    sub->add_option("item", graph, "Graph or rule name")->required();
    sub->add_option("--dpo", dpo, "Rule to apply for a DPO diagram");
    sub->add_option("--at", at, "Root image of the match for --dpo");
    sub->callback([&] { run = [&] { return cmd_dot(o, graph, dpo, at); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }
  try {
    return run();
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const BudgetError& e) {
    std::cerr << "input error: " << e.what() << "; raise --budget to at least " << e.required()
              << '\n';
    return kInputError;
  } catch (const InfiniteResidualError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "engine error: " << e.what() << '\n';
    return kFail;
  }
}
