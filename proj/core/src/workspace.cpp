#include "tgr/workspace.hpp"

#include <fstream>
#include <sstream>

#include "lexer.hpp"
#include "term_parse.hpp"

namespace tgr {

RationalTerm NamedGraph::pointed() const {
  if (!root) throw InputError("graph '" + name + "' has no root");
  return RationalTerm(graph, *root, bottoms);
}

const NamedGraph* Workspace::find_graph(const std::string& name) const {
  for (const auto& g : graphs)
    if (g.name == name) return &g;
  return nullptr;
}

const NamedGraph& Workspace::graph(const std::string& name) const {
  if (const NamedGraph* g = find_graph(name)) return *g;
  throw InputError("unknown graph '" + name + "'");
}

void Workspace::add_graph(NamedGraph g) {
  if (find_graph(g.name)) throw InputError("duplicate graph name '" + g.name + "'");
  CheckResult ok = check_wellformed(g.graph, sig);
  if (!ok) throw InputError("graph '" + g.name + "': " + ok.first());
  if (g.root && !g.graph.contains(*g.root))
    throw InputError("graph '" + g.name + "': root '" + *g.root + "' is not a node");
  graphs.push_back(std::move(g));
}

void Workspace::add_rule(RewriteRule rule) {
  CheckResult ok = check_rule(rule, sig);
  if (!ok) throw InputError(ok.first());
  EvaluationRule p = graph_of_rule(rule);
  CheckResult pok = check_evaluation_rule(p);
  if (!pok) throw EngineError(pok.first());
  trs.add(std::move(rule));
  tgrs.add(std::move(p));
}

void Workspace::refresh() {
  trs.signature() = sig;
  tgrs.signature() = sig;
  CheckResult r = check_orthogonal(trs);
  orthogonal = r.ok();
  orthogonality_problems = r.problems;
}

namespace {

using detail::Lexer;
using detail::Tok;

bool is_keyword(const detail::Token& t) {
  return t.kind == Tok::kIdent &&
         (t.text == "sig" || t.text == "graph" || t.text == "rule" || t.text == "config");
}

void parse_sig(Lexer& lex, Workspace& w) {
  while (lex.peek().kind == Tok::kIdent && !is_keyword(lex.peek())) {
    detail::Token name = lex.next();
    lex.expect_punct('/');
    int arity = lex.expect_int();
    try {
      w.sig.add(name.text, arity);
    } catch (const InputError& e) {
      lex.fail_at(name, e.what());
    }
  }
  if (lex.at_punct(';')) lex.next();
}

void parse_graph(Lexer& lex, Workspace& w) {
  detail::Token head = lex.peek();
  NamedGraph g;
  g.name = lex.expect_ident("graph name");
  lex.expect_punct('{');
  while (!lex.at_punct('}')) {
    detail::Token id = lex.peek();
    std::string name = lex.expect_ident("node id or 'root'");
    if (name == "root" && !lex.at_punct(':')) {
      if (g.root) lex.fail_at(id, "second root declaration");
      g.root = lex.expect_ident("root node id");
      lex.expect_punct(';');
      continue;
    }
    lex.expect_punct(':');
    if (g.graph.contains(name)) lex.fail_at(id, "node '" + name + "' bound twice");
    if (lex.at_punct(';')) {
      g.graph.add_empty(name);
    } else if (lex.peek().kind == Tok::kBottom) {
      lex.next();
      g.graph.add_empty(name);
      g.bottoms.insert(name);
    } else {
      detail::Token op = lex.peek();
      std::string opname = lex.expect_ident("operator");
      std::vector<NodeId> succ;
      if (lex.at_punct('(')) {
        lex.next();
        if (!lex.at_punct(')')) {
          succ.push_back(lex.expect_ident("node id"));
          while (lex.at_punct(',')) {
            lex.next();
            succ.push_back(lex.expect_ident("node id"));
          }
        }
        lex.expect_punct(')');
      }
      auto arity = w.sig.arity(opname);
      if (!arity) lex.fail_at(op, "undeclared operator '" + opname + "'");
      if (*arity != static_cast<int>(succ.size()))
        lex.fail_at(op, "operator '" + opname + "' has arity " + std::to_string(*arity) + ", got " +
                            std::to_string(succ.size()) + " successors");
      g.graph.add_node(name, opname, std::move(succ));
    }
    lex.expect_punct(';');
  }
  lex.expect_punct('}');
  try {
    w.add_graph(std::move(g));
  } catch (const InputError& e) {
    lex.fail_at(head, e.what());
  }
}

void parse_rule(Lexer& lex, Workspace& w) {
  detail::Token head = lex.peek();
  std::string name = lex.expect_ident("rule name");
  lex.expect_punct(':');
  Term lhs = detail::parse_term(lex, w.sig);
  if (lex.peek().kind != Tok::kArrow) lex.fail("expected '->'");
  lex.next();
  RewriteRule rule;
  rule.name = name;
  rule.lhs = lhs;
  if (lex.at_punct('@')) {
    lex.next();
    detail::Token gname = lex.peek();
    std::string graph = lex.expect_ident("graph name");
    lex.expect_punct('.');
    std::string node = lex.expect_ident("node id");
    const NamedGraph* g = w.find_graph(graph);
    if (!g) lex.fail_at(gname, "unknown graph '" + graph + "'");
    if (!g->graph.contains(node)) lex.fail_at(gname, "graph '" + graph + "' has no node '" + node + "'");
    rule.rhs = RationalTerm(g->graph, node, g->bottoms).garbage_collected();
    w.rhs_refs[name] = {graph, node};
  } else {
    rule.rhs = RationalTerm::from_term(detail::parse_term(lex, w.sig));
  }
  if (lex.at_punct(';')) lex.next();
  try {
    w.add_rule(std::move(rule));
  } catch (const InputError& e) {
    lex.fail_at(head, e.what());
  }
}

void parse_config(Lexer& lex, Workspace& w) {
  detail::Token key = lex.peek();
  std::string k = lex.expect_ident("configuration key");
  lex.expect_punct('=');
  int v = lex.expect_int();
  if (k == "depth")
    w.config.depth = static_cast<std::size_t>(v);
  else if (k == "approximants")
    w.config.approximants = static_cast<std::size_t>(v);
  else if (k == "seed")
    w.config.seed = static_cast<std::uint64_t>(v);
  else if (k == "cases")
    w.config.cases = static_cast<std::size_t>(v);
  else
    lex.fail_at(key, "unknown configuration key '" + k + "'");
  if (lex.at_punct(';')) lex.next();
}

void parse_into(Workspace& w, std::string_view text, const std::string& file) {
  Lexer lex(text, file);
  while (lex.peek().kind != Tok::kEnd) {
    if (lex.at_ident("sig")) {
      lex.next();
      parse_sig(lex, w);
    } else if (lex.at_ident("graph")) {
      lex.next();
      parse_graph(lex, w);
    } else if (lex.at_ident("rule")) {
      lex.next();
      parse_rule(lex, w);
    } else if (lex.at_ident("config")) {
      lex.next();
      parse_config(lex, w);
    } else {
      lex.fail("expected 'sig', 'graph', 'rule' or 'config'");
    }
  }
}

}  // namespace

Workspace parse_workspace(const std::vector<std::pair<std::string, std::string>>& files) {
  Workspace w;
  for (const auto& [name, text] : files) parse_into(w, text, name);
  w.refresh();
  return w;
}

Workspace parse_workspace(std::string_view text, const std::string& file) {
  return parse_workspace({{file, std::string(text)}});
}

Workspace load_workspace(const std::vector<std::string>& paths) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& p : paths) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot read '" + p + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    files.emplace_back(p, ss.str());
  }
  return parse_workspace(files);
}

std::string print_graph(const NamedGraph& g) {
  std::ostringstream os;
  os << "graph " << g.name << " {\n";
  for (const auto& [id, node] : g.graph.nodes()) {
    os << "  " << id << ":";
    if (g.bottoms.count(id)) {
      os << " _|_";
    } else if (node.label) {
      os << ' ' << node.label->name;
      if (!node.successors->empty()) {
        os << '(';
        for (std::size_t i = 0; i < node.successors->size(); ++i)
          os << (i ? ", " : "") << (*node.successors)[i];
        os << ')';
      }
    }
    os << ";\n";
  }
  if (g.root) os << "  root " << *g.root << ";\n";
  os << "}\n";
  return os.str();
}

std::string print_workspace(const Workspace& w) {
  std::ostringstream os;
  if (!w.sig.empty()) {
    os << "sig";
    for (const auto& [name, arity] : w.sig.operators()) os << ' ' << name << '/' << arity;
    os << "\n\n";
  }
  for (const auto& g : w.graphs) os << print_graph(g) << '\n';
  // A cyclic rhs without a graph of its own gets one.
  std::map<std::string, std::pair<std::string, NodeId>> refs = w.rhs_refs;
  for (const auto& rule : w.trs.rules()) {
    if (refs.count(rule.name) || is_acyclic(rule.rhs.graph())) continue;
    std::string name = "rhs_" + rule.name;
    while (w.find_graph(name)) name = "_" + name;
    os << print_graph(NamedGraph{name, rule.rhs.graph(), rule.rhs.point(), rule.rhs.bottoms()})
       << '\n';
    refs[rule.name] = {name, rule.rhs.point()};
  }
  for (const auto& rule : w.trs.rules()) {
    os << "rule " << rule.name << ": " << to_string(rule.lhs) << " -> ";
    if (auto it = refs.find(rule.name); it != refs.end())
      os << '@' << it->second.first << '.' << it->second.second;
    else
      os << to_string(unravel_finite(rule.rhs));
    os << '\n';
  }
  const WorkspaceConfig defaults;
  if (w.config.depth != defaults.depth) os << "config depth = " << w.config.depth << ";\n";
  if (w.config.approximants != defaults.approximants)
    os << "config approximants = " << w.config.approximants << ";\n";
  if (w.config.seed != defaults.seed) os << "config seed = " << w.config.seed << ";\n";
  if (w.config.cases != defaults.cases) os << "config cases = " << w.config.cases << ";\n";
  return os.str();
}

}  // namespace tgr
