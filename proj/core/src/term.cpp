#include "tgr/term.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "term_parse.hpp"

namespace tgr {

namespace {

struct PtrPairHash {
  std::size_t operator()(const std::pair<const void*, const void*>& p) const {
    auto a = reinterpret_cast<std::uintptr_t>(p.first);
    auto b = reinterpret_cast<std::uintptr_t>(p.second);
    return std::hash<std::uintptr_t>{}(a * 0x9E3779B97F4A7C15ULL ^ (b + 0x7F4A7C15ULL));
  }
};

using PairSet = std::unordered_set<std::pair<const void*, const void*>, PtrPairHash>;

bool equal_rec(const Term& a, const Term& b, PairSet& seen) {
  if (a.identity() == b.identity()) return true;
  if (a.is_bottom() || b.is_bottom()) return false;
  if (a.is_variable() != b.is_variable()) return false;
  if (a.name() != b.name() || a.arity() != b.arity()) return false;
  if (!seen.insert({a.identity(), b.identity()}).second) return true;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!equal_rec(a.arg(i), b.arg(i), seen)) return false;
  return true;
}

bool leq_rec(const Term& a, const Term& b, PairSet& seen) {
  if (a.is_bottom()) return true;
  if (a.identity() == b.identity()) return true;
  if (b.is_bottom()) return false;
  if (a.is_variable() != b.is_variable()) return false;
  if (a.name() != b.name() || a.arity() != b.arity()) return false;
  if (!seen.insert({a.identity(), b.identity()}).second) return true;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!leq_rec(a.arg(i), b.arg(i), seen)) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------- Signature

void Signature::add(const std::string& name, int arity) {
  if (arity < 0) throw InputError("negative arity for '" + name + "'");
  auto [it, inserted] = ops_.emplace(name, arity);
  if (!inserted && it->second != arity)
    throw InputError("operator '" + name + "' redeclared with arity " + std::to_string(arity) +
                     " (was " + std::to_string(it->second) + ")");
}

bool Signature::contains(std::string_view name) const { return ops_.find(name) != ops_.end(); }

std::optional<int> Signature::arity(std::string_view name) const {
  auto it = ops_.find(name);
  if (it == ops_.end()) return std::nullopt;
  return it->second;
}

// --------------------------------------------------------------------- Term

Term Term::variable(std::string name) {
  return Term(std::make_shared<const Node>(Node{SymbolKind::kVariable, std::move(name), {}}));
}

Term Term::op(std::string name, std::vector<Term> args) {
  return Term(
      std::make_shared<const Node>(Node{SymbolKind::kOperator, std::move(name), std::move(args)}));
}

bool Term::is_variable() const { return node_ && node_->kind == SymbolKind::kVariable; }
bool Term::is_operator() const { return node_ && node_->kind == SymbolKind::kOperator; }

const std::string& Term::name() const {
  if (!node_) throw EngineError("name() of ⊥");
  return node_->name;
}

std::size_t Term::arity() const { return node_ ? node_->args.size() : 0; }

const Term& Term::arg(std::size_t i) const {
  if (!node_ || i >= node_->args.size()) throw EngineError("argument index out of range");
  return node_->args[i];
}

std::span<const Term> Term::args() const {
  if (!node_) return {};
  return node_->args;
}

std::optional<Symbol> Term::at(const Occurrence& w) const {
  const Term* cur = this;
  for (int p : w.positions()) {
    if (!cur->is_operator() || static_cast<std::size_t>(p) > cur->arity()) return std::nullopt;
    cur = &cur->arg(static_cast<std::size_t>(p - 1));
  }
  if (cur->is_bottom()) return std::nullopt;
  return Symbol{cur->node_->kind, cur->node_->name, static_cast<int>(cur->arity())};
}

bool operator==(const Term& a, const Term& b) {
  PairSet seen;
  return equal_rec(a, b, seen);
}

// --------------------------------------------------------------- operations

Term subterm(const Term& t, const Occurrence& w) {
  const Term* cur = &t;
  for (int p : w.positions()) {
    if (!cur->is_operator() || static_cast<std::size_t>(p) > cur->arity()) return Term{};
    cur = &cur->arg(static_cast<std::size_t>(p - 1));
  }
  return *cur;
}

namespace {

Term rebuild_at(const Term& t, std::span<const int> path, const Term& s) {
  if (path.empty()) return s;
  std::vector<Term> args(t.args().begin(), t.args().end());
  auto idx = static_cast<std::size_t>(path[0] - 1);
  args[idx] = rebuild_at(args[idx], path.subspan(1), s);
  return Term::op(t.name(), std::move(args));
}

}  // namespace

Term replace(const Term& t, const Occurrence& w, const Term& s) {
  if (subterm(t, w).is_bottom()) return t;
  return rebuild_at(t, w.positions(), s);
}

Term graft(const Term& t, const Occurrence& w, const Term& s) {
  if (w.empty()) return s;
  Term parent = subterm(t, w.prefix(w.size() - 1));
  if (!parent.is_operator() || static_cast<std::size_t>(w[w.size() - 1]) > parent.arity())
    throw InputError("cannot graft at " + w.to_string() + ": no operator slot there");
  return rebuild_at(t, w.positions(), s);
}

bool approx_leq(const Term& t, const Term& t2) {
  PairSet seen;
  return leq_rec(t, t2, seen);
}

Term glb(const Term& t, const Term& t2) {
  std::unordered_map<std::pair<const void*, const void*>, Term, PtrPairHash> memo;
  std::function<Term(const Term&, const Term&)> rec = [&](const Term& a, const Term& b) -> Term {
    if (a.is_bottom() || b.is_bottom()) return Term{};
    if (a.identity() == b.identity()) return a;
    if (a.is_variable() != b.is_variable() || a.name() != b.name() || a.arity() != b.arity())
      return Term{};
    if (a.is_variable()) return a;
    auto key = std::make_pair(a.identity(), b.identity());
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<Term> args;
    args.reserve(a.arity());
    for (std::size_t i = 0; i < a.arity(); ++i) args.push_back(rec(a.arg(i), b.arg(i)));
    Term out = Term::op(a.name(), std::move(args));
    memo.emplace(key, out);
    return out;
  };
  return rec(t, t2);
}

Term chain_lub(std::span<const Term> chain) {
  if (chain.empty()) return Term{};
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!approx_leq(chain[i], chain[i + 1]))
      throw InputError("not a chain: element " + std::to_string(i) + " does not approximate element " +
                       std::to_string(i + 1));
  }
  return chain.back();
}

Term apply_subst(const Term& t, const Substitution& sigma) {
  std::unordered_map<const void*, Term> memo;
  std::function<Term(const Term&)> rec = [&](const Term& u) -> Term {
    if (u.is_bottom()) return u;
    if (u.is_variable()) {
      auto it = sigma.find(u.name());
      return it == sigma.end() ? u : it->second;
    }
    if (u.arity() == 0) return u;
    if (auto it = memo.find(u.identity()); it != memo.end()) return it->second;
    std::vector<Term> args;
    args.reserve(u.arity());
    bool changed = false;
    for (const Term& a : u.args()) {
      args.push_back(rec(a));
      changed |= args.back().identity() != a.identity();
    }
    Term out = changed ? Term::op(u.name(), std::move(args)) : u;
    memo.emplace(u.identity(), out);
    return out;
  };
  return rec(t);
}

Term truncate(const Term& t, std::size_t depth) {
  std::map<std::pair<const void*, std::size_t>, Term> memo;
  std::function<Term(const Term&, std::size_t)> rec = [&](const Term& u, std::size_t d) -> Term {
    if (d == 0 || u.is_bottom()) return Term{};
    if (!u.is_operator() || u.arity() == 0) return u;
    auto key = std::make_pair(u.identity(), d);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<Term> args;
    args.reserve(u.arity());
    bool changed = false;
    for (const Term& a : u.args()) {
      args.push_back(rec(a, d - 1));
      changed |= args.back().identity() != a.identity();
    }
    Term out = changed ? Term::op(u.name(), std::move(args)) : u;
    memo.emplace(key, out);
    return out;
  };
  return rec(t, depth);
}

std::optional<Substitution> match_linear(const Term& pattern, const Term& t) {
  Substitution sigma;
  std::function<bool(const Term&, const Term&)> rec = [&](const Term& p, const Term& u) -> bool {
    if (p.is_bottom()) return false;
    if (p.is_variable()) {
      auto [it, inserted] = sigma.emplace(p.name(), u);
      return inserted || it->second == u;
    }
    if (!u.is_operator() || u.name() != p.name() || u.arity() != p.arity()) return false;
    for (std::size_t i = 0; i < p.arity(); ++i)
      if (!rec(p.arg(i), u.arg(i))) return false;
    return true;
  };
  if (!rec(pattern, t)) return std::nullopt;
  return sigma;
}

std::map<Occurrence, Symbol> occurrence_map(const Term& t) {
  std::map<Occurrence, Symbol> out;
  std::function<void(const Term&, const Occurrence&)> rec = [&](const Term& u, const Occurrence& w) {
    if (u.is_bottom()) return;
    out.emplace(w, Symbol{u.is_variable() ? SymbolKind::kVariable : SymbolKind::kOperator, u.name(),
                          static_cast<int>(u.arity())});
    for (std::size_t i = 0; i < u.arity(); ++i) rec(u.arg(i), w.child(static_cast<int>(i + 1)));
  };
  rec(t, Occurrence{});
  return out;
}

Term from_occurrence_map(const std::map<Occurrence, Symbol>& map) {
  // std::map iterates in length-lex order, so parents are grafted before children.
  Term t;
  for (const auto& [w, sym] : map) {
    if (sym.kind == SymbolKind::kVariable && sym.arity != 0)
      throw InputError("variable '" + sym.name + "' with nonzero arity at " + w.to_string());
    if (!w.empty()) {
      auto parent = t.at(w.prefix(w.size() - 1));
      if (!parent)
        throw InputError("occurrence map not prefix-closed at " + w.to_string());
      if (parent->kind != SymbolKind::kOperator || w[w.size() - 1] > parent->arity)
        throw InputError("occurrence " + w.to_string() + " exceeds the arity of its parent");
    }
    Term node = sym.kind == SymbolKind::kVariable
                    ? Term::variable(sym.name)
                    : Term::op(sym.name, std::vector<Term>(static_cast<std::size_t>(sym.arity)));
    t = graft(t, w, node);
  }
  return t;
}

std::set<std::string> variables(const Term& t) {
  std::set<std::string> out;
  std::unordered_set<const void*> seen;
  std::function<void(const Term&)> rec = [&](const Term& u) {
    if (u.is_bottom()) return;
    if (u.is_variable()) {
      out.insert(u.name());
      return;
    }
    if (!seen.insert(u.identity()).second) return;
    for (const Term& a : u.args()) rec(a);
  };
  rec(t);
  return out;
}

std::map<std::string, std::vector<Occurrence>> variable_occurrences(const Term& t) {
  std::map<std::string, std::vector<Occurrence>> out;
  std::function<void(const Term&, const Occurrence&)> rec = [&](const Term& u, const Occurrence& w) {
    if (u.is_bottom()) return;
    if (u.is_variable()) {
      out[u.name()].push_back(w);
      return;
    }
    for (std::size_t i = 0; i < u.arity(); ++i) rec(u.arg(i), w.child(static_cast<int>(i + 1)));
  };
  rec(t, Occurrence{});
  for (auto& [name, occs] : out) std::sort(occs.begin(), occs.end());
  return out;
}

bool is_linear(const Term& t) {
  for (const auto& [name, occs] : variable_occurrences(t))
    if (occs.size() > 1) return false;
  return true;
}

bool is_total(const Term& t) {
  if (t.is_bottom()) return false;
  std::unordered_set<const void*> seen;
  std::function<bool(const Term&)> rec = [&](const Term& u) -> bool {
    if (u.is_bottom()) return false;
    if (!u.is_operator() || !seen.insert(u.identity()).second) return true;
    for (const Term& a : u.args())
      if (!rec(a)) return false;
    return true;
  };
  return rec(t);
}

std::size_t height(const Term& t) {
  std::unordered_map<const void*, std::size_t> memo;
  std::function<std::size_t(const Term&)> rec = [&](const Term& u) -> std::size_t {
    if (u.is_bottom()) return 0;
    if (u.arity() == 0) return 1;
    if (auto it = memo.find(u.identity()); it != memo.end()) return it->second;
    std::size_t h = 0;
    for (const Term& a : u.args()) h = std::max(h, rec(a));
    memo.emplace(u.identity(), h + 1);
    return h + 1;
  };
  return rec(t);
}

std::size_t tree_size(const Term& t) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::unordered_map<const void*, std::size_t> memo;
  std::function<std::size_t(const Term&)> rec = [&](const Term& u) -> std::size_t {
    if (u.is_bottom()) return 0;
    if (u.arity() == 0) return 1;
    if (auto it = memo.find(u.identity()); it != memo.end()) return it->second;
    std::size_t n = 1;
    for (const Term& a : u.args()) {
      std::size_t k = rec(a);
      n = (kMax - n < k) ? kMax : n + k;
    }
    memo.emplace(u.identity(), n);
    return n;
  };
  return rec(t);
}

std::size_t dag_size(const Term& t) {
  std::unordered_set<const void*> seen;
  std::function<void(const Term&)> rec = [&](const Term& u) {
    if (u.is_bottom() || !seen.insert(u.identity()).second) return;
    for (const Term& a : u.args()) rec(a);
  };
  rec(t);
  return seen.size();
}

CheckResult check_term(const Term& t, const Signature& sig) {
  CheckResult result;
  std::unordered_set<const void*> seen;
  std::function<void(const Term&)> rec = [&](const Term& u) {
    if (u.is_bottom() || !seen.insert(u.identity()).second) return;
    if (u.is_variable()) {
      if (sig.contains(u.name()))
        result.fail("variable '" + u.name() + "' clashes with an operator of the signature");
      return;
    }
    auto ar = sig.arity(u.name());
    if (!ar)
      result.fail("undeclared operator '" + u.name() + "'");
    else if (static_cast<std::size_t>(*ar) != u.arity())
      result.fail("operator '" + u.name() + "' has arity " + std::to_string(*ar) + " but is applied to " +
                  std::to_string(u.arity()) + " arguments");
    for (const Term& a : u.args()) rec(a);
  };
  rec(t);
  return result;
}

std::string to_string(const Term& t) { return to_string(t, std::numeric_limits<std::size_t>::max()); }

std::string to_string(const Term& t, std::size_t max_symbols) {
  std::string out;
  std::size_t budget = max_symbols;
  std::function<void(const Term&)> rec = [&](const Term& u) {
    if (budget == 0) {
      out += "...";
      return;
    }
    --budget;
    if (u.is_bottom()) {
      out += "_|_";
      return;
    }
    out += u.name();
    if (u.is_variable() || u.arity() == 0) return;
    out += '(';
    for (std::size_t i = 0; i < u.arity(); ++i) {
      if (i) out += ", ";
      if (budget == 0) {
        out += "...";
        break;
      }
      rec(u.arg(i));
    }
    out += ')';
  };
  rec(t);
  return out;
}

namespace detail {

Term parse_term(Lexer& lex, const Signature& sig) {
  if (lex.peek().kind == Tok::kBottom) {
    lex.next();
    return Term{};
  }
  Token name = lex.peek();
  std::string id = lex.expect_ident("term");
  auto arity = sig.arity(id);
  if (!arity) {
    if (lex.at_punct('('))
      lex.fail_at(name, "undeclared operator '" + id + "' applied to arguments");
    return Term::variable(id);
  }
  std::vector<Term> args;
  if (lex.at_punct('(')) {
    lex.next();
    if (!lex.at_punct(')')) {
      args.push_back(parse_term(lex, sig));
      while (lex.at_punct(',')) {
        lex.next();
        args.push_back(parse_term(lex, sig));
      }
    }
    lex.expect_punct(')');
  }
  if (args.size() != static_cast<std::size_t>(*arity))
    lex.fail_at(name, "arity mismatch: '" + id + "' expects " + std::to_string(*arity) +
                          " arguments, got " + std::to_string(args.size()));
  return Term::op(id, std::move(args));
}

}  // namespace detail

Term parse_term(std::string_view text, const Signature& sig) {
  detail::Lexer lex(text, "<term>");
  Term t = detail::parse_term(lex, sig);
  if (lex.peek().kind != detail::Tok::kEnd) lex.fail("trailing input after term");
  return t;
}

}  // namespace tgr
