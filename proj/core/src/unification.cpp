#include "tgr/unification.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace tgr {

namespace {

Term resolve(const Term& t, const Substitution& s) {
  Term cur = t;
  while (cur.is_variable()) {
    auto it = s.find(cur.name());
    if (it == s.end()) break;
    cur = it->second;
  }
  return cur;
}

bool occurs(const std::string& x, const Term& t, const Substitution& s) {
  Term u = resolve(t, s);
  if (u.is_variable()) return u.name() == x;
  for (const Term& a : u.args())
    if (occurs(x, a, s)) return true;
  return false;
}

Term fully_apply(const Term& t, const Substitution& s) {
  Term u = resolve(t, s);
  if (!u.is_operator() || u.arity() == 0) return u;
  std::vector<Term> args;
  for (const Term& a : u.args()) args.push_back(fully_apply(a, s));
  return Term::op(u.name(), std::move(args));
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution s;
  std::vector<std::pair<Term, Term>> work{{a, b}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    x = resolve(x, s);
    y = resolve(y, s);
    if (x.is_bottom() || y.is_bottom()) throw InputError("unification of partial terms");
    if (x.is_variable() && y.is_variable() && x.name() == y.name()) continue;
    if (x.is_variable() || y.is_variable()) {
      if (!x.is_variable()) std::swap(x, y);
      if (occurs(x.name(), y, s)) return std::nullopt;
      s.emplace(x.name(), y);
      continue;
    }
    if (x.name() != y.name() || x.arity() != y.arity()) return std::nullopt;
    for (std::size_t i = 0; i < x.arity(); ++i) work.emplace_back(x.arg(i), y.arg(i));
  }
  Substitution out;
  for (const auto& [v, t] : s) out.emplace(v, fully_apply(t, s));
  return out;
}

Term rename_variables(const Term& t, const std::string& suffix) {
  Substitution s;
  for (const auto& v : variables(t)) s.emplace(v, Term::variable(v + suffix));
  return apply_subst(t, s);
}

}  // namespace tgr
