#include "tgr/random.hpp"

#include <algorithm>

namespace tgr {

std::size_t uniform_index(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<std::string> ops_with(const Signature& sig, bool constants) {
  std::vector<std::string> out;
  for (const auto& [name, arity] : sig.operators())
    if ((arity == 0) == constants) out.push_back(name);
  return out;
}

const std::string& pick(Rng& rng, const std::vector<std::string>& v) {
  return v[uniform_index(rng, v.size())];
}

std::string pick_op(Rng& rng, const Signature& sig) {
  auto it = sig.operators().begin();
  std::advance(it, static_cast<std::ptrdiff_t>(uniform_index(rng, sig.operators().size())));
  return it->first;
}

// Linear pattern; variables are drawn from `next_var` upwards.
Term random_pattern(Rng& rng, const Signature& sig, std::size_t height, bool root, int& next_var) {
  std::vector<std::string> fns = ops_with(sig, false);
  if (!root && (height <= 1 || coin(rng, 0.45)))
    return Term::variable("x" + std::to_string(next_var++));
  if (height <= 1 || coin(rng, 0.15)) return Term::op(pick(rng, ops_with(sig, true)));
  const std::string& f = pick(rng, fns);
  std::vector<Term> args;
  for (int i = 0; i < *sig.arity(f); ++i)
    args.push_back(random_pattern(rng, sig, height - 1, false, next_var));
  return Term::op(f, std::move(args));
}

std::optional<RewriteRule> try_rational_rule(Rng& rng, const Signature& sig,
                                             const std::string& name, const Term& lhs) {
  std::set<std::string> vs = variables(lhs);
  std::vector<std::string> vars(vs.begin(), vs.end());
  std::vector<std::string> fns = ops_with(sig, false);
  std::size_t m = 1 + uniform_index(rng, 3);
  TermGraph g;
  std::vector<NodeId> targets;
  for (std::size_t i = 0; i < m; ++i) targets.push_back("r" + std::to_string(i));
  for (const auto& v : vars) {
    g.add_empty(v);
    targets.push_back(v);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const std::string& f = pick(rng, fns);
    std::vector<NodeId> succ;
    for (int j = 0; j < *sig.arity(f); ++j) {
      // Half the edges close a cycle back into the operator nodes.
      succ.push_back(coin(rng, 0.5) ? targets[uniform_index(rng, m)]
                                    : targets[uniform_index(rng, targets.size())]);
    }
    g.add_node(targets[i], f, std::move(succ));
  }
  RewriteRule rule{name, lhs, RationalTerm(std::move(g), "r0").garbage_collected()};
  if (!check_rule(rule) || is_infinite_copying(rule)) return std::nullopt;
  return rule;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : stream) h = (h ^ c) * 0x100000001b3ULL;
  return splitmix(splitmix(seed ^ h) + index);
}

Signature random_signature(Rng& rng, const RandomSizes& sizes) {
  static const char* kConstants[] = {"a", "b", "c", "d"};
  static const char* kFunctions[] = {"f", "g", "h", "k"};
  std::size_t most = std::clamp<std::size_t>(sizes.operators, 2, 4);
  std::size_t n = 2 + uniform_index(rng, most - 1);
  std::size_t constants = 1 + uniform_index(rng, n / 2);
  Signature sig;
  for (std::size_t i = 0; i < constants; ++i) sig.add(kConstants[i], 0);
  int max_arity = std::max(1, sizes.max_arity);
  for (std::size_t i = 0; i + constants < n; ++i)
    sig.add(kFunctions[i], 1 + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(max_arity))));
  return sig;
}

TermGraph random_graph(Rng& rng, const Signature& sig, const RandomSizes& sizes,
                       const std::string& prefix) {
  std::size_t k = 1 + uniform_index(rng, std::max<std::size_t>(1, sizes.nodes));
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < k; ++i) ids.push_back(prefix + std::to_string(i));
  TermGraph g;
  for (const auto& id : ids) {
    if (coin(rng, sizes.empty_node_rate)) {
      g.add_empty(id);
      continue;
    }
    std::string f = pick_op(rng, sig);
    std::vector<NodeId> succ;
    for (int j = 0; j < *sig.arity(f); ++j) succ.push_back(ids[uniform_index(rng, k)]);
    g.add_node(id, f, std::move(succ));
  }
  return g;
}

Term random_term(Rng& rng, const Signature& sig, std::size_t height,
                 const std::vector<std::string>& vars) {
  std::vector<std::string> consts = ops_with(sig, true);
  if (height <= 1 || coin(rng, 0.3)) {
    if (!vars.empty() && coin(rng, 0.5)) return Term::variable(pick(rng, vars));
    return Term::op(pick(rng, consts));
  }
  std::vector<std::string> fns = ops_with(sig, false);
  const std::string& f = pick(rng, fns);
  std::vector<Term> args;
  for (int i = 0; i < *sig.arity(f); ++i) args.push_back(random_term(rng, sig, height - 1, vars));
  return Term::op(f, std::move(args));
}

RewriteRule random_rule(Rng& rng, const Signature& sig, const std::string& name,
                        const RandomSizes& sizes, bool allow_rational) {
  int next_var = 1;
  std::size_t h = 1 + uniform_index(rng, std::max<std::size_t>(1, std::min<std::size_t>(sizes.rule_height, 3)));
  Term lhs = random_pattern(rng, sig, std::max<std::size_t>(h, 2), true, next_var);
  if (allow_rational && coin(rng, sizes.rational_rhs_rate)) {
    for (int attempt = 0; attempt < 8; ++attempt)
      if (auto r = try_rational_rule(rng, sig, name, lhs)) return *r;
  }
  std::set<std::string> vs = variables(lhs);
  std::vector<std::string> vars(vs.begin(), vs.end());
  Term rhs = (!vars.empty() && coin(rng, 0.2))
                 ? Term::variable(pick(rng, vars))
                 : random_term(rng, sig, 1 + uniform_index(rng, std::max<std::size_t>(1, sizes.rule_height)), vars);
  return RewriteRule::finite(name, lhs, rhs);
}

std::vector<RewriteRule> random_orthogonal_rules(Rng& rng, const Signature& sig,
                                                 const RandomSizes& sizes, bool allow_rational) {
  std::vector<RewriteRule> kept;
  std::size_t want = sizes.rules == 0 ? 0 : 1 + uniform_index(rng, sizes.rules);
  for (std::size_t attempt = 0; kept.size() < want && attempt < 4 * want + 4; ++attempt) {
    RewriteRule r = random_rule(rng, sig, "R" + std::to_string(kept.size()), sizes, allow_rational);
    TRS trs(sig);
    for (const auto& k : kept) trs.add(k);
    trs.add(r);
    if (check_orthogonal(trs)) kept.push_back(std::move(r));
  }
  return kept;
}

namespace {

// Labels nodes from `at` onwards along the lhs, taking operator positions
// from `free`. Variable positions are left for the caller to wire.
bool plant(const Term& lhs, const NodeId& at, std::vector<NodeId>& free,
           std::map<NodeId, std::pair<std::string, std::vector<std::optional<NodeId>>>>& plan) {
  if (!lhs.is_operator()) return true;
  std::vector<std::optional<NodeId>> succ;
  for (const Term& a : lhs.args()) {
    if (a.is_operator()) {
      if (free.empty()) return false;
      NodeId child = free.front();
      free.erase(free.begin());
      succ.push_back(child);
      if (!plant(a, child, free, plan)) return false;
    } else {
      succ.push_back(std::nullopt);
    }
  }
  plan[at] = {lhs.name(), std::move(succ)};
  return true;
}

}  // namespace

Workspace random_workspace(Rng& rng, const RandomSizes& sizes, bool allow_rational) {
  Workspace w;
  w.sig = random_signature(rng, sizes);
  for (auto& r : random_orthogonal_rules(rng, w.sig, sizes, allow_rational)) w.add_rule(std::move(r));

  NamedGraph g;
  g.name = "G";
  if (sizes.nodes > 0) {
    std::size_t k = 1 + uniform_index(rng, sizes.nodes);
    std::vector<NodeId> ids;
    for (std::size_t i = 0; i < k; ++i) ids.push_back("n" + std::to_string(i));
    std::map<NodeId, std::pair<std::string, std::vector<std::optional<NodeId>>>> plan;
    std::vector<NodeId> free(ids.begin(), ids.end());
    while (!free.empty()) {
      NodeId at = free.front();
      free.erase(free.begin());
      if (!w.trs.empty() && coin(rng, 0.5)) {
        const RewriteRule& r = w.trs.rules()[uniform_index(rng, w.trs.rules().size())];
        auto saved_free = free;
        auto saved_plan = plan;
        if (plant(r.lhs, at, free, plan)) continue;
        free = std::move(saved_free);
        plan = std::move(saved_plan);
      }
      if (coin(rng, sizes.empty_node_rate)) {
        plan[at] = {"", {}};
        continue;
      }
      std::string f = pick_op(rng, w.sig);
      plan[at] = {f, std::vector<std::optional<NodeId>>(static_cast<std::size_t>(*w.sig.arity(f)))};
    }
    for (auto& [id, entry] : plan) {
      if (entry.first.empty()) {
        g.graph.add_empty(id);
        continue;
      }
      std::vector<NodeId> succ;
      for (auto& s : entry.second) succ.push_back(s ? *s : ids[uniform_index(rng, k)]);
      g.graph.add_node(id, entry.first, std::move(succ));
    }
    g.root = ids.front();
  }
  if (!g.graph.empty()) w.add_graph(std::move(g));
  w.refresh();
  return w;
}

}  // namespace tgr
