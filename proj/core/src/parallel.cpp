#include "tgr/parallel.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <limits>
#include <random>
#include <sstream>

namespace tgr {

namespace {

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

struct LexRedexOrder {
  bool operator()(const Redex& a, const Redex& b) const {
    if (a.at != b.at) return LexOrder{}(a.at, b.at);
    return a.rule < b.rule;
  }
};

/// A redex set kept in both orders: length-lex for picking, lexicographic so
/// that everything at or below an occurrence is one contiguous range.
class RedexPool {
 public:
  RedexPool() = default;
  explicit RedexPool(const std::set<Redex>& init) : ll_(init), lex_(init.begin(), init.end()) {}

  bool empty() const { return ll_.empty(); }
  std::size_t size() const { return ll_.size(); }
  const std::set<Redex>& items() const { return ll_; }

  void insert(const Redex& r) {
    ll_.insert(r);
    lex_.insert(r);
  }

  /// Removes and returns every redex whose occurrence has `w` as a prefix.
  std::vector<Redex> extract_at_or_below(const Occurrence& w) {
    std::vector<Redex> out;
    auto it = lex_.lower_bound(Redex{w, std::string{}});
    while (it != lex_.end() && occ_leq(w, it->at)) {
      out.push_back(*it);
      ll_.erase(*it);
      it = lex_.erase(it);
    }
    return out;
  }

  Redex pick(DevelopmentOrder order, std::mt19937_64& rng) const {
    switch (order) {
      case DevelopmentOrder::kOutermostFirst:
        return *ll_.begin();
      case DevelopmentOrder::kInnermostFirst:
        return *ll_.rbegin();
      case DevelopmentOrder::kRandom: {
        auto it = ll_.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(rng() % ll_.size()));
        return *it;
      }
    }
    return *ll_.begin();
  }

 private:
  std::set<Redex> ll_;
  std::set<Redex, LexRedexOrder> lex_;
};

void advance_residuals(RedexPool& pool, const Redex& contracted, const TRS& trs) {
  for (const Redex& r : pool.extract_at_or_below(contracted.at))
    for (const Redex& s : residuals(r, contracted, trs)) pool.insert(s);
}

template <class T, class Reducer>
Development<T> develop(const T& t, const FiniteParallelRedex& phi, const TRS& trs,
                       const DevelopmentOptions& options, Reducer reduce_one) {
  Development<T> out{t, {}, {}};
  RedexPool pending(phi);
  RedexPool tracked(options.tracked);
  std::mt19937_64 rng(options.seed);
  while (!pending.empty()) {
    Redex next = pending.pick(options.order, rng);
    out.result = reduce_one(out.result, next);
    out.steps.push_back(next);
    advance_residuals(pending, next, trs);
    advance_residuals(tracked, next, trs);
  }
  out.tracked_residuals = tracked.items();
  return out;
}

}  // namespace

bool RationalRedexSet::contains(const Occurrence& w) const {
  auto n = node_at(carrier.graph(), carrier.point(), w);
  return n && *n == target;
}

bool RationalRedexSet::finite() const {
  return finitely_many_paths(carrier.graph(), carrier.point(), target);
}

// -------------------------------------------------------------- finite terms

bool is_redex(const Term& t, const Redex& r, const TRS& trs) {
  return match_linear(trs.at(r.rule).lhs, subterm(t, r.at)).has_value();
}

std::set<Redex> find_redexes(const Term& t, const TRS& trs) {
  std::set<Redex> out;
  std::function<void(const Term&, const Occurrence&)> rec = [&](const Term& u, const Occurrence& w) {
    if (!u.is_operator()) return;
    for (const auto& rule : trs.rules())
      if (match_linear(rule.lhs, u)) out.insert(Redex{w, rule.name});
    for (std::size_t i = 0; i < u.arity(); ++i) rec(u.arg(i), w.child(static_cast<int>(i + 1)));
  };
  rec(t, Occurrence{});
  return out;
}

Term reduce(const Term& t, const Redex& r, const TRS& trs, std::size_t rhs_depth) {
  const RewriteRule& rule = trs.at(r.rule);
  auto sigma = match_linear(rule.lhs, subterm(t, r.at));
  if (!sigma) throw InputError(r.to_string() + " is not a redex of " + to_string(t, 40));
  const RuleInfo& info = trs.info(r.rule);
  Term rhs;
  if (info.rhs_finite) {
    rhs = apply_subst(info.rhs_term, *sigma);
    if (rhs_depth != kUnbounded) rhs = truncate(rhs, rhs_depth);
  } else {
    if (rhs_depth == kUnbounded)
      throw InputError("rule '" + r.rule + "' has an infinite rhs; a depth bound is required");
    rhs = instantiate_rhs(rule, *sigma, rhs_depth);
  }
  return replace(t, r.at, rhs);
}

std::set<Redex> residuals(const Redex& d, const Redex& by, const TRS& trs) {
  if (d == by) return {};
  if (!occ_lt(by.at, d.at)) return {d};
  const RuleInfo& info = trs.info(by.rule);
  Occurrence v = d.at.suffix_from(by.at.size());
  for (const auto& [x, vx] : info.lhs_variable_at) {
    if (!occ_leq(vx, v)) continue;
    if (info.infinite_copying)
      throw InfiniteResidualError("residuals of " + d.to_string() + " by " + by.to_string() +
                                  ": rule '" + by.rule + "' copies its variables infinitely often");
    Occurrence u = v.suffix_from(vx.size());
    std::set<Redex> out;
    auto it = info.rhs_variable_at.find(x);
    if (it == info.rhs_variable_at.end()) return out;
    for (const Occurrence& wx : it->second) out.insert(Redex{by.at.concat(wx).concat(u), d.rule});
    return out;
  }
  throw EngineError("redexes " + d.to_string() + " and " + by.to_string() + " overlap");
}

Development<Term> complete_development(const Term& t, const FiniteParallelRedex& phi,
                                       const TRS& trs, const DevelopmentOptions& options) {
  return develop(t, phi, trs, options, [&](const Term& u, const Redex& r) {
    return reduce(u, r, trs, options.rhs_depth);
  });
}

// ------------------------------------------------------------ rational terms

std::optional<std::map<std::string, NodeId>> match_at_node(const Term& lhs, const TermGraph& g,
                                                           const NodeId& n) {
  std::map<std::string, NodeId> binding;
  std::function<bool(const Term&, const NodeId&)> rec = [&](const Term& p, const NodeId& m) {
    if (p.is_variable()) {
      auto [it, inserted] = binding.emplace(p.name(), m);
      return inserted || it->second == m;
    }
    if (!p.is_operator()) return false;
    const auto& label = g.label(m);
    if (!label || label->name != p.name() || static_cast<std::size_t>(label->arity) != p.arity())
      return false;
    auto succ = g.successors(m);
    for (std::size_t i = 0; i < p.arity(); ++i)
      if (!rec(p.arg(i), succ[i])) return false;
    return true;
  };
  if (!rec(lhs, n)) return std::nullopt;
  return binding;
}

std::set<Redex> find_redexes(const RationalTerm& t, const TRS& trs, std::size_t max_length) {
  std::set<Redex> out;
  const TermGraph& g = t.graph();
  for (const auto& n : reachable(g, t.point()))
    for (const auto& rule : trs.rules())
      if (match_at_node(rule.lhs, g, n))
        for (const auto& w : enumerate_paths(g, t.point(), n, max_length, kUnbounded))
          out.insert(Redex{w, rule.name});
  return out;
}

RationalTerm reduce(const RationalTerm& t, const Redex& r, const TRS& trs) {
  const RewriteRule& rule = trs.at(r.rule);
  const TermGraph& g = t.graph();
  auto path = path_along(g, t.point(), r.at);
  if (!path) throw InputError(r.to_string() + ": no such occurrence");
  auto binding = match_at_node(rule.lhs, g, path->target());
  if (!binding) throw InputError(r.to_string() + " is not a redex");

  TermGraph out = g;
  std::set<NodeId> bottoms = t.bottoms();
  std::size_t counter = 0;
  auto fresh = [&] {
    NodeId id;
    do id = "r#" + std::to_string(counter++);
    while (out.contains(id));
    out.add_empty(id);
    return id;
  };

  // Splice the rhs.
  const RationalTerm& rhs = rule.rhs;
  std::map<NodeId, NodeId> image;
  std::set<NodeId> rhs_nodes = reachable(rhs.graph(), rhs.point());
  for (const auto& n : rhs_nodes) {
    if (rhs.is_bottom_node(n)) {
      NodeId b = fresh();
      bottoms.insert(b);
      image.emplace(n, b);
    } else if (rhs.graph().is_empty_node(n)) {
      auto it = binding->find(n);
      if (it == binding->end()) throw EngineError("rhs variable '" + n + "' unbound");
      image.emplace(n, it->second);
    } else {
      image.emplace(n, fresh());
    }
  }
  for (const auto& n : rhs_nodes) {
    const auto& node = rhs.graph().node(n);
    if (!node.label) continue;
    std::vector<NodeId> succ;
    for (const auto& s : *node.successors) succ.push_back(image.at(s));
    out.set_node(image.at(n), TermGraph::Node{node.label, std::move(succ)});
  }
  NodeId below = image.at(rhs.point());

  // Unfold the path above the redex.
  for (std::size_t i = path->indices.size(); i-- > 0;) {
    NodeId copy = fresh();
    TermGraph::Node node = g.node(path->nodes[i]);
    (*node.successors)[static_cast<std::size_t>(path->indices[i] - 1)] = below;
    out.set_node(copy, std::move(node));
    below = copy;
  }
  return RationalTerm(std::move(out), below, std::move(bottoms)).garbage_collected();
}

Development<RationalTerm> complete_development(const RationalTerm& t,
                                               const FiniteParallelRedex& phi, const TRS& trs,
                                               const DevelopmentOptions& options) {
  return develop(t, phi, trs, options,
                 [&](const RationalTerm& u, const Redex& r) { return reduce(u, r, trs); });
}

Join join_parallel(const Term& t, const FiniteParallelRedex& phi,
                   const FiniteParallelRedex& phi_prime, const TRS& trs) {
  DevelopmentOptions a;
  a.tracked = phi_prime;
  DevelopmentOptions b;
  b.tracked = phi;
  auto by_phi = complete_development(t, phi, trs, a);
  auto by_phi_prime = complete_development(t, phi_prime, trs, b);
  Join j;
  j.via_phi = by_phi.result;
  j.via_phi_prime = by_phi_prime.result;
  j.psi_prime = by_phi.tracked_residuals;
  j.psi = by_phi_prime.tracked_residuals;
  Term left = complete_development(j.via_phi, j.psi_prime, trs).result;
  Term right = complete_development(j.via_phi_prime, j.psi, trs).result;
  if (!(left == right))
    throw EngineError("diamond does not close: " + to_string(left, 80) + " vs " +
                      to_string(right, 80));
  j.t3 = left;
  return j;
}

// ---------------------------------------------------------------- the oracle

std::vector<Occurrence> enumerate_occurrences(const RationalRedexSet& phi, std::size_t count) {
  return enumerate_paths(phi.carrier.graph(), phi.start(), phi.target, kUnbounded, count);
}

namespace {

Term cut_after(Term base, const std::vector<Occurrence>& enumeration, std::size_t i) {
  for (std::size_t j = enumeration.size(); j-- > i;) base = replace(base, enumeration[j], Term{});
  return base;
}

void check_prefix_respecting(const std::vector<Occurrence>& enumeration) {
  std::map<Occurrence, std::size_t> index;
  for (std::size_t j = 0; j < enumeration.size(); ++j) index.emplace(enumeration[j], j);
  for (std::size_t j = 0; j < enumeration.size(); ++j)
    for (std::size_t len = 0; len < enumeration[j].size(); ++len) {
      auto it = index.find(enumeration[j].prefix(len));
      if (it != index.end() && it->second > j)
        throw InputError("enumeration is not prefix-respecting: " + it->first.to_string() +
                         " comes after " + enumeration[j].to_string());
    }
}

// Redex marks over a term, one trie node per marked prefix. Tries are
// immutable and shared, so a subterm copied by a rhs shares its marks.
struct MarkTrie;
using Marks = std::shared_ptr<const MarkTrie>;
struct MarkTrie {
  std::optional<std::string> rule;
  bool first = false;
  std::map<int, Marks> kids;
};

Marks build_marks(const FiniteParallelRedex& phi, const std::set<Occurrence>& first) {
  struct Mutable {
    std::optional<std::string> rule;
    bool first = false;
    std::map<int, std::unique_ptr<Mutable>> kids;
  };
  Mutable root;
  for (const Redex& r : phi) {
    Mutable* n = &root;
    for (int k : r.at.positions()) {
      auto& slot = n->kids[k];
      if (!slot) slot = std::make_unique<Mutable>();
      n = slot.get();
    }
    n->rule = r.rule;
    n->first = first.count(r.at) != 0;
  }
  std::function<Marks(const Mutable&)> freeze = [&](const Mutable& m) {
    auto out = std::make_shared<MarkTrie>();
    out->rule = m.rule;
    out->first = m.first;
    for (const auto& [k, c] : m.kids) out->kids.emplace(k, freeze(*c));
    return Marks(out);
  };
  return phi.empty() ? nullptr : freeze(root);
}

Marks marks_at(Marks m, const Occurrence& w) {
  for (int k : w.positions()) {
    if (!m) return nullptr;
    auto it = m->kids.find(k);
    m = it == m->kids.end() ? nullptr : it->second;
  }
  return m;
}

Marks place_marks(const std::vector<std::pair<Occurrence, Marks>>& at) {
  std::function<Marks(std::size_t, std::vector<std::pair<Occurrence, Marks>>)> go =
      [&](std::size_t depth, std::vector<std::pair<Occurrence, Marks>> items) -> Marks {
    std::map<int, std::vector<std::pair<Occurrence, Marks>>> below;
    Marks here;
    for (auto& it : items) {
      if (!it.second) continue;
      if (it.first.size() == depth)
        here = it.second;  // distinct rhs occurrences never coincide
      else
        below[it.first[depth]].push_back(std::move(it));
    }
    if (below.empty()) return here;
    auto out = std::make_shared<MarkTrie>(here ? *here : MarkTrie{});
    for (auto& [k, v] : below)
      if (Marks c = go(depth + 1, std::move(v))) out->kids[k] = c;
    return Marks(out);
  };
  return go(0, at);
}

// Contracts every mark accepted by `select`, innermost first in one pass;
// returns the result and the marks still pending on it.
std::pair<Term, Marks> develop_marked(const Term& t, const Marks& m,
                                      const std::function<bool(const MarkTrie&)>& select,
                                      const TRS& trs, std::size_t rhs_depth) {
  if (!m || !t.is_operator()) return {t, nullptr};
  std::vector<Term> args;
  auto rest = std::make_shared<MarkTrie>();
  rest->rule = m->rule;
  rest->first = m->first;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    int k = static_cast<int>(i) + 1;
    auto it = m->kids.find(k);
    auto [a, am] = develop_marked(t.arg(i), it == m->kids.end() ? nullptr : it->second, select,
                                  trs, rhs_depth);
    args.push_back(std::move(a));
    if (am) rest->kids[k] = am;
  }
  Term rebuilt = Term::op(t.name(), std::move(args));
  if (!m->rule || !select(*m)) {
    if (!rest->rule && rest->kids.empty()) return {rebuilt, nullptr};
    return {rebuilt, rest};
  }
  const RewriteRule& rule = trs.at(*m->rule);
  const RuleInfo& info = trs.info(rule.name);
  auto sigma = match_linear(rule.lhs, rebuilt);
  if (!sigma) throw EngineError("marked redex " + *m->rule + " no longer matches");
  std::vector<std::pair<Occurrence, Marks>> moved;
  for (const auto& [x, at] : info.rhs_variable_at) {
    Marks mx = marks_at(rest, info.lhs_variable_at.at(x));
    if (mx)
      for (const auto& u : at) moved.emplace_back(u, mx);
  }
  return {instantiate_rhs(rule, *sigma, rhs_depth), place_marks(moved)};
}

}  // namespace

Term chain_term(const RationalTerm& t, const std::vector<Occurrence>& enumeration, std::size_t i,
                std::size_t depth, std::size_t lhs_height) {
  if (i > enumeration.size()) throw InputError("chain index beyond the enumeration");
  check_prefix_respecting(enumeration);
  for (std::size_t j = 0; j < i; ++j)
    if (enumeration[j].size() + lhs_height > depth)
      throw InputError("depth " + std::to_string(depth) + " cannot hold the redex at " +
                       enumeration[j].to_string() + "; need " +
                       std::to_string(enumeration[j].size() + lhs_height));
  return cut_after(unravel(t, depth), enumeration, i);
}

std::size_t default_source_depth(std::size_t depth, std::size_t lhs_height) {
  return (depth + 1) * 2 * std::max<std::size_t>(lhs_height, 1) + lhs_height + 2;
}

OracleReport infinite_parallel_reduce(const RationalTerm& t,
                                      const std::vector<RationalRedexSet>& phis, const TRS& trs,
                                      const OracleOptions& options) {
  OracleReport report;
  report.depth = options.depth;
  std::size_t h = 0;
  for (const auto& phi : phis) {
    if (!(phi.carrier.graph() == t.graph()) || phi.start() != t.point())
      throw InputError("redex set is not over the given term");
    if (trs.info(phi.rule).infinite_copying)
      throw InfiniteResidualError("rule '" + phi.rule + "' copies a variable infinitely often");
    h = std::max(h, trs.info(phi.rule).lhs_height);
  }
  const std::size_t dsrc =
      options.source_depth ? options.source_depth : default_source_depth(options.depth, h);
  report.source_depth = dsrc;

  std::size_t total = 0;
  for (const auto& phi : phis) {
    std::size_t c = count_paths(t.graph(), t.point(), phi.target, dsrc - 1);
    total = kUnbounded - total < c ? kUnbounded : total + c;
  }
  if (total > options.budget)
    throw BudgetError("the oracle needs " + std::to_string(total) +
                          " redex occurrences, over the budget of " + std::to_string(options.budget),
                      total);

  if (!options.first_phase.empty() && options.first_phase.size() != phis.size())
    throw InputError("one phase flag per redex set is required");
  std::vector<Redex> all;
  std::set<Occurrence> first;
  for (std::size_t k = 0; k < phis.size(); ++k)
    for (const auto& w :
         enumerate_paths(t.graph(), t.point(), phis[k].target, dsrc - 1, kUnbounded)) {
      all.push_back(Redex{w, phis[k].rule});
      if (!options.first_phase.empty() && options.first_phase[k]) first.insert(w);
    }
  std::sort(all.begin(), all.end());
  for (std::size_t j = 1; j < all.size(); ++j)
    if (all[j].at == all[j - 1].at)
      throw EngineError("two redexes at " + all[j].at.to_string());

  // Shallow occurrences leave room for a whole lhs below them.
  auto split = std::partition_point(all.begin(), all.end(),
                                    [&](const Redex& r) { return r.at.size() + h <= dsrc; });
  std::vector<Redex> shallow(all.begin(), split);
  std::vector<Redex> deep(split, all.end());

  if (options.shuffle_seed) {
    // Random linear extension of the prefix order.
    std::map<Occurrence, std::size_t> index;
    for (std::size_t j = 0; j < shallow.size(); ++j) index.emplace(shallow[j].at, j);
    std::vector<std::vector<std::size_t>> children(shallow.size());
    std::vector<std::size_t> pool;
    for (std::size_t j = 0; j < shallow.size(); ++j) {
      std::optional<std::size_t> parent;
      for (std::size_t len = shallow[j].at.size(); len-- > 0;)
        if (auto it = index.find(shallow[j].at.prefix(len)); it != index.end()) {
          parent = it->second;
          break;
        }
      if (parent)
        children[*parent].push_back(j);
      else
        pool.push_back(j);
    }
    std::mt19937_64 rng(*options.shuffle_seed);
    std::vector<Redex> order;
    while (!pool.empty()) {
      std::size_t k = rng() % pool.size();
      std::size_t j = pool[k];
      pool[k] = pool.back();
      pool.pop_back();
      order.push_back(shallow[j]);
      for (std::size_t c : children[j]) pool.push_back(c);
    }
    shallow = std::move(order);
  }

  report.enumeration = shallow;
  report.enumeration.insert(report.enumeration.end(), deep.begin(), deep.end());
  std::vector<Occurrence> occs;
  for (const auto& r : report.enumeration) occs.push_back(r.at);

  const std::size_t n =
      options.approximants ? std::min(options.approximants, shallow.size()) : shallow.size();
  std::set<std::size_t> checkpoints;
  if (options.record_all || n <= 64) {
    for (std::size_t i = 0; i <= n; ++i) checkpoints.insert(i);
  } else {
    for (std::size_t i = 0; i <= 16; ++i) checkpoints.insert(i);
    for (std::size_t k = 1; k <= 16; ++k) checkpoints.insert(n * k / 16);
  }

  const Term base = unravel(t, dsrc);
  DevelopmentOptions dev;
  dev.order = DevelopmentOrder::kInnermostFirst;
  dev.rhs_depth = dsrc;
  for (std::size_t i : checkpoints) {
    Term ti = cut_after(base, occs, i);
    FiniteParallelRedex phi_i;
    for (std::size_t j = 0; j < report.enumeration.size(); ++j) {
      const Redex& r = report.enumeration[j];
      Term at = subterm(ti, r.at);
      bool present = match_linear(trs.at(r.rule).lhs, at).has_value();
      if (present != (j < i))
        throw EngineError("chain condition fails at index " + std::to_string(i) + " for " +
                          r.to_string());
      if (!present && !at.is_bottom())
        throw EngineError("redex " + r.to_string() + " crosses the boundary of t_" +
                          std::to_string(i));
      if (present) phi_i.insert(r);
    }
    Term di;
    if (options.first_phase.empty()) {
      di = complete_development(ti, phi_i, trs, dev).result;
    } else {
      // Residual sets of copied redexes grow with every copy; marks share.
      auto [mid, rest] = develop_marked(ti, build_marks(phi_i, first),
                                        [](const MarkTrie& m) { return m.first; }, trs, dsrc);
      di = develop_marked(mid, rest, [](const MarkTrie&) { return true; }, trs, dsrc).first;
    }
    if (!report.d.empty() && !approx_leq(report.d.back(), di)) report.monotone = false;
    report.indices.push_back(i);
    report.t.push_back(ti);
    report.phi_sizes.push_back(phi_i.size());
    report.d.push_back(di);
  }
  report.limit = truncate(report.d.back(), options.depth);
  return report;
}

std::string OracleReport::to_text() const {
  std::ostringstream os;
  os << "source depth " << source_depth << ", output depth " << depth << ", "
     << enumeration.size() << " occurrences\n";
  os << "i\t|Phi_i|\tt_i\td_i\n";
  for (std::size_t k = 0; k < indices.size(); ++k)
    os << indices[k] << '\t' << phi_sizes[k] << '\t' << to_string(t[k], 60) << '\t'
       << to_string(d[k], 60) << '\n';
  os << "limit\t" << to_string(limit) << '\n';
  os << "monotone\t" << (monotone ? "yes" : "no") << '\n';
  return os.str();
}

}  // namespace tgr
