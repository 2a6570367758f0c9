#include "bigsos/relations.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "bigsos/serialize.hpp"

namespace bigsos {

Coalgebra<Term> as_coalgebra(const Model& m) {
  Coalgebra<Term> out(m.behaviour.begin(), m.behaviour.end());
  for (const auto& f : m.frontier) out.emplace(f, bottom<Term>(m.kind));
  return out;
}

Relation<Term> greatest_simulation(const Model& m1, const Model& m2) {
  if (!(m1.kind == m2.kind)) throw Error("models have different behaviour kinds");
  return greatest_simulation(m1.kind, as_coalgebra(m1), as_coalgebra(m2)).relation;
}

std::vector<std::vector<Term>> bisimilarity_classes(const Model& m) {
  Partition<Term> p = bisimilarity(m.kind, as_coalgebra(m));
  std::vector<std::vector<Term>> out;
  for (const auto& block : p.blocks) {
    std::vector<Term> members;
    for (const auto& t : block)
      if (m.in_universe(t)) members.push_back(t);
    if (!members.empty()) out.push_back(std::move(members));
  }
  return out;
}

namespace {

void require_known(const Model& m, const Term& t) {
  if (!m.knows(t)) throw Error("term '" + to_string(t) + "' is not in the model");
}

}  // namespace

EquivResult similar(const Model& m, const Term& t1, const Term& t2) {
  require_known(m, t1);
  require_known(m, t2);
  auto res = greatest_simulation(m.kind, as_coalgebra(m), as_coalgebra(m));
  EquivResult out;
  out.related = res.relation.contains(t1, t2);
  if (out.related)
    out.witness = std::move(res.relation);
  else
    out.distinguishing_depth = res.removed_at.at({t1, t2});
  return out;
}

EquivResult bisimilar(const Model& m, const Term& t1, const Term& t2) {
  require_known(m, t1);
  require_known(m, t2);
  Partition<Term> p = bisimilarity(m.kind, as_coalgebra(m));
  EquivResult out;
  out.related = p.together(t1, t2);
  if (!out.related) {
    out.distinguishing_depth = p.split_round(t1, t2);
    return out;
  }
  Relation<Term> r;
  for (const auto& s : p.blocks[p.block_of.at(t1)]) r.left.insert(s);
  r.right = r.left;
  for (const auto& a : r.left)
    for (const auto& b : r.left) r.pairs.emplace(a, b);
  out.witness = std::move(r);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class TreeSim {
 public:
  TreeSim(const UnfoldTree& a, const UnfoldTree& b, bool equal_labels)
      : a_(a), b_(b), equal_labels_(equal_labels) {}

  bool related(NodeId x, NodeId y, std::size_t k) {
    if (equal_labels_ && !(a_.nodes[x].term == b_.nodes[y].term)) return false;
    if (k == 0) return true;
    auto key = std::make_tuple(x, y, k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const Value<NodeId>& sx = *a_.nodes[x].step;
    const Value<NodeId>& sy = *b_.nodes[y].step;
    Relation<NodeId> r;
    r.left = states_of(sx);
    r.right = states_of(sy);
    for (NodeId s : r.left)
      for (NodeId t : r.right)
        if (related(s, t, k - 1)) r.pairs.emplace(s, t);
    bool ok = rel_lift(a_.kind, r, sx, sy);
    memo_.emplace(key, ok);
    return ok;
  }

 private:
  const UnfoldTree& a_;
  const UnfoldTree& b_;
  bool equal_labels_;
  std::map<std::tuple<NodeId, NodeId, std::size_t>, bool> memo_;
};

}  // namespace

bool depth_similarity(const UnfoldTree& u1, const UnfoldTree& u2, std::size_t depth,
                      bool equal_labels) {
  if (depth > u1.depth() || depth > u2.depth()) throw Error("depth exceeds tree depth");
  if (!(u1.kind == u2.kind)) throw Error("unfoldings have different behaviour kinds");
  return TreeSim(u1, u2, equal_labels).related(0, 0, depth);
}

std::set<Term> reachable(const Model& m, const Term& t) {
  std::set<Term> seen{t};
  std::vector<Term> todo{t};
  while (!todo.empty()) {
    Term u = todo.back();
    todo.pop_back();
    for (auto& s : states_of(m.at(u)))
      if (seen.insert(s).second) todo.push_back(std::move(s));
  }
  return seen;
}

bool closure_within(const Model& m, const Term& t, const std::set<Term>& exact) {
  if (!exact.count(t)) return false;
  auto r = reachable(m, t);
  return std::all_of(r.begin(), r.end(), [&](const Term& u) { return exact.count(u) != 0; });
}

// ---------------------------------------------------------------------------

std::string CongruenceReport::status() const {
  if (!violations.empty()) return "fail";
  if (sampled > 0 && checked == 0) return "inconclusive";
  if (candidates == 0 && sampled == 0 && !note.empty()) return "inconclusive";
  return "pass";
}

CongruenceReport congruence_test(const Spec& spec, const Model& m, std::size_t samples,
                                 std::uint64_t seed) {
  CongruenceReport rep;
  if (samples == 0) return rep;
  Partition<Term> p = bisimilarity(m.kind, as_coalgebra(m));
  std::vector<std::pair<Term, Term>> cands;
  for (std::size_t i = 0; i < m.universe.size(); ++i) {
    const Term& a = m.universe[i];
    if (a.is_var() || a.args().empty()) continue;
    for (std::size_t j = i + 1; j < m.universe.size(); ++j) {
      const Term& b = m.universe[j];
      if (b.is_var() || b.name() != a.name() || !std::equal(a.params().begin(), a.params().end(),
                                                            b.params().begin(), b.params().end()))
        continue;
      bool args_bisimilar = true;
      for (std::size_t k = 0; k < a.args().size(); ++k)
        args_bisimilar = args_bisimilar && p.together(a.args()[k], b.args()[k]);
      if (args_bisimilar) cands.emplace_back(a, b);
    }
  }
  rep.candidates = cands.size();
  if (cands.empty()) {
    rep.note = "universe contains no composite pair with bisimilar arguments";
    return rep;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(cands.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t n = std::min(samples, cands.size());
  for (std::size_t i = 0; i < n; ++i) std::swap(order[i], order[i + rng() % (order.size() - i)]);
  const std::set<Term> exact = exact_terms(spec, m);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [a, b] = cands[order[i]];
    ++rep.sampled;
    if (!closure_within(m, a, exact) || !closure_within(m, b, exact)) continue;
    ++rep.checked;
    if (!p.together(a, b)) rep.violations.push_back({a, b});
  }
  if (rep.checked < rep.sampled)
    rep.note = std::to_string(rep.sampled - rep.checked) +
               " sampled pair(s) reach terms cut off by the universe bounds";
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Label> sample_labels(const Spec& spec) {
  if (!spec.kind.labels.naturals) return spec.kind.labels.finite;
  std::set<Label> ls = literal_labels(spec);
  for (Nat n : {0, 1, 2}) ls.insert(Label(n));
  return {ls.begin(), ls.end()};
}

Value<std::string> random_value(const BehaviourKind& kind, const std::vector<std::string>& states,
                                const std::vector<Label>& labels, std::mt19937_64& rng) {
  static const Weight weights[] = {0.5, 1.0, 2.5};
  switch (kind.functor) {
    case Functor::Stream: {
      StreamStep<std::string> v;
      if (rng() % 4 != 0) v.step = std::make_pair(labels[rng() % labels.size()], states[rng() % states.size()]);
      return v;
    }
    case Functor::Lts: {
      Successors<std::string> v;
      for (const auto& l : labels)
        for (const auto& s : states)
          if (rng() % 2) v.by_label[l].insert(s);
      return v;
    }
    case Functor::Weighted: {
      Weights<std::string> v;
      for (const auto& l : labels)
        for (const auto& s : states)
          if (rng() % 2) v.by_label[l][s] = weights[rng() % 3];
      return v;
    }
  }
  return Successors<std::string>{};
}

}  // namespace

MonotonicityReport monotonicity_semantic_test(const Spec& spec, std::size_t trials,
                                              std::uint64_t seed) {
  MonotonicityReport rep;
  std::vector<const OpDecl*> ops;
  for (const auto& op : spec.sig.ops())
    if (std::any_of(spec.rules.begin(), spec.rules.end(),
                    [&](const Rule& r) { return r.head_op == op.name; }))
      ops.push_back(&op);
  if (ops.empty()) return rep;
  const std::vector<Label> labels = sample_labels(spec);
  const std::set<Nat> literal = literal_params(spec);
  std::vector<Nat> params(literal.begin(), literal.end());
  for (Nat n : {1, 2, 3}) params.push_back(n);
  std::mt19937_64 rng(seed);
  const BehaviourValue bot = bottom<Term>(spec.kind);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const OpDecl& op = *ops[rng() % ops.size()];
    const std::size_t n = op.arity + 1 + rng() % 3;
    std::vector<std::string> states;
    for (std::size_t i = 0; i < n; ++i) states.push_back("z" + std::to_string(i));
    std::map<Term, BehaviourValue> full, pruned;
    for (const auto& s : states) {
      auto v = random_value(spec.kind, states, labels, rng);
      full.emplace(Term::var(s), inject(spec.kind, v));
      pruned.emplace(Term::var(s), inject(spec.kind, prune_value(v, rng)));
    }
    std::vector<Nat> ps;
    for (std::size_t i = 0; i < op.param_count; ++i) ps.push_back(params[rng() % params.size()]);
    std::vector<Term> args;
    for (std::size_t i = 0; i < op.arity; ++i) args.push_back(Term::var(states[i]));
    const Term t = Term::app(op.name, ps, args);
    auto view_of = [&bot](const std::map<Term, BehaviourValue>& env) -> BehaviourView {
      return [&env, &bot](const Term& u) -> const BehaviourValue& {
        auto it = env.find(u);
        return it == env.end() ? bot : it->second;
      };
    };
    ++rep.trials;
    try {
      BehaviourValue small = apply_rules(spec, t, view_of(pruned));
      BehaviourValue large = apply_rules(spec, t, view_of(full));
      if (!leq(spec.kind, small, large))
        rep.violations.push_back({op.name, t, value_text(small), value_text(large)});
    } catch (const Error&) {
      ++rep.skipped;
    }
  }
  return rep;
}

std::string monotonicity_verdict(const Spec& spec, std::size_t trials, std::uint64_t seed) {
  if (check_monotone(spec).monotone) return "monotone";
  return monotonicity_semantic_test(spec, trials, seed).violations.empty() ? "unknown" : "non-monotone";
}

}  // namespace bigsos
