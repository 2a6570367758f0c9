#include "bigsos/engine.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace bigsos {

namespace {

std::string join_names(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
  return s;
}

std::string first_diagnostic(const std::vector<Diagnostic>& d) {
  if (d.empty()) return "invalid spec";
  return "rule '" + d.front().rule + "': " + d.front().message;
}

}  // namespace

NonMonotoneError::NonMonotoneError(std::vector<std::string> rules)
    : Error("spec is not monotone (negative premises in: " + join_names(rules) + ")"),
      rules_(std::move(rules)) {}

ValidationError::ValidationError(std::vector<Diagnostic> diags)
    : Error(first_diagnostic(diags)), diags_(std::move(diags)) {}

std::vector<std::string> GenCoalgebra::states() const {
  std::vector<std::string> out;
  for (const auto& [s, v] : dynamics) out.push_back(s);
  return out;
}

BehaviourValue inject(const BehaviourKind& kind, const Value<std::string>& v) {
  return map_states(kind, [](const std::string& s) { return Term::var(s); }, v);
}

const BehaviourValue& Model::at(const Term& t) const {
  auto it = behaviour.find(t);
  if (it != behaviour.end()) return it->second;
  if (frontier.count(t)) {
    static thread_local std::map<Functor, BehaviourValue> bottoms;
    auto [b, inserted] = bottoms.try_emplace(kind.functor, bottom<Term>(kind));
    return b->second;
  }
  throw Error("term '" + to_string(t) + "' is not in the model");
}

std::vector<Term> Model::states() const {
  std::vector<Term> out = universe;
  out.insert(out.end(), frontier.begin(), frontier.end());
  return out;
}

Model bottom_model(const BehaviourKind& kind, std::vector<Term> universe, GenCoalgebra generators) {
  Model m;
  m.kind = kind;
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  m.universe = std::move(universe);
  for (const auto& t : m.universe) m.behaviour.emplace(t, bottom<Term>(kind));
  m.generators = std::move(generators);
  return m;
}

void refresh_frontier(Model& m) {
  m.frontier.clear();
  for (const auto& [t, v] : m.behaviour)
    for (auto& s : states_of(v))
      if (!m.in_universe(s)) m.frontier.insert(std::move(s));
}

bool pointwise_leq(const Model& a, const Model& b) {
  const BehaviourValue bot = bottom<Term>(a.kind);
  for (const auto& [t, v] : a.behaviour) {
    auto it = b.behaviour.find(t);
    if (!leq(a.kind, v, it == b.behaviour.end() ? bot : it->second)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Rule evaluation

namespace {

struct Env {
  std::map<std::string, Term> terms;
  std::map<std::string, Label> labels;
  std::map<std::string, Weight> weights;
};

Label eval_label(const Expr& e, const Env& env) {
  switch (e.op()) {
    case Expr::Op::Nat: return Label(e.nat_value());
    case Expr::Op::Symbol: return Label(e.name());
    case Expr::Op::Real: throw EvalError("real number used as a label");
    case Expr::Op::Var: {
      auto it = env.labels.find(e.name());
      if (it == env.labels.end()) throw EvalError("unbound label variable '" + e.name() + "'");
      return it->second;
    }
    case Expr::Op::Sup: {
      Label best = eval_label(e.operands().front(), env);
      for (const auto& o : e.operands()) best = std::max(best, eval_label(o, env));
      return best;
    }
    case Expr::Op::Add:
    case Expr::Op::Mul: {
      Label a = eval_label(e.operands()[0], env);
      Label b = eval_label(e.operands()[1], env);
      if (!a.is_nat() || !b.is_nat()) throw EvalError("arithmetic on a symbolic label");
      Nat x = a.nat(), y = b.nat();
      constexpr Nat max = std::numeric_limits<Nat>::max();
      if (e.op() == Expr::Op::Add) {
        if (x > max - y) throw EvalError("label arithmetic overflow");
        return Label(x + y);
      }
      if (y != 0 && x > max / y) throw EvalError("label arithmetic overflow");
      return Label(x * y);
    }
  }
  throw EvalError("bad label expression");
}

Weight eval_weight(const Expr& e, const Env& env) {
  switch (e.op()) {
    case Expr::Op::Nat: return static_cast<Weight>(e.nat_value());
    case Expr::Op::Real: return e.real_value();
    case Expr::Op::Symbol: throw EvalError("symbol used as a weight");
    case Expr::Op::Var: {
      auto it = env.weights.find(e.name());
      if (it == env.weights.end()) throw EvalError("unbound weight variable '" + e.name() + "'");
      return it->second;
    }
    case Expr::Op::Add: return eval_weight(e.operands()[0], env) + eval_weight(e.operands()[1], env);
    case Expr::Op::Mul: {
      Weight a = eval_weight(e.operands()[0], env), b = eval_weight(e.operands()[1], env);
      // 0 * inf = 0 in the sup semiring.
      if (a == 0 || b == 0) return 0;
      return a * b;
    }
    case Expr::Op::Sup: {
      Weight best = 0;
      for (const auto& o : e.operands()) best = std::max(best, eval_weight(o, env));
      return best;
    }
  }
  throw EvalError("bad weight expression");
}

Term instantiate(const TermTemplate& t, const Env& env) {
  if (t.is_var()) return Term::var(t.name());
  std::vector<Nat> params;
  for (const auto& p : t.params()) {
    Label l = eval_label(p, env);
    if (!l.is_nat()) throw EvalError("operator parameter is not a natural number");
    params.push_back(l.nat());
  }
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(instantiate(a, env));
  return Term::app(t.name(), std::move(params), std::move(args));
}

class RuleEvaluator {
 public:
  RuleEvaluator(const Spec& spec, const BehaviourView& view) : spec_(spec), view_(view) {}

  BehaviourValue evaluate(const Term& t) {
    BehaviourValue acc = bottom<Term>(spec_.kind);
    if (t.is_var()) return acc;
    for (const auto& rule : spec_.rules) {
      if (rule.head_op != t.name() || rule.head_vars.size() != t.args().size() ||
          rule.param_vars.size() != t.params().size())
        continue;
      Env env;
      for (std::size_t i = 0; i < rule.head_vars.size(); ++i)
        env.terms.insert_or_assign(rule.head_vars[i], t.args()[i]);
      for (std::size_t i = 0; i < rule.param_vars.size(); ++i)
        env.labels.insert_or_assign(rule.param_vars[i], Label(t.params()[i]));
      match(rule, 0, env, acc);
    }
    return acc;
  }

 private:
  static bool label_matches(const LabelPattern& p, const Label& l, const Env& env) {
    if (p.literal) return *p.literal == l;
    auto it = env.labels.find(p.var);
    return it == env.labels.end() || it->second == l;
  }

  void match(const Rule& rule, std::size_t i, Env& env, BehaviourValue& acc) {
    if (i == rule.premises.size()) {
      conclude(rule, env, acc);
      return;
    }
    const Premise& p = rule.premises[i];
    auto src = env.terms.find(p.source);
    if (src == env.terms.end()) throw EvalError("unbound premise source '" + p.source + "'");
    const auto trs = transitions(view_(src->second));
    if (p.negative()) {
      for (const auto& tr : trs)
        if (label_matches(p.label, tr.label, env)) return;
      match(rule, i + 1, env, acc);
      return;
    }
    for (const auto& tr : trs) {
      if (!label_matches(p.label, tr.label, env)) continue;
      Env next = env;
      if (p.label.is_var()) next.labels.insert_or_assign(p.label.var, tr.label);
      next.terms.insert_or_assign(*p.target, tr.target);
      if (p.weight_var) next.weights.insert_or_assign(*p.weight_var, tr.weight);
      match(rule, i + 1, next, acc);
    }
  }

  void conclude(const Rule& rule, const Env& env, BehaviourValue& acc) {
    Label label = eval_label(rule.concl_label, env);
    if (!spec_.kind.labels.contains(label))
      throw EvalError("rule '" + rule.name + "' produced label '" + to_string(label) +
                      "' outside the label set");
    Weight w = rule.concl_weight ? eval_weight(*rule.concl_weight, env) : 1.0;
    Substitution s(env.terms.begin(), env.terms.end());
    Term target = substitute(instantiate(rule.concl_target, env), s);
    join_into(spec_.kind, acc, singleton(spec_.kind, label, target, w));
  }

  const Spec& spec_;
  const BehaviourView& view_;
};

}  // namespace

BehaviourValue apply_rules(const Spec& spec, const Term& t, const BehaviourView& view) {
  return RuleEvaluator(spec, view).evaluate(t);
}

namespace {

BehaviourView model_view(const Model& m, const BehaviourValue& bot) {
  return [&m, &bot](const Term& u) -> const BehaviourValue& {
    auto it = m.behaviour.find(u);
    return it == m.behaviour.end() ? bot : it->second;
  };
}

BehaviourValue generator_step(const Model& m, const Term& t) {
  auto it = m.generators.dynamics.find(t.name());
  if (it == m.generators.dynamics.end())
    throw Error("variable '" + t.name() + "' is not a generator of the model");
  return inject(m.kind, it->second);
}

}  // namespace

Model phi_step(const Spec& spec, const Model& model) {
  Model out;
  out.kind = model.kind;
  out.universe = model.universe;
  out.generators = model.generators;
  const BehaviourValue bot = bottom<Term>(model.kind);
  const BehaviourView view = model_view(model, bot);
  RuleEvaluator eval(spec, view);
  for (const auto& t : model.universe)
    out.behaviour.emplace(t, t.is_var() ? generator_step(model, t) : eval.evaluate(t));
  refresh_frontier(out);
  return out;
}

std::vector<Term> initial_universe(const Spec& spec, const UniversePolicy& policy,
                                   const GenCoalgebra& generators) {
  const auto gens = generators.states();
  std::vector<Term> seeds = policy.seeds;
  for (const auto& g : gens) seeds.push_back(Term::var(g));
  if (policy.enumerate_height == 0) {
    std::set<Term> all;
    for (const auto& s : seeds) {
      for (const auto& v : variables(s))
        if (!generators.dynamics.count(v))
          throw Error("universe seed '" + to_string(s) + "' is not closed");
      collect_subterms(s, all);
    }
    return {all.begin(), all.end()};
  }
  std::set<Nat> params = literal_params(spec);
  for (const auto& s : seeds) {
    std::set<Term> subs;
    collect_subterms(s, subs);
    for (const auto& u : subs) params.insert(u.params().begin(), u.params().end());
  }
  return enumerate_universe(spec.sig, seeds, {policy.enumerate_height, policy.max_count}, params, gens);
}

namespace {

// Moves eligible frontier terms (and their missing subterms) into the
// universe. Returns true if the universe changed.
bool grow_universe(Model& m, const UniversePolicy& policy) {
  std::set<Term> candidates;
  for (const auto& f : m.frontier) collect_subterms(f, candidates);
  std::vector<Term> added;
  std::size_t size = m.universe.size();
  for (const auto& c : candidates) {
    if (size >= policy.max_count) break;
    if (m.in_universe(c) || c.height() > policy.max_size) continue;
    added.push_back(c);
    ++size;
  }
  if (added.empty()) return false;
  for (const auto& t : added) m.behaviour.emplace(t, bottom<Term>(m.kind));
  m.universe.insert(m.universe.end(), added.begin(), added.end());
  std::sort(m.universe.begin(), m.universe.end());
  refresh_frontier(m);
  return true;
}

std::vector<Term> differing_terms(const Model& a, const Model& b) {
  std::vector<Term> out;
  for (const auto& t : a.universe)
    if (a.behaviour.at(t) != b.behaviour.at(t)) out.push_back(t);
  return out;
}

}  // namespace

Solution lift_coalgebra(const Spec& spec, const GenCoalgebra& gen, const UniversePolicy& policy,
                        const SolveOptions& opts) {
  if (auto diags = validate_spec(spec); !diags.empty()) throw ValidationError(std::move(diags));
  const auto verdict = check_monotone(spec);
  if (!verdict.monotone && !opts.force) throw NonMonotoneError(verdict.offending_rules);
  for (const auto& [x, v] : gen.dynamics) {
    if (spec.sig.contains(x)) throw Error("generator '" + x + "' clashes with an operator name");
    check_kind(spec.kind, v);
    for (const auto& s : states_of(v))
      if (!gen.dynamics.count(s)) throw Error("generator dynamics refer to unknown state '" + s + "'");
  }

  Solution sol;
  Model cur = bottom_model(spec.kind, initial_universe(spec, policy, gen), gen);
  std::optional<Model> prev;
  ConvergenceReport& rep = sol.report;
  for (std::size_t iter = 1; iter <= opts.max_iters; ++iter) {
    Model next = phi_step(spec, cur);
    rep.iterations = iter;
    if (verdict.monotone && !pointwise_leq(cur, next))
      throw std::logic_error("Kleene chain is not increasing");
    const bool grown = policy.grow && grow_universe(next, policy);
    if (!grown && next == cur) {
      rep.converged = true;
      break;
    }
    if (!verdict.monotone && !grown && prev && next == *prev) {
      rep.oscillation_detected = true;
      rep.oscillating = differing_terms(next, cur);
      cur = std::move(next);
      break;
    }
    if (grown) {
      prev.reset();
    } else {
      prev = std::move(cur);
    }
    cur = std::move(next);
  }
  rep.frontier_size = cur.frontier.size();
  rep.universe_size = cur.universe.size();
  sol.model = std::move(cur);
  return sol;
}

Solution least_model(const Spec& spec, const UniversePolicy& policy, const SolveOptions& opts) {
  return lift_coalgebra(spec, GenCoalgebra{}, policy, opts);
}

std::set<Term> exact_terms(const Spec& spec, const Model& model,
                           const std::set<std::string>& inexact_generators) {
  const BehaviourValue bot = bottom<Term>(model.kind);
  std::map<Term, std::set<Term>> inspected;
  std::set<Term> exact;
  for (const auto& t : model.universe) {
    if (t.is_var()) {
      if (model.generators.dynamics.count(t.name()) && !inexact_generators.count(t.name()))
        exact.insert(t);
      continue;
    }
    std::set<Term>& deps = inspected[t];
    BehaviourView view = [&](const Term& u) -> const BehaviourValue& {
      deps.insert(u);
      auto it = model.behaviour.find(u);
      return it == model.behaviour.end() ? bot : it->second;
    };
    apply_rules(spec, t, view);
    exact.insert(t);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = exact.begin(); it != exact.end();) {
      auto dep = inspected.find(*it);
      bool ok = dep == inspected.end() ||
                std::all_of(dep->second.begin(), dep->second.end(),
                            [&](const Term& u) { return exact.count(u) != 0; });
      if (ok) {
        ++it;
      } else {
        it = exact.erase(it);
        changed = true;
      }
    }
  }
  return exact;
}

// ---------------------------------------------------------------------------
// Unfoldings

namespace {

NodeId build(const Model& m, const Term& t, std::size_t depth, std::vector<UnfoldNode>& nodes) {
  const NodeId id = nodes.size();
  nodes.push_back({t, depth, std::nullopt});
  if (depth == 0) return id;
  const BehaviourValue& v = m.at(t);
  Value<NodeId> step = map_states(m.kind, [&](const Term& s) { return build(m, s, depth - 1, nodes); }, v);
  nodes[id].step = std::move(step);
  return id;
}

NodeId copy_cut(const UnfoldTree& src, NodeId n, std::size_t depth, std::vector<UnfoldNode>& nodes) {
  const NodeId id = nodes.size();
  nodes.push_back({src.nodes[n].term, depth, std::nullopt});
  if (depth == 0) return id;
  Value<NodeId> step = map_states(src.kind, [&](NodeId c) { return copy_cut(src, c, depth - 1, nodes); },
                                  *src.nodes[n].step);
  nodes[id].step = std::move(step);
  return id;
}

std::string canon(const UnfoldTree& t, NodeId n) {
  const UnfoldNode& node = t.nodes[n];
  std::string s = "{" + to_string(node.term) + "|" + std::to_string(node.depth);
  if (!node.step) return s + "}";
  s += "|";
  if (auto* st = std::get_if<StreamStep<NodeId>>(&*node.step)) {
    if (!st->step)
      s += "_";
    else
      s += to_string(st->step->first) + ":" + canon(t, st->step->second);
  } else if (auto* l = std::get_if<Successors<NodeId>>(&*node.step)) {
    for (const auto& [label, kids] : l->by_label) {
      std::set<std::string> parts;
      for (NodeId k : kids) parts.insert(canon(t, k));
      s += to_string(label) + "[";
      for (const auto& p : parts) s += p;
      s += "]";
    }
  } else {
    for (const auto& [label, kids] : std::get<Weights<NodeId>>(*node.step).by_label) {
      std::map<std::string, Weight> parts;
      for (const auto& [k, w] : kids) {
        auto& slot = parts[canon(t, k)];
        slot = std::max(slot, w);
      }
      s += to_string(label) + "[";
      for (const auto& [p, w] : parts) {
        std::ostringstream os;
        os << w;
        s += p + "@" + os.str();
      }
      s += "]";
    }
  }
  return s + "}";
}

}  // namespace

UnfoldTree unfold(const Model& model, const Term& t, std::size_t depth) {
  if (!model.knows(t)) throw Error("term '" + to_string(t) + "' is not in the model");
  UnfoldTree tree;
  tree.kind = model.kind;
  build(model, t, depth, tree.nodes);
  return tree;
}

UnfoldTree truncate(const UnfoldTree& tree, std::size_t depth) {
  if (depth > tree.depth()) throw Error("truncation depth exceeds tree depth");
  UnfoldTree out;
  out.kind = tree.kind;
  copy_cut(tree, 0, depth, out.nodes);
  return out;
}

UnfoldTree relabel(const UnfoldTree& tree, const std::function<Term(const Term&)>& h) {
  UnfoldTree out = tree;
  for (auto& n : out.nodes) n.term = h(n.term);
  return out;
}

std::string canonical(const UnfoldTree& tree) { return canon(tree, 0); }

StreamTrace stream_trace(const UnfoldTree& tree) {
  StreamTrace tr;
  NodeId n = 0;
  while (tree.nodes[n].step) {
    auto* st = std::get_if<StreamStep<NodeId>>(&*tree.nodes[n].step);
    if (!st) throw Error("stream trace of a non-stream unfolding");
    if (!st->step) {
      tr.ends_in_bottom = true;
      break;
    }
    tr.labels.push_back(st->step->first);
    n = st->step->second;
  }
  return tr;
}

}  // namespace bigsos
