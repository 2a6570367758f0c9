#include "bigsos/laws.hpp"

#include <random>

#include "bigsos/relations.hpp"

namespace bigsos {

Term rename_vars(const Term& t, const std::map<std::string, Term>& h) {
  if (t.is_var()) {
    auto it = h.find(t.name());
    return it == h.end() ? t : it->second;
  }
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(rename_vars(a, h));
  return Term::app(t.name(), {t.params().begin(), t.params().end()}, std::move(args));
}

LawConfig default_law_config(const Spec& spec) {
  LawConfig cfg;
  const Label l = spec.kind.labels.naturals ? Label(Nat{1})
                  : spec.kind.labels.finite.empty() ? Label(Nat{0})
                                                    : spec.kind.labels.finite.front();
  cfg.c.dynamics.emplace("x1", singleton<std::string>(spec.kind, l, "x2"));
  cfg.c.dynamics.emplace("x2", singleton<std::string>(spec.kind, l, "x1"));
  cfg.d.dynamics.emplace("y", singleton<std::string>(spec.kind, l, "y"));
  cfg.h = {{"x1", "y"}, {"x2", "y"}};
  return cfg;
}

namespace {

struct Tally {
  std::size_t checked = 0;
  std::size_t failed = 0;
  Json first_failure;
  std::string note;

  void fail(Json w) {
    if (failed++ == 0) first_failure = std::move(w);
  }

  LawReport report(std::string law) const {
    LawReport r{std::move(law), "pass", Json{{"checked", checked}}};
    if (failed) {
      r.status = "fail";
      r.witness = Json{{"checked", checked}, {"failed", failed}, {"first", first_failure}};
    } else if (checked == 0) {
      r.status = "inconclusive";
    }
    if (!note.empty()) r.witness["note"] = note;
    return r;
  }
};

LawReport inconclusive(std::string law, const std::string& why) {
  return {std::move(law), "inconclusive", Json{{"note", why}}};
}

bool is_homomorphism(const BehaviourKind& kind, const GenCoalgebra& c, const GenCoalgebra& d,
                     const std::map<std::string, std::string>& h) {
  for (const auto& [x, v] : c.dynamics) {
    auto hx = h.find(x);
    if (hx == h.end() || !d.dynamics.count(hx->second)) return false;
    for (const auto& s : states_of(v))
      if (!h.count(s)) return false;
    if (map_states(kind, h, v) != d.dynamics.at(hx->second)) return false;
  }
  return true;
}

std::string tree_key(const Model& m, const Term& t, std::size_t depth,
                     const std::map<std::string, Term>* rename = nullptr) {
  UnfoldTree u = unfold(m, t, depth);
  if (rename) u = relabel(u, [rename](const Term& s) { return rename_vars(s, *rename); });
  return canonical(u);
}

class Suite {
 public:
  Suite(const Spec& spec, const LawConfig& cfg) : spec_(spec), cfg_(cfg), kind_(spec.kind) {}

  std::vector<LawReport> run() {
    for (const auto* g : {&cfg_.c, &cfg_.d})
      for (const auto& [x, v] : g->dynamics) check_kind(kind_, v);
    const bool hom = is_homomorphism(kind_, cfg_.c, cfg_.d, cfg_.h);
    for (const auto& [x, y] : cfg_.h) h_terms_.emplace(x, Term::var(y));

    Solution sx = lift(cfg_.c, cfg_.policy);
    UniversePolicy py = cfg_.policy;
    for (const auto& t : sx.model.universe) py.seeds.push_back(rename_vars(t, h_terms_));
    if (!hom) py.seeds.clear();
    Solution sy = lift(cfg_.d, py);
    mx_ = std::move(sx.model);
    my_ = std::move(sy.model);
    const bool converged = sx.report.converged && sy.report.converged;
    exact_x_ = exact_terms(spec_, mx_);
    exact_y_ = exact_terms(spec_, my_);

    std::vector<LawReport> out;
    const std::string not_hom = "h is not a coalgebra homomorphism from c to d";
    const std::string not_conv = "lifted model did not converge";
    out.push_back(!converged ? inconclusive("L2", not_conv) : !hom ? inconclusive("L2", not_hom) : l2());
    out.push_back(!converged ? inconclusive("L3", not_conv) : l3());
    out.push_back(!converged ? inconclusive("T1", not_conv) : !hom ? inconclusive("T1", not_hom) : t1());
    out.push_back(!converged ? inconclusive("T2-eta", not_conv) : t2_eta());
    out.push_back(!converged ? inconclusive("T2-mu", not_conv) : t2_mu());
    return out;
  }

 private:
  Solution lift(const GenCoalgebra& g, const UniversePolicy& p) const {
    return lift_coalgebra(spec_, g, p, {cfg_.max_iters, false});
  }

  // Similar pairs (behaviour-exact on both sides) map to similar pairs.
  LawReport l2() {
    Tally tally;
    auto gx = greatest_simulation(kind_, Coalgebra<std::string>(cfg_.c.dynamics.begin(), cfg_.c.dynamics.end()),
                                  Coalgebra<std::string>(cfg_.c.dynamics.begin(), cfg_.c.dynamics.end()));
    auto gy = greatest_simulation(kind_, Coalgebra<std::string>(cfg_.d.dynamics.begin(), cfg_.d.dynamics.end()),
                                  Coalgebra<std::string>(cfg_.d.dynamics.begin(), cfg_.d.dynamics.end()));
    for (const auto& [a, b] : gx.relation.pairs) {
      ++tally.checked;
      if (!gy.relation.contains(cfg_.h.at(a), cfg_.h.at(b)))
        tally.fail(Json{{"left", a}, {"right", b}, {"level", "generators"}});
    }
    const Relation<Term> sx = greatest_simulation(mx_, mx_);
    const Relation<Term> sy = greatest_simulation(my_, my_);
    std::map<Term, bool> ok_x, ok_y;
    auto exact_in = [](const Model& m, const std::set<Term>& ex, std::map<Term, bool>& memo, const Term& t) {
      auto it = memo.find(t);
      if (it != memo.end()) return it->second;
      bool ok = m.in_universe(t) && closure_within(m, t, ex);
      memo.emplace(t, ok);
      return ok;
    };
    for (const auto& [s, t] : sx.pairs) {
      if (!exact_in(mx_, exact_x_, ok_x, s) || !exact_in(mx_, exact_x_, ok_x, t)) continue;
      const Term hs = rename_vars(s, h_terms_), ht = rename_vars(t, h_terms_);
      if (!exact_in(my_, exact_y_, ok_y, hs) || !exact_in(my_, exact_y_, ok_y, ht)) continue;
      ++tally.checked;
      if (!sy.contains(hs, ht))
        tally.fail(Json{{"left", to_string(s)}, {"right", to_string(t)}, {"level", "terms"}});
    }
    return tally.report("L2");
  }

  // Pruned copies f of the lifted model g: f <= g pointwise, so every
  // unfolding under f is depth-similar to the one under g.
  LawReport l3() {
    Tally tally;
    std::mt19937_64 rng(cfg_.seed);
    for (std::size_t trial = 0; trial < cfg_.trials; ++trial) {
      Model f = mx_;
      for (auto& [t, v] : f.behaviour)
        if (!t.is_var() || trial % 2) v = prune_value(v, rng);
      refresh_frontier(f);
      if (!pointwise_leq(f, mx_)) throw std::logic_error("pruned model is not below the original");
      for (const auto& t : mx_.universe) {
        ++tally.checked;
        if (!depth_similarity(unfold(f, t, cfg_.depth), unfold(mx_, t, cfg_.depth), cfg_.depth, true))
          tally.fail(Json{{"term", to_string(t)}, {"trial", trial}});
      }
    }
    return tally.report("L3");
  }

  // The term extension of h is a homomorphism of the lifted models.
  LawReport t1() {
    Tally tally;
    for (const auto& t : mx_.universe) {
      if (!closure_within(mx_, t, exact_x_)) continue;
      const Term ht = rename_vars(t, h_terms_);
      if (!my_.in_universe(ht) || !closure_within(my_, ht, exact_y_)) continue;
      ++tally.checked;
      if (tree_key(mx_, t, cfg_.depth, &h_terms_) != tree_key(my_, ht, cfg_.depth))
        tally.fail(Json{{"term", to_string(t)}, {"image", to_string(ht)}});
    }
    return tally.report("T1");
  }

  // Generators behave in the lifted model exactly as in c.
  LawReport t2_eta() {
    Tally tally;
    std::vector<Term> vars;
    for (const auto& x : cfg_.c.states()) vars.push_back(Term::var(x));
    const Model gen = phi_step(spec_, bottom_model(kind_, vars, cfg_.c));
    for (const auto& x : vars) {
      ++tally.checked;
      const bool step_ok = mx_.at(x) == inject(kind_, cfg_.c.dynamics.at(x.name()));
      if (!step_ok || tree_key(mx_, x, cfg_.depth) != tree_key(gen, x, cfg_.depth))
        tally.fail(Json{{"generator", x.name()}});
    }
    return tally.report("T2-eta");
  }

  // Lifting the lifted model once more and flattening gives back the lifted
  // model.
  LawReport t2_mu() {
    Tally tally;
    Model m1 = mx_;
    std::vector<Term> level1;
    for (const auto& t : m1.universe)
      if (closure_within(m1, t, exact_x_)) level1.push_back(t);
    if (cfg_.mutate) {
      bool done = false;
      for (const auto& t : level1) {
        BehaviourValue& v = m1.behaviour.at(t);
        if (t.is_var() || t.args().empty() || is_bottom(v)) continue;
        auto trs = transitions(v);
        BehaviourValue cut = bottom<Term>(kind_);
        for (std::size_t i = 1; i < trs.size(); ++i)
          join_into(kind_, cut, singleton(kind_, trs[i].label, trs[i].target, trs[i].weight));
        v = std::move(cut);
        tally.note = "deleted transition " + to_string(trs[0].label) + " of " + to_string(t) +
                     " to " + to_string(trs[0].target);
        done = true;
        break;
      }
      if (!done) tally.note = "no transition to delete";
    }
    if (level1.empty()) return tally.report("T2-mu");

    std::set<std::string> taken;
    for (const auto& op : spec_.sig.ops()) taken.insert(op.name);
    std::map<Term, std::string> name_of;
    std::map<std::string, Term> flat;
    std::size_t next = 0;
    for (const auto& t : level1) {
      std::string g;
      do g = "g" + std::to_string(next++);
      while (taken.count(g));
      name_of.emplace(t, g);
      flat.emplace(g, t);
    }
    GenCoalgebra g2;
    for (const auto& t : level1) g2.dynamics.emplace(name_of.at(t), map_states(kind_, name_of, m1.at(t)));

    UniversePolicy p2 = cfg_.policy;
    p2.enumerate_height = 0;
    p2.seeds.clear();
    for (const auto& t : level1) {
      if (t.is_var() || t.args().empty()) continue;
      std::vector<Term> args;
      for (const auto& a : t.args()) {
        auto it = name_of.find(a);
        if (it == name_of.end()) break;
        args.push_back(Term::var(it->second));
      }
      if (args.size() == t.args().size())
        p2.seeds.push_back(Term::app(t.name(), {t.params().begin(), t.params().end()}, std::move(args)));
    }
    p2.max_count = 2 * (level1.size() + p2.seeds.size()) + cfg_.policy.max_count;
    Solution s2 = lift(g2, p2);
    if (!s2.report.converged) return inconclusive("T2-mu", "doubled lifted model did not converge");
    const Model& m2 = s2.model;
    const std::set<Term> exact2 = exact_terms(spec_, m2);
    for (const auto& u : m2.universe) {
      if (!closure_within(m2, u, exact2)) continue;
      const Term fu = rename_vars(u, flat);
      if (!m1.in_universe(fu) || !closure_within(m1, fu, exact_x_)) continue;
      ++tally.checked;
      if (tree_key(m2, u, cfg_.depth, &flat) != tree_key(m1, fu, cfg_.depth))
        tally.fail(Json{{"term", to_string(u)},
                        {"flattened", to_string(fu)},
                        {"expected", value_text(map_states(kind_, [&](const Term& s) { return rename_vars(s, flat); },
                                                           m2.at(u)))},
                        {"model", value_text(m1.at(fu))}});
    }
    return tally.report("T2-mu");
  }

  const Spec& spec_;
  const LawConfig& cfg_;
  const BehaviourKind kind_;
  std::map<std::string, Term> h_terms_;
  Model mx_, my_;
  std::set<Term> exact_x_, exact_y_;
};

}  // namespace

std::vector<LawReport> law_suite(const Spec& spec, const LawConfig& config) {
  auto reports = Suite(spec, config).run();
  std::sort(reports.begin(), reports.end(),
            [](const LawReport& a, const LawReport& b) { return a.law < b.law; });
  return reports;
}

}  // namespace bigsos
