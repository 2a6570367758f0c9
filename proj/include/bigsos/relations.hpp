#pragma once

// Simulation and bisimulation on finite coalgebras, depth-bounded similarity
// on unfoldings, and sampled congruence and monotonicity tests.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bigsos/behaviour.hpp"
#include "bigsos/engine.hpp"

namespace bigsos {

/// A coalgebra on a finite carrier: the keys.
template <class S>
using Coalgebra = std::map<S, Value<S>>;

/// Universe and frontier (the latter at bottom).
Coalgebra<Term> as_coalgebra(const Model& m);

template <class S, class T>
bool is_simulation(const BehaviourKind& kind, const Coalgebra<S>& f, const Coalgebra<T>& g,
                   const Relation<S, T>& r) {
  for (const auto& [s, t] : r.pairs)
    if (!rel_lift(kind, r, f.at(s), g.at(t))) return false;
  return true;
}

template <class S, class T>
struct SimulationResult {
  Relation<S, T> relation;
  /// Refinement round in which a pair was removed: the pair is told apart by
  /// observations of that depth.
  std::map<std::pair<S, T>, std::size_t> removed_at;
};

/// Greatest simulation by refinement from the full relation. The result is
/// re-verified.
template <class S, class T>
SimulationResult<S, T> greatest_simulation(const BehaviourKind& kind, const Coalgebra<S>& f,
                                           const Coalgebra<T>& g) {
  SimulationResult<S, T> res;
  Relation<S, T>& r = res.relation;
  for (const auto& [s, v] : f) r.left.insert(s);
  for (const auto& [t, v] : g) r.right.insert(t);
  for (const auto& s : r.left)
    for (const auto& t : r.right) r.pairs.emplace(s, t);
  for (std::size_t round = 1;; ++round) {
    std::vector<std::pair<S, T>> bad;
    for (const auto& p : r.pairs)
      if (!rel_lift(kind, r, f.at(p.first), g.at(p.second))) bad.push_back(p);
    if (bad.empty()) break;
    for (const auto& p : bad) {
      r.pairs.erase(p);
      res.removed_at.emplace(p, round);
    }
  }
  if (!is_simulation(kind, f, g, r)) throw std::logic_error("refinement produced a non-simulation");
  return res;
}

template <class S>
struct Partition {
  std::map<S, std::size_t> block_of;
  std::vector<std::vector<S>> blocks;  // ordered by least member
  /// block_of after each refinement round, starting with the trivial one.
  std::vector<std::map<S, std::size_t>> history;

  bool together(const S& a, const S& b) const { return block_of.at(a) == block_of.at(b); }
  /// Round in which a and b were separated, if they were.
  std::optional<std::size_t> split_round(const S& a, const S& b) const {
    for (std::size_t i = 0; i < history.size(); ++i)
      if (history[i].at(a) != history[i].at(b)) return i;
    return std::nullopt;
  }
};

/// Coarsest partition whose blocks have equal images of behaviour under the
/// quotient map (the kernel of the canonical lifting).
template <class S>
Partition<S> bisimilarity(const BehaviourKind& kind, const Coalgebra<S>& f) {
  Partition<S> p;
  for (const auto& [s, v] : f) p.block_of[s] = 0;
  p.history.push_back(p.block_of);
  std::size_t count = f.empty() ? 0 : 1;
  while (true) {
    std::map<std::pair<std::size_t, Value<std::size_t>>, std::size_t> ids;
    std::map<S, std::size_t> next;
    for (const auto& [s, v] : f) {
      auto key = std::make_pair(p.block_of.at(s), map_states(kind, p.block_of, v));
      auto [it, inserted] = ids.try_emplace(std::move(key), ids.size());
      next[s] = it->second;
    }
    const bool stable = ids.size() == count;
    count = ids.size();
    // renumber by least member
    std::map<std::size_t, std::size_t> renum;
    for (auto& [s, b] : next) {
      auto [it, inserted] = renum.try_emplace(b, renum.size());
      b = it->second;
    }
    p.block_of = std::move(next);
    if (stable) break;
    p.history.push_back(p.block_of);
  }
  p.blocks.assign(count, {});
  for (const auto& [s, b] : p.block_of) p.blocks[b].push_back(s);
  return p;
}

/// Drops transitions (and lowers weights) at random; the result is below v.
template <class S>
Value<S> prune_value(const Value<S>& v, std::mt19937_64& rng) {
  if (auto* s = std::get_if<StreamStep<S>>(&v)) {
    StreamStep<S> out = *s;
    if (rng() % 2) out.step.reset();
    return out;
  }
  if (auto* l = std::get_if<Successors<S>>(&v)) {
    Successors<S> out;
    for (const auto& [label, ts] : l->by_label)
      for (const auto& t : ts)
        if (rng() % 2) out.by_label[label].insert(t);
    return out;
  }
  Weights<S> out;
  for (const auto& [label, ws] : std::get<Weights<S>>(v).by_label)
    for (const auto& [t, w] : ws) {
      const auto r = rng() % 3;
      if (r == 1) out.by_label[label][t] = w;
      if (r == 2) out.by_label[label][t] = w / 2;
    }
  return out;
}

struct EquivResult {
  bool related = false;
  std::optional<Relation<Term>> witness;
  std::optional<std::size_t> distinguishing_depth;
};

/// Greatest simulation between two models over universe and frontier.
Relation<Term> greatest_simulation(const Model& m1, const Model& m2);

/// Bisimilarity classes of the universe terms of a model.
std::vector<std::vector<Term>> bisimilarity_classes(const Model& m);

/// t1 simulated by t2 (rel = sim) or t1 bisimilar to t2 (rel = bisim) in `m`.
/// The witness is the greatest simulation, or the bisimilarity relation
/// restricted to the two classes involved.
EquivResult similar(const Model& m, const Term& t1, const Term& t2);
EquivResult bisimilar(const Model& m, const Term& t1, const Term& t2);

/// Depth-bounded similarity of unfoldings: u1's root is simulated by u2's root
/// up to `depth` steps. With `equal_labels`, related nodes must carry the same
/// term. Throws Error when depth exceeds either tree depth.
bool depth_similarity(const UnfoldTree& u1, const UnfoldTree& u2, std::size_t depth,
                      bool equal_labels = true);

/// States reachable from t in m (including t).
std::set<Term> reachable(const Model& m, const Term& t);

/// t and every term reachable from it lie in `exact`.
bool closure_within(const Model& m, const Term& t, const std::set<Term>& exact);

struct CongruenceViolation {
  Term left;
  Term right;
};

struct CongruenceReport {
  std::size_t candidates = 0;  // composite pairs with pairwise bisimilar arguments
  std::size_t sampled = 0;
  std::size_t checked = 0;     // sampled pairs whose reachable closure is exact
  std::vector<CongruenceViolation> violations;
  std::string note;

  /// "pass", "fail" or "inconclusive".
  std::string status() const;
};

/// Samples pairs of composite terms with the same operator and parameters and
/// pairwise bisimilar arguments, and checks that they are bisimilar.
CongruenceReport congruence_test(const Spec& spec, const Model& m, std::size_t samples,
                                 std::uint64_t seed);

struct MonotonicityViolation {
  std::string rule_op;
  Term term;
  std::string smaller;  // behaviour under the pruned environment
  std::string larger;   // behaviour under the full environment
};

struct MonotonicityReport {
  std::size_t trials = 0;
  std::size_t skipped = 0;  // evaluation errors in a random environment
  std::vector<MonotonicityViolation> violations;
};

/// Random environments z0.. with a pruned copy below each; the rule bank
/// applied to op(z...) must be monotone from pruned to full.
MonotonicityReport monotonicity_semantic_test(const Spec& spec, std::size_t trials,
                                              std::uint64_t seed);

/// "monotone", "non-monotone" (a semantic counterexample exists) or "unknown"
/// (negative premises but no counterexample found).
std::string monotonicity_verdict(const Spec& spec, std::size_t trials, std::uint64_t seed);

}  // namespace bigsos
