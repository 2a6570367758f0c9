#pragma once

// Least supported models by Kleene iteration of the rule-application
// operator over a finite, growing universe of terms, depth-bounded unfoldings
// of a model, and the lifting of a generator coalgebra to terms over it.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bigsos/behaviour.hpp"
#include "bigsos/spec.hpp"
#include "bigsos/term.hpp"

namespace bigsos {

class NonMonotoneError : public Error {
 public:
  explicit NonMonotoneError(std::vector<std::string> rules);
  const std::vector<std::string>& rules() const { return rules_; }

 private:
  std::vector<std::string> rules_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

/// Failure while evaluating a label, parameter or weight expression.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// A coalgebra on a finite set of named states. Inside terms a state x is the
/// variable x.
struct GenCoalgebra {
  std::map<std::string, Value<std::string>> dynamics;

  std::vector<std::string> states() const;
  friend bool operator==(const GenCoalgebra&, const GenCoalgebra&) = default;
};

/// Behaviour of a generator viewed as a value over generator terms.
BehaviourValue inject(const BehaviourKind& kind, const Value<std::string>& v);

/// A coalgebra on terms restricted to a finite universe. Frontier terms are
/// targets outside the universe; they are opaque and behave as bottom.
struct Model {
  BehaviourKind kind;
  std::vector<Term> universe;  // canonical order
  std::map<Term, BehaviourValue> behaviour;
  std::set<Term> frontier;
  GenCoalgebra generators;

  bool in_universe(const Term& t) const { return behaviour.count(t) != 0; }
  bool knows(const Term& t) const { return in_universe(t) || frontier.count(t) != 0; }
  /// Behaviour of a universe or frontier term; throws Error for other terms.
  const BehaviourValue& at(const Term& t) const;
  /// Universe followed by frontier.
  std::vector<Term> states() const;

  friend bool operator==(const Model& a, const Model& b) {
    return a.universe == b.universe && a.behaviour == b.behaviour && a.frontier == b.frontier;
  }
};

/// Every universe term maps to bottom (generators to their dynamics only after
/// one step).
Model bottom_model(const BehaviourKind& kind, std::vector<Term> universe,
                   GenCoalgebra generators = {});

/// Recomputes the frontier from the states occurring in `m.behaviour`.
void refresh_frontier(Model& m);

/// a(t) <= b(t) for every universe term of a (terms b does not know are bottom).
bool pointwise_leq(const Model& a, const Model& b);

struct ConvergenceReport {
  std::size_t iterations = 0;
  bool converged = false;
  bool oscillation_detected = false;
  std::size_t frontier_size = 0;
  std::size_t universe_size = 0;
  std::vector<Term> oscillating;  // terms whose behaviour flips in a 2-cycle
};

struct UniversePolicy {
  std::vector<Term> seeds;
  /// Also include every term up to this height (0: seeds only).
  std::size_t enumerate_height = 0;
  std::size_t max_count = 500;
  std::size_t max_size = 12;  // height cap for terms added by growth
  /// Add conclusion targets to the universe as they appear.
  bool grow = true;
};

struct SolveOptions {
  std::size_t max_iters = 1000;
  /// Iterate non-monotone specs anyway (with oscillation detection).
  bool force = false;
};

struct Solution {
  Model model;
  ConvergenceReport report;
};

using BehaviourView = std::function<const BehaviourValue&(const Term&)>;

/// Joins the conclusions of every complete premise match of every rule for
/// the head operator of `t`, reading argument behaviour through `view`.
/// Conclusion targets are instantiated by substitution.
BehaviourValue apply_rules(const Spec& spec, const Term& t, const BehaviourView& view);

/// One application of the rule operator to every universe term. Generator
/// terms take their dynamics verbatim.
Model phi_step(const Spec& spec, const Model& model);

/// Initial universe for a policy: seeds, their subterms, the enumerated terms
/// and the generator variables.
std::vector<Term> initial_universe(const Spec& spec, const UniversePolicy& policy,
                                   const GenCoalgebra& generators = {});

/// Iterates phi_step from the bottom model. Throws ValidationError for an
/// invalid spec and NonMonotoneError for a non-monotone one unless forced.
Solution least_model(const Spec& spec, const UniversePolicy& policy, const SolveOptions& opts = {});

/// Least model over terms with generators from `gen`.
Solution lift_coalgebra(const Spec& spec, const GenCoalgebra& gen, const UniversePolicy& policy,
                        const SolveOptions& opts = {});

/// Universe terms whose computed behaviour provably equals their behaviour in
/// the unbounded least model: their evaluation inspects exact terms only.
/// `model` must be a converged result of least_model or lift_coalgebra;
/// generators listed in `inexact_generators` are treated as approximations.
std::set<Term> exact_terms(const Spec& spec, const Model& model,
                           const std::set<std::string>& inexact_generators = {});

// ---------------------------------------------------------------------------
// Unfoldings

using NodeId = std::size_t;

struct UnfoldNode {
  Term term;
  std::size_t depth = 0;                // remaining depth
  std::optional<Value<NodeId>> step;  // absent at depth 0
};

/// Depth-bounded unfolding; node 0 is the root.
struct UnfoldTree {
  BehaviourKind kind;
  std::vector<UnfoldNode> nodes;

  const UnfoldNode& root() const { return nodes.front(); }
  std::size_t depth() const { return nodes.front().depth; }
};

UnfoldTree unfold(const Model& model, const Term& t, std::size_t depth);

/// Cuts every branch at `depth` (which must not exceed the tree depth).
UnfoldTree truncate(const UnfoldTree& tree, std::size_t depth);

/// Applies a state map to the node labels.
UnfoldTree relabel(const UnfoldTree& tree, const std::function<Term(const Term&)>& h);

/// Canonical text of a tree: equal iff the trees are equal up to the order and
/// multiplicity of identical LTS children.
std::string canonical(const UnfoldTree& tree);

struct StreamTrace {
  std::vector<Label> labels;
  bool ends_in_bottom = false;  // a bottom step was reached within the depth
};

/// Labels along the unique branch of a stream unfolding.
StreamTrace stream_trace(const UnfoldTree& tree);

}  // namespace bigsos
