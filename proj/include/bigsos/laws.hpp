#pragma once

// Executable, depth-bounded versions of the similarity lemmas and of the
// functor and monad lifting theorems.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bigsos/engine.hpp"
#include "bigsos/serialize.hpp"

namespace bigsos {

struct LawConfig {
  GenCoalgebra c;                          // (X, c)
  GenCoalgebra d;                          // (Y, d)
  std::map<std::string, std::string> h;   // X -> Y, expected to be a homomorphism
  std::size_t depth = 3;
  UniversePolicy policy{{}, 2, 300, 6, true};
  std::size_t max_iters = 200;
  std::size_t trials = 3;                  // pruned models for L3
  std::uint64_t seed = 1;
  /// Corrupts the level-1 lifted model by deleting one transition.
  bool mutate = false;
};

/// A 2-cycle x1 <-> x2 on the first label, a self-loop y, and h collapsing X
/// onto y.
LawConfig default_law_config(const Spec& spec);

struct LawReport {
  std::string law;     // L2, L3, T1, T2-eta, T2-mu
  std::string status;  // pass, fail, inconclusive
  Json witness;

  Json to_json() const { return Json{{"law", law}, {"status", status}, {"witness", witness}}; }
};

/// Reports ordered by law name.
std::vector<LawReport> law_suite(const Spec& spec, const LawConfig& config);

/// Replaces every variable x with the term h(x).
Term rename_vars(const Term& t, const std::map<std::string, Term>& h);

}  // namespace bigsos
