#pragma once

// Fixture lookup and random generators shared by the unit and acceptance
// tests.

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bigsos/engine.hpp"
#include "bigsos/relations.hpp"

namespace bigsos::testing {

inline std::string fixture(const std::string& name) { return std::string(BIGSOS_FIXTURES) + "/" + name; }

inline Spec fixture_spec(const std::string& name) { return load_spec(fixture(name)); }

inline std::size_t draw(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

struct RandomSpecOptions {
  std::vector<std::string> labels{"a", "b"};
  std::size_t max_rules_per_op = 2;
  std::size_t max_premises = 2;
  std::size_t max_target_height = 2;
  /// If set, conclusion targets are bound variables or one of these closed
  /// terms, so models stay inside a fixed universe.
  std::vector<std::string> closed_targets;
  /// Candidate operators beyond the constant c: name and arity.
  std::vector<std::pair<std::string, std::size_t>> ops{{"f", 1}, {"g", 1}, {"p", 2}};
  std::size_t max_extra_ops = 2;
};

/// Source text of a random positive LTS spec with at most 2 steps of
/// lookahead.
inline std::string random_spec_text(std::mt19937_64& rng, const RandomSpecOptions& o = {}) {
  std::vector<std::pair<std::string, std::size_t>> ops{{"c", 0}};
  std::vector<std::pair<std::string, std::size_t>> pool = o.ops;
  const std::size_t extra = 1 + draw(rng, o.max_extra_ops);
  for (std::size_t i = 0; i < extra && !pool.empty(); ++i) {
    const std::size_t k = draw(rng, pool.size());
    ops.push_back(pool[k]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
  }
  std::string text = "behaviour lts labels ";
  for (std::size_t i = 0; i < o.labels.size(); ++i) text += (i ? ", " : "") + o.labels[i];
  text += "\nops ";
  for (std::size_t i = 0; i < ops.size(); ++i)
    text += (i ? ", " : "") + ops[i].first + "/" + std::to_string(ops[i].second);
  text += "\n";

  std::size_t rule_no = 0;
  for (const auto& [op, arity] : ops) {
    const std::size_t rules = 1 + draw(rng, o.max_rules_per_op);
    for (std::size_t r = 0; r < rules; ++r) {
      std::vector<std::string> heads, bound;
      for (std::size_t i = 0; i < arity; ++i) heads.push_back("x" + std::to_string(i));
      bound = heads;
      std::string premises;
      if (arity > 0) {
        const std::size_t n = draw(rng, o.max_premises + 1);
        std::vector<std::string> depth1;
        for (std::size_t i = 0; i < n; ++i) {
          // sources: head variables or targets of depth-1 premises
          std::vector<std::string> sources = heads;
          sources.insert(sources.end(), depth1.begin(), depth1.end());
          const std::string src = sources[draw(rng, sources.size())];
          const std::string tgt = "y" + std::to_string(i);
          const bool from_head = std::find(heads.begin(), heads.end(), src) != heads.end();
          if (from_head) depth1.push_back(tgt);
          premises += (premises.empty() ? " " : ", ") + src + " -" + o.labels[draw(rng, o.labels.size())] +
                      "-> " + tgt;
          bound.push_back(tgt);
        }
      }
      std::function<std::string(std::size_t)> target = [&](std::size_t h) -> std::string {
        if (!o.closed_targets.empty()) {
          const std::size_t k = draw(rng, bound.size() + o.closed_targets.size());
          return k < bound.size() ? bound[k] : o.closed_targets[k - bound.size()];
        }
        const std::size_t pick = draw(rng, 3);
        if (h <= 1 || pick == 0) {
          if (!bound.empty() && draw(rng, 3) != 0) return bound[draw(rng, bound.size())];
          return "c";
        }
        const auto& [name, ar] = ops[draw(rng, ops.size())];
        if (ar == 0) return name;
        std::string s = name + "(";
        for (std::size_t i = 0; i < ar; ++i) s += (i ? "," : "") + target(h - 1);
        return s + ")";
      };
      std::string head = op;
      if (arity > 0) {
        head += "(";
        for (std::size_t i = 0; i < arity; ++i) head += (i ? "," : "") + heads[i];
        head += ")";
      }
      text += "rule r" + std::to_string(rule_no++) + " :" + premises + " |- " + head + " -" +
              o.labels[draw(rng, o.labels.size())] + "-> " + target(1 + draw(rng, o.max_target_height)) +
              "\n";
    }
  }
  return text;
}

/// Random behaviour of each universe term, with targets in the universe.
inline Model random_model(const Spec& spec, const std::vector<Term>& universe, std::mt19937_64& rng,
                          const std::vector<Label>& labels) {
  Model m = bottom_model(spec.kind, universe);
  static const Weight weights[] = {0.5, 1.0, 2.5};
  for (auto& [t, v] : m.behaviour) {
    switch (spec.kind.functor) {
      case Functor::Stream:
        if (draw(rng, 4) != 0)
          v = StreamStep<Term>{std::make_pair(labels[draw(rng, labels.size())], universe[draw(rng, universe.size())])};
        break;
      case Functor::Lts: {
        Successors<Term> s;
        for (const auto& l : labels)
          for (const auto& u : universe)
            if (draw(rng, 3) == 0) s.by_label[l].insert(u);
        v = std::move(s);
        break;
      }
      case Functor::Weighted: {
        Weights<Term> w;
        for (const auto& l : labels)
          for (const auto& u : universe)
            if (draw(rng, 3) == 0) w.by_label[l][u] = weights[draw(rng, 3)];
        v = std::move(w);
        break;
      }
    }
  }
  refresh_frontier(m);
  return m;
}

/// A copy of m with transitions dropped at random; below m pointwise.
inline Model pruned(const Model& m, std::mt19937_64& rng) {
  Model out = m;
  for (auto& [t, v] : out.behaviour) v = prune_value(v, rng);
  refresh_frontier(out);
  return out;
}

}  // namespace bigsos::testing
