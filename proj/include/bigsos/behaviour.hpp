#pragma once

// Ordered behaviour functors. A value of B applied to a carrier of states S is
// one observation step: a partial stream step, labelled successor sets, or
// labelled weight functions over (R+ u {inf}, sup). Every operation here is
// generic in the state type so the same code serves models over terms and
// unfolding trees over node ids.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bigsos/label.hpp"
#include "bigsos/term.hpp"

namespace bigsos {

enum class Functor { Stream, Lts, Weighted };

struct BehaviourKind {
  Functor functor = Functor::Lts;
  LabelSet labels;

  friend bool operator==(const BehaviourKind&, const BehaviourKind&) = default;
};

std::string to_string(Functor f);

class BehaviourError : public Error {
 public:
  using Error::Error;
};

/// Non-negative weight; +infinity is the top of the sup monoid.
using Weight = double;

template <class S>
struct StreamStep {
  std::optional<std::pair<Label, S>> step;  // nullopt is bottom

  friend auto operator<=>(const StreamStep&, const StreamStep&) = default;
  friend bool operator==(const StreamStep&, const StreamStep&) = default;
};

/// Empty successor sets are never stored.
template <class S>
struct Successors {
  std::map<Label, std::set<S>> by_label;

  friend auto operator<=>(const Successors&, const Successors&) = default;
  friend bool operator==(const Successors&, const Successors&) = default;
};

/// Zero weights and empty label entries are never stored.
template <class S>
struct Weights {
  std::map<Label, std::map<S, Weight>> by_label;

  friend auto operator<=>(const Weights&, const Weights&) = default;
  friend bool operator==(const Weights&, const Weights&) = default;
};

template <class S>
using Value = std::variant<StreamStep<S>, Successors<S>, Weights<S>>;

using BehaviourValue = Value<Term>;

template <class S>
struct Transition {
  Label label;
  S target;
  Weight weight = 1.0;
};

template <class S, class T = S>
struct Relation {
  std::set<S> left;
  std::set<T> right;
  std::set<std::pair<S, T>> pairs;

  bool contains(const S& s, const T& t) const { return pairs.count({s, t}) != 0; }
  friend bool operator==(const Relation&, const Relation&) = default;
};

template <class S>
Relation<S, S> diagonal(const std::set<S>& carrier) {
  Relation<S, S> r{carrier, carrier, {}};
  for (const auto& s : carrier) r.pairs.emplace(s, s);
  return r;
}

// ---------------------------------------------------------------------------

template <class S>
Value<S> bottom(const BehaviourKind& kind) {
  switch (kind.functor) {
    case Functor::Stream: return StreamStep<S>{};
    case Functor::Lts: return Successors<S>{};
    case Functor::Weighted: return Weights<S>{};
  }
  return Successors<S>{};
}

template <class S>
bool is_bottom(const Value<S>& v) {
  if (auto* s = std::get_if<StreamStep<S>>(&v)) return !s->step;
  if (auto* l = std::get_if<Successors<S>>(&v)) return l->by_label.empty();
  return std::get<Weights<S>>(v).by_label.empty();
}

template <class S>
void check_kind(const BehaviourKind& kind, const Value<S>& v) {
  if (static_cast<std::size_t>(kind.functor) != v.index())
    throw BehaviourError("behaviour value does not belong to the " + to_string(kind.functor) +
                         " functor");
}

template <class S>
Value<S> singleton(const BehaviourKind& kind, const Label& label, const S& target,
                   Weight weight = 1.0) {
  switch (kind.functor) {
    case Functor::Stream: return StreamStep<S>{std::make_pair(label, target)};
    case Functor::Lts: {
      Successors<S> v;
      v.by_label[label].insert(target);
      return v;
    }
    case Functor::Weighted: {
      Weights<S> v;
      if (weight < 0 || std::isnan(weight)) throw BehaviourError("negative weight");
      if (weight > 0) v.by_label[label][target] = weight;
      return v;
    }
  }
  return Successors<S>{};
}

/// Flattened view of a value; stream bottom and empty LTS yield nothing.
template <class S>
std::vector<Transition<S>> transitions(const Value<S>& v) {
  std::vector<Transition<S>> out;
  if (auto* s = std::get_if<StreamStep<S>>(&v)) {
    if (s->step) out.push_back({s->step->first, s->step->second, 1.0});
  } else if (auto* l = std::get_if<Successors<S>>(&v)) {
    for (const auto& [label, targets] : l->by_label)
      for (const auto& t : targets) out.push_back({label, t, 1.0});
  } else {
    for (const auto& [label, ws] : std::get<Weights<S>>(v).by_label)
      for (const auto& [t, w] : ws) out.push_back({label, t, w});
  }
  return out;
}

template <class S>
std::set<S> states_of(const Value<S>& v) {
  std::set<S> out;
  for (auto& tr : transitions(v)) out.insert(std::move(tr.target));
  return out;
}

template <class S>
std::set<Label> labels_of(const Value<S>& v) {
  std::set<Label> out;
  for (auto& tr : transitions(v)) out.insert(tr.label);
  return out;
}

/// The order of the ordered functor: flat for streams, pointwise inclusion
/// for LTS, pointwise <= for weights.
template <class S>
bool leq(const BehaviourKind& kind, const Value<S>& a, const Value<S>& b) {
  check_kind(kind, a);
  check_kind(kind, b);
  if (auto* sa = std::get_if<StreamStep<S>>(&a)) {
    auto& sb = std::get<StreamStep<S>>(b);
    return !sa->step || *sa == sb;
  }
  if (auto* la = std::get_if<Successors<S>>(&a)) {
    auto& lb = std::get<Successors<S>>(b).by_label;
    for (const auto& [label, targets] : la->by_label) {
      auto it = lb.find(label);
      if (it == lb.end()) return false;
      if (!std::includes(it->second.begin(), it->second.end(), targets.begin(), targets.end()))
        return false;
    }
    return true;
  }
  auto& wa = std::get<Weights<S>>(a).by_label;
  auto& wb = std::get<Weights<S>>(b).by_label;
  for (const auto& [label, ws] : wa) {
    auto it = wb.find(label);
    for (const auto& [s, w] : ws) {
      if (it == wb.end()) return false;
      auto jt = it->second.find(s);
      if (jt == it->second.end() || w > jt->second) return false;
    }
  }
  return true;
}

/// acc := acc v v. Throws BehaviourError for two distinct stream steps.
template <class S>
void join_into(const BehaviourKind& kind, Value<S>& acc, const Value<S>& v) {
  check_kind(kind, acc);
  check_kind(kind, v);
  if (auto* sa = std::get_if<StreamStep<S>>(&acc)) {
    auto& sv = std::get<StreamStep<S>>(v);
    if (!sv.step) return;
    if (!sa->step) {
      sa->step = sv.step;
    } else if (*sa->step != *sv.step) {
      throw BehaviourError("inconsistent stream step");
    }
  } else if (auto* la = std::get_if<Successors<S>>(&acc)) {
    for (const auto& [label, targets] : std::get<Successors<S>>(v).by_label)
      la->by_label[label].insert(targets.begin(), targets.end());
  } else {
    auto& wa = std::get<Weights<S>>(acc).by_label;
    for (const auto& [label, ws] : std::get<Weights<S>>(v).by_label)
      for (const auto& [s, w] : ws) {
        auto& slot = wa[label][s];
        slot = std::max(slot, w);
      }
  }
}

/// Least upper bound; the empty join is bottom.
template <class S>
Value<S> join(const BehaviourKind& kind, std::span<const Value<S>> values) {
  Value<S> acc = bottom<S>(kind);
  for (const auto& v : values) join_into(kind, acc, v);
  return acc;
}

/// Functorial action. Merged weighted states combine with the monoid sum,
/// which is sup.
template <class S, class F>
auto map_states(const BehaviourKind& kind, F&& h, const Value<S>& v)
    -> Value<std::decay_t<std::invoke_result_t<F&, const S&>>> {
  using T = std::decay_t<std::invoke_result_t<F&, const S&>>;
  check_kind(kind, v);
  if (auto* s = std::get_if<StreamStep<S>>(&v)) {
    StreamStep<T> out;
    if (s->step) out.step = std::make_pair(s->step->first, h(s->step->second));
    return out;
  }
  if (auto* l = std::get_if<Successors<S>>(&v)) {
    Successors<T> out;
    for (const auto& [label, targets] : l->by_label) {
      auto& dst = out.by_label[label];
      for (const auto& t : targets) dst.insert(h(t));
    }
    return out;
  }
  Weights<T> out;
  for (const auto& [label, ws] : std::get<Weights<S>>(v).by_label) {
    auto& dst = out.by_label[label];
    for (const auto& [s, w] : ws) {
      auto& slot = dst[h(s)];
      slot = std::max(slot, w);
    }
  }
  return out;
}

/// map_states with a finite state map; throws BehaviourError where the map is
/// undefined on an occurring state.
template <class S, class T>
Value<T> map_states(const BehaviourKind& kind, const std::map<S, T>& h, const Value<S>& v) {
  return map_states(kind, [&](const S& s) -> T {
    auto it = h.find(s);
    if (it == h.end()) throw BehaviourError("state map undefined on an occurring state");
    return it->second;
  }, v);
}

namespace detail {

template <class S, class T>
void check_carriers(const Relation<S, T>& r, const Value<S>& b, const Value<T>& c) {
  for (const auto& s : states_of(b))
    if (!r.left.count(s)) throw BehaviourError("carrier mismatch: state outside left carrier");
  for (const auto& t : states_of(c))
    if (!r.right.count(t)) throw BehaviourError("carrier mismatch: state outside right carrier");
}

}  // namespace detail

/// Lax relation lifting, per-instance fast path.
template <class S, class T>
bool rel_lift(const BehaviourKind& kind, const Relation<S, T>& r, const Value<S>& b,
              const Value<T>& c) {
  check_kind(kind, b);
  check_kind(kind, c);
  detail::check_carriers(r, b, c);
  if (auto* sb = std::get_if<StreamStep<S>>(&b)) {
    if (!sb->step) return true;
    auto& sc = std::get<StreamStep<T>>(c);
    return sc.step && sc.step->first == sb->step->first && r.contains(sb->step->second, sc.step->second);
  }
  if (auto* lb = std::get_if<Successors<S>>(&b)) {
    auto& lc = std::get<Successors<T>>(c).by_label;
    for (const auto& [label, sources] : lb->by_label) {
      auto it = lc.find(label);
      if (it == lc.end()) return false;
      for (const auto& s : sources) {
        bool found = false;
        for (const auto& t : it->second)
          if (r.contains(s, t)) {
            found = true;
            break;
          }
        if (!found) return false;
      }
    }
    return true;
  }
  auto& wb = std::get<Weights<S>>(b).by_label;
  auto& wc = std::get<Weights<T>>(c).by_label;
  for (const auto& [label, ws] : wb) {
    auto it = wc.find(label);
    for (const auto& [s, w] : ws) {
      Weight best = 0;
      if (it != wc.end())
        for (const auto& [t, wt] : it->second)
          if (r.contains(s, t)) best = std::max(best, wt);
      if (best < w) return false;
    }
  }
  return true;
}

/// Calls `fn` on every value of the functor over a finite carrier, restricted
/// to the given labels (and, for the weighted instance, to the given weights;
/// 0 is always included), until it returns false. Order is deterministic.
/// Returns false if stopped early.
template <class S, class F>
bool for_each_value(const BehaviourKind& kind, const std::vector<S>& carrier, const std::vector<Label>& labels,
                    const std::vector<Weight>& weights, F&& fn) {
  switch (kind.functor) {
    case Functor::Stream:
      if (!fn(Value<S>(StreamStep<S>{}))) return false;
      for (const auto& l : labels)
        for (const auto& s : carrier)
          if (!fn(Value<S>(StreamStep<S>{std::make_pair(l, s)}))) return false;
      return true;
    case Functor::Lts: {
      const std::size_t slots = labels.size() * carrier.size();
      if (slots >= 8 * sizeof(std::size_t)) throw BehaviourError("value space too large to enumerate");
      for (std::size_t mask = 0; mask < (std::size_t{1} << slots); ++mask) {
        Successors<S> v;
        for (std::size_t i = 0; i < slots; ++i)
          if (mask >> i & 1) v.by_label[labels[i / carrier.size()]].insert(carrier[i % carrier.size()]);
        if (!fn(Value<S>(std::move(v)))) return false;
      }
      return true;
    }
    case Functor::Weighted: {
      std::vector<Weight> ws{0.0};
      for (Weight w : weights)
        if (w > 0 && std::find(ws.begin(), ws.end(), w) == ws.end()) ws.push_back(w);
      const std::size_t slots = labels.size() * carrier.size();
      std::vector<std::size_t> idx(slots, 0);
      while (true) {
        Weights<S> v;
        for (std::size_t i = 0; i < slots; ++i)
          if (idx[i]) v.by_label[labels[i / carrier.size()]][carrier[i % carrier.size()]] = ws[idx[i]];
        if (!fn(Value<S>(std::move(v)))) return false;
        std::size_t k = 0;
        while (k < slots && ++idx[k] == ws.size()) idx[k++] = 0;
        if (k == slots) return true;
      }
    }
  }
  return true;
}

/// Every value of the functor over a finite carrier; see for_each_value.
template <class S>
std::vector<Value<S>> enumerate_values(const BehaviourKind& kind, const std::vector<S>& carrier,
                                       const std::vector<Label>& labels,
                                       const std::vector<Weight>& weights = {1.0}) {
  std::vector<Value<S>> out;
  for_each_value(kind, carrier, labels, weights, [&](Value<S> v) {
    out.push_back(std::move(v));
    return true;
  });
  return out;
}

/// Lax relation lifting by its definition: search d in B(R) with
/// b <= B(pi1)(d) and B(pi2)(d) <= c. The search ranges over the labels of b
/// and c (values with any other label cannot lie below c) and, for weights,
/// over the weights occurring in b and c, which contain the canonical witness.
template <class S, class T>
bool rel_lift_generic(const BehaviourKind& kind, const Relation<S, T>& r, const Value<S>& b,
                      const Value<T>& c) {
  check_kind(kind, b);
  check_kind(kind, c);
  detail::check_carriers(r, b, c);
  std::set<Label> label_set = labels_of(b);
  for (const auto& l : labels_of(c)) label_set.insert(l);
  std::vector<Label> labels(label_set.begin(), label_set.end());
  std::vector<Weight> weights;
  for (const auto& tr : transitions(b)) weights.push_back(tr.weight);
  for (const auto& tr : transitions(c)) weights.push_back(tr.weight);
  std::vector<std::pair<S, T>> carrier(r.pairs.begin(), r.pairs.end());
  return !for_each_value(kind, carrier, labels, weights, [&](const Value<std::pair<S, T>>& d) {
    auto left = map_states(kind, [](const std::pair<S, T>& p) { return p.first; }, d);
    if (!leq(kind, b, left)) return true;
    auto right = map_states(kind, [](const std::pair<S, T>& p) { return p.second; }, d);
    return !leq(kind, right, c);
  });
}

}  // namespace bigsos
