#include <doctest.h>

#include <limits>
#include <random>

#include "bigsos/behaviour.hpp"
#include "support.hpp"

using namespace bigsos;
using bigsos::testing::draw;

namespace {

const BehaviourKind kLts{Functor::Lts, {false, {Label("a"), Label("b")}}};
const BehaviourKind kStream{Functor::Stream, {true, {}}};
const BehaviourKind kWts{Functor::Weighted, {false, {Label("a")}}};

using S = std::string;

Successors<S> lts(std::map<std::string, std::set<S>> m) {
  Successors<S> v;
  for (auto& [l, ts] : m)
    if (!ts.empty()) v.by_label[Label(l)] = ts;
  return v;
}

Value<S> random_value(const BehaviourKind& kind, const std::vector<S>& carrier, std::mt19937_64& rng) {
  std::vector<Label> labels = kind.functor == Functor::Stream ? std::vector<Label>{1, 2} : kind.labels.finite;
  const Weight ws[] = {0.5, 1.0, 2.0, std::numeric_limits<Weight>::infinity()};
  Value<S> v = bottom<S>(kind);
  for (const auto& l : labels)
    for (const auto& s : carrier)
      if (draw(rng, 3) == 0) {
        if (kind.functor == Functor::Stream) return singleton(kind, l, s);
        join_into(kind, v, singleton(kind, l, s, ws[draw(rng, 4)]));
      }
  return v;
}

// Relation lifting by its definition with an unrestricted witness space:
// every value over the pair carrier with labels from the kind and weights
// from the given grid.
template <class T>
bool lift_oracle(const BehaviourKind& kind, const Relation<T>& r, const Value<T>& b, const Value<T>& c,
                 const std::vector<Label>& labels, const std::vector<Weight>& grid) {
  std::vector<std::pair<T, T>> carrier(r.pairs.begin(), r.pairs.end());
  for (const auto& d : enumerate_values(kind, carrier, labels, grid)) {
    auto left = map_states(kind, [](const auto& p) { return p.first; }, d);
    auto right = map_states(kind, [](const auto& p) { return p.second; }, d);
    if (leq(kind, b, left) && leq(kind, right, c)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("order examples") {
  CHECK(leq<S>(kLts, lts({{"a", {"t1"}}}), lts({{"a", {"t1", "t2"}}})));
  CHECK_FALSE(leq<S>(kLts, lts({{"a", {"t1", "t2"}}}), lts({{"a", {"t1"}}})));
  Value<S> bot = bottom<S>(kStream);
  CHECK(leq<S>(kStream, bot, singleton<S>(kStream, 1, "ones")));
  CHECK_FALSE(leq<S>(kStream, singleton<S>(kStream, 1, "ones"), singleton<S>(kStream, 2, "ones")));
  CHECK_FALSE(leq<S>(kStream, singleton<S>(kStream, 1, "ones"), bot));
  CHECK(leq<S>(kWts, singleton<S>(kWts, Label("a"), "t", 1.0), singleton<S>(kWts, Label("a"), "t", 2.0)));
  CHECK_FALSE(leq<S>(kWts, singleton<S>(kWts, Label("a"), "t", 3.0), singleton<S>(kWts, Label("a"), "t", 2.0)));
  CHECK_THROWS_AS(leq<S>(kLts, bot, lts({})), BehaviourError);
}

TEST_CASE("join examples") {
  Value<S> a = lts({{"a", {"t1"}}}), b = lts({{"a", {"t2"}}});
  std::vector<Value<S>> vs{a, b};
  CHECK(join<S>(kLts, vs) == Value<S>(lts({{"a", {"t1", "t2"}}})));
  CHECK(join<S>(kLts, {}) == bottom<S>(kLts));
  std::vector<Value<S>> ws{singleton<S>(kWts, Label("a"), "t", 1.0), singleton<S>(kWts, Label("a"), "t", 2.5)};
  CHECK(join<S>(kWts, ws) == singleton<S>(kWts, Label("a"), "t", 2.5));
  std::vector<Value<S>> clash{singleton<S>(kStream, 1, "x"), singleton<S>(kStream, 2, "x")};
  CHECK_THROWS_WITH_AS(join<S>(kStream, clash), "inconsistent stream step", BehaviourError);
  std::vector<Value<S>> same{singleton<S>(kStream, 1, "x"), bottom<S>(kStream), singleton<S>(kStream, 1, "x")};
  CHECK(join<S>(kStream, same) == singleton<S>(kStream, 1, "x"));
}

TEST_CASE("map_states examples") {
  std::map<S, S> h{{"t1", "u"}, {"t2", "u"}};
  CHECK(map_states(kLts, h, bottom<S>(kLts)) == bottom<S>(kLts));
  CHECK(map_states(kStream, h, bottom<S>(kStream)) == bottom<S>(kStream));
  CHECK(map_states(kLts, h, Value<S>(lts({{"a", {"t1", "t2"}}}))) == Value<S>(lts({{"a", {"u"}}})));
  Value<S> w = bottom<S>(kWts);
  join_into(kWts, w, singleton<S>(kWts, Label("a"), "t1", 1.0));
  join_into(kWts, w, singleton<S>(kWts, Label("a"), "t2", 2.0));
  CHECK(map_states(kWts, h, w) == singleton<S>(kWts, Label("a"), "u", 2.0));
  CHECK_THROWS_AS(map_states(kLts, std::map<S, S>{{"t1", "u"}}, Value<S>(lts({{"a", {"t2"}}}))), BehaviourError);
}

TEST_CASE("weights: zero is not stored, negative is rejected") {
  CHECK(singleton<S>(kWts, Label("a"), "t", 0.0) == bottom<S>(kWts));
  CHECK_THROWS_AS(singleton<S>(kWts, Label("a"), "t", -1.0), BehaviourError);
}

TEST_CASE("rel_lift examples") {
  Relation<S> r{{"s"}, {"t"}, {{"s", "t"}}};
  Relation<S> empty{{"s"}, {"t"}, {}};
  Value<S> b = lts({{"a", {"s"}}}), c = lts({{"a", {"t"}}});
  CHECK(rel_lift(kLts, r, b, c));
  CHECK_FALSE(rel_lift(kLts, empty, b, c));
  CHECK(rel_lift(kStream, empty, bottom<S>(kStream), singleton<S>(kStream, 4, "t")));
  CHECK(rel_lift(kStream, r, singleton<S>(kStream, 4, "s"), singleton<S>(kStream, 4, "t")));
  CHECK_FALSE(rel_lift(kStream, r, singleton<S>(kStream, 4, "s"), singleton<S>(kStream, 5, "t")));
  CHECK_THROWS_AS(rel_lift(kLts, r, Value<S>(lts({{"a", {"q"}}})), c), BehaviourError);
}

TEST_CASE("order is a preorder with bottom and join is the least upper bound") {
  for (const auto* kind : {&kLts, &kStream, &kWts}) {
    std::vector<S> carrier{"p", "q"};
    std::vector<Label> labels = kind->functor == Functor::Stream ? std::vector<Label>{1, 2} : kind->labels.finite;
    auto all = enumerate_values(*kind, carrier, labels, {1.0, 2.0});
    for (const auto& x : all) {
      CHECK(leq(*kind, x, x));
      CHECK(leq(*kind, bottom<S>(*kind), x));
    }
    for (const auto& x : all)
      for (const auto& y : all) {
        if (leq(*kind, x, y) && leq(*kind, y, x)) CHECK(x == y);
        Value<S> j = x;
        try {
          join_into(*kind, j, y);
        } catch (const BehaviourError&) {
          // only incomparable stream steps have no join
          CHECK(kind->functor == Functor::Stream);
          CHECK_FALSE(leq(*kind, x, y));
          CHECK_FALSE(leq(*kind, y, x));
          continue;
        }
        CHECK(leq(*kind, x, j));
        CHECK(leq(*kind, y, j));
        for (const auto& z : all)
          if (leq(*kind, x, z) && leq(*kind, y, z)) CHECK(leq(*kind, j, z));
        for (const auto& z : all)
          if (leq(*kind, x, y) && leq(*kind, y, z)) CHECK(leq(*kind, x, z));
      }
  }
}

TEST_CASE("map_states is monotone and functorial") {
  std::mt19937_64 rng(3);
  std::vector<S> carrier{"p", "q", "r"};
  for (const auto* kind : {&kLts, &kStream, &kWts}) {
    for (int i = 0; i < 200; ++i) {
      std::map<S, S> h, k, id;
      for (const auto& s : carrier) {
        h[s] = carrier[draw(rng, 3)];
        k[s] = carrier[draw(rng, 3)] + "'";
        id[s] = s;
      }
      Value<S> x = random_value(*kind, carrier, rng);
      Value<S> y = x;
      join_into(*kind, y, kind->functor == Functor::Stream ? x : random_value(*kind, carrier, rng));
      CHECK(leq(*kind, x, y));
      CHECK(leq(*kind, map_states(*kind, h, x), map_states(*kind, h, y)));
      CHECK(map_states(*kind, id, x) == x);
      std::map<S, S> kh;
      for (const auto& s : carrier) kh[s] = k.at(h.at(s));
      CHECK(map_states(*kind, k, map_states(*kind, h, x)) == map_states(*kind, kh, x));
    }
  }
}

TEST_CASE("fast-path lifting agrees with the unrestricted witness search") {
  std::mt19937_64 rng(5);
  const Weight inf = std::numeric_limits<Weight>::infinity();
  for (const auto* kind : {&kLts, &kStream, &kWts}) {
    std::vector<Label> labels = kind->functor == Functor::Stream ? std::vector<Label>{1, 2} : kind->labels.finite;
    for (int i = 0; i < 300; ++i) {
      std::vector<S> left{"s1", "s2"}, right{"t1", "t2"};
      if (kind->functor != Functor::Weighted) left.push_back("s3");
      Relation<S> r{{left.begin(), left.end()}, {right.begin(), right.end()}, {}};
      for (const auto& s : left)
        for (const auto& t : right)
          if (draw(rng, 2)) r.pairs.emplace(s, t);
      auto b = random_value(*kind, left, rng);
      auto c = random_value(*kind, right, rng);
      const bool fast = rel_lift(*kind, r, b, c);
      CHECK(fast == rel_lift_generic(*kind, r, b, c));
      if (kind->functor == Functor::Weighted && r.pairs.size() <= 3)
        CHECK(fast == lift_oracle(*kind, r, b, c, labels, {0.25, 0.5, 1.0, 2.0, 3.0, inf}));
      else if (kind->functor != Functor::Weighted && r.pairs.size() <= 4)
        CHECK(fast == lift_oracle(*kind, r, b, c, labels, {1.0}));
    }
  }
}

TEST_CASE("lifting of the diagonal is the order; lifting is monotone in the relation") {
  std::mt19937_64 rng(9);
  std::vector<S> carrier{"p", "q", "r"};
  for (const auto* kind : {&kLts, &kStream, &kWts}) {
    auto delta = diagonal(std::set<S>(carrier.begin(), carrier.end()));
    for (int i = 0; i < 300; ++i) {
      auto b = random_value(*kind, carrier, rng);
      auto c = random_value(*kind, carrier, rng);
      CHECK(rel_lift(*kind, delta, b, c) == leq(*kind, b, c));
      Relation<S> r = delta, s;
      r.pairs.clear();
      for (const auto& x : carrier)
        for (const auto& y : carrier)
          if (draw(rng, 3) == 0) r.pairs.emplace(x, y);
      s = r;
      for (const auto& x : carrier)
        for (const auto& y : carrier)
          if (draw(rng, 2) == 0) s.pairs.emplace(x, y);
      if (rel_lift(*kind, r, b, c)) CHECK(rel_lift(*kind, s, b, c));
    }
  }
}

TEST_CASE("enumerate_values sizes") {
  std::vector<S> carrier{"p", "q"};
  CHECK(enumerate_values(kLts, carrier, kLts.labels.finite).size() == 16);
  CHECK(enumerate_values(kStream, carrier, {1, 2, 3}).size() == 7);
  CHECK(enumerate_values(kWts, carrier, kWts.labels.finite, {1.0, 2.0}).size() == 9);
}
