#include <doctest.h>

#include <random>

#include "bigsos/spec.hpp"
#include "support.hpp"

using namespace bigsos;
using bigsos::testing::fixture_spec;

namespace {

bool has_message(const std::vector<Diagnostic>& ds, const std::string& needle) {
  for (const auto& d : ds)
    if (d.message.find(needle) != std::string::npos) return true;
  return false;
}

Spec lts_spec(const std::string& rules) { return parse_spec("behaviour lts labels a, b\nops c/0, sigma/1, p/2\n" + rules); }

}  // namespace

TEST_CASE("fixtures parse") {
  Spec neg = fixture_spec("negloop.sos");
  CHECK(neg.rules.size() == 2);
  CHECK(neg.kind.functor == Functor::Lts);
  CHECK(neg.rules[1].premises[1].negative());

  Spec fact = fixture_spec("factstream.sos");
  CHECK(fact.rules.size() == 6);
  CHECK(fact.kind.functor == Functor::Stream);
  CHECK(fact.kind.labels.naturals);
  std::size_t parameterized = 0;
  for (const auto& op : fact.sig.ops()) parameterized += op.param_count > 0;
  CHECK(parameterized == 1);

  Spec empty = fixture_spec("empty.sos");
  CHECK(empty.rules.empty());

  Spec w = fixture_spec("weighted.sos");
  CHECK(w.kind.functor == Functor::Weighted);
  CHECK(w.rules[0].concl_weight.has_value());
}

TEST_CASE("rule structure") {
  Spec s = fixture_spec("factstream.sos");
  const Rule& sigma = s.rules[0];
  CHECK(sigma.name == "sigma");
  CHECK(sigma.head_vars == std::vector<std::string>{"x"});
  REQUIRE(sigma.premises.size() == 2);
  CHECK(sigma.premises[0].label.var == "n");
  CHECK(sigma.premises[1].source == "x'");
  CHECK(to_string(sigma.concl_target) == "otimes[n](otimes[m](sigma(x'')))");
  const Rule& otimes = s.rules[2];
  CHECK(otimes.param_vars == std::vector<std::string>{"m"});
  CHECK(to_string(otimes.concl_label) == "m*n");
  CHECK(to_string(s.rules[1].concl_label) == "n+m");
}

TEST_CASE("validation of the fixtures") {
  for (const auto* f : {"factstream.sos", "lookahead2.sos", "negloop.sos", "transclosure.sos", "empty.sos", "weighted.sos"})
    CHECK_MESSAGE(validate_spec(fixture_spec(f)).empty(), f);
}

TEST_CASE("validation diagnostics") {
  CHECK(has_message(validate_spec(lts_spec("rule r : y -a-> z |- sigma(x) -a-> z\n")), "unbound premise source"));
  auto dup = validate_spec(lts_spec("rule r : |- p(x,x) -a-> x\n"));
  REQUIRE_FALSE(dup.empty());
  CHECK(dup[0].rule == "r");
  CHECK(has_message(dup, "head variables not distinct"));
  CHECK(has_message(validate_spec(lts_spec("rule r : x -a-> x |- sigma(x) -a-> x\n")), "not fresh"));
  CHECK(has_message(validate_spec(lts_spec("rule r : |- sigma(x) -a-> y\n")), "unbound variable"));
  CHECK(has_message(validate_spec(lts_spec("rule r : |- sigma(x) -a-> tau(x)\n")), "unknown operator"));
  CHECK(has_message(validate_spec(lts_spec("rule r : |- sigma(x,y) -a-> x\n")), "expects 1 argument"));
  CHECK(has_message(validate_spec(lts_spec("rule r : |- sigma(x) -3-> x\n")), "not in label set"));
  CHECK(has_message(validate_spec(lts_spec("rule r : |- sigma(x) -l-> x\n")), "unbound label variable"));
  CHECK(has_message(validate_spec(lts_spec("rule r : x -l-> y |- sigma(x) -l+l-> y\n")), "natural-number labels"));
  CHECK(has_message(validate_spec(lts_spec("rule r : |- sigma(x) -a@2-> x\n")), "weighted"));
  CHECK(has_message(validate_spec(lts_spec("rule r : |- sigma(c) -a-> c\n")), "shadows an operator"));
  // A premise target may be used as a later source: the dependency graph is a chain.
  CHECK(validate_spec(lts_spec("rule r : x -a-> y, y -b-> z, z -a-> w |- sigma(x) -b-> p(w,y)\n")).empty());
}

TEST_CASE("monotonicity check") {
  auto neg = check_monotone(fixture_spec("negloop.sos"));
  CHECK_FALSE(neg.monotone);
  CHECK(neg.offending_rules == std::vector<std::string>{"sigma"});
  CHECK(check_monotone(fixture_spec("factstream.sos")).monotone);
  CHECK(check_monotone(fixture_spec("empty.sos")).monotone);
}

TEST_CASE("lookahead depth") {
  CHECK(lookahead_depth(fixture_spec("factstream.sos").rules[5]) == 0);
  CHECK(lookahead_depth(fixture_spec("lookahead2.sos").rules[0]) == 2);
  CHECK(lookahead_depth(fixture_spec("transclosure.sos").rules[2]) == 3);
  CHECK(lookahead_depth(fixture_spec("negloop.sos").rules[1]) == 2);
  CHECK(lookahead_depth(lts_spec("rule r : x -a-> y, x -b-> z |- sigma(x) -a-> z\n").rules[0]) == 1);
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_spec("behaviour lts labels a\nops c/0\nrule r : |- c -a- c\n");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 17);
  }
  CHECK_THROWS_WITH_AS(parse_spec("behaviour tree labels a\n"), doctest::Contains("unknown behaviour kind"), SyntaxError);
  CHECK_THROWS_WITH_AS(lts_spec("rule r : |- c -a-> c\nrule r : |- c -b-> c\n"), doctest::Contains("duplicate rule name"),
                       SyntaxError);
  CHECK_THROWS_AS(parse_spec("ops c/0\n"), SyntaxError);
  CHECK_THROWS_AS(parse_spec("behaviour lts labels a\nops c/0, c/1\n"), SyntaxError);
  CHECK_THROWS_AS(lts_spec("rule r : |- c -a-> c $\n"), SyntaxError);
}

TEST_CASE("comments and unicode punctuation") {
  Spec s = parse_spec(
      "// header\nbehaviour stream labels nat # naturals\nops k/1[1], one/0\n"
      "rule one : ⊢ one -1-> one\nrule k : x -n-> y ⊢ k[m](x) -m×n-> k[m](y)\n");
  CHECK(s.rules.size() == 2);
  CHECK(to_string(s.rules[1].concl_label) == "m*n");
}

TEST_CASE("printing round-trips through the parser") {
  for (const auto* f : {"factstream.sos", "lookahead2.sos", "negloop.sos", "transclosure.sos", "empty.sos", "weighted.sos"}) {
    Spec s = fixture_spec(f);
    CHECK_MESSAGE(parse_spec(print_spec(s)) == s, f);
  }
  Spec e = parse_spec("behaviour wts labels a\nops q/1\nrule r : x -a@w-> y |- q(x) -a@(w+1)*2+sup(w,0.5,inf)-> q(y)\n");
  CHECK(parse_spec(print_spec(e)) == e);
  CHECK(to_string(*e.rules[0].concl_weight) == "(w+1)*2+sup(w,0.5,inf)");

  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    Spec s = parse_spec(bigsos::testing::random_spec_text(rng));
    CHECK(validate_spec(s).empty());
    CHECK(parse_spec(print_spec(s)) == s);
  }
}

TEST_CASE("literal parameters and labels") {
  Spec s = parse_spec("behaviour stream labels nat\nops k/1[1], one/0\nrule one : |- one -1-> k[4](one)\n");
  CHECK(literal_params(s) == std::set<Nat>{4});
  CHECK(literal_labels(s) == std::set<Label>{Label(Nat{1})});
}

TEST_CASE("GSOS and positive lookahead shapes are accepted") {
  // depth-1 premises with a complex conclusion
  CHECK(validate_spec(lts_spec("rule r : x -a-> x', y -b-> y' |- p(x,y) -a-> p(sigma(x'),p(y',c))\n")).empty());
  // lookahead with a variable conclusion
  CHECK(validate_spec(lts_spec("rule r : x -a-> x', x' -a-> x'' |- sigma(x) -b-> x''\n")).empty());
}
