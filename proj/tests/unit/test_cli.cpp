#include <doctest.h>

#include <sstream>

#include "bigsos/cli.hpp"
#include "bigsos/serialize.hpp"
#include "support.hpp"

using namespace bigsos;
using bigsos::testing::fixture;

namespace {

struct Out {
  int code;
  std::string out, err;
};

Out call(std::vector<std::string> args) {
  std::ostringstream o, e;
  int code = run(args, o, e);
  return {code, o.str(), e.str()};
}

}  // namespace

TEST_CASE("check") {
  auto fact = call({"check", fixture("factstream.sos")});
  CHECK(fact.code == kExitOk);
  CHECK(fact.out.find("6 rule(s), stream behaviour") == 0);
  CHECK(fact.out.find("monotone\n") != std::string::npos);
  auto neg = call({"check", fixture("negloop.sos")});
  CHECK(neg.code == kExitNonMonotone);
  CHECK(neg.out.find("sigma") != std::string::npos);
  auto j = call({"check", fixture("lookahead2.sos"), "--format", "json"});
  CHECK(Json::parse(j.out)["rules"][0]["lookahead"] == 2);
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == kExitSyntax);
  CHECK(call({"frobnicate"}).code == kExitSyntax);
  CHECK(call({"model", "/nonexistent.sos"}).code == kExitValidation);
  CHECK(call({"unfold", fixture("factstream.sos"), "sigma(pos"}).code == kExitSyntax);
  auto neg = call({"model", fixture("negloop.sos")});
  CHECK(neg.code == kExitNonMonotone);
  auto forced = call({"model", fixture("negloop.sos"), "--force", "--format", "text"});
  CHECK(forced.code == kExitNonConvergence);
  CHECK(forced.err.find("oscillates") != std::string::npos);
  CHECK(call({"model", fixture("empty.sos")}).code == kExitOk);
  CHECK(call({"equiv", fixture("lookahead2.sos"), "c"}).code == kExitSyntax);
  CHECK(call({"equiv", fixture("lookahead2.sos"), "c", "d", "--rel", "iso"}).code == kExitSyntax);
}

TEST_CASE("unfold prints the factorial stream") {
  auto r = call({"unfold", fixture("factstream.sos"), "sigma(pos)", "-d", "3"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "1 6 120\n");
  auto j = call({"unfold", fixture("factstream.sos"), "c", "-d", "2", "--format", "json"});
  CHECK(j.code == kExitOk);
  CHECK(Json::parse(j.out)["report"]["converged"] == true);
}

TEST_CASE("model output") {
  auto r = call({"model", fixture("lookahead2.sos"), "tau(c)"});
  REQUIRE(r.code == kExitOk);
  Json j = Json::parse(r.out);
  CHECK(j["behaviour"]["tau(c)"]["a"][0] == "sigma(tau(c))");
  auto dot = call({"model", fixture("lookahead2.sos"), "tau(c)", "--format", "dot"});
  CHECK(dot.out.rfind("digraph", 0) == 0);
  auto fallback = call({"model", fixture("factstream.sos"), "c", "--format", "dot"});
  CHECK(fallback.code == kExitOk);
  CHECK(fallback.err.find("warning") != std::string::npos);
}

TEST_CASE("equiv, congruence and laws") {
  auto e = call({"equiv", fixture("lookahead2.sos"), "sigma(tau(c))", "sigma(tau(d))", "--format", "json"});
  REQUIRE(e.code == kExitOk);
  Json j = Json::parse(e.out);
  CHECK(j["related"] == true);
  CHECK(j["relation"] == "bisim");
  auto s = call({"equiv", fixture("lookahead2.sos"), "tau(c)", "sigma(tau(c))", "--rel", "sim"});
  CHECK(s.out.find(": no") != std::string::npos);
  auto c = call({"congruence", fixture("lookahead2.sos"), "sigma(tau(c))", "sigma(tau(d))"});
  CHECK(Json::parse(c.out)["status"] == "pass");
  auto l = call({"laws", fixture("lookahead2.sos")});
  REQUIRE(l.code == kExitOk);
  for (const auto& r : Json::parse(l.out)) CHECK(r["status"] == "pass");
  CHECK(call({"laws", fixture("negloop.sos")}).code == kExitNonMonotone);
}

TEST_CASE("output is deterministic and the seed can come from the environment") {
  auto a = call({"laws", fixture("factstream.sos"), "--seed", "7"});
  auto b = call({"laws", fixture("factstream.sos"), "--seed", "7"});
  CHECK(a.out == b.out);
  setenv("BIGSOS_SEED", "7", 1);
  auto c = call({"laws", fixture("factstream.sos")});
  unsetenv("BIGSOS_SEED");
  CHECK(c.out == a.out);
}

TEST_CASE("the CLI is a thin adapter over the library") {
  Spec s = load_spec(fixture("lookahead2.sos"));
  UniversePolicy p;
  p.seeds = {parse_closed_term("tau(c)", s.sig)};
  auto sol = least_model(s, p);
  auto r = call({"model", fixture("lookahead2.sos"), "tau(c)"});
  CHECK(r.out == model_json(sol.model, sol.report).dump(2) + "\n");
}
